#include "swarm_lssvm/tuner.hpp"

#include <cmath>
#include <memory>

#include "swarm_lssvm/error.hpp"

namespace swarm_lssvm {

KernelFamily parse_kernel_family(const std::string& name) {
    if (name == "rbf") return KernelFamily::Rbf;
    if (name == "linear") return KernelFamily::Linear;
    if (name == "poly") return KernelFamily::Polynomial;
    if (name == "mlp") return KernelFamily::Mlp;
    throw InputError("unknown kernel '" + name + "' (expected rbf, linear, poly or mlp)");
}

std::string to_string(KernelFamily family) {
    switch (family) {
    case KernelFamily::Rbf: return "rbf";
    case KernelFamily::Linear: return "linear";
    case KernelFamily::Polynomial: return "poly";
    case KernelFamily::Mlp: return "mlp";
    }
    return "rbf";
}

namespace {

std::vector<Interval> intervals(const SearchSpace& s) {
    switch (s.family) {
    case KernelFamily::Rbf: return {s.log10_c, s.log10_sigma2};
    case KernelFamily::Linear: return {s.log10_c};
    case KernelFamily::Polynomial: return {s.log10_c, s.log10_poly_scale};
    case KernelFamily::Mlp: return {s.log10_c, s.log10_mlp_slope, s.mlp_offset};
    }
    return {};
}

nlohmann::json space_to_json(const SearchSpace& s) {
    nlohmann::json j;
    j["kernel"] = to_string(s.family);
    j["log10_c"] = {s.log10_c.lo, s.log10_c.hi};
    switch (s.family) {
    case KernelFamily::Rbf: j["log10_sigma2"] = {s.log10_sigma2.lo, s.log10_sigma2.hi}; break;
    case KernelFamily::Polynomial:
        j["log10_poly_scale"] = {s.log10_poly_scale.lo, s.log10_poly_scale.hi};
        j["poly_degree"] = s.poly_degree;
        break;
    case KernelFamily::Mlp:
        j["log10_mlp_slope"] = {s.log10_mlp_slope.lo, s.log10_mlp_slope.hi};
        j["mlp_offset"] = {s.mlp_offset.lo, s.mlp_offset.hi};
        break;
    case KernelFamily::Linear: break;
    }
    return j;
}

double mean_squared_error(const Vector& a, const Vector& b) { return (a - b).squaredNorm() / static_cast<double>(a.size()); }

} // namespace

void SearchSpace::validate() const {
    for (const auto& iv : intervals(*this)) {
        if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || !(iv.lo < iv.hi)) {
            throw InputError("search space: every interval must satisfy lo < hi");
        }
    }
    if (family == KernelFamily::Polynomial && poly_degree < 1) {
        throw InputError("search space: polynomial degree must be >= 1");
    }
}

Bounds SearchSpace::bounds() const {
    validate();
    Bounds b;
    for (const auto& iv : intervals(*this)) {
        b.lower.push_back(iv.lo);
        b.upper.push_back(iv.hi);
    }
    return b;
}

DecodedParams decode(const SearchSpace& space, std::span<const double> position) {
    const Bounds box = space.bounds();
    if (!box.contains(position)) {
        throw InputError("decode: position outside the search space");
    }
    const double c = std::pow(10.0, position[0]);
    switch (space.family) {
    case KernelFamily::Rbf: return {c, RbfKernel{std::pow(10.0, position[1])}};
    case KernelFamily::Linear: return {c, LinearKernel{}};
    case KernelFamily::Polynomial: return {c, PolynomialKernel{space.poly_degree, std::pow(10.0, position[1])}};
    case KernelFamily::Mlp: return {c, MlpKernel{std::pow(10.0, position[1]), position[2]}};
    }
    throw InputError("decode: unknown kernel family");
}

std::vector<double> encode(const SearchSpace& space, const DecodedParams& params) {
    std::vector<double> x{std::log10(params.reg_c)};
    switch (space.family) {
    case KernelFamily::Rbf: x.push_back(std::log10(std::get<RbfKernel>(params.kernel).sigma2)); break;
    case KernelFamily::Polynomial: x.push_back(std::log10(std::get<PolynomialKernel>(params.kernel).scale)); break;
    case KernelFamily::Mlp: {
        const auto& k = std::get<MlpKernel>(params.kernel);
        x.push_back(std::log10(k.slope));
        x.push_back(k.offset);
        break;
    }
    case KernelFamily::Linear: break;
    }
    return x;
}

std::pair<double, double> decode_params(std::span<const double> position, const SearchSpace& space) {
    if (space.family != KernelFamily::Rbf || position.size() != 2) {
        throw InputError("decode_params: expects a two-dimensional RBF position");
    }
    const auto d = decode(space, position);
    return {d.reg_c, std::get<RbfKernel>(d.kernel).sigma2};
}

Objective make_validation_objective(const TrainingSet& train, const SearchSpace& space, double holdout_fraction) {
    validate(train);
    space.validate();
    if (!(holdout_fraction > 0.0 && holdout_fraction < 0.5)) {
        throw InputError("validation objective: holdout fraction must be in (0, 0.5)");
    }
    const Eigen::Index m = train.size();
    const auto n_fit = static_cast<Eigen::Index>(std::floor((1.0 - holdout_fraction) * static_cast<double>(m)));
    const Eigen::Index n_val = m - n_fit;
    if (n_fit < 5 || n_val < 5) {
        throw InputError("validation objective: " + std::to_string(m) +
                         " rows leave fewer than 5 in the fit or validation part");
    }
    struct Parts {
        TrainingSet fit;
        Matrix val_inputs;
        Vector val_targets;
        SearchSpace space;
    };
    auto parts = std::make_shared<const Parts>(Parts{
        TrainingSet{train.inputs.topRows(n_fit), train.targets.head(n_fit)},
        train.inputs.bottomRows(n_val),
        train.targets.tail(n_val),
        space,
    });
    return [parts](std::span<const double> position) {
        const auto params = decode(parts->space, position);
        const auto model = swarm_lssvm::train(parts->fit, params.kernel, params.reg_c);
        return mean_squared_error(predict(model, parts->val_inputs), parts->val_targets);
    };
}

double TuneResult::best_sigma2() const {
    if (const auto* rbf = std::get_if<RbfKernel>(&best_kernel)) {
        return rbf->sigma2;
    }
    throw InputError("tune result: kernel is not rbf");
}

namespace {

TuneResult finish(std::string optimizer, const TrainingSet& train, const SearchSpace& space, const OptResult& opt,
                  std::uint64_t seed, nlohmann::json echo) {
    const auto params = decode(space, opt.best_position);
    return TuneResult{
        std::move(optimizer),
        params.reg_c,
        params.kernel,
        opt.best_objective,
        opt.best_position,
        opt.history,
        opt.evaluations,
        seed,
        swarm_lssvm::train(train, params.kernel, params.reg_c),
        std::move(echo),
    };
}

} // namespace

TuneResult tune_lssvm_abc(const TrainingSet& train, const SearchSpace& space, const AbcConfig& config,
                          double holdout_fraction) {
    const auto objective = make_validation_objective(train, space, holdout_fraction);
    const auto bounds = space.bounds();
    const auto opt = abc_minimize(objective, bounds, config);
    nlohmann::json echo = {
        {"colony_sn", config.colony_sn},
        {"limit", config.effective_limit(bounds.dims())},
        {"max_cycles", config.max_cycles},
        {"theta_range", {config.theta_lo, config.theta_hi}},
        {"holdout_fraction", holdout_fraction},
        {"search_space", space_to_json(space)},
    };
    return finish("abc", train, space, opt, config.seed, std::move(echo));
}

TuneResult tune_lssvm_pso(const TrainingSet& train, const SearchSpace& space, const PsoConfig& config,
                          double holdout_fraction) {
    const auto objective = make_validation_objective(train, space, holdout_fraction);
    const auto opt = pso_minimize(objective, space.bounds(), config);
    nlohmann::json echo = {
        {"particles", config.particles},
        {"inertia", config.inertia},
        {"cognitive", config.cognitive},
        {"social", config.social},
        {"velocity_clamp", config.velocity_clamp},
        {"max_iters", config.max_iters},
        {"holdout_fraction", holdout_fraction},
        {"search_space", space_to_json(space)},
    };
    return finish("pso", train, space, opt, config.seed, std::move(echo));
}

nlohmann::json tune_result_to_json(const TuneResult& result) {
    nlohmann::json j;
    j["optimizer"] = result.optimizer;
    j["kernel"] = kernel_to_json(result.best_kernel);
    j["best_c"] = result.best_c;
    if (std::holds_alternative<RbfKernel>(result.best_kernel)) {
        j["best_sigma2"] = result.best_sigma2();
    }
    j["best_validation_mse"] = result.best_validation_mse;
    j["history"] = result.history;
    j["evaluations"] = result.evaluations;
    j["seed"] = result.seed;
    j["config_echo"] = result.config_echo;
    return j;
}

} // namespace swarm_lssvm
