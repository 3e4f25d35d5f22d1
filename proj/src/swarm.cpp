#include "swarm_lssvm/swarm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "batch_eval.hpp"
#include "swarm_lssvm/error.hpp"
#include "swarm_lssvm/format.hpp"
#include "swarm_lssvm/rng.hpp"

namespace swarm_lssvm {

namespace detail {

namespace {

std::string format_position(std::span<const double> x) {
    std::ostringstream os;
    os.precision(17);
    os << '[';
    for (std::size_t i = 0; i < x.size(); ++i) {
        os << (i ? ", " : "") << x[i];
    }
    os << ']';
    return os.str();
}

} // namespace

std::vector<double> evaluate_batch(const Objective& objective, const std::vector<std::vector<double>>& positions,
                                   int threads) {
    const std::size_t n = positions.size();
    std::vector<double> values(n, 0.0);
    std::vector<std::exception_ptr> errors(n);

    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            try {
                values[i] = objective(positions[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };

    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), n);
    if (workers <= 1) {
        work(0, n);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (n + workers - 1) / workers;
        for (std::size_t begin = 0; begin < n; begin += chunk) {
            pool.emplace_back(work, begin, std::min(n, begin + chunk));
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (errors[i]) {
            std::rethrow_exception(errors[i]);
        }
        if (!std::isfinite(values[i])) {
            throw EvaluationError("objective returned a non-finite value at position " + format_position(positions[i]));
        }
    }
    return values;
}

} // namespace detail

void Bounds::validate() const {
    if (lower.empty() || lower.size() != upper.size()) {
        throw InputError("bounds: lower and upper must be non-empty and of equal length");
    }
    for (std::size_t j = 0; j < lower.size(); ++j) {
        if (!std::isfinite(lower[j]) || !std::isfinite(upper[j]) || !(lower[j] < upper[j])) {
            throw InputError("bounds: need lower < upper in dimension " + std::to_string(j));
        }
    }
}

std::vector<double> Bounds::clamp(std::vector<double> x) const {
    for (std::size_t j = 0; j < x.size(); ++j) {
        x[j] = std::clamp(x[j], lower[j], upper[j]);
    }
    return x;
}

bool Bounds::contains(std::span<const double> x) const noexcept {
    if (x.size() != lower.size()) {
        return false;
    }
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (!(x[j] >= lower[j] && x[j] <= upper[j])) {
            return false;
        }
    }
    return true;
}

void AbcConfig::validate() const {
    if (colony_sn < 2) {
        throw InputError("abc: colony size must be at least 2");
    }
    if (limit < 0 || max_cycles < 1) {
        throw InputError("abc: limit must be >= 0 and max_cycles >= 1");
    }
    if (!(theta_lo <= theta_hi) || theta_lo < -1.0 || theta_hi > 1.0) {
        throw InputError("abc: theta range must be a non-empty subinterval of [-1, 1]");
    }
}

void PsoConfig::validate() const {
    if (particles < 2 || max_iters < 1) {
        throw InputError("pso: need at least 2 particles and 1 iteration");
    }
    if (!(inertia > 0.0 && inertia <= 1.0)) {
        throw InputError("pso: inertia must be in (0, 1]");
    }
    if (!(cognitive > 0.0) || !(social > 0.0) || !(velocity_clamp > 0.0)) {
        throw InputError("pso: cognitive, social and velocity clamp must be positive");
    }
}

double fitness(double objective_value) {
    if (!std::isfinite(objective_value)) {
        throw InputError("fitness: non-finite objective value");
    }
    return objective_value >= 0.0 ? 1.0 / (1.0 + objective_value) : 1.0 + std::abs(objective_value);
}

std::vector<double> neighbor_move(std::span<const double> x_i, std::span<const double> x_k, std::size_t dim_j,
                                  double theta, const Bounds& bounds) {
    if (x_i.size() != x_k.size() || x_i.size() != bounds.dims() || dim_j >= x_i.size()) {
        throw InputError("neighbor_move: dimension mismatch or index out of range");
    }
    std::vector<double> v(x_i.begin(), x_i.end());
    v[dim_j] = std::clamp(x_i[dim_j] + theta * (x_i[dim_j] - x_k[dim_j]), bounds.lower[dim_j], bounds.upper[dim_j]);
    return v;
}

std::vector<double> selection_probabilities(std::span<const double> fits) {
    if (fits.empty()) {
        throw InputError("selection_probabilities: empty fitness vector");
    }
    double total = 0.0;
    for (double f : fits) {
        if (!(f > 0.0) || !std::isfinite(f)) {
            throw InputError("selection_probabilities: fitness values must be positive");
        }
        total += f;
    }
    std::vector<double> p(fits.size());
    for (std::size_t i = 0; i < fits.size(); ++i) {
        p[i] = fits[i] / total;
    }
    return p;
}

std::size_t roulette_select(std::span<const double> probabilities, double u) noexcept {
    double cumulative = 0.0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        cumulative += probabilities[i];
        if (u < cumulative) {
            return i;
        }
    }
    return probabilities.size() - 1;
}

std::vector<double> scout_reinit(const Bounds& bounds, std::span<const double> r) {
    if (r.size() != bounds.dims()) {
        throw InputError("scout_reinit: r has wrong length");
    }
    std::vector<double> x(r.size());
    for (std::size_t j = 0; j < r.size(); ++j) {
        x[j] = bounds.lower[j] + r[j] * (bounds.upper[j] - bounds.lower[j]);
    }
    return x;
}

namespace {

std::vector<double> random_position(const Bounds& bounds, Rng& rng) {
    std::vector<double> r(bounds.dims());
    for (auto& v : r) {
        v = rng.uniform();
    }
    return scout_reinit(bounds, r);
}

struct Incumbent {
    std::vector<double> position;
    double objective = std::numeric_limits<double>::infinity();

    void offer(const std::vector<double>& x, double value) {
        if (value < objective) {
            objective = value;
            position = x;
        }
    }
};

/// Partner index k != i, uniform over the other sources.
std::size_t draw_partner(std::size_t i, std::size_t count, Rng& rng) {
    auto k = static_cast<std::size_t>(rng.below(count - 1));
    return k >= i ? k + 1 : k;
}

} // namespace

// Draw order per cycle:
//   employed: for each source i: dimension, partner, theta
//   onlooker: for each of SN onlookers: roulette u, dimension, partner, theta
//   scout:    D uniforms, only when a source is abandoned
// Employed candidates are built from the colony as it stood at the start of
// the phase, so the batch can be evaluated concurrently. Onlookers run
// sequentially and see each other's updates.
OptResult abc_minimize(const Objective& objective, const Bounds& bounds, const AbcConfig& config) {
    bounds.validate();
    config.validate();
    const std::size_t sn = static_cast<std::size_t>(config.colony_sn);
    const std::size_t dims = bounds.dims();
    const int limit = config.effective_limit(dims);

    Rng rng(config.seed);
    OptResult result;
    Incumbent best;

    auto notify = [&](AbcPhase phase, const std::vector<FoodSource>& colony) {
        if (config.observer) {
            config.observer(phase, colony);
        }
    };
    auto draw_theta = [&] { return rng.uniform(config.theta_lo, config.theta_hi); };
    auto accept = [](FoodSource& source, std::vector<double> candidate, double value) {
        const double fit = fitness(value);
        if (fit > source.fitness) {
            source.position = std::move(candidate);
            source.objective = value;
            source.fitness = fit;
            source.trials = 0;
        } else {
            ++source.trials;
        }
    };

    std::vector<FoodSource> colony(sn);
    {
        std::vector<std::vector<double>> starts(sn);
        for (auto& s : starts) {
            s = random_position(bounds, rng);
        }
        const auto values = detail::evaluate_batch(objective, starts, config.threads);
        result.evaluations += sn;
        for (std::size_t i = 0; i < sn; ++i) {
            colony[i] = FoodSource{std::move(starts[i]), values[i], fitness(values[i]), 0};
            best.offer(colony[i].position, values[i]);
        }
    }
    notify(AbcPhase::Initial, colony);

    result.history.reserve(static_cast<std::size_t>(config.max_cycles));
    for (int cycle = 0; cycle < config.max_cycles; ++cycle) {
        // Employed bees: one local move per source.
        std::vector<std::vector<double>> candidates(sn);
        for (std::size_t i = 0; i < sn; ++i) {
            const auto j = static_cast<std::size_t>(rng.below(dims));
            const auto k = draw_partner(i, sn, rng);
            candidates[i] = neighbor_move(colony[i].position, colony[k].position, j, draw_theta(), bounds);
        }
        const auto values = detail::evaluate_batch(objective, candidates, config.threads);
        result.evaluations += sn;
        for (std::size_t i = 0; i < sn; ++i) {
            best.offer(candidates[i], values[i]);
            accept(colony[i], std::move(candidates[i]), values[i]);
        }
        notify(AbcPhase::Employed, colony);

        // Onlooker bees: fitness-proportional choice of source, then the same local move.
        std::vector<double> fits(sn);
        for (std::size_t i = 0; i < sn; ++i) {
            fits[i] = colony[i].fitness;
        }
        const auto probabilities = selection_probabilities(fits);
        for (std::size_t t = 0; t < sn; ++t) {
            const std::size_t i = roulette_select(probabilities, rng.uniform());
            const auto j = static_cast<std::size_t>(rng.below(dims));
            const auto k = draw_partner(i, sn, rng);
            auto candidate = neighbor_move(colony[i].position, colony[k].position, j, draw_theta(), bounds);
            const double value = detail::evaluate_batch(objective, {candidate}, 1).front();
            ++result.evaluations;
            best.offer(candidate, value);
            accept(colony[i], std::move(candidate), value);
        }
        notify(AbcPhase::Onlooker, colony);

        // Scout: abandon the most stagnant source once it exceeds the limit.
        const auto stale = std::max_element(colony.begin(), colony.end(),
                                             [](const FoodSource& a, const FoodSource& b) { return a.trials < b.trials; });
        if (stale->trials > limit) {
            auto fresh = random_position(bounds, rng);
            const double value = detail::evaluate_batch(objective, {fresh}, 1).front();
            ++result.evaluations;
            ++result.scout_events;
            best.offer(fresh, value);
            *stale = FoodSource{std::move(fresh), value, fitness(value), 0};
        }
        notify(AbcPhase::Scout, colony);

        result.history.push_back(best.objective);
    }

    result.best_position = best.position;
    result.best_objective = best.objective;
    return result;
}

OptResult pso_minimize(const Objective& objective, const Bounds& bounds, const PsoConfig& config) {
    bounds.validate();
    config.validate();
    const std::size_t count = static_cast<std::size_t>(config.particles);
    const std::size_t dims = bounds.dims();

    std::vector<double> vmax(dims);
    for (std::size_t d = 0; d < dims; ++d) {
        vmax[d] = config.velocity_clamp * (bounds.upper[d] - bounds.lower[d]);
    }

    Rng rng(config.seed);
    OptResult result;

    std::vector<std::vector<double>> positions(count);
    std::vector<std::vector<double>> velocities(count, std::vector<double>(dims));
    for (std::size_t i = 0; i < count; ++i) {
        positions[i] = random_position(bounds, rng);
        for (std::size_t d = 0; d < dims; ++d) {
            velocities[i][d] = rng.uniform(-vmax[d], vmax[d]);
        }
    }
    auto values = detail::evaluate_batch(objective, positions, config.threads);
    result.evaluations += count;

    std::vector<std::vector<double>> personal = positions;
    std::vector<double> personal_value = values;
    Incumbent global;
    for (std::size_t i = 0; i < count; ++i) {
        global.offer(positions[i], values[i]);
    }

    result.history.reserve(static_cast<std::size_t>(config.max_iters));
    for (int iter = 0; iter < config.max_iters; ++iter) {
        for (std::size_t i = 0; i < count; ++i) {
            auto& x = positions[i];
            auto& v = velocities[i];
            for (std::size_t d = 0; d < dims; ++d) {
                const double r1 = rng.uniform();
                const double r2 = rng.uniform();
                v[d] = config.inertia * v[d] + config.cognitive * r1 * (personal[i][d] - x[d]) +
                       config.social * r2 * (global.position[d] - x[d]);
                v[d] = std::clamp(v[d], -vmax[d], vmax[d]);
                x[d] = std::clamp(x[d] + v[d], bounds.lower[d], bounds.upper[d]);
            }
        }
        values = detail::evaluate_batch(objective, positions, config.threads);
        result.evaluations += count;
        for (std::size_t i = 0; i < count; ++i) {
            if (values[i] < personal_value[i]) {
                personal_value[i] = values[i];
                personal[i] = positions[i];
            }
        }
        for (std::size_t i = 0; i < count; ++i) {
            global.offer(personal[i], personal_value[i]);
        }
        result.history.push_back(global.objective);
    }

    result.best_position = global.position;
    result.best_objective = global.objective;
    return result;
}

std::string history_csv(std::span<const double> history) {
    std::string out = "cycle,best_objective\n";
    for (std::size_t i = 0; i < history.size(); ++i) {
        out += std::to_string(i + 1) + ',' + format_double(history[i]) + '\n';
    }
    return out;
}

double sphere(std::span<const double> x) noexcept {
    double s = 0.0;
    for (double v : x) {
        s += v * v;
    }
    return s;
}

double rosenbrock(std::span<const double> x) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i + 1] - x[i] * x[i];
        const double b = 1.0 - x[i];
        s += 100.0 * a * a + b * b;
    }
    return s;
}

double rastrigin(std::span<const double> x) noexcept {
    double s = 10.0 * static_cast<double>(x.size());
    for (double v : x) {
        s += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v);
    }
    return s;
}

std::vector<NamedObjective> benchmark_objectives() {
    return {
        {"sphere", [](std::span<const double> x) { return sphere(x); }, 5.0},
        {"rosenbrock", [](std::span<const double> x) { return rosenbrock(x); }, 5.0},
        {"rastrigin", [](std::span<const double> x) { return rastrigin(x); }, 5.12},
    };
}

} // namespace swarm_lssvm
