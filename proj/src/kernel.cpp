#include "swarm_lssvm/kernel.hpp"

#include <cmath>
#include <string>

#include "swarm_lssvm/error.hpp"

namespace swarm_lssvm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

double dot(const double* x, const double* z, Eigen::Index p) noexcept {
    double s = 0.0;
    for (Eigen::Index i = 0; i < p; ++i) {
        s += x[i] * z[i];
    }
    return s;
}

double squared_distance(const double* x, const double* z, Eigen::Index p) noexcept {
    double s = 0.0;
    for (Eigen::Index i = 0; i < p; ++i) {
        const double d = x[i] - z[i];
        s += d * d;
    }
    return s;
}

double require_number(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) {
        throw ParseError(std::string("kernel: missing field '") + key + "'");
    }
    if (!j.at(key).is_number()) {
        throw ParseError(std::string("kernel: field '") + key + "' is not a number");
    }
    return j.at(key).get<double>();
}

} // namespace

void validate(const KernelSpec& spec) {
    std::visit(overloaded{
                   [](const LinearKernel&) {},
                   [](const PolynomialKernel& k) {
                       if (k.degree < 1) {
                           throw InputError("polynomial kernel: degree must be >= 1");
                       }
                       if (!(k.scale > 0.0) || !std::isfinite(k.scale)) {
                           throw InputError("polynomial kernel: scale must be positive");
                       }
                   },
                   [](const RbfKernel& k) {
                       if (!(k.sigma2 > 0.0) || !std::isfinite(k.sigma2)) {
                           throw InputError("rbf kernel: sigma2 must be positive");
                       }
                   },
                   [](const MlpKernel& k) {
                       if (!std::isfinite(k.slope) || !std::isfinite(k.offset)) {
                           throw InputError("mlp kernel: slope and offset must be finite");
                       }
                   },
               },
               spec);
}

std::string kernel_name(const KernelSpec& spec) {
    return std::visit(overloaded{
                          [](const LinearKernel&) { return std::string("linear"); },
                          [](const PolynomialKernel&) { return std::string("poly"); },
                          [](const RbfKernel&) { return std::string("rbf"); },
                          [](const MlpKernel&) { return std::string("mlp"); },
                      },
                      spec);
}

namespace detail {

double kernel_unchecked(const KernelSpec& spec, const double* x, const double* z, Eigen::Index p) noexcept {
    return std::visit(overloaded{
                          [&](const LinearKernel&) { return dot(x, z, p); },
                          [&](const PolynomialKernel& k) {
                              return std::pow(1.0 + dot(x, z, p) / k.scale, k.degree);
                          },
                          [&](const RbfKernel& k) { return std::exp(-squared_distance(x, z, p) / k.sigma2); },
                          [&](const MlpKernel& k) { return std::tanh(k.slope * dot(x, z, p) + k.offset); },
                      },
                      spec);
}

} // namespace detail

double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> z) {
    if (x.size() != z.size()) {
        throw InputError("kernel_eval: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                         std::to_string(z.size()) + ")");
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i]) || !std::isfinite(z[i])) {
            throw InputError("kernel_eval: non-finite input at index " + std::to_string(i));
        }
    }
    validate(spec);
    return detail::kernel_unchecked(spec, x.data(), z.data(), static_cast<Eigen::Index>(x.size()));
}

Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const Matrix& inputs) {
    validate(spec);
    if (!inputs.allFinite()) {
        throw InputError("gram_matrix: non-finite input");
    }
    const Eigen::Index n = inputs.rows();
    const Eigen::Index p = inputs.cols();
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double* xi = inputs.row(i).data();
        for (Eigen::Index j = i; j < n; ++j) {
            const double v = detail::kernel_unchecked(spec, xi, inputs.row(j).data(), p);
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    return k;
}

nlohmann::json kernel_to_json(const KernelSpec& spec) {
    return std::visit(overloaded{
                          [](const LinearKernel&) { return nlohmann::json{{"type", "linear"}}; },
                          [](const PolynomialKernel& k) {
                              return nlohmann::json{{"type", "poly"}, {"degree", k.degree}, {"scale", k.scale}};
                          },
                          [](const RbfKernel& k) { return nlohmann::json{{"type", "rbf"}, {"sigma2", k.sigma2}}; },
                          [](const MlpKernel& k) {
                              return nlohmann::json{{"type", "mlp"}, {"slope", k.slope}, {"offset", k.offset}};
                          },
                      },
                      spec);
}

KernelSpec kernel_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
        throw ParseError("kernel: missing field 'type'");
    }
    const auto type = j.at("type").get<std::string>();
    KernelSpec spec;
    if (type == "linear") {
        spec = LinearKernel{};
    } else if (type == "poly") {
        if (!j.contains("degree") || !j.at("degree").is_number_integer()) {
            throw ParseError("kernel: field 'degree' missing or not an integer");
        }
        spec = PolynomialKernel{j.at("degree").get<int>(), require_number(j, "scale")};
    } else if (type == "rbf") {
        spec = RbfKernel{require_number(j, "sigma2")};
    } else if (type == "mlp") {
        spec = MlpKernel{require_number(j, "slope"), require_number(j, "offset")};
    } else {
        throw ParseError("kernel: unknown type '" + type + "'");
    }
    try {
        validate(spec);
    } catch (const InputError& e) {
        throw ParseError(e.what());
    }
    return spec;
}

} // namespace swarm_lssvm
