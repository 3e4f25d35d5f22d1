#pragma once

#include <span>
#include <string>
#include <variant>

#include <json.hpp>

#include "swarm_lssvm/linalg.hpp"

namespace swarm_lssvm {

/// K(x, z) = z·x
struct LinearKernel {
    bool operator==(const LinearKernel&) const = default;
};

/// K(x, z) = (1 + z·x / scale)^degree
struct PolynomialKernel {
    int degree = 2;
    double scale = 1.0;
    bool operator==(const PolynomialKernel&) const = default;
};

/// K(x, z) = exp(-|x - z|² / sigma2)
struct RbfKernel {
    double sigma2 = 1.0;
    bool operator==(const RbfKernel&) const = default;
};

/// K(x, z) = tanh(slope · z·x + offset). Not positive semidefinite in general.
struct MlpKernel {
    double slope = 1.0;
    double offset = 0.0;
    bool operator==(const MlpKernel&) const = default;
};

using KernelSpec = std::variant<LinearKernel, PolynomialKernel, RbfKernel, MlpKernel>;

/// Throws InputError when a parameter is outside its domain.
void validate(const KernelSpec& spec);

/// "linear", "poly", "rbf" or "mlp".
std::string kernel_name(const KernelSpec& spec);

/// Checked evaluation: lengths must match and entries must be finite.
double kernel_eval(const KernelSpec& spec, std::span<const double> x, std::span<const double> z);

/// Symmetric n×n Gram matrix over the rows of `inputs`. The upper triangle is
/// computed and mirrored, so the result is exactly symmetric.
Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const Matrix& inputs);

nlohmann::json kernel_to_json(const KernelSpec& spec);
KernelSpec kernel_from_json(const nlohmann::json& j);

namespace detail {
double kernel_unchecked(const KernelSpec& spec, const double* x, const double* z, Eigen::Index p) noexcept;
}

} // namespace swarm_lssvm
