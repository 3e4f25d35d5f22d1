#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swarm_lssvm/kernel.hpp"
#include "swarm_lssvm/linalg.hpp"
#include "swarm_lssvm/scaler.hpp"

namespace swarm_lssvm {

/// Inputs X (n×p) and targets y (n).
struct TrainingSet {
    Matrix inputs;
    Vector targets;

    Eigen::Index size() const { return inputs.rows(); }
    Eigen::Index dims() const { return inputs.cols(); }
};

/// Throws InputError on empty, mis-shaped, or non-finite data.
void validate(const TrainingSet& data);

/// Condition estimates above this abort training with a NumericalError.
inline constexpr double kMaxConditionEstimate = 1e14;

/// Trained least-squares SVM regressor.
///
/// Prediction is f(x) = Σ aᵢ K(x, xᵢ) + b, with (b, a) the solution of the
/// bordered system
///
///     [ 0   1ᵀ      ] [b]   [0]
///     [ 1   K + λI  ] [a] = [y],    λ = 1/C.
///
/// Instances are immutable once built.
class LssvmModel {
public:
    LssvmModel(KernelSpec kernel, double reg_c, Vector alphas, double bias, Matrix train_inputs);

    const KernelSpec& kernel() const noexcept { return kernel_; }
    double reg_c() const noexcept { return reg_c_; }
    double lambda() const noexcept { return lambda_; }
    const Vector& alphas() const noexcept { return alphas_; }
    double bias() const noexcept { return bias_; }
    const Matrix& train_inputs() const noexcept { return train_inputs_; }
    Eigen::Index dims() const noexcept { return train_inputs_.cols(); }

    /// Column labels and input standardization carried along for the model file.
    const std::vector<std::string>& feature_names() const noexcept { return feature_names_; }
    const std::optional<Standardizer>& scaler() const noexcept { return scaler_; }
    LssvmModel with_metadata(std::vector<std::string> feature_names, std::optional<Standardizer> scaler) const;

    bool operator==(const LssvmModel&) const;

private:
    KernelSpec kernel_;
    double reg_c_;
    double lambda_;
    Vector alphas_;
    double bias_;
    Matrix train_inputs_;
    std::vector<std::string> feature_names_;
    std::optional<Standardizer> scaler_;
};

/// Solves the dual system by pivoted LU. Throws InputError for reg_c <= 0 or
/// invalid data, NumericalError when the condition estimate exceeds
/// kMaxConditionEstimate.
LssvmModel train(const TrainingSet& data, const KernelSpec& spec, double reg_c);

double predict(const LssvmModel& model, std::span<const double> x);

/// Predicts every row of `inputs`.
Vector predict(const LssvmModel& model, const Matrix& inputs);

/// Max-norm residual of the bordered system for (model.bias, model.alphas) against targets.
double dual_residual(const LssvmModel& model, const Vector& targets);

/// JSON document: format_version, kernel, reg_c, alphas, bias, train_inputs,
/// feature_names, scaler. Doubles are written in shortest round-trip form.
std::string serialize_model(const LssvmModel& model);
LssvmModel parse_model(const std::string& text);

} // namespace swarm_lssvm
