#include "swarm_lssvm/lssvm.hpp"

#include <cmath>
#include <string>

#include <Eigen/LU>

#include "swarm_lssvm/error.hpp"

namespace swarm_lssvm {

void validate(const TrainingSet& data) {
    if (data.inputs.rows() < 1 || data.inputs.cols() < 1) {
        throw InputError("training set: need at least one row and one column");
    }
    if (data.targets.size() != data.inputs.rows()) {
        throw InputError("training set: " + std::to_string(data.inputs.rows()) + " input rows but " +
                         std::to_string(data.targets.size()) + " targets");
    }
    if (!data.inputs.allFinite() || !data.targets.allFinite()) {
        throw InputError("training set: non-finite entry");
    }
}

LssvmModel::LssvmModel(KernelSpec kernel, double reg_c, Vector alphas, double bias, Matrix train_inputs)
    : kernel_(kernel),
      reg_c_(reg_c),
      lambda_(1.0 / reg_c),
      alphas_(std::move(alphas)),
      bias_(bias),
      train_inputs_(std::move(train_inputs)) {
    validate(kernel_);
    if (!(reg_c_ > 0.0) || !std::isfinite(reg_c_)) {
        throw InputError("lssvm: regularization C must be positive and finite");
    }
    if (alphas_.size() != train_inputs_.rows() || train_inputs_.rows() < 1 || train_inputs_.cols() < 1) {
        throw InputError("lssvm: alphas length must equal the number of training rows");
    }
}

LssvmModel LssvmModel::with_metadata(std::vector<std::string> feature_names,
                                     std::optional<Standardizer> scaler) const {
    const auto p = static_cast<std::size_t>(dims());
    if (!feature_names.empty() && feature_names.size() != p) {
        throw InputError("lssvm: " + std::to_string(feature_names.size()) + " feature names for " +
                         std::to_string(p) + " input columns");
    }
    if (scaler && (scaler->means.size() != p || scaler->stds.size() != p)) {
        throw InputError("lssvm: scaler width does not match input columns");
    }
    LssvmModel copy = *this;
    copy.feature_names_ = std::move(feature_names);
    copy.scaler_ = std::move(scaler);
    return copy;
}

bool LssvmModel::operator==(const LssvmModel& other) const {
    return kernel_ == other.kernel_ && reg_c_ == other.reg_c_ && lambda_ == other.lambda_ &&
           bias_ == other.bias_ && alphas_.size() == other.alphas_.size() && alphas_ == other.alphas_ &&
           train_inputs_.rows() == other.train_inputs_.rows() &&
           train_inputs_.cols() == other.train_inputs_.cols() && train_inputs_ == other.train_inputs_ &&
           feature_names_ == other.feature_names_ && scaler_ == other.scaler_;
}

namespace {

Eigen::VectorXd wide_residual(const Eigen::MatrixXd& a, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
    Eigen::VectorXd r(b.size());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        long double acc = b(i);
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            acc -= static_cast<long double>(a(i, j)) * x(j);
        }
        r(i) = static_cast<double>(acc);
    }
    return r;
}

} // namespace

LssvmModel train(const TrainingSet& data, const KernelSpec& spec, double reg_c) {
    validate(data);
    validate(spec);
    if (!(reg_c > 0.0) || !std::isfinite(reg_c)) {
        throw InputError("train: regularization C must be positive and finite");
    }
    const Eigen::Index n = data.size();
    const double lambda = 1.0 / reg_c;

    Eigen::MatrixXd system(n + 1, n + 1);
    system(0, 0) = 0.0;
    system.block(0, 1, 1, n).setOnes();
    system.block(1, 0, n, 1).setOnes();
    system.block(1, 1, n, n) = gram_matrix(spec, data.inputs);
    system.block(1, 1, n, n).diagonal().array() += lambda;

    Eigen::VectorXd rhs(n + 1);
    rhs(0) = 0.0;
    rhs.tail(n) = data.targets;

    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
    const bool zero_pivot = (lu.matrixLU().diagonal().array() == 0.0).any();
    const double rcond = zero_pivot ? 0.0 : lu.rcond();
    const double condition = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (!(condition <= kMaxConditionEstimate)) {
        throw NumericalError("train: dual system is ill-conditioned (condition estimate " +
                                 std::to_string(condition) + ")",
                             condition);
    }

    Eigen::VectorXd solution = lu.solve(rhs);
    // iterative refinement with the residual accumulated in extended precision
    for (int step = 0; step < 2; ++step) {
        solution += lu.solve(wide_residual(system, solution, rhs));
    }
    if (!solution.allFinite()) {
        throw NumericalError("train: solve produced non-finite coefficients",
                             std::numeric_limits<double>::infinity());
    }

    return LssvmModel(spec, reg_c, solution.tail(n), solution(0), data.inputs);
}

double predict(const LssvmModel& model, std::span<const double> x) {
    const Eigen::Index p = model.dims();
    if (static_cast<Eigen::Index>(x.size()) != p) {
        throw InputError("predict: expected " + std::to_string(p) + " features, got " + std::to_string(x.size()));
    }
    for (double v : x) {
        if (!std::isfinite(v)) {
            throw InputError("predict: non-finite feature");
        }
    }
    const Matrix& xs = model.train_inputs();
    const Vector& a = model.alphas();
    double sum = model.bias();
    for (Eigen::Index i = 0; i < xs.rows(); ++i) {
        sum += a(i) * detail::kernel_unchecked(model.kernel(), x.data(), xs.row(i).data(), p);
    }
    return sum;
}

Vector predict(const LssvmModel& model, const Matrix& inputs) {
    Vector out(inputs.rows());
    for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
        out(i) = predict(model, std::span<const double>(inputs.row(i).data(), static_cast<std::size_t>(inputs.cols())));
    }
    return out;
}

double dual_residual(const LssvmModel& model, const Vector& targets) {
    const Eigen::Index n = model.alphas().size();
    if (targets.size() != n) {
        throw InputError("dual_residual: target length mismatch");
    }
    const Eigen::MatrixXd k = gram_matrix(model.kernel(), model.train_inputs());
    double worst = std::abs(model.alphas().sum());
    const Eigen::VectorXd rows = (k * model.alphas()).array() + model.lambda() * model.alphas().array() +
                                 model.bias() - targets.array();
    if (n > 0) {
        worst = std::max(worst, rows.cwiseAbs().maxCoeff());
    }
    return worst;
}

namespace {

const nlohmann::json& field(const nlohmann::json& doc, const char* key) {
    if (!doc.contains(key)) {
        throw ParseError(std::string("model: missing field '") + key + "'");
    }
    return doc.at(key);
}

double number_field(const nlohmann::json& doc, const char* key) {
    const auto& v = field(doc, key);
    if (!v.is_number()) {
        throw ParseError(std::string("model: field '") + key + "' is not a number");
    }
    return v.get<double>();
}

std::vector<double> number_array(const nlohmann::json& v, const std::string& context) {
    if (!v.is_array()) {
        throw ParseError("model: field '" + context + "' is not an array");
    }
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) {
            throw ParseError("model: " + context + "[" + std::to_string(i) + "] is not a number");
        }
        out.push_back(v[i].get<double>());
    }
    return out;
}

} // namespace

std::string serialize_model(const LssvmModel& model) {
    nlohmann::json doc;
    doc["format_version"] = 1;
    doc["kernel"] = kernel_to_json(model.kernel());
    doc["reg_c"] = model.reg_c();
    doc["bias"] = model.bias();
    doc["alphas"] = std::vector<double>(model.alphas().begin(), model.alphas().end());
    auto rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < model.train_inputs().rows(); ++i) {
        const auto row = model.train_inputs().row(i);
        rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    doc["train_inputs"] = std::move(rows);
    doc["feature_names"] = model.feature_names();
    if (model.scaler()) {
        doc["scaler"] = {{"means", model.scaler()->means}, {"stds", model.scaler()->stds}};
    } else {
        doc["scaler"] = nullptr;
    }
    return doc.dump(2) + "\n";
}

LssvmModel parse_model(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("model: malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ParseError("model: top level is not an object");
    }
    const auto& version = field(doc, "format_version");
    if (!version.is_number_integer() || version.get<int>() != 1) {
        throw ParseError("model: unsupported format_version");
    }
    const KernelSpec kernel = kernel_from_json(field(doc, "kernel"));
    const double reg_c = number_field(doc, "reg_c");
    const double bias = number_field(doc, "bias");
    const auto alphas = number_array(field(doc, "alphas"), "alphas");

    const auto& rows = field(doc, "train_inputs");
    if (!rows.is_array() || rows.empty()) {
        throw ParseError("model: field 'train_inputs' must be a non-empty array");
    }
    if (rows.size() != alphas.size()) {
        throw ParseError("model: 'alphas' has " + std::to_string(alphas.size()) + " entries but 'train_inputs' has " +
                         std::to_string(rows.size()) + " rows");
    }
    const auto first = number_array(rows[0], "train_inputs[0]");
    Matrix inputs(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(first.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto row = number_array(rows[i], "train_inputs[" + std::to_string(i) + "]");
        if (row.size() != first.size()) {
            throw ParseError("model: train_inputs[" + std::to_string(i) + "] has inconsistent width");
        }
        for (std::size_t j = 0; j < row.size(); ++j) {
            inputs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j];
        }
    }

    std::vector<std::string> names;
    if (doc.contains("feature_names")) {
        const auto& fn = doc.at("feature_names");
        if (!fn.is_array()) {
            throw ParseError("model: field 'feature_names' is not an array");
        }
        for (const auto& name : fn) {
            if (!name.is_string()) {
                throw ParseError("model: feature_names entries must be strings");
            }
            names.push_back(name.get<std::string>());
        }
    }
    std::optional<Standardizer> scaler;
    if (doc.contains("scaler") && !doc.at("scaler").is_null()) {
        const auto& s = doc.at("scaler");
        if (!s.is_object()) {
            throw ParseError("model: field 'scaler' is not an object");
        }
        scaler = Standardizer{number_array(field(s, "means"), "scaler.means"), number_array(field(s, "stds"), "scaler.stds")};
    }

    try {
        Vector a = Eigen::Map<const Vector>(alphas.data(), static_cast<Eigen::Index>(alphas.size()));
        return LssvmModel(kernel, reg_c, std::move(a), bias, std::move(inputs)).with_metadata(std::move(names), std::move(scaler));
    } catch (const ParseError&) {
        throw;
    } catch (const InputError& e) {
        throw ParseError(std::string("model: ") + e.what());
    }
}

} // namespace swarm_lssvm
