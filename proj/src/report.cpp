#include "swarm_lssvm/report.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "swarm_lssvm/error.hpp"
#include "swarm_lssvm/format.hpp"

namespace swarm_lssvm {

Metrics mse(std::span<const double> targets, std::span<const double> predictions) {
    if (targets.empty() || targets.size() != predictions.size()) {
        throw InputError("mse: targets and predictions must be non-empty and of equal length");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const double d = targets[i] - predictions[i];
        sum += d * d;
    }
    return Metrics{sum / static_cast<double>(targets.size()), targets.size()};
}

Metrics mse(const Vector& targets, const Vector& predictions) {
    return mse(std::span<const double>(targets.data(), static_cast<std::size_t>(targets.size())),
               std::span<const double>(predictions.data(), static_cast<std::size_t>(predictions.size())));
}

PreparedData prepare(const OhlcvSeries& series, const PipelineConfig& config) {
    const auto priced = with_price_source(series, config.price_source);
    auto split = split_chronological(build_supervised(priced, config.indicators), config.train_ratio);
    PreparedData out;
    if (config.scale) {
        auto fit = fit_scaler(split.train);
        split.train = apply_scaler(fit.scaler, split.train);
        split.test = apply_scaler(fit.scaler, split.test);
        out.scaler = fit.scaler;
        out.zero_variance_columns = std::move(fit.zero_variance_columns);
    }
    out.split = std::move(split);
    return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

CompareRow tuned_row(const char* method, const TuneResult& tuned, const SupervisedDataset& test, double wall) {
    const auto predictions = predict(tuned.final_model, test.features);
    return CompareRow{method,       mse(test.targets, predictions).mse, tuned.best_c, tuned.best_kernel,
                      tuned.best_validation_mse, wall, tuned.seed};
}

} // namespace

CompareReport run_compare(const OhlcvSeries& series, const CompareConfig& config) {
    const auto data = prepare(series, config.pipeline);
    const auto& train = data.split.train;
    const auto& test = data.split.test;
    const auto train_set = train.training_set();
    const auto attach = [&](const LssvmModel& m) { return m.with_metadata(train.feature_names, data.scaler); };

    CompareReport report;
    report.symbol = series.symbol;
    report.n_train = static_cast<std::size_t>(train.rows());
    report.n_test = static_cast<std::size_t>(test.rows());

    auto start = Clock::now();
    const auto abc = tune_lssvm_abc(train_set, config.space, config.abc, config.holdout_fraction);
    report.rows.push_back(tuned_row(kMethodAbc, abc, test, seconds_since(start)));
    report.models.push_back(attach(abc.final_model));

    start = Clock::now();
    const auto pso = tune_lssvm_pso(train_set, config.space, config.pso, config.holdout_fraction);
    report.rows.push_back(tuned_row(kMethodPso, pso, test, seconds_since(start)));
    report.models.push_back(attach(pso.final_model));

    start = Clock::now();
    const auto plain = swarm_lssvm::train(train_set, config.default_kernel, config.default_c);
    const double plain_mse = mse(test.targets, predict(plain, test.features)).mse;
    report.rows.push_back(CompareRow{kMethodPlain, plain_mse, config.default_c, config.default_kernel, std::nullopt,
                                     seconds_since(start), std::nullopt});
    report.models.push_back(attach(plain));
    return report;
}

nlohmann::json compare_to_json(const CompareReport& report, bool include_timing) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
        nlohmann::json row;
        row["method"] = r.method;
        row["test_mse"] = r.test_mse;
        row["reg_c"] = r.reg_c;
        row["kernel"] = kernel_to_json(r.kernel);
        row["validation_mse"] = r.validation_mse ? nlohmann::json(*r.validation_mse) : nlohmann::json(nullptr);
        row["seed"] = r.seed ? nlohmann::json(*r.seed) : nlohmann::json(nullptr);
        if (include_timing) {
            row["wall_time_s"] = r.wall_time_s;
        }
        rows.push_back(std::move(row));
    }
    return nlohmann::json{
        {"symbol", report.symbol},
        {"n_train", report.n_train},
        {"n_test", report.n_test},
        {"rows", std::move(rows)},
    };
}

namespace {

std::string kernel_params(const KernelSpec& k) {
    auto j = kernel_to_json(k);
    j.erase("type");
    std::string out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s%s=%.6g", out.empty() ? "" : " ", it.key().c_str(), it.value().get<double>());
        out += buf;
    }
    return out.empty() ? "-" : out;
}

} // namespace

std::string render_compare_table(const CompareReport& report) {
    std::ostringstream os;
    os << "symbol: " << (report.symbol.empty() ? "-" : report.symbol) << "  train rows: " << report.n_train
       << "  test rows: " << report.n_test << "\n";
    char line[256];
    std::snprintf(line, sizeof line, "%-10s %14s %12s  %-22s %10s\n", "method", "test MSE", "C", "kernel", "time [s]");
    os << line;
    for (const auto& r : report.rows) {
        std::snprintf(line, sizeof line, "%-10s %14.6g %12.6g  %-22s %10.3f\n", r.method.c_str(), r.test_mse, r.reg_c,
                      (kernel_name(r.kernel) + " " + kernel_params(r.kernel)).c_str(), r.wall_time_s);
        os << line;
    }
    return os.str();
}

void emit_convergence(const TuneResult& result, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw InputError("cannot open '" + path.string() + "' for writing");
    }
    out << history_csv(result.history);
    if (!out) {
        throw InputError("failed writing '" + path.string() + "'");
    }
}

std::vector<ReferenceMse> parse_reference_table(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::size_t line_no = 0;
    std::vector<ReferenceMse> out;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        if (line.rfind("symbol,", 0) == 0) {
            continue;
        }
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string f;
        while (std::getline(ls, f, ',')) {
            fields.push_back(f);
        }
        if (fields.size() != 6) {
            throw ParseError("reference table: line " + std::to_string(line_no) + " needs 6 fields");
        }
        ReferenceMse row{fields[0], fields[1]};
        double* slots[] = {&row.lssvm_abc, &row.lssvm_pso, &row.lssvm, &row.ann};
        for (std::size_t k = 0; k < 4; ++k) {
            const auto v = parse_double(fields[k + 2]);
            if (!v) {
                throw ParseError("reference table: line " + std::to_string(line_no) + ": bad number '" +
                                 fields[k + 2] + "'");
            }
            *slots[k] = *v;
        }
        out.push_back(std::move(row));
    }
    return out;
}

std::optional<ReferenceMse> find_reference(const std::vector<ReferenceMse>& table, const std::string& symbol) {
    auto upper = [](std::string s) {
        std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
        return s;
    };
    const auto key = upper(symbol);
    for (const auto& row : table) {
        if (upper(row.symbol) == key) {
            return row;
        }
    }
    return std::nullopt;
}

} // namespace swarm_lssvm
