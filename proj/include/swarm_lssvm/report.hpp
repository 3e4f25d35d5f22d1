#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "swarm_lssvm/dataset.hpp"
#include "swarm_lssvm/tuner.hpp"

namespace swarm_lssvm {

struct Metrics {
    double mse = 0.0;
    std::size_t n = 0;
};

/// Mean squared difference. Throws InputError on empty or mismatched input.
Metrics mse(std::span<const double> targets, std::span<const double> predictions);
Metrics mse(const Vector& targets, const Vector& predictions);

struct PipelineConfig {
    IndicatorConfig indicators;
    double train_ratio = 0.7;
    bool scale = true;
    PriceSource price_source = PriceSource::Close;
};

/// Chronological split with the scaler fit on the train part only.
struct PreparedData {
    SplitDataset split;
    std::optional<Standardizer> scaler;
    std::vector<std::size_t> zero_variance_columns;
};

PreparedData prepare(const OhlcvSeries& series, const PipelineConfig& config);

struct CompareConfig {
    PipelineConfig pipeline;
    SearchSpace space;
    AbcConfig abc;
    PsoConfig pso;
    double holdout_fraction = kDefaultHoldoutFraction;
    double default_c = 1.0;
    KernelSpec default_kernel = RbfKernel{1.0};
};

struct CompareRow {
    std::string method;
    double test_mse = 0.0;
    double reg_c = 0.0;
    KernelSpec kernel;
    std::optional<double> validation_mse;
    double wall_time_s = 0.0;
    std::optional<std::uint64_t> seed;
};

struct CompareReport {
    std::string symbol;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    std::vector<CompareRow> rows;
    /// Trained model per row, same order.
    std::vector<LssvmModel> models;
};

inline constexpr const char* kMethodAbc = "LSSVM-ABC";
inline constexpr const char* kMethodPso = "LSSVM-PSO";
inline constexpr const char* kMethodPlain = "LSSVM";

/// ABC-tuned, PSO-tuned and default-parameter LSSVM scored on the same test split.
/// Nothing is fit on test rows.
CompareReport run_compare(const OhlcvSeries& series, const CompareConfig& config);

/// Wall times are left out unless requested so that reruns are byte-identical.
nlohmann::json compare_to_json(const CompareReport& report, bool include_timing = false);
std::string render_compare_table(const CompareReport& report);

/// Writes `cycle,best_objective`, one row per cycle.
void emit_convergence(const TuneResult& result, const std::filesystem::path& path);

/// Published per-symbol test MSE for 2009–2012 daily data.
struct ReferenceMse {
    std::string symbol;
    std::string company;
    double lssvm_abc = 0.0;
    double lssvm_pso = 0.0;
    double lssvm = 0.0;
    double ann = 0.0;
};

/// CSV with header symbol,company,lssvm_abc,lssvm_pso,lssvm,ann.
std::vector<ReferenceMse> parse_reference_table(const std::string& text);
std::optional<ReferenceMse> find_reference(const std::vector<ReferenceMse>& table, const std::string& symbol);

} // namespace swarm_lssvm
