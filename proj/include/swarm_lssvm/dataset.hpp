#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "swarm_lssvm/indicators.hpp"
#include "swarm_lssvm/linalg.hpp"
#include "swarm_lssvm/lssvm.hpp"
#include "swarm_lssvm/scaler.hpp"

namespace swarm_lssvm {

using Date = std::chrono::year_month_day;

std::string format_date(Date d);
/// YYYY-MM-DD. Throws ParseError.
Date parse_date(const std::string& text);

struct OhlcvBar {
    Date date;
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
    double adj_close = 0.0;
    double volume = 0.0;

    bool operator==(const OhlcvBar&) const = default;
};

struct OhlcvSeries {
    std::string symbol;
    std::vector<OhlcvBar> bars;

    bool operator==(const OhlcvSeries&) const = default;
};

/// Yahoo-style daily export: Date,Open,High,Low,Close[,Adj Close],Volume.
/// Header names are case-insensitive and may appear in any order. Rows are
/// sorted by date; duplicate dates, non-positive prices and bars whose
/// high/low do not bracket open and close are rejected.
OhlcvSeries parse_ohlcv_csv(const std::string& text, std::string symbol = {});
std::string render_ohlcv_csv(const OhlcvSeries& series);

enum class PriceSource { Close, AdjClose };

/// Same series with close replaced by adjusted close and open/high/low scaled
/// by the per-bar adjustment factor.
OhlcvSeries with_price_source(const OhlcvSeries& series, PriceSource source);

inline const std::vector<std::string> kFeatureNames = {"close", "rsi", "mfi", "ema", "stoch_k", "macd"};

struct SupervisedDataset {
    std::vector<std::string> feature_names;
    Matrix features;
    /// Next-bar close, never scaled.
    Vector targets;
    std::vector<Date> dates;
    std::optional<Standardizer> scaler;

    Eigen::Index rows() const noexcept { return features.rows(); }
    TrainingSet training_set() const { return TrainingSet{features, targets}; }
};

struct SplitDataset {
    SupervisedDataset train;
    SupervisedDataset test;
};

/// Minimum rows that must survive the indicator warm-up.
inline constexpr std::size_t kMinSupervisedRows = 30;

/// Row t holds [close, RSI, MFI, EMA, %K, MACD] at bar t and targets close at t+1.
/// Warm-up rows and the last bar are dropped.
SupervisedDataset build_supervised(const OhlcvSeries& series, const IndicatorConfig& config);

/// Feature row for the final bar, whose next close is unknown.
struct LatestFeatures {
    Date date;
    std::vector<double> features;
};
LatestFeatures latest_features(const OhlcvSeries& series, const IndicatorConfig& config);

/// First floor(ratio·m) rows train, the rest test. No shuffling.
SplitDataset split_chronological(const SupervisedDataset& ds, double train_ratio);

struct ScalerFit {
    Standardizer scaler;
    /// Columns with zero variance; their std was forced to 1.
    std::vector<std::size_t> zero_variance_columns;
};

/// Population mean and standard deviation of each training column.
ScalerFit fit_scaler(const SupervisedDataset& train);
SupervisedDataset apply_scaler(const Standardizer& scaler, const SupervisedDataset& ds);
Matrix apply_scaler(const Standardizer& scaler, const Matrix& features);
std::vector<double> apply_scaler(const Standardizer& scaler, std::span<const double> row);

/// date,close,rsi,mfi,ema,stoch_k,macd,target
std::string render_dataset_csv(const SupervisedDataset& ds);

} // namespace swarm_lssvm
