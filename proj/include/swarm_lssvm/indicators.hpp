#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace swarm_lssvm {

struct IndicatorConfig {
    int rsi_window = 14;
    int mfi_window = 14;
    /// EMA feature period N; smoothing constant 2/(N+1).
    int ema_period = 10;
    int stoch_window = 14;
    double macd_fast_alpha = 0.15;
    double macd_slow_alpha = 0.075;
    double signal_alpha = 0.2;

    double ema_alpha() const noexcept { return 2.0 / (ema_period + 1.0); }
    void validate() const;
    /// Leading bars without a value for at least one indicator.
    std::size_t warmup() const noexcept;
};

/// One value per bar; absent before first_valid_index.
struct IndicatorSeries {
    std::vector<std::optional<double>> values;
    std::size_t first_valid_index = 0;

    std::size_t size() const noexcept { return values.size(); }
    double at(std::size_t i) const { return values.at(i).value(); }
};

/// Simple-mean RSI over the last `window` close-to-close changes. Valid from index `window`.
/// No losses gives 100, no gains gives 0, neither gives 50.
IndicatorSeries rsi(std::span<const double> closes, int window);

/// Money flow index on typical price (H+L+C)/3. Bars whose typical price is
/// unchanged contribute to neither side. Valid from index `window`.
IndicatorSeries mfi(std::span<const double> high, std::span<const double> low, std::span<const double> close,
                    std::span<const double> volume, int window);

/// EMA_0 = x_0, EMA_i = alpha·x_i + (1 − alpha)·EMA_{i−1}.
IndicatorSeries ema(std::span<const double> series, double alpha);

/// %K over the trailing `window` bars (inclusive). Flat window gives 50. Valid from index window−1.
IndicatorSeries stochastic_k(std::span<const double> close, std::span<const double> high, std::span<const double> low,
                             int window);

struct MacdSeries {
    IndicatorSeries macd;
    IndicatorSeries signal;
};

/// MACD = EMA(fast) − EMA(slow); signal = EMA(MACD, signal_alpha).
MacdSeries macd(std::span<const double> closes, const IndicatorConfig& config);

} // namespace swarm_lssvm
