#include "swarm_lssvm/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "swarm_lssvm/error.hpp"

namespace swarm_lssvm {

namespace {

void require_finite(std::span<const double> xs, const char* what) {
    for (double v : xs) {
        if (!std::isfinite(v)) {
            throw InputError(std::string(what) + ": non-finite input");
        }
    }
}

void require_window(int window, const char* what) {
    if (window < 2) {
        throw InputError(std::string(what) + ": window must be >= 2");
    }
}

void require_longer(std::size_t n, int window, const char* what) {
    if (n <= static_cast<std::size_t>(window)) {
        throw InputError(std::string(what) + ": series of length " + std::to_string(n) +
                         " is too short for window " + std::to_string(window));
    }
}

void require_alpha(double alpha, const char* what) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw InputError(std::string(what) + ": smoothing constant must be in (0, 1]");
    }
}

/// 100 − 100/(1 + up/down) with the degenerate cases pinned.
double oscillator(double up, double down) {
    if (up == 0.0 && down == 0.0) {
        return 50.0;
    }
    if (down == 0.0) {
        return 100.0;
    }
    if (up == 0.0) {
        return 0.0;
    }
    return 100.0 - 100.0 / (1.0 + up / down);
}

IndicatorSeries empty_series(std::size_t n, std::size_t first_valid) {
    return IndicatorSeries{std::vector<std::optional<double>>(n), first_valid};
}

} // namespace

void IndicatorConfig::validate() const {
    if (rsi_window < 2 || mfi_window < 2 || ema_period < 2 || stoch_window < 2) {
        throw InputError("indicator config: all windows must be >= 2");
    }
    require_alpha(macd_fast_alpha, "indicator config");
    require_alpha(macd_slow_alpha, "indicator config");
    require_alpha(signal_alpha, "indicator config");
}

std::size_t IndicatorConfig::warmup() const noexcept {
    return static_cast<std::size_t>(std::max({rsi_window, mfi_window, stoch_window - 1, 0}));
}

IndicatorSeries rsi(std::span<const double> closes, int window) {
    require_window(window, "rsi");
    require_longer(closes.size(), window, "rsi");
    require_finite(closes, "rsi");
    const auto w = static_cast<std::size_t>(window);
    auto out = empty_series(closes.size(), w);
    // Sums are recomputed per index; rolling updates would drift on long series.
    for (std::size_t i = w; i < closes.size(); ++i) {
        double gains = 0.0;
        double losses = 0.0;
        for (std::size_t t = i + 1 - w; t <= i; ++t) {
            const double change = closes[t] - closes[t - 1];
            if (change > 0.0) {
                gains += change;
            } else if (change < 0.0) {
                losses -= change;
            }
        }
        out.values[i] = oscillator(gains / window, losses / window);
    }
    return out;
}

IndicatorSeries mfi(std::span<const double> high, std::span<const double> low, std::span<const double> close,
                    std::span<const double> volume, int window) {
    require_window(window, "mfi");
    const std::size_t n = close.size();
    if (high.size() != n || low.size() != n || volume.size() != n) {
        throw InputError("mfi: high, low, close and volume must have equal lengths");
    }
    require_longer(n, window, "mfi");
    require_finite(high, "mfi");
    require_finite(low, "mfi");
    require_finite(close, "mfi");
    require_finite(volume, "mfi");
    if (std::any_of(volume.begin(), volume.end(), [](double v) { return v < 0.0; })) {
        throw InputError("mfi: negative volume");
    }

    std::vector<double> typical(n);
    for (std::size_t i = 0; i < n; ++i) {
        typical[i] = (high[i] + low[i] + close[i]) / 3.0;
    }
    const auto w = static_cast<std::size_t>(window);
    auto out = empty_series(n, w);
    for (std::size_t i = w; i < n; ++i) {
        double positive = 0.0;
        double negative = 0.0;
        for (std::size_t t = i + 1 - w; t <= i; ++t) {
            const double flow = typical[t] * volume[t];
            if (typical[t] > typical[t - 1]) {
                positive += flow;
            } else if (typical[t] < typical[t - 1]) {
                negative += flow;
            }
        }
        out.values[i] = oscillator(positive, negative);
    }
    return out;
}

IndicatorSeries ema(std::span<const double> series, double alpha) {
    require_alpha(alpha, "ema");
    if (series.empty()) {
        throw InputError("ema: empty series");
    }
    require_finite(series, "ema");
    auto out = empty_series(series.size(), 0);
    double value = series[0];
    out.values[0] = value;
    for (std::size_t i = 1; i < series.size(); ++i) {
        value += alpha * (series[i] - value);
        out.values[i] = value;
    }
    return out;
}

IndicatorSeries stochastic_k(std::span<const double> close, std::span<const double> high, std::span<const double> low,
                             int window) {
    require_window(window, "stochastic_k");
    const std::size_t n = close.size();
    if (high.size() != n || low.size() != n) {
        throw InputError("stochastic_k: close, high and low must have equal lengths");
    }
    require_longer(n, window, "stochastic_k");
    require_finite(close, "stochastic_k");
    require_finite(high, "stochastic_k");
    require_finite(low, "stochastic_k");
    const auto w = static_cast<std::size_t>(window);
    auto out = empty_series(n, w - 1);
    for (std::size_t i = w - 1; i < n; ++i) {
        const auto lo = *std::min_element(low.begin() + static_cast<std::ptrdiff_t>(i + 1 - w),
                                          low.begin() + static_cast<std::ptrdiff_t>(i + 1));
        const auto hi = *std::max_element(high.begin() + static_cast<std::ptrdiff_t>(i + 1 - w),
                                          high.begin() + static_cast<std::ptrdiff_t>(i + 1));
        if (hi == lo) {
            out.values[i] = 50.0;
        } else {
            out.values[i] = std::clamp((close[i] - lo) / (hi - lo) * 100.0, 0.0, 100.0);
        }
    }
    return out;
}

MacdSeries macd(std::span<const double> closes, const IndicatorConfig& config) {
    config.validate();
    if (closes.size() < 2) {
        throw InputError("macd: need at least 2 closes");
    }
    const auto fast = ema(closes, config.macd_fast_alpha);
    const auto slow = ema(closes, config.macd_slow_alpha);
    std::vector<double> line(closes.size());
    for (std::size_t i = 0; i < closes.size(); ++i) {
        line[i] = fast.at(i) - slow.at(i);
    }
    auto signal = ema(line, config.signal_alpha);
    auto out = empty_series(closes.size(), 0);
    for (std::size_t i = 0; i < line.size(); ++i) {
        out.values[i] = line[i];
    }
    return MacdSeries{std::move(out), std::move(signal)};
}

} // namespace swarm_lssvm
