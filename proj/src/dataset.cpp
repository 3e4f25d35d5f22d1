#include "swarm_lssvm/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "swarm_lssvm/error.hpp"
#include "swarm_lssvm/format.hpp"

namespace swarm_lssvm {

std::string format_date(Date d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()), static_cast<unsigned>(d.month()),
                  static_cast<unsigned>(d.day()));
    return buf;
}

Date parse_date(const std::string& text) {
    int y = 0;
    unsigned m = 0;
    unsigned d = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%4d-%2u-%2u%c", &y, &m, &d, &tail) != 3) {
        throw ParseError("unparseable date '" + text + "'");
    }
    const Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!date.ok()) {
        throw ParseError("invalid calendar date '" + text + "'");
    }
    return date;
}

namespace {

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) {
        out.push_back(trim(field));
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

std::string row_context(std::size_t line_no) { return "row " + std::to_string(line_no); }

} // namespace

OhlcvSeries parse_ohlcv_csv(const std::string& text, std::string symbol) {
    std::istringstream is(text);
    std::string line;
    std::size_t line_no = 0;

    std::vector<std::string> header;
    while (std::getline(is, line)) {
        ++line_no;
        if (!trim(line).empty()) {
            header = split_fields(trim(line));
            break;
        }
    }
    if (header.empty()) {
        throw ParseError("ohlcv: missing header row");
    }

    std::map<std::string, std::size_t> column;
    for (std::size_t i = 0; i < header.size(); ++i) {
        column.emplace(lower(header[i]), i);
    }
    const std::vector<std::pair<std::string, std::string>> mandatory = {
        {"date", "Date"}, {"open", "Open"}, {"high", "High"}, {"low", "Low"}, {"close", "Close"}, {"volume", "Volume"}};
    for (const auto& [key, name] : mandatory) {
        if (!column.contains(key)) {
            throw ParseError("ohlcv: missing mandatory column '" + name + "'");
        }
    }
    const auto adj = column.find("adj close");

    OhlcvSeries series{std::move(symbol), {}};
    while (std::getline(is, line)) {
        ++line_no;
        const auto trimmed = trim(line);
        if (trimmed.empty()) {
            continue;
        }
        const auto fields = split_fields(trimmed);
        if (fields.size() != header.size()) {
            throw ParseError("ohlcv: " + row_context(line_no) + " has " + std::to_string(fields.size()) +
                             " fields, header has " + std::to_string(header.size()));
        }
        auto number = [&](std::size_t col, const std::string& name) {
            const auto v = parse_double(fields[col]);
            if (!v || !std::isfinite(*v)) {
                throw ParseError("ohlcv: " + row_context(line_no) + ": unparseable " + name + " '" + fields[col] + "'");
            }
            return *v;
        };
        OhlcvBar bar;
        try {
            bar.date = parse_date(fields[column.at("date")]);
        } catch (const ParseError& e) {
            throw ParseError("ohlcv: " + row_context(line_no) + ": " + e.what());
        }
        bar.open = number(column.at("open"), "Open");
        bar.high = number(column.at("high"), "High");
        bar.low = number(column.at("low"), "Low");
        bar.close = number(column.at("close"), "Close");
        bar.adj_close = adj != column.end() ? number(adj->second, "Adj Close") : bar.close;
        bar.volume = number(column.at("volume"), "Volume");

        if (!(bar.open > 0.0 && bar.high > 0.0 && bar.low > 0.0 && bar.close > 0.0 && bar.adj_close > 0.0)) {
            throw ParseError("ohlcv: " + row_context(line_no) + ": prices must be positive");
        }
        if (bar.volume < 0.0) {
            throw ParseError("ohlcv: " + row_context(line_no) + ": negative volume");
        }
        if (bar.low > std::min(bar.open, bar.close) || bar.high < std::max(bar.open, bar.close)) {
            throw ParseError("ohlcv: " + row_context(line_no) + ": high/low do not bracket open and close");
        }
        series.bars.push_back(bar);
    }
    if (series.bars.empty()) {
        throw ParseError("ohlcv: no data rows");
    }

    std::sort(series.bars.begin(), series.bars.end(),
              [](const OhlcvBar& a, const OhlcvBar& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < series.bars.size(); ++i) {
        if (series.bars[i].date == series.bars[i - 1].date) {
            throw ParseError("ohlcv: duplicate date " + format_date(series.bars[i].date));
        }
    }
    return series;
}

std::string render_ohlcv_csv(const OhlcvSeries& series) {
    std::string out = "Date,Open,High,Low,Close,Adj Close,Volume\n";
    for (const auto& b : series.bars) {
        out += format_date(b.date) + ',' + format_double(b.open) + ',' + format_double(b.high) + ',' +
               format_double(b.low) + ',' + format_double(b.close) + ',' + format_double(b.adj_close) + ',' +
               format_double(b.volume) + '\n';
    }
    return out;
}

OhlcvSeries with_price_source(const OhlcvSeries& series, PriceSource source) {
    if (source == PriceSource::Close) {
        return series;
    }
    OhlcvSeries out = series;
    for (auto& b : out.bars) {
        const double factor = b.adj_close / b.close;
        b.open *= factor;
        b.high *= factor;
        b.low *= factor;
        b.close = b.adj_close;
    }
    return out;
}

namespace {

struct Columns {
    std::vector<double> high, low, close, volume;
};

Columns columns_of(const OhlcvSeries& series) {
    Columns c;
    for (const auto& b : series.bars) {
        c.high.push_back(b.high);
        c.low.push_back(b.low);
        c.close.push_back(b.close);
        c.volume.push_back(b.volume);
    }
    return c;
}

struct FeatureColumns {
    std::vector<double> close;
    IndicatorSeries rsi, mfi, ema, stoch;
    IndicatorSeries macd;
};

FeatureColumns compute_features(const OhlcvSeries& series, const IndicatorConfig& config) {
    config.validate();
    const std::size_t needed = config.warmup() + kMinSupervisedRows + 1;
    if (series.bars.size() < needed) {
        throw InputError("dataset: " + std::to_string(series.bars.size()) + " bars is too short; need at least " +
                         std::to_string(needed) + " so that " + std::to_string(kMinSupervisedRows) +
                         " rows survive the indicator warm-up");
    }
    auto c = columns_of(series);
    FeatureColumns f;
    f.rsi = rsi(c.close, config.rsi_window);
    f.mfi = mfi(c.high, c.low, c.close, c.volume, config.mfi_window);
    f.ema = ema(c.close, config.ema_alpha());
    f.stoch = stochastic_k(c.close, c.high, c.low, config.stoch_window);
    f.macd = macd(c.close, config).macd;
    f.close = std::move(c.close);
    return f;
}

void fill_row(const FeatureColumns& f, std::size_t t, double* row) {
    row[0] = f.close[t];
    row[1] = f.rsi.at(t);
    row[2] = f.mfi.at(t);
    row[3] = f.ema.at(t);
    row[4] = f.stoch.at(t);
    row[5] = f.macd.at(t);
}

} // namespace

SupervisedDataset build_supervised(const OhlcvSeries& series, const IndicatorConfig& config) {
    const auto f = compute_features(series, config);
    const std::size_t first = config.warmup();
    const std::size_t n = series.bars.size();
    const auto m = static_cast<Eigen::Index>(n - 1 - first);

    SupervisedDataset ds;
    ds.feature_names = kFeatureNames;
    ds.features.resize(m, static_cast<Eigen::Index>(kFeatureNames.size()));
    ds.targets.resize(m);
    ds.dates.reserve(static_cast<std::size_t>(m));
    for (std::size_t t = first; t + 1 < n; ++t) {
        const auto r = static_cast<Eigen::Index>(t - first);
        fill_row(f, t, ds.features.row(r).data());
        ds.targets(r) = series.bars[t + 1].close;
        ds.dates.push_back(series.bars[t].date);
    }
    if (!ds.features.allFinite() || !ds.targets.allFinite()) {
        throw NumericalError("dataset: non-finite feature value");
    }
    return ds;
}

LatestFeatures latest_features(const OhlcvSeries& series, const IndicatorConfig& config) {
    const auto f = compute_features(series, config);
    LatestFeatures out;
    out.date = series.bars.back().date;
    out.features.resize(kFeatureNames.size());
    fill_row(f, series.bars.size() - 1, out.features.data());
    return out;
}

namespace {

SupervisedDataset slice(const SupervisedDataset& ds, Eigen::Index begin, Eigen::Index count) {
    SupervisedDataset out;
    out.feature_names = ds.feature_names;
    out.features = ds.features.middleRows(begin, count);
    out.targets = ds.targets.segment(begin, count);
    out.dates.assign(ds.dates.begin() + begin, ds.dates.begin() + begin + count);
    out.scaler = ds.scaler;
    return out;
}

} // namespace

SplitDataset split_chronological(const SupervisedDataset& ds, double train_ratio) {
    if (!(train_ratio > 0.0 && train_ratio < 1.0)) {
        throw InputError("split: train ratio must be in (0, 1)");
    }
    const Eigen::Index m = ds.rows();
    if (m < 10) {
        throw InputError("split: need at least 10 rows, have " + std::to_string(m));
    }
    const auto n_train = static_cast<Eigen::Index>(std::floor(train_ratio * static_cast<double>(m)));
    if (n_train < 1 || n_train >= m) {
        throw InputError("split: ratio leaves an empty train or test part");
    }
    return SplitDataset{slice(ds, 0, n_train), slice(ds, n_train, m - n_train)};
}

ScalerFit fit_scaler(const SupervisedDataset& train) {
    const Eigen::Index m = train.rows();
    const Eigen::Index p = train.features.cols();
    if (m < 1 || p < 1) {
        throw InputError("fit_scaler: empty training set");
    }
    ScalerFit fit;
    fit.scaler.means.resize(static_cast<std::size_t>(p));
    fit.scaler.stds.resize(static_cast<std::size_t>(p));
    for (Eigen::Index j = 0; j < p; ++j) {
        const auto col = train.features.col(j);
        const double mean = col.mean();
        const double var = (col.array() - mean).square().mean();
        double sd = std::sqrt(var);
        // Treat spreads at roundoff level of the mean as constant columns.
        if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) {
            sd = 1.0;
            fit.zero_variance_columns.push_back(static_cast<std::size_t>(j));
        }
        fit.scaler.means[static_cast<std::size_t>(j)] = mean;
        fit.scaler.stds[static_cast<std::size_t>(j)] = sd;
    }
    return fit;
}

Matrix apply_scaler(const Standardizer& scaler, const Matrix& features) {
    const auto p = static_cast<std::size_t>(features.cols());
    if (scaler.means.size() != p || scaler.stds.size() != p) {
        throw InputError("apply_scaler: scaler has " + std::to_string(scaler.means.size()) + " columns, data has " +
                         std::to_string(p));
    }
    Matrix out(features.rows(), features.cols());
    for (Eigen::Index j = 0; j < features.cols(); ++j) {
        const auto k = static_cast<std::size_t>(j);
        out.col(j) = (features.col(j).array() - scaler.means[k]) / scaler.stds[k];
    }
    return out;
}

std::vector<double> apply_scaler(const Standardizer& scaler, std::span<const double> row) {
    if (scaler.means.size() != row.size() || scaler.stds.size() != row.size()) {
        throw InputError("apply_scaler: scaler width does not match feature row");
    }
    std::vector<double> out(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) {
        out[j] = (row[j] - scaler.means[j]) / scaler.stds[j];
    }
    return out;
}

SupervisedDataset apply_scaler(const Standardizer& scaler, const SupervisedDataset& ds) {
    SupervisedDataset out = ds;
    out.features = apply_scaler(scaler, ds.features);
    out.scaler = scaler;
    return out;
}

std::string render_dataset_csv(const SupervisedDataset& ds) {
    std::string out = "date";
    for (const auto& name : ds.feature_names) {
        out += ',' + name;
    }
    out += ",target\n";
    for (Eigen::Index i = 0; i < ds.rows(); ++i) {
        out += format_date(ds.dates[static_cast<std::size_t>(i)]);
        for (Eigen::Index j = 0; j < ds.features.cols(); ++j) {
            out += ',' + format_double(ds.features(i, j));
        }
        out += ',' + format_double(ds.targets(i)) + '\n';
    }
    return out;
}

} // namespace swarm_lssvm
