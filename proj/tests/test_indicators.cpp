#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "swarm_lssvm/error.hpp"
#include "swarm_lssvm/indicators.hpp"

using namespace swarm_lssvm;

namespace {

struct Cols {
    std::vector<double> open, high, low, close, volume;
};

Cols cols(const OhlcvSeries& s) {
    Cols c;
    for (const auto& b : s.bars) {
        c.open.push_back(b.open);
        c.high.push_back(b.high);
        c.low.push_back(b.low);
        c.close.push_back(b.close);
        c.volume.push_back(b.volume);
    }
    return c;
}

std::vector<double> ramp(std::size_t n, double start, double step) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = start + step * static_cast<double>(i);
    return v;
}

void check_all_valid(const IndicatorSeries& s, double expected) {
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i < s.first_valid_index) {
            CHECK_FALSE(s.values[i].has_value());
        } else {
            CHECK(s.at(i) == expected);
        }
    }
}

double max_diff(const IndicatorSeries& got, const oracle::Opt& want) {
    REQUIRE(got.size() == want.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < want.size(); ++i) {
        REQUIRE(got.values[i].has_value() == want[i].has_value());
        if (want[i]) worst = std::max(worst, std::abs(*got.values[i] - *want[i]));
    }
    return worst;
}

} // namespace

TEST_CASE("rsi clamp cases") {
    const auto up = rsi(ramp(30, 10, 0.5), 14);
    CHECK(up.first_valid_index == 14);
    check_all_valid(up, 100.0);
    check_all_valid(rsi(ramp(30, 50, -0.5), 14), 0.0);

    std::vector<double> alt(40);
    for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = 20.0 + (i % 2 ? 1.0 : 0.0);
    check_all_valid(rsi(alt, 14), 50.0);
    check_all_valid(rsi(std::vector<double>(20, 3.0), 5), 50.0);
}

TEST_CASE("mfi clamp cases") {
    const auto n = 30;
    const auto c = ramp(n, 10, 1);
    const auto h = ramp(n, 11, 1);
    const auto l = ramp(n, 9, 1);
    const std::vector<double> v(n, 1000.0);
    check_all_valid(mfi(h, l, c, v, 14), 100.0);
    check_all_valid(mfi(ramp(n, 50, -1), ramp(n, 48, -1), ramp(n, 49, -1), v, 14), 0.0);

    // typical price alternates 10, 20 with volumes 2, 1: each up bar and each down bar moves 20 of money flow
    std::vector<double> tp(n), vol(n);
    for (int i = 0; i < n; ++i) {
        tp[i] = i % 2 ? 20.0 : 10.0;
        vol[i] = i % 2 ? 1.0 : 2.0;
    }
    check_all_valid(mfi(tp, tp, tp, vol, 14), 50.0);
    check_all_valid(mfi(tp, tp, tp, std::vector<double>(n, 0.0), 14), 50.0);
}

TEST_CASE("ema examples") {
    check_all_valid(ema(std::vector<double>(10, 4.5), 0.3), 4.5);
    const std::vector<double> x{1, 5, -2, 7};
    const auto same = ema(x, 1.0);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(same.at(i) == x[i]);
    const auto two = ema(std::vector<double>{0, 10}, 0.5);
    CHECK(two.at(0) == 0.0);
    CHECK(two.at(1) == 5.0);
    CHECK(two.first_valid_index == 0);
}

TEST_CASE("stochastic %K examples") {
    // window of 3: lows 1..3, highs 4..6
    const std::vector<double> high{4, 5, 6, 6}, low{1, 2, 3, 3};
    auto k = stochastic_k(std::vector<double>{2, 3, 6, 1}, high, low, 3);
    CHECK(k.first_valid_index == 2);
    CHECK_FALSE(k.values[1].has_value());
    CHECK(k.at(2) == 100.0);  // close at window high
    k = stochastic_k(std::vector<double>{2, 3, 1, 3.5}, high, low, 3);
    CHECK(k.at(2) == 0.0);    // close at window low
    CHECK(k.at(3) == 37.5);   // lows {2,3,3}, highs {5,6,6}
    k = stochastic_k(std::vector<double>{2, 3, 3.5, 4}, high, low, 3);
    CHECK(k.at(2) == 50.0);   // midway between 1 and 6
    check_all_valid(stochastic_k(std::vector<double>(10, 2.0), std::vector<double>(10, 2.0), std::vector<double>(10, 2.0), 4), 50.0);
}

TEST_CASE("macd examples") {
    const IndicatorConfig cfg;
    const auto flat = macd(std::vector<double>(25, 12.0), cfg);
    check_all_valid(flat.macd, 0.0);
    check_all_valid(flat.signal, 0.0);

    const auto two = macd(std::vector<double>{0, 10}, cfg);
    CHECK(two.macd.at(0) == 0.0);
    CHECK(two.macd.at(1) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(two.signal.at(1) == doctest::Approx(0.15).epsilon(1e-15));

    std::vector<double> step(600, 0.0);
    std::fill(step.begin() + 20, step.end(), 1.0);
    const auto s = macd(step, cfg);
    CHECK(std::abs(s.macd.at(599)) < 1e-6);
    CHECK(std::abs(s.macd.at(25)) > 0.1);
}

TEST_CASE("indicators match naive references on seeded random walks") {
    const IndicatorConfig cfg;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto c = cols(oracle::random_walk(1000, seed));
        CHECK(max_diff(rsi(c.close, 14), oracle::rsi(c.close, 14)) <= 1e-9);
        CHECK(max_diff(mfi(c.high, c.low, c.close, c.volume, 14), oracle::mfi(c.high, c.low, c.close, c.volume, 14)) <= 1e-9);
        CHECK(max_diff(ema(c.close, cfg.ema_alpha()), oracle::ema(c.close, cfg.ema_alpha())) <= 1e-9);
        CHECK(max_diff(stochastic_k(c.close, c.high, c.low, 14), oracle::stoch(c.close, c.high, c.low, 14)) <= 1e-9);

        const auto fast = oracle::ema(c.close, 0.15), slow = oracle::ema(c.close, 0.075);
        oracle::Opt line(c.close.size());
        std::vector<double> raw(c.close.size());
        for (std::size_t i = 0; i < raw.size(); ++i) line[i] = raw[i] = *fast[i] - *slow[i];
        const auto m = macd(c.close, cfg);
        CHECK(max_diff(m.macd, line) <= 1e-9);
        CHECK(max_diff(m.signal, oracle::ema(raw, 0.2)) <= 1e-9);
    }
}

TEST_CASE("bounded oscillators on random input") {
    for (std::uint64_t seed = 10; seed < 20; ++seed) {
        const auto c = cols(oracle::random_walk(300, seed));
        for (const auto& s : {rsi(c.close, 9), mfi(c.high, c.low, c.close, c.volume, 7), stochastic_k(c.close, c.high, c.low, 5)}) {
            for (std::size_t i = s.first_valid_index; i < s.size(); ++i) {
                CHECK(s.at(i) >= 0.0);
                CHECK(s.at(i) <= 100.0);
            }
        }
    }
}

TEST_CASE("window indicators are shift equivariant") {
    const auto full = cols(oracle::random_walk(200, 42));
    const std::size_t w = 17;
    auto tail = [&](const std::vector<double>& v) { return std::vector<double>(v.begin() + w, v.end()); };
    const auto t = Cols{tail(full.open), tail(full.high), tail(full.low), tail(full.close), tail(full.volume)};

    const auto r_full = rsi(full.close, 14), r_tail = rsi(t.close, 14);
    const auto m_full = mfi(full.high, full.low, full.close, full.volume, 14), m_tail = mfi(t.high, t.low, t.close, t.volume, 14);
    const auto k_full = stochastic_k(full.close, full.high, full.low, 14), k_tail = stochastic_k(t.close, t.high, t.low, 14);
    for (std::size_t i = 14; i < t.close.size(); ++i) {
        CHECK(r_full.at(i + w) == r_tail.at(i));
        CHECK(m_full.at(i + w) == m_tail.at(i));
        CHECK(k_full.at(i + w) == k_tail.at(i));
    }
}

TEST_CASE("scale behaviour") {
    const auto c = cols(oracle::random_walk(200, 8));
    const IndicatorConfig cfg;
    for (double s : {2.0, 0.5, 3.7}) {
        auto scaled = [&](const std::vector<double>& v) {
            auto out = v;
            for (auto& x : out) x *= s;
            return out;
        };
        const auto h = scaled(c.high), l = scaled(c.low), cl = scaled(c.close);
        const auto r0 = rsi(c.close, 14), r1 = rsi(cl, 14);
        const auto m0 = mfi(c.high, c.low, c.close, c.volume, 14), m1 = mfi(h, l, cl, c.volume, 14);
        const auto k0 = stochastic_k(c.close, c.high, c.low, 14), k1 = stochastic_k(cl, h, l, 14);
        const auto e0 = ema(c.close, cfg.ema_alpha()), e1 = ema(cl, cfg.ema_alpha());
        const auto d0 = macd(c.close, cfg), d1 = macd(cl, cfg);
        const bool exact = s == 2.0 || s == 0.5;
        for (std::size_t i = 14; i < c.close.size(); ++i) {
            CHECK(std::abs(r0.at(i) - r1.at(i)) <= 1e-9);
            CHECK(std::abs(m0.at(i) - m1.at(i)) <= 1e-9);
            CHECK(std::abs(k0.at(i) - k1.at(i)) <= 1e-9);
            if (exact) {
                CHECK(e1.at(i) == s * e0.at(i));
                CHECK(d1.macd.at(i) == s * d0.macd.at(i));
            } else {
                CHECK(std::abs(e1.at(i) - s * e0.at(i)) <= 1e-9 * std::abs(e1.at(i)));
                CHECK(std::abs(d1.macd.at(i) - s * d0.macd.at(i)) <= 1e-9 * std::max(1.0, std::abs(e1.at(i))));
            }
        }
    }
}

TEST_CASE("indicator input errors") {
    const std::vector<double> short_series(14, 1.0);
    CHECK_THROWS_AS(rsi(short_series, 14), InputError);
    CHECK_THROWS_AS(rsi(std::vector<double>(20, 1.0), 1), InputError);
    CHECK_THROWS_AS(mfi(std::vector<double>(20, 1.0), std::vector<double>(19, 1.0), std::vector<double>(20, 1.0),
                        std::vector<double>(20, 1.0), 14),
                    InputError);
    CHECK_THROWS_AS(mfi(short_series, short_series, short_series, short_series, 14), InputError);
    CHECK_THROWS_AS(ema(std::vector<double>{1.0}, 0.0), InputError);
    CHECK_THROWS_AS(ema(std::vector<double>{1.0}, 1.5), InputError);
    CHECK_THROWS_AS(ema(std::vector<double>{}, 0.5), InputError);
    CHECK_THROWS_AS(stochastic_k(short_series, short_series, short_series, 14), InputError);
    CHECK_THROWS_AS(macd(std::vector<double>{1.0}, IndicatorConfig{}), InputError);
    IndicatorConfig bad;
    bad.macd_fast_alpha = 0.0;
    CHECK_THROWS_AS(bad.validate(), InputError);
}
