#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "swarm_lssvm/error.hpp"
#include "swarm_lssvm/lssvm.hpp"
#include "swarm_lssvm/rng.hpp"

using namespace swarm_lssvm;

namespace {

Matrix column(std::initializer_list<double> xs) {
    Matrix m(static_cast<Eigen::Index>(xs.size()), 1);
    Eigen::Index i = 0;
    for (double x : xs) m(i++, 0) = x;
    return m;
}

Vector vec(std::initializer_list<double> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

double eval(const KernelSpec& k, std::vector<double> x, std::vector<double> z) { return kernel_eval(k, x, z); }

} // namespace

TEST_CASE("kernel_eval examples") {
    CHECK(eval(RbfKernel{0.37}, {1.5, -2.0}, {1.5, -2.0}) == 1.0);
    CHECK(eval(LinearKernel{}, {1, 2}, {3, 4}) == 11.0);
    CHECK(eval(PolynomialKernel{2, 1.0}, {1}, {1}) == 4.0);
    CHECK(eval(MlpKernel{1.0, 0.0}, {0}, {5}) == 0.0);
}

TEST_CASE("kernel_eval rejects bad input") {
    CHECK_THROWS_AS(eval(LinearKernel{}, {1, 2}, {1}), InputError);
    CHECK_THROWS_AS(eval(LinearKernel{}, {NAN}, {1}), InputError);
    CHECK_THROWS_AS(eval(RbfKernel{0.0}, {1}, {1}), InputError);
    CHECK_THROWS_AS(eval(PolynomialKernel{0, 1.0}, {1}, {1}), InputError);
    CHECK_THROWS_AS(eval(PolynomialKernel{2, -1.0}, {1}, {1}), InputError);
}

TEST_CASE("kernel symmetry on random vectors") {
    Rng rng(11);
    const KernelSpec kernels[] = {LinearKernel{}, PolynomialKernel{3, 2.5}, RbfKernel{0.7}};
    for (int t = 0; t < 200; ++t) {
        std::vector<double> x(4), z(4);
        for (auto& v : x) v = rng.uniform(-3, 3);
        for (auto& v : z) v = rng.uniform(-3, 3);
        for (const auto& k : kernels) {
            CHECK(kernel_eval(k, x, z) == kernel_eval(k, z, x));
        }
    }
}

TEST_CASE("kernel spec JSON round trip") {
    const KernelSpec specs[] = {LinearKernel{}, PolynomialKernel{3, 0.1}, RbfKernel{0.1 + 0.2}, MlpKernel{-0.3, 1e-17}};
    for (const auto& s : specs) {
        CHECK(kernel_from_json(nlohmann::json::parse(kernel_to_json(s).dump())) == s);
    }
}

TEST_CASE("gram_matrix examples") {
    const auto lin = gram_matrix(LinearKernel{}, column({1, 2}));
    CHECK(lin(0, 0) == 1.0);
    CHECK(lin(0, 1) == 2.0);
    CHECK(lin(1, 0) == 2.0);
    CHECK(lin(1, 1) == 4.0);

    const auto rbf = gram_matrix(RbfKernel{1.0}, column({0, 1}));
    CHECK(rbf(0, 0) == 1.0);
    CHECK(rbf(1, 1) == 1.0);
    CHECK(rbf(0, 1) == doctest::Approx(0.36787944117144233).epsilon(1e-15));
    CHECK(rbf(0, 1) == rbf(1, 0));
}

TEST_CASE("rbf gram matrices are positive semidefinite") {
    Rng rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(19));
        Matrix x(n, 3);
        for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform(-2, 2);
        const double sigma2 = std::pow(10.0, rng.uniform(-1, 1));
        const auto k = gram_matrix(RbfKernel{sigma2}, x);
        CHECK(k == k.transpose());
        oracle::Mat copy(n, oracle::Vec(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) copy[i][j] = k(i, j);
        for (double ev : oracle::jacobi_eigenvalues(copy)) {
            CHECK(ev >= -1e-10 * n);
        }
    }
}

TEST_CASE("train: single point gives a = 0, b = y") {
    for (const KernelSpec& k : {KernelSpec{LinearKernel{}}, KernelSpec{RbfKernel{3.0}}, KernelSpec{MlpKernel{0.5, 0.1}}}) {
        const auto model = train(TrainingSet{column({2.5}), vec({7.25})}, k, 3.0);
        CHECK(model.alphas()(0) == doctest::Approx(0.0));
        CHECK(model.bias() == doctest::Approx(7.25));
        CHECK(predict(model, std::vector<double>{-100.0}) == doctest::Approx(7.25));
        CHECK(predict(model, std::vector<double>{3.0}) == doctest::Approx(7.25));
    }
}

TEST_CASE("train: two-point linear model against the explicit inverse") {
    const auto model = train(TrainingSet{column({0, 1}), vec({0, 1})}, LinearKernel{}, 100.0);
    const auto [b, a] = oracle::dual_solve(oracle::Kind::Linear, 0.0, {{0.0}, {1.0}}, {0.0, 1.0}, 100.0);

    // hand solution: a2 = 1/1.02, a1 = -a2, b = 0.01·a2
    CHECK(a[1] == doctest::Approx(1.0 / 1.02).epsilon(1e-14));
    CHECK(model.alphas()(0) == doctest::Approx(-0.98039215686274506).epsilon(1e-12));
    CHECK(model.alphas()(1) == doctest::Approx(0.98039215686274506).epsilon(1e-12));
    CHECK(model.bias() == doctest::Approx(0.0098039215686274508).epsilon(1e-12));
    CHECK(std::abs(model.alphas()(0) - a[0]) < 1e-12);
    CHECK(std::abs(model.bias() - b) < 1e-12);
    CHECK(dual_residual(model, vec({0, 1})) < 1e-12);

    // 0.51·a2 = 0.51/1.02
    CHECK(predict(model, std::vector<double>{0.5}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(model.lambda() * model.reg_c() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("train: constant targets are reproduced") {
    Rng rng(3);
    Matrix x(6, 2);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform(-1, 1);
    const Vector y = Vector::Constant(6, 4.2);
    for (const KernelSpec& k : {KernelSpec{LinearKernel{}}, KernelSpec{RbfKernel{0.5}}, KernelSpec{PolynomialKernel{2, 1.0}}}) {
        const auto model = train(TrainingSet{x, y}, k, 10.0);
        const auto pred = predict(model, x);
        for (Eigen::Index i = 0; i < 6; ++i) CHECK(std::abs(pred(i) - 4.2) <= 1e-6 * 4.2);
    }
}

TEST_CASE("train: near interpolation for large C") {
    Rng rng(99);
    Matrix x(5, 1);
    Vector y(5);
    for (int i = 0; i < 5; ++i) {
        x(i, 0) = rng.uniform(-3, 3);
        y(i) = rng.uniform(-1, 1);
    }
    const auto model = train(TrainingSet{x, y}, RbfKernel{1.0}, 1e6);
    const auto pred = predict(model, x);
    for (int i = 0; i < 5; ++i) CHECK(std::abs(pred(i) - y(i)) <= 1e-3);
}

TEST_CASE("train: oracle equivalence, zero-sum alphas and residual on random problems") {
    Rng rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(8));
        const int p = 1 + static_cast<int>(rng.below(3));
        Matrix x(n, p);
        Vector y(n);
        oracle::Mat xs(n, oracle::Vec(p));
        oracle::Vec ys(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < p; ++j) xs[i][j] = x(i, j) = rng.uniform(-2, 2);
            ys[i] = y(i) = rng.uniform(-5, 5);
        }
        const double c = std::pow(10.0, rng.uniform(-1, 3));
        const double sigma2 = std::pow(10.0, rng.uniform(-1, 1));
        const bool use_rbf = trial % 2 == 0;
        const KernelSpec spec = use_rbf ? KernelSpec{RbfKernel{sigma2}} : KernelSpec{LinearKernel{}};
        const auto model = train(TrainingSet{x, y}, spec, c);
        const auto [b, a] = oracle::dual_solve(use_rbf ? oracle::Kind::Rbf : oracle::Kind::Linear, sigma2, xs, ys, c);

        double diff = std::abs(model.bias() - b);
        for (int i = 0; i < n; ++i) diff = std::max(diff, std::abs(model.alphas()(i) - a[i]));
        // entries rounded once each; the solve amplifies that by the condition number
        CHECK(diff <= 1e-10 * std::max(1.0, model.alphas().cwiseAbs().maxCoeff()));
        const double amax = model.alphas().cwiseAbs().maxCoeff();
        CHECK(std::abs(model.alphas().sum()) <= 1e-8 * n * std::max(amax, 1e-300));
        CHECK(dual_residual(model, y) <= 1e-8 * std::max(1.0, y.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("train: training MSE does not increase with C") {
    Rng rng(8);
    Matrix x(40, 1);
    Vector y(40);
    for (int i = 0; i < 40; ++i) {
        x(i, 0) = rng.uniform(-3, 3);
        y(i) = std::sin(x(i, 0)) + 0.3 * (rng.uniform() - 0.5);
    }
    double previous = std::numeric_limits<double>::infinity();
    for (double c : {0.1, 1.0, 10.0, 100.0}) {
        const auto model = train(TrainingSet{x, y}, RbfKernel{1.0}, c);
        const double train_mse = (predict(model, x) - y).squaredNorm() / 40.0;
        CHECK(train_mse <= previous);
        previous = train_mse;
    }
}

TEST_CASE("train: error paths") {
    const TrainingSet ok{column({0, 1}), vec({0, 1})};
    CHECK_THROWS_AS(train(ok, RbfKernel{1.0}, 0.0), InputError);
    CHECK_THROWS_AS(train(ok, RbfKernel{1.0}, -1.0), InputError);
    CHECK_THROWS_AS(train(TrainingSet{column({0, 1}), vec({0})}, RbfKernel{1.0}, 1.0), InputError);
    CHECK_THROWS_AS(train(TrainingSet{column({0, NAN}), vec({0, 1})}, RbfKernel{1.0}, 1.0), InputError);

    // duplicated rows with a vanishing ridge make the system singular
    Matrix dup(3, 1);
    dup << 1.0, 1.0, 1.0;
    try {
        train(TrainingSet{dup, vec({1, 2, 3})}, LinearKernel{}, 1e300);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(e.condition_estimate() > kMaxConditionEstimate);
    }

    const auto model = train(ok, LinearKernel{}, 1.0);
    CHECK_THROWS_AS(predict(model, std::vector<double>{1.0, 2.0}), InputError);
}

TEST_CASE("model serialization") {
    const auto single = train(TrainingSet{column({2.5}), vec({7.25})}, RbfKernel{0.3}, 3.0);
    CHECK(parse_model(serialize_model(single)) == single);

    const auto two = train(TrainingSet{column({0, 1}), vec({0, 1})}, LinearKernel{}, 100.0)
                         .with_metadata({"x"}, Standardizer{{0.1}, {1.0 / 3.0}});
    const auto text = serialize_model(two);
    const auto doc = nlohmann::json::parse(text);
    CHECK(doc.at("alphas").size() == 2);
    CHECK(doc.at("format_version") == 1);
    const auto back = parse_model(text);
    CHECK(back == two);
    CHECK(back.alphas()(0) == two.alphas()(0));
    CHECK(back.scaler()->stds[0] == 1.0 / 3.0);

    auto missing = doc;
    missing.erase("bias");
    try {
        parse_model(missing.dump());
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("bias") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_model("{not json"), ParseError);
    auto bad_alphas = doc;
    bad_alphas["alphas"] = {1.0};
    CHECK_THROWS_AS(parse_model(bad_alphas.dump()), ParseError);
}

TEST_CASE("model serialization round-trips random models bit-exactly") {
    Rng rng(77);
    for (int t = 0; t < 20; ++t) {
        const int n = 1 + static_cast<int>(rng.below(10));
        Matrix x(n, 2);
        Vector y(n);
        for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform(-1e3, 1e3) * rng.uniform();
        for (int i = 0; i < n; ++i) y(i) = rng.uniform(-10, 10);
        const auto m = train(TrainingSet{x, y}, RbfKernel{std::pow(10.0, rng.uniform(1, 4))}, rng.uniform(0.1, 100));
        CHECK(parse_model(serialize_model(m)) == m);
    }
}
