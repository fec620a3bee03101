#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "trendlab/rng.hpp"
#include "trendlab/stats.hpp"

namespace stats = trendlab::stats;
using trendlab::Rng;

namespace {

std::vector<double> white_noise(std::uint64_t seed, std::size_t n) {
    Rng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = rng.next_normal();
    return v;
}

std::vector<double> random_walk(std::uint64_t seed, std::size_t n) {
    auto v = white_noise(seed, n);
    std::partial_sum(v.begin(), v.end(), v.begin());
    return v;
}

std::vector<double> ar1(std::uint64_t seed, std::size_t n, double phi) {
    Rng rng(seed);
    std::vector<double> v(n);
    double prev = 0.0;
    for (auto& x : v) {
        prev = phi * prev + rng.next_normal();
        x = prev;
    }
    return v;
}

// Simpson quadrature of P(F(1,1) <= 1) via the substitution x = u^2, which
// turns the integrand into 2 / (pi (1 + u^2)). Independent of the
// incomplete-beta path under test.
double f11_cdf_at_one_by_quadrature() {
    const int n = 20000;  // even
    const double h = 1.0 / n;
    auto g = [](double u) { return 2.0 / (M_PI * (1.0 + u * u)); };
    double acc = g(0.0) + g(1.0);
    for (int i = 1; i < n; ++i) acc += g(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

}  // namespace

TEST_CASE("t_sf at zero is one half") {
    for (int dof : {1, 2, 5, 30, 500}) {
        CHECK(stats::t_sf(0.0, dof) == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("t_sf symmetry identity") {
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const double t = 8.0 * (2.0 * rng.next_double() - 1.0);
        const int dof = 1 + static_cast<int>(rng.next_index(60));
        CHECK(std::fabs(stats::t_sf(t, dof) + stats::t_sf(-t, dof) - 1.0) < 1e-10);
    }
}

TEST_CASE("tail values match high-precision references") {
    // Frozen from an independent arbitrary-precision evaluation.
    CHECK(stats::t_sf(2.0, 10) == doctest::Approx(0.036694017385370188).epsilon(1e-12));
    CHECK(stats::t_sf(1.96, 1000) == doctest::Approx(0.025136592477874357).epsilon(1e-12));
    CHECK(stats::f_sf(3.5, 4, 190) == doctest::Approx(0.0087684206715950005).epsilon(1e-10));
    CHECK(stats::f_sf(2.5, 2, 100) == doctest::Approx(0.087203726972380656).epsilon(1e-10));
}

TEST_CASE("f_sf(1,1,1) equals one half, checked against quadrature") {
    const double oracle = 1.0 - f11_cdf_at_one_by_quadrature();
    CHECK(oracle == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(stats::f_sf(1.0, 1, 1) == doctest::Approx(oracle).epsilon(1e-9));
}

TEST_CASE("normal quantile reference points and round trip") {
    CHECK(stats::normal_quantile(0.975) ==
          doctest::Approx(1.9599639845400545).epsilon(1e-10));
    CHECK(stats::normal_quantile(0.995) ==
          doctest::Approx(2.5758293035489008).epsilon(1e-10));
    CHECK(stats::normal_quantile(0.5) == doctest::Approx(0.0));
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        const double p = 1e-6 + (1.0 - 2e-6) * rng.next_double();
        CHECK(stats::normal_cdf(stats::normal_quantile(p)) ==
              doctest::Approx(p).epsilon(1e-9));
    }
    CHECK_THROWS_AS(stats::normal_quantile(0.0), std::invalid_argument);
    CHECK_THROWS_AS(stats::normal_quantile(1.0), std::invalid_argument);
}

TEST_CASE("ols_line recovers an exact line") {
    std::vector<double> x(10), y(10);
    for (int i = 0; i < 10; ++i) {
        x[i] = i;
        y[i] = 2.0 * i + 1.0;
    }
    const auto fit = stats::ols_line(x, y);
    CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.p_value < 1e-12);
}

TEST_CASE("ols_line on constant y") {
    std::vector<double> x(12), y(12, 3.5);
    for (int i = 0; i < 12; ++i) x[i] = i;
    const auto fit = stats::ols_line(x, y);
    CHECK(fit.slope == doctest::Approx(0.0));
    CHECK(fit.r_squared == doctest::Approx(0.0));
    CHECK(fit.p_value == doctest::Approx(1.0));
}

TEST_CASE("ols_line rejects degenerate input") {
    std::vector<double> constant_x(10, 1.0), y(10);
    for (int i = 0; i < 10; ++i) y[i] = i;
    CHECK_THROWS_AS(stats::ols_line(constant_x, y), std::invalid_argument);
    std::vector<double> tiny = {1.0, 2.0};
    CHECK_THROWS_AS(stats::ols_line(tiny, tiny), std::invalid_argument);
}

TEST_CASE("ols residuals are orthogonal to x and sum to zero") {
    Rng rng(17);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 30 + rng.next_index(100);
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = 3.0 * rng.next_double();
            y[i] = 1.5 * x[i] + rng.next_normal();
        }
        const auto fit = stats::ols_line(x, y);
        double sum_r = 0.0, dot_rx = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = y[i] - fit.intercept - fit.slope * x[i];
            sum_r += r;
            dot_rx += r * x[i];
            scale += std::fabs(y[i]);
        }
        CHECK(std::fabs(sum_r) < 1e-8 * (1.0 + scale));
        CHECK(std::fabs(dot_rx) < 1e-8 * (1.0 + scale));
    }
}

TEST_CASE("ols is equivariant under positive scaling of y") {
    Rng rng(23);
    std::vector<double> x(50), y(50);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = static_cast<double>(i);
        y[i] = 0.3 * x[i] + rng.next_normal();
    }
    const auto base = stats::ols_line(x, y);
    const double c = 7.25;
    std::vector<double> scaled(y);
    for (auto& v : scaled) v *= c;
    const auto fit = stats::ols_line(x, scaled);
    CHECK(fit.slope == doctest::Approx(c * base.slope).epsilon(1e-10));
    CHECK(fit.p_value == doctest::Approx(base.p_value).epsilon(1e-10));
    CHECK(fit.r_squared == doctest::Approx(base.r_squared).epsilon(1e-10));
}

TEST_CASE("ols p-value calibration on white noise") {
    // 1,000 Monte-Carlo trials at n = 104: the false-positive rate at
    // alpha = 0.05 must sit within 5% +- 1.5%.
    std::vector<double> x(104);
    for (int i = 0; i < 104; ++i) x[i] = i;
    int rejections = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto y = white_noise(90000 + seed, 104);
        if (stats::ols_line(x, y).p_value < 0.05) ++rejections;
    }
    CHECK(rejections >= 35);
    CHECK(rejections <= 65);
}

TEST_CASE("ols_multi flags collinear designs") {
    std::vector<double> y = {1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
    std::vector<std::vector<double>> cols(2, std::vector<double>(6, 1.0));
    const auto fit = stats::ols_multi(cols, y);
    CHECK_FALSE(fit.ok);
}

TEST_CASE("ols_multi recovers known coefficients") {
    Rng rng(31);
    const std::size_t n = 200;
    std::vector<std::vector<double>> cols(3, std::vector<double>(n));
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        cols[0][i] = 1.0;
        cols[1][i] = rng.next_normal();
        cols[2][i] = rng.next_normal();
        y[i] = 0.5 + 2.0 * cols[1][i] - 1.25 * cols[2][i] + 0.01 * rng.next_normal();
    }
    const auto fit = stats::ols_multi(cols, y);
    REQUIRE(fit.ok);
    CHECK(fit.coef[0] == doctest::Approx(0.5).epsilon(0.01));
    CHECK(fit.coef[1] == doctest::Approx(2.0).epsilon(0.01));
    CHECK(fit.coef[2] == doctest::Approx(-1.25).epsilon(0.01));
}

TEST_CASE("difference basics") {
    const std::vector<double> s = {1.0, 2.0, 4.0, 7.0};
    CHECK(stats::difference(s, 1) == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(stats::difference(s, 0) == s);
    CHECK(stats::difference(s, 2) == std::vector<double>{1.0, 1.0});
    CHECK_THROWS_AS(stats::difference(s, 4), std::invalid_argument);
}

TEST_CASE("difference undoes cumulative sum") {
    Rng rng(41);
    std::vector<double> s(64);
    for (auto& v : s) v = rng.next_normal();
    std::vector<double> acc(s.size());
    std::partial_sum(s.begin(), s.end(), acc.begin());
    const auto d = stats::difference(acc, 1);
    for (std::size_t i = 0; i < d.size(); ++i) {
        CHECK(d[i] == doctest::Approx(s[i + 1]).epsilon(1e-12));
    }
}

TEST_CASE("mackinnon response surface anchors") {
    // Frozen from the published response-surface tables.
    CHECK(stats::detail::mackinnon_p(-2.86) == doctest::Approx(0.050201).epsilon(1e-4));
    CHECK(stats::detail::mackinnon_p(-3.43) == doctest::Approx(0.0099777).epsilon(1e-4));
    CHECK(stats::detail::mackinnon_p(-1.95) == doctest::Approx(0.308917).epsilon(1e-4));
    CHECK(stats::detail::mackinnon_p(-0.5) == doctest::Approx(0.892016).epsilon(1e-4));
    CHECK(stats::detail::mackinnon_p(3.0) == doctest::Approx(1.0));
    CHECK(stats::detail::mackinnon_p(-20.0) == doctest::Approx(0.0));
}

TEST_CASE("adf classifies white noise as stationary") {
    int stationary = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        if (stats::adf_test(white_noise(1000 + seed, 200)).is_stationary) ++stationary;
    }
    CHECK(stationary >= 45);
}

TEST_CASE("adf classifies random walks as non-stationary") {
    int nonstationary = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        if (!stats::adf_test(random_walk(2000 + seed, 200)).is_stationary) ++nonstationary;
    }
    CHECK(nonstationary >= 45);
}

TEST_CASE("adf constant-series convention") {
    std::vector<double> constant(64, 4.0);
    const auto result = stats::adf_test(constant);
    CHECK(result.is_stationary);
    CHECK(result.p_value == doctest::Approx(0.0));
    CHECK(result.used_lag == 0);
}

TEST_CASE("adf p-value falls as the AR root leaves unity") {
    auto mean_p = [](double phi) {
        double acc = 0.0;
        for (std::uint64_t seed = 0; seed < 30; ++seed) {
            acc += stats::adf_test(ar1(3000 + seed, 200, phi)).p_value;
        }
        return acc / 30.0;
    };
    const double p_far = mean_p(0.5);
    const double p_mid = mean_p(0.9);
    const double p_near = mean_p(0.99);
    CHECK(p_far < p_mid);
    CHECK(p_mid < p_near);
}

TEST_CASE("adf rejects on too-short input") {
    std::vector<double> s(8, 0.0);
    CHECK_THROWS_AS(stats::adf_test(s, 4), std::invalid_argument);
}
