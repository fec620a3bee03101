#include <doctest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "trendlab/arima.hpp"
#include "trendlab/rng.hpp"

namespace arima = trendlab::arima;
using trendlab::Rng;

namespace {

std::vector<double> white_noise(std::uint64_t seed, std::size_t n, double mu = 0.0,
                                double sd = 1.0) {
    Rng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = mu + sd * rng.next_normal();
    return v;
}

std::vector<double> simulate_ar1(std::uint64_t seed, std::size_t n, double phi,
                                 double mu = 0.0) {
    Rng rng(seed);
    std::vector<double> v(n);
    double prev = mu;
    for (auto& x : v) {
        prev = mu + phi * (prev - mu) + rng.next_normal();
        x = prev;
    }
    return v;
}

/// MA(1) with the plus-sign convention: z_t = mu + e_t + theta e_{t-1}.
std::vector<double> simulate_ma1(std::uint64_t seed, std::size_t n, double theta,
                                 double mu = 0.0) {
    Rng rng(seed);
    std::vector<double> v(n);
    double prev_eps = 0.0;
    for (auto& x : v) {
        const double eps = rng.next_normal();
        x = mu + eps + theta * prev_eps;
        prev_eps = eps;
    }
    return v;
}

std::vector<double> simulate_ar2(std::uint64_t seed, std::size_t n, double phi1,
                                 double phi2) {
    Rng rng(seed);
    std::vector<double> v(n + 50);
    double a = 0.0, b = 0.0;
    for (auto& x : v) {
        const double value = phi1 * a + phi2 * b + rng.next_normal();
        b = a;
        a = value;
        x = value;
    }
    return {v.begin() + 50, v.end()};
}

arima::ArimaSpec spec_of(int p, int d, int q) {
    arima::ArimaSpec spec;
    spec.p = p;
    spec.d = d;
    spec.q = q;
    return spec;
}

}  // namespace

TEST_CASE("schur-cohn stationarity check") {
    CHECK(arima::detail::ar_polynomial_is_stationary(std::vector<double>{}));
    CHECK(arima::detail::ar_polynomial_is_stationary(std::vector<double>{0.5}));
    CHECK(arima::detail::ar_polynomial_is_stationary(std::vector<double>{-0.9}));
    CHECK_FALSE(arima::detail::ar_polynomial_is_stationary(std::vector<double>{1.0}));
    CHECK_FALSE(arima::detail::ar_polynomial_is_stationary(std::vector<double>{1.2}));
    CHECK(arima::detail::ar_polynomial_is_stationary(std::vector<double>{0.5, 0.3}));
    CHECK_FALSE(arima::detail::ar_polynomial_is_stationary(std::vector<double>{0.9, 0.3}));
    // Coefficient at zero is a root at the origin, which is fine.
    CHECK(arima::detail::ar_polynomial_is_stationary(std::vector<double>{0.5, 0.0}));
}

TEST_CASE("psi weights for simple models") {
    const auto ar1 = arima::detail::psi_weights(std::vector<double>{0.5},
                                                std::vector<double>{}, 5);
    CHECK(ar1[0] == doctest::Approx(1.0));
    CHECK(ar1[1] == doctest::Approx(0.5));
    CHECK(ar1[2] == doctest::Approx(0.25));
    CHECK(ar1[4] == doctest::Approx(0.0625));

    const auto ma1 = arima::detail::psi_weights(std::vector<double>{},
                                                std::vector<double>{0.4}, 4);
    CHECK(ma1[1] == doctest::Approx(0.4));
    CHECK(ma1[2] == doctest::Approx(0.0));

    const auto arma = arima::detail::psi_weights(std::vector<double>{0.5},
                                                 std::vector<double>{0.4}, 3);
    CHECK(arma[1] == doctest::Approx(0.9));  // phi + theta
    CHECK(arma[2] == doctest::Approx(0.45));
}

TEST_CASE("white-noise fit recovers mean and variance") {
    const auto y = white_noise(42, 400, 2.5, 1.5);
    const auto fit = arima::fit_arima(y, spec_of(0, 0, 0));
    CHECK(fit.converged);
    const double sample_mean = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
    double sample_var = 0.0;
    for (double v : y) sample_var += (v - sample_mean) * (v - sample_mean);
    sample_var /= y.size();
    CHECK(fit.mean == doctest::Approx(sample_mean).epsilon(1e-4));
    CHECK(fit.sigma2 == doctest::Approx(sample_var).epsilon(0.10));
}

TEST_CASE("ar(1) coefficient recovery") {
    const auto y = simulate_ar1(7, 300, 0.7);
    const auto fit = arima::fit_arima(y, spec_of(1, 0, 0));
    CHECK(fit.converged);
    REQUIRE(fit.ar.size() == 1);
    CHECK(std::fabs(fit.ar[0] - 0.7) < 0.1);
    CHECK(fit.ar_stationary);
    // One-step residual variance matches sigma2 by construction; both must
    // be near the innovation variance 1.
    CHECK(fit.sigma2 == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("ma(1) coefficient recovery") {
    const auto y = simulate_ma1(11, 300, 0.5);
    const auto fit = arima::fit_arima(y, spec_of(0, 0, 1));
    CHECK(fit.converged);
    REQUIRE(fit.ma.size() == 1);
    CHECK(std::fabs(fit.ma[0] - 0.5) < 0.12);
}

TEST_CASE("fit rejects too-short series") {
    const auto y = white_noise(1, 20);
    CHECK_THROWS_AS(arima::fit_arima(y, spec_of(3, 0, 3)), std::invalid_argument);
}

TEST_CASE("grid search finds a parsimonious AR model") {
    const auto y = simulate_ar2(13, 300, 0.5, 0.2);
    const auto best = arima::grid_search(y, false);
    CHECK(best.spec.d == 0);
    CHECK(best.spec.p >= 1);
    CHECK(best.spec.p <= 3);
    const auto truth = arima::fit_arima(y, spec_of(2, 0, 0));
    CHECK(best.aic <= truth.aic + 2.0);
}

TEST_CASE("select_d flags trending series for differencing") {
    Rng rng(17);
    std::vector<double> y(104);
    for (std::size_t t = 0; t < y.size(); ++t) {
        y[t] = 0.8 * static_cast<double>(t) + 2.0 * rng.next_normal();
    }
    CHECK(arima::select_d(y) >= 1);
}

TEST_CASE("constant series falls back to white noise and a flat forecast") {
    std::vector<double> y(104, 6.0);
    const auto fit = arima::grid_search(y, false);
    CHECK(fit.spec.p == 0);
    CHECK(fit.spec.d == 0);
    CHECK(fit.spec.q == 0);
    const auto fc = arima::forecast(fit, y);
    for (double m : fc.mean) CHECK(m == doctest::Approx(6.0).epsilon(1e-8));
}

TEST_CASE("white-noise forecast is flat with constant bands") {
    const auto y = white_noise(19, 300, 4.0, 2.0);
    const auto fit = arima::fit_arima(y, spec_of(0, 0, 0));
    const auto fc = arima::forecast(fit, y);
    const double half_width = fc.upper95[0] - fc.mean[0];
    CHECK(half_width == doctest::Approx(1.96 * std::sqrt(fit.sigma2)).epsilon(1e-3));
    for (int h = 0; h < arima::Forecast::kHorizon; ++h) {
        CHECK(fc.mean[h] == doctest::Approx(fit.mean).epsilon(1e-9));
        CHECK(fc.upper95[h] - fc.mean[h] == doctest::Approx(half_width).epsilon(1e-9));
    }
}

TEST_CASE("ar(1) forecast matches the closed form") {
    const auto y = simulate_ar1(23, 300, 0.6, 10.0);
    const auto fit = arima::fit_arima(y, spec_of(1, 0, 0));
    REQUIRE(fit.converged);
    const auto fc = arima::forecast(fit, y);
    const double phi = fit.ar[0];
    const double mu = fit.mean;
    const double last = y.back();
    for (int h = 1; h <= arima::Forecast::kHorizon; ++h) {
        const double expected = mu + std::pow(phi, h) * (last - mu);
        CHECK(fc.mean[h - 1] == doctest::Approx(expected).epsilon(1e-9));
    }
    // Bands widen toward the stationary limit.
    for (int h = 1; h < arima::Forecast::kHorizon; ++h) {
        CHECK(fc.upper95[h] - fc.lower95[h] >=
              fc.upper95[h - 1] - fc.lower95[h - 1] - 1e-12);
    }
}

TEST_CASE("integrated forecasts follow the trend with widening bands") {
    Rng rng(29);
    std::vector<double> y(200);
    for (std::size_t t = 0; t < y.size(); ++t) {
        y[t] = 0.5 * static_cast<double>(t) + rng.next_normal();
    }
    arima::ArimaSpec spec = spec_of(0, 1, 0);
    const auto fit = arima::fit_arima(y, spec);
    const auto fc = arima::forecast(fit, y);
    CHECK(fc.mean[11] > fc.mean[0]);  // mean path keeps climbing
    for (int h = 1; h < arima::Forecast::kHorizon; ++h) {
        CHECK(fc.upper95[h] - fc.lower95[h] >
              fc.upper95[h - 1] - fc.lower95[h - 1]);
    }
}

TEST_CASE("aic prefers the true model over an over-parameterized one") {
    double mean_gap = 0.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto y = simulate_ar1(500 + seed, 300, 0.6);
        const auto truth = arima::fit_arima(y, spec_of(1, 0, 0));
        const auto big = arima::fit_arima(y, spec_of(3, 0, 2));
        mean_gap += truth.aic - big.aic;
    }
    mean_gap /= 20.0;
    // Over-parameterized models pay 2 per extra coefficient on average.
    CHECK(mean_gap <= 2.0 * 4.0);
}

TEST_CASE("interval coverage on ar(1) continuations") {
    const double phi = 0.6;
    const auto y = simulate_ar1(31, 300, phi);
    const auto fit = arima::fit_arima(y, spec_of(1, 0, 0));
    REQUIRE(fit.converged);
    const auto fc = arima::forecast(fit, y);

    int inside = 0, total = 0;
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        Rng rng(7000 + seed);
        double prev = y.back();
        for (int h = 0; h < arima::Forecast::kHorizon; ++h) {
            prev = phi * prev + rng.next_normal();
            inside += (prev >= fc.lower95[h] && prev <= fc.upper95[h]);
            ++total;
        }
    }
    const double coverage = static_cast<double>(inside) / total;
    CHECK(coverage > 0.88);
    CHECK(coverage < 1.0);
}

TEST_CASE("normalize_to_peak") {
    const std::vector<double> history = {10.0, 50.0, 30.0};
    const std::vector<double> fc = {10.0, 20.0};
    CHECK(arima::normalize_to_peak(history, fc) == std::vector<double>{20.0, 40.0});
    const std::vector<double> at_peak = {50.0};
    CHECK(arima::normalize_to_peak(history, at_peak)[0] == doctest::Approx(100.0));

    // Scale invariance.
    std::vector<double> h2 = history, f2 = fc;
    for (auto& v : h2) v *= 3.5;
    for (auto& v : f2) v *= 3.5;
    const auto a = arima::normalize_to_peak(history, fc);
    const auto b = arima::normalize_to_peak(h2, f2);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]));

    const std::vector<double> zeros(5, 0.0);
    CHECK_THROWS_AS(arima::normalize_to_peak(zeros, fc), std::invalid_argument);
}

TEST_CASE("seasonal grid search runs and beats nothing seasonal on seasonal data") {
    // Strong 13-period seasonal signal plus noise.
    Rng rng(37);
    std::vector<double> y(104);
    for (std::size_t t = 0; t < y.size(); ++t) {
        y[t] = 20.0 + 8.0 * std::sin(2.0 * M_PI * static_cast<double>(t) / 13.0) +
               rng.next_normal();
    }
    const auto fit = arima::grid_search(y, true, 2);
    CHECK(fit.spec.seasonal);
    CHECK(fit.converged);
    const auto fc = arima::forecast(fit, y);
    for (double m : fc.mean) CHECK(std::isfinite(m));

    // The forecast should continue the 13-week cycle: compare against the
    // true noiseless continuation.
    std::vector<double> est(fc.mean.begin(), fc.mean.end());
    std::vector<double> truth(est.size());
    for (std::size_t h = 0; h < truth.size(); ++h) {
        const double t = static_cast<double>(y.size() + h);
        truth[h] = 20.0 + 8.0 * std::sin(2.0 * M_PI * t / 13.0);
    }
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < est.size(); ++i) {
        ma += est[i];
        mb += truth[i];
    }
    ma /= est.size();
    mb /= truth.size();
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < est.size(); ++i) {
        sab += (est[i] - ma) * (truth[i] - mb);
        saa += (est[i] - ma) * (est[i] - ma);
        sbb += (truth[i] - mb) * (truth[i] - mb);
    }
    CHECK(sab / std::sqrt(saa * sbb) > 0.8);
}
