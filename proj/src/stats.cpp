#include "trendlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "trendlab/simd/kernels.hpp"

namespace trendlab::stats {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

/// Continued fraction for the incomplete beta function (modified Lentz).
double incomplete_beta_cf(double x, double a, double b) {
    constexpr double kTiny = 1e-300;
    constexpr double kEps = 1e-15;
    constexpr int kMaxIter = 300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

// MacKinnon response-surface coefficients for the ADF p-value, constant-only
// regression, one I(1) variable. Source: MacKinnon (1994, 2010), as tabulated
// in common econometrics packages. p = Phi(poly(tau)) between the clamps.
constexpr double kTauMax = 2.74;
constexpr double kTauMin = -18.83;
constexpr double kTauStar = -1.61;
constexpr double kSmallP[3] = {2.1659, 1.4412, 0.038269};
constexpr double kLargeP[4] = {1.7339, 0.93202, -0.12745, -0.010368};

/// Cholesky factorization of a symmetric positive-definite matrix stored
/// row-major. Returns false when a pivot collapses (singular system).
bool cholesky(std::vector<double>& m, std::size_t k) {
    for (std::size_t j = 0; j < k; ++j) {
        double diag = m[j * k + j];
        for (std::size_t p = 0; p < j; ++p) diag -= m[j * k + p] * m[j * k + p];
        if (diag <= 1e-12 * std::max(1.0, std::fabs(m[j * k + j]))) return false;
        const double root = std::sqrt(diag);
        m[j * k + j] = root;
        for (std::size_t i = j + 1; i < k; ++i) {
            double v = m[i * k + j];
            for (std::size_t p = 0; p < j; ++p) v -= m[i * k + p] * m[j * k + p];
            m[i * k + j] = v / root;
        }
    }
    return true;
}

/// Solve L L' x = b given the Cholesky factor L (lower triangle of m).
void cholesky_solve(const std::vector<double>& m, std::size_t k,
                    std::vector<double>& b) {
    for (std::size_t i = 0; i < k; ++i) {
        double v = b[i];
        for (std::size_t p = 0; p < i; ++p) v -= m[i * k + p] * b[p];
        b[i] = v / m[i * k + i];
    }
    for (std::size_t ii = k; ii > 0; --ii) {
        const std::size_t i = ii - 1;
        double v = b[i];
        for (std::size_t p = i + 1; p < k; ++p) v -= m[p * k + i] * b[p];
        b[i] = v / m[i * k + i];
    }
}

}  // namespace

namespace detail {

double mackinnon_p(double tau) {
    if (tau > kTauMax) return 1.0;
    if (tau < kTauMin) return 0.0;
    double z;
    if (tau <= kTauStar) {
        z = kSmallP[0] + tau * (kSmallP[1] + tau * kSmallP[2]);
    } else {
        z = kLargeP[0] + tau * (kLargeP[1] + tau * (kLargeP[2] + tau * kLargeP[3]));
    }
    return normal_cdf(z);
}

}  // namespace detail

double regularized_incomplete_beta(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::invalid_argument("incomplete beta requires a, b > 0");
    }
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = a * std::log(x) + b * std::log1p(-x) -
                            (std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * incomplete_beta_cf(x, a, b) / a;
    }
    return 1.0 - front * incomplete_beta_cf(1.0 - x, b, a) / b;
}

double t_sf(double t, int dof) {
    if (dof < 1) throw std::invalid_argument("t_sf requires dof >= 1");
    if (std::isinf(t)) return t > 0 ? 0.0 : 1.0;
    if (t < 0.0) return 1.0 - t_sf(-t, dof);
    const double x = dof / (dof + t * t);
    return 0.5 * regularized_incomplete_beta(x, 0.5 * dof, 0.5);
}

double f_sf(double f, int d1, int d2) {
    if (d1 < 1 || d2 < 1) throw std::invalid_argument("f_sf requires d1, d2 >= 1");
    if (f < 0.0) throw std::invalid_argument("f_sf requires f >= 0");
    if (std::isinf(f)) return 0.0;
    const double x = d2 / (d2 + static_cast<double>(d1) * f);
    return regularized_incomplete_beta(x, 0.5 * d2, 0.5 * d1);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_sf(double x) { return 0.5 * std::erfc(x / kSqrt2); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("normal_quantile requires p in (0,1)");
    }
    // Acklam's rational approximation, then one Halley refinement against
    // erfc; the result is accurate to full double precision.
    static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
    static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double plow = 0.02425;

    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p > 1.0 - plow) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    // Halley step: e = cdf(x) - p, u = e / pdf(x).
    const double e = normal_cdf(x) - p;
    const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    const double u = e / pdf;
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

OlsFit ols_line(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n != y.size()) throw std::invalid_argument("ols_line: length mismatch");
    if (n < 3) throw std::invalid_argument("ols_line: need at least 3 points");

    const double mean_x = simd::sum(x) / static_cast<double>(n);
    const double mean_y = simd::sum(y) / static_cast<double>(n);
    std::vector<double> cx(n), cy(n);
    for (std::size_t i = 0; i < n; ++i) {
        cx[i] = x[i] - mean_x;
        cy[i] = y[i] - mean_y;
    }
    const double sxx = simd::sumsq(cx);
    const double sst = simd::sumsq(cy);
    if (sxx <= 0.0 || sxx <= 1e-24 * static_cast<double>(n)) {
        throw std::invalid_argument("ols_line: constant x has undefined slope");
    }
    const double sxy = simd::dot(cx, cy);

    OlsFit fit;
    fit.n = n;
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;

    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = cy[i] - fit.slope * cx[i];
        ssr += r * r;
    }
    ssr = std::max(ssr, 0.0);
    const int dof = static_cast<int>(n) - 2;
    const double sigma2 = ssr / dof;
    fit.slope_se = std::sqrt(sigma2 / sxx);
    fit.r_squared = sst > 0.0 ? std::clamp(1.0 - ssr / sst, 0.0, 1.0) : 0.0;
    if (fit.slope_se > 0.0) {
        fit.t_stat = fit.slope / fit.slope_se;
        fit.p_value = 2.0 * t_sf(std::fabs(fit.t_stat), dof);
    } else {
        // Zero residual variance: an exact line (p -> 0) or constant y.
        fit.t_stat = fit.slope == 0.0 ? 0.0 : std::numeric_limits<double>::infinity() *
                                                  (fit.slope > 0 ? 1.0 : -1.0);
        fit.p_value = fit.slope == 0.0 ? 1.0 : 0.0;
    }
    fit.p_value = std::clamp(fit.p_value, 0.0, 1.0);
    return fit;
}

MultiOlsFit ols_multi(const std::vector<std::vector<double>>& columns,
                      std::span<const double> y) {
    MultiOlsFit fit;
    const std::size_t k = columns.size();
    const std::size_t n = y.size();
    fit.n = n;
    fit.k = k;
    if (k == 0 || n <= k) return fit;
    for (const auto& col : columns) {
        if (col.size() != n) throw std::invalid_argument("ols_multi: ragged design matrix");
    }

    std::vector<double> gram(k * k);
    std::vector<double> rhs(k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i; j < k; ++j) {
            const double g = simd::dot(columns[i], columns[j]);
            gram[i * k + j] = g;
            gram[j * k + i] = g;
        }
        rhs[i] = simd::dot(columns[i], y);
    }

    std::vector<double> chol = gram;
    if (!cholesky(chol, k)) return fit;  // ok stays false

    fit.coef = rhs;
    cholesky_solve(chol, k, fit.coef);

    std::vector<double> resid(y.begin(), y.end());
    for (std::size_t j = 0; j < k; ++j) {
        const double cj = fit.coef[j];
        const auto& col = columns[j];
        for (std::size_t i = 0; i < n; ++i) resid[i] -= cj * col[i];
    }
    fit.ssr = simd::sumsq(resid);

    const double sigma2 = fit.ssr / static_cast<double>(n - k);
    fit.se.assign(k, 0.0);
    std::vector<double> unit(k);
    for (std::size_t j = 0; j < k; ++j) {
        std::fill(unit.begin(), unit.end(), 0.0);
        unit[j] = 1.0;
        cholesky_solve(chol, k, unit);  // unit = (X'X)^{-1} e_j
        fit.se[j] = std::sqrt(std::max(0.0, sigma2 * unit[j]));
    }
    fit.ok = true;
    return fit;
}

std::vector<double> difference(std::span<const double> series, int d) {
    if (d < 0) throw std::invalid_argument("difference: d must be >= 0");
    if (static_cast<int>(series.size()) <= d) {
        throw std::invalid_argument("difference: series too short");
    }
    std::vector<double> out(series.begin(), series.end());
    for (int round = 0; round < d; ++round) {
        for (std::size_t i = 0; i + 1 < out.size(); ++i) out[i] = out[i + 1] - out[i];
        out.pop_back();
    }
    return out;
}

std::vector<double> seasonal_difference(std::span<const double> series, int s) {
    if (s < 1) throw std::invalid_argument("seasonal_difference: s must be >= 1");
    if (series.size() <= static_cast<std::size_t>(s)) {
        throw std::invalid_argument("seasonal_difference: series too short");
    }
    std::vector<double> out(series.size() - s);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = series[i + s] - series[i];
    return out;
}

AdfResult adf_test(std::span<const double> series, int max_lag) {
    const std::size_t n = series.size();
    if (max_lag < 0) throw std::invalid_argument("adf_test: max_lag must be >= 0");
    if (n < static_cast<std::size_t>(max_lag) + 10) {
        throw std::invalid_argument("adf_test: series too short for requested max_lag");
    }

    const auto [mn, mx] = std::minmax_element(series.begin(), series.end());
    if (*mx - *mn == 0.0) {
        // Constant series: no unit root to test, stationary by convention.
        AdfResult degenerate;
        degenerate.statistic = -std::numeric_limits<double>::infinity();
        degenerate.p_value = 0.0;
        degenerate.used_lag = 0;
        degenerate.is_stationary = true;
        return degenerate;
    }

    std::vector<double> dy(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) dy[i] = series[i + 1] - series[i];
    const std::size_t m = dy.size();

    // Regression rows are dy[t] with regressors [1, y[t], dy[t-1..t-lag]].
    auto build = [&](int lag, std::size_t start, std::vector<std::vector<double>>& cols,
                     std::vector<double>& target) {
        const std::size_t rows = m - start;
        cols.assign(2 + static_cast<std::size_t>(lag), std::vector<double>(rows));
        target.resize(rows);
        for (std::size_t r = 0; r < rows; ++r) {
            const std::size_t t = start + r;
            target[r] = dy[t];
            cols[0][r] = 1.0;
            cols[1][r] = series[t];
            for (int j = 1; j <= lag; ++j) {
                cols[1 + static_cast<std::size_t>(j)][r] = dy[t - static_cast<std::size_t>(j)];
            }
        }
    };

    // Lag order by AIC over the common sample starting at max_lag.
    int best_lag = 0;
    double best_aic = std::numeric_limits<double>::infinity();
    const std::size_t common_start = static_cast<std::size_t>(max_lag);
    for (int lag = 0; lag <= max_lag; ++lag) {
        std::vector<std::vector<double>> cols;
        std::vector<double> target;
        build(lag, common_start, cols, target);
        const MultiOlsFit f = ols_multi(cols, target);
        if (!f.ok || f.ssr <= 0.0) continue;
        const double rows = static_cast<double>(target.size());
        const double aic = rows * std::log(f.ssr / rows) + 2.0 * (lag + 2);
        if (aic < best_aic) {
            best_aic = aic;
            best_lag = lag;
        }
    }

    std::vector<std::vector<double>> cols;
    std::vector<double> target;
    build(best_lag, static_cast<std::size_t>(best_lag), cols, target);
    const MultiOlsFit f = ols_multi(cols, target);

    AdfResult result;
    result.used_lag = best_lag;
    if (!f.ok || f.se[1] <= 0.0) {
        // Collinear regressors on a non-constant series: report as unit root.
        result.statistic = 0.0;
        result.p_value = 1.0;
        result.is_stationary = false;
        return result;
    }
    result.statistic = f.coef[1] / f.se[1];
    result.p_value = detail::mackinnon_p(result.statistic);
    result.is_stationary = result.p_value < 0.05;
    return result;
}

}  // namespace trendlab::stats
