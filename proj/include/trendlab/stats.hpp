#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace trendlab::stats {

/**
 * Least-squares line fit with inference: slope/intercept, slope standard
 * error, two-sided t-test p-value, and R².
 */
struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
    double t_stat = 0.0;
    double p_value = 1.0;
    double r_squared = 0.0;
    std::size_t n = 0;
};

/// Result of the augmented Dickey-Fuller unit-root test (constant, no trend).
struct AdfResult {
    double statistic = 0.0;
    double p_value = 1.0;
    int used_lag = 0;
    bool is_stationary = false;  ///< p_value < 0.05
};

/// Multiple regression by column-wise normal equations. `ok` is false when
/// X'X is numerically singular (perfectly collinear regressors).
struct MultiOlsFit {
    std::vector<double> coef;
    std::vector<double> se;
    double ssr = 0.0;
    std::size_t n = 0;
    std::size_t k = 0;
    bool ok = false;
};

// ---------------------------------------------------------------------------
// Probability tail functions
// ---------------------------------------------------------------------------

/// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double regularized_incomplete_beta(double x, double a, double b);

/// Upper tail P(T > t) of Student's t with `dof` degrees of freedom.
double t_sf(double t, int dof);

/// Upper tail P(F > f) of the F distribution with (d1, d2) degrees of freedom.
double f_sf(double f, int d1, int d2);

double normal_cdf(double x);
double normal_sf(double x);

/// Standard normal quantile, |error| well below 1e-8 over (0, 1).
double normal_quantile(double p);

// ---------------------------------------------------------------------------
// Regression and unit-root testing
// ---------------------------------------------------------------------------

/// Simple linear regression of y on x. Requires n >= 3 and non-constant x.
OlsFit ols_line(std::span<const double> x, std::span<const double> y);

/// Regression of y on explicit design-matrix columns (no implicit intercept;
/// pass a ones column if wanted).
MultiOlsFit ols_multi(const std::vector<std::vector<double>>& columns,
                      std::span<const double> y);

/// d-th order first difference; output shrinks by d.
std::vector<double> difference(std::span<const double> series, int d);

/// Lag-s (seasonal) difference; output shrinks by s.
std::vector<double> seasonal_difference(std::span<const double> series, int s);

/**
 * Augmented Dickey-Fuller test with a constant and no trend. Lag order is
 * chosen in [0, max_lag] by AIC over a common estimation sample, then the
 * test regression is refit at the chosen lag. P-values come from the
 * MacKinnon response-surface approximation for the constant-only case.
 * A constant series is reported as degenerate-stationary with p = 0.
 */
AdfResult adf_test(std::span<const double> series, int max_lag = 4);

namespace detail {
/// ADF p-value response surface (constant-only case), exposed for tests.
double mackinnon_p(double tau);
}  // namespace detail

}  // namespace trendlab::stats
