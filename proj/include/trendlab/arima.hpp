#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "trendlab/types.hpp"

namespace trendlab::arima {

/// Model order. Seasonal terms use period s (13 weeks) when enabled.
struct ArimaSpec {
    int p = 0;
    int d = 0;
    int q = 0;
    bool seasonal = false;
    int P = 0;
    int D = 0;
    int Q = 0;
    int s = 13;

    /// Estimated coefficients including the mean term.
    int param_count() const { return p + q + (seasonal ? P + Q : 0) + 1; }
    std::string label() const;
};

/**
 * Fit of phi(B) PHI(B^s) (z_t - mu) = theta(B) THETA(B^s) eps_t on the
 * differenced series z, by conditional sum of squares. MA polynomials use
 * the plus-sign convention (theta(B) = 1 + theta_1 B + ...).
 */
struct ArimaFit {
    ArimaSpec spec;
    double mean = 0.0;
    std::vector<double> ar;   ///< phi_1..phi_p
    std::vector<double> ma;   ///< theta_1..theta_q
    std::vector<double> sar;  ///< seasonal AR
    std::vector<double> sma;  ///< seasonal MA
    double sigma2 = 0.0;
    double log_likelihood = 0.0;
    double aic = 0.0;
    double bic = 0.0;
    bool converged = false;
    bool ar_stationary = true;  ///< expanded AR polynomial roots outside unit circle
    std::size_t n_effective = 0;
};

struct Forecast {
    static constexpr int kHorizon = 12;
    std::array<double, kHorizon> mean{};
    std::array<double, kHorizon> lower95{};
    std::array<double, kHorizon> upper95{};
};

/// CSS fit via derivative-free simplex search from zero-initialized
/// coefficients (mean starts at the differenced-series mean). Throws when
/// the differenced series is shorter than 5x the parameter count.
ArimaFit fit_arima(std::span<const double> series, const ArimaSpec& spec);

/// Smallest d in [0, max_d] whose d-th difference passes the ADF test at
/// the 5% level; max_d when none does.
int select_d(std::span<const double> series, int max_d = 2);

/**
 * Sweep p, q in 0..3 (and P, D, Q in {0,1} with s = 13 for seasonal themes)
 * at the ADF-selected d. Converged fits with a stationary AR polynomial
 * compete by AIC, then BIC, then fewer parameters, then spec order. Falls
 * back to (0, d, 0) when nothing in the grid converges.
 */
ArimaFit grid_search(std::span<const double> series, bool seasonal_theme,
                     unsigned jobs = 1);

/// 12-step forecast: mean by iterated recursion with future innovations at
/// zero; 95% bands from the psi-weight variance of the integrated process.
Forecast forecast(const ArimaFit& fit, std::span<const double> history);

/// Values as percent of the historical maximum. Throws when the history
/// peak is not positive.
std::vector<double> normalize_to_peak(std::span<const double> history,
                                      std::span<const double> values);

namespace detail {
/// All roots of 1 - a_1 z - ... - a_k z^k outside the unit circle
/// (coefficients given as a_1..a_k). Exposed for tests.
bool ar_polynomial_is_stationary(std::span<const double> ar_coeffs);

/// psi-weights of the ARMA(+integration) representation, for tests.
std::vector<double> psi_weights(std::span<const double> ar_full,
                                std::span<const double> ma_full, int count);
}  // namespace detail

}  // namespace trendlab::arima
