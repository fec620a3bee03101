#include "trendlab/arima.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <stdexcept>

#include "trendlab/parallel.hpp"
#include "trendlab/simd/kernels.hpp"
#include "trendlab/stats.hpp"

namespace trendlab::arima {

namespace {

constexpr double kHuge = 1e100;
constexpr double kZ975 = 1.959963984540054;

/// Polynomial product, coefficients in ascending order.
std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

/// 1 - c_1 B - ... form for an AR factor (length order+1, possibly sparse).
std::vector<double> ar_factor(std::span<const double> coeffs, int lag_step) {
    std::vector<double> poly(static_cast<std::size_t>(coeffs.size()) * lag_step + 1, 0.0);
    poly[0] = 1.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        poly[(i + 1) * static_cast<std::size_t>(lag_step)] = -coeffs[i];
    }
    return poly;
}

/// 1 + c_1 B + ... form for an MA factor.
std::vector<double> ma_factor(std::span<const double> coeffs, int lag_step) {
    std::vector<double> poly(static_cast<std::size_t>(coeffs.size()) * lag_step + 1, 0.0);
    poly[0] = 1.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        poly[(i + 1) * static_cast<std::size_t>(lag_step)] = coeffs[i];
    }
    return poly;
}

/// Lag weights a_i such that poly(B) = 1 - sum a_i B^i.
std::vector<double> ar_weights(const std::vector<double>& poly) {
    std::vector<double> w(poly.size() - 1);
    for (std::size_t i = 1; i < poly.size(); ++i) w[i - 1] = -poly[i];
    return w;
}

/// Lag weights b_j such that poly(B) = 1 + sum b_j B^j.
std::vector<double> ma_weights(const std::vector<double>& poly) {
    std::vector<double> w(poly.size() - 1);
    for (std::size_t i = 1; i < poly.size(); ++i) w[i - 1] = poly[i];
    return w;
}

struct Parameterization {
    const ArimaSpec& spec;

    int dims() const { return spec.param_count(); }

    void unpack(std::span<const double> x, ArimaFit& fit) const {
        std::size_t at = 0;
        fit.mean = x[at++];
        fit.ar.assign(x.begin() + at, x.begin() + at + spec.p);
        at += spec.p;
        fit.ma.assign(x.begin() + at, x.begin() + at + spec.q);
        at += spec.q;
        if (spec.seasonal) {
            fit.sar.assign(x.begin() + at, x.begin() + at + spec.P);
            at += spec.P;
            fit.sma.assign(x.begin() + at, x.begin() + at + spec.Q);
        }
    }
};

/// Differenced series z plus each intermediate level, outermost first
/// (levels[0] is the original series).
struct DifferencedLevels {
    std::vector<std::vector<double>> levels;
    std::vector<int> lags;  // lag used to produce levels[k+1] from levels[k]

    const std::vector<double>& innermost() const { return levels.back(); }
};

DifferencedLevels build_levels(std::span<const double> series, const ArimaSpec& spec) {
    DifferencedLevels out;
    out.levels.emplace_back(series.begin(), series.end());
    for (int i = 0; i < spec.d; ++i) {
        out.levels.push_back(stats::difference(out.levels.back(), 1));
        out.lags.push_back(1);
    }
    if (spec.seasonal) {
        for (int i = 0; i < spec.D; ++i) {
            out.levels.push_back(stats::seasonal_difference(out.levels.back(), spec.s));
            out.lags.push_back(spec.s);
        }
    }
    return out;
}

/// CSS residuals of the ARMA recursion on the differenced series. Returns
/// false when the recursion blows up (explosive trial parameters).
bool css_residuals(const std::vector<double>& z, double mean,
                   const std::vector<double>& ar_w, const std::vector<double>& ma_w,
                   std::vector<double>& eps, std::size_t& start) {
    const std::size_t n = z.size();
    const std::size_t pa = ar_w.size();
    start = pa;
    eps.assign(n, 0.0);
    for (std::size_t t = pa; t < n; ++t) {
        double value = z[t] - mean;
        for (std::size_t i = 0; i < pa; ++i) value -= ar_w[i] * (z[t - 1 - i] - mean);
        // Pre-sample innovations are zero (conditional convention).
        for (std::size_t j = 0; j < ma_w.size() && j + 1 <= t; ++j) {
            value -= ma_w[j] * eps[t - j - 1];
        }
        if (!std::isfinite(value) || std::fabs(value) > 1e150) return false;
        eps[t] = value;
    }
    return true;
}

struct Objective {
    const std::vector<double>& z;
    const ArimaSpec& spec;
    const Parameterization& params;

    double operator()(std::span<const double> x) const {
        ArimaFit trial;
        trial.spec = spec;
        params.unpack(x, trial);
        const auto ar_w = ar_weights(poly_mul(ar_factor(trial.ar, 1),
                                              ar_factor(trial.sar, spec.s)));
        const auto ma_w = ma_weights(poly_mul(ma_factor(trial.ma, 1),
                                              ma_factor(trial.sma, spec.s)));
        std::vector<double> eps;
        std::size_t start = 0;
        if (!css_residuals(z, trial.mean, ar_w, ma_w, eps, start)) return kHuge;
        const double ssr =
            simd::sumsq(std::span<const double>(eps).subspan(start));
        return std::isfinite(ssr) ? ssr : kHuge;
    }
};

struct SimplexResult {
    std::vector<double> best;
    double value = kHuge;
    bool converged = false;
};

/// Nelder-Mead with standard coefficients; deterministic given the start.
SimplexResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                          std::vector<double> x0, const std::vector<double>& steps,
                          double tol, int max_iter) {
    const std::size_t dim = x0.size();
    std::vector<std::vector<double>> pts(dim + 1, x0);
    for (std::size_t i = 0; i < dim; ++i) pts[i + 1][i] += steps[i];
    std::vector<double> vals(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) vals[i] = f(pts[i]);

    std::vector<std::size_t> order(dim + 1);
    auto sort_order = [&] {
        for (std::size_t i = 0; i <= dim; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    };

    SimplexResult result;
    for (int iter = 0; iter < max_iter; ++iter) {
        sort_order();
        const std::size_t best = order[0], worst = order[dim];
        if (std::fabs(vals[worst] - vals[best]) <=
            tol * (1.0 + std::fabs(vals[best]))) {
            result.converged = true;
            break;
        }
        // Centroid of all but the worst point.
        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t k = 0; k < dim; ++k) centroid[k] += pts[i][k];
        }
        for (auto& c : centroid) c /= static_cast<double>(dim);

        auto blend = [&](double coef) {
            std::vector<double> p(dim);
            for (std::size_t k = 0; k < dim; ++k) {
                p[k] = centroid[k] + coef * (pts[worst][k] - centroid[k]);
            }
            return p;
        };

        auto reflected = blend(-1.0);
        const double fr = f(reflected);
        if (fr < vals[order[0]]) {
            auto expanded = blend(-2.0);
            const double fe = f(expanded);
            if (fe < fr) {
                pts[worst] = std::move(expanded);
                vals[worst] = fe;
            } else {
                pts[worst] = std::move(reflected);
                vals[worst] = fr;
            }
        } else if (fr < vals[order[dim - 1]]) {
            pts[worst] = std::move(reflected);
            vals[worst] = fr;
        } else {
            auto contracted = blend(fr < vals[worst] ? -0.5 : 0.5);
            const double fc = f(contracted);
            if (fc < std::min(fr, vals[worst])) {
                pts[worst] = std::move(contracted);
                vals[worst] = fc;
            } else {
                // Shrink toward the best point.
                for (std::size_t i = 0; i <= dim; ++i) {
                    if (i == best) continue;
                    for (std::size_t k = 0; k < dim; ++k) {
                        pts[i][k] = pts[best][k] + 0.5 * (pts[i][k] - pts[best][k]);
                    }
                    vals[i] = f(pts[i]);
                }
            }
        }
    }
    sort_order();
    result.best = pts[order[0]];
    result.value = vals[order[0]];
    return result;
}

}  // namespace

std::string ArimaSpec::label() const {
    char buf[64];
    if (seasonal) {
        std::snprintf(buf, sizeof(buf), "SARIMA(%d,%d,%d)(%d,%d,%d,%d)", p, d, q, P, D, Q, s);
    } else {
        std::snprintf(buf, sizeof(buf), "ARIMA(%d,%d,%d)", p, d, q);
    }
    return buf;
}

namespace detail {

bool ar_polynomial_is_stationary(std::span<const double> ar_coeffs) {
    // pi(z) = 1 - sum a_i z^i has roots outside the unit circle iff the
    // reversed polynomial has all roots inside; test by Schur-Cohn
    // reduction.
    std::vector<double> c(ar_coeffs.size() + 1);
    c[0] = 1.0;
    for (std::size_t i = 0; i < ar_coeffs.size(); ++i) c[i + 1] = -ar_coeffs[i];
    std::reverse(c.begin(), c.end());  // now c[0] + c[1] z + ... + c[n] z^n

    // Roots at zero (vanishing low-order coefficients) are inside the disk.
    while (c.size() > 1 && std::fabs(c.front()) < 1e-14) c.erase(c.begin());

    while (c.size() > 1) {
        const double a0 = c.front();
        const double an = c.back();
        if (std::fabs(a0) >= std::fabs(an)) return false;
        const std::size_t n = c.size() - 1;
        std::vector<double> next(n);
        for (std::size_t k = 0; k < n; ++k) {
            next[k] = an * c[k + 1] - a0 * c[n - 1 - k];
        }
        double scale = 0.0;
        for (double v : next) scale = std::max(scale, std::fabs(v));
        if (scale > 0.0) {
            for (double& v : next) v /= scale;
        }
        while (next.size() > 1 && std::fabs(next.front()) < 1e-14) next.erase(next.begin());
        c = std::move(next);
    }
    return true;
}

std::vector<double> psi_weights(std::span<const double> ar_full,
                                std::span<const double> ma_full, int count) {
    std::vector<double> psi(static_cast<std::size_t>(count), 0.0);
    if (count == 0) return psi;
    psi[0] = 1.0;
    for (int h = 1; h < count; ++h) {
        double value = h <= static_cast<int>(ma_full.size()) ? ma_full[h - 1] : 0.0;
        const int reach = std::min<int>(h, static_cast<int>(ar_full.size()));
        for (int i = 1; i <= reach; ++i) value += ar_full[i - 1] * psi[h - i];
        psi[static_cast<std::size_t>(h)] = value;
    }
    return psi;
}

}  // namespace detail

ArimaFit fit_arima(std::span<const double> series, const ArimaSpec& spec) {
    const DifferencedLevels levels = build_levels(series, spec);
    const std::vector<double>& z = levels.innermost();
    const Parameterization params{spec};
    const int k = params.dims();
    if (z.size() < static_cast<std::size_t>(5 * k)) {
        throw std::invalid_argument("fit_arima: differenced series shorter than 5x "
                                    "the parameter count for " + spec.label());
    }

    const double z_mean = simd::sum(z) / static_cast<double>(z.size());
    std::vector<double> x0(static_cast<std::size_t>(k), 0.0);
    x0[0] = z_mean;
    std::vector<double> steps(static_cast<std::size_t>(k), 0.1);
    steps[0] = 0.1 * std::fabs(z_mean) + 0.1;

    const Objective objective{z, spec, params};
    auto run = [&objective](std::vector<double> start, const std::vector<double>& st) {
        return nelder_mead([&objective](std::span<const double> x) { return objective(x); },
                           std::move(start), st, 1e-8, 2000);
    };

    SimplexResult best = run(x0, steps);
    if (!best.converged) {
        // One deterministic restart from a perturbed start.
        std::vector<double> restart = best.best;
        for (auto& v : restart) v += 0.05;
        SimplexResult second = run(std::move(restart), steps);
        if (second.value < best.value) best = std::move(second);
    }

    ArimaFit fit;
    fit.spec = spec;
    params.unpack(best.best, fit);
    fit.converged = best.converged;

    const auto ar_w =
        ar_weights(poly_mul(ar_factor(fit.ar, 1), ar_factor(fit.sar, spec.s)));
    const auto ma_w =
        ma_weights(poly_mul(ma_factor(fit.ma, 1), ma_factor(fit.sma, spec.s)));
    std::vector<double> eps;
    std::size_t start = 0;
    if (!css_residuals(z, fit.mean, ar_w, ma_w, eps, start)) {
        fit.converged = false;
        fit.ar_stationary = false;
        fit.aic = fit.bic = kHuge;
        return fit;
    }
    fit.n_effective = z.size() - start;
    const double ssr = simd::sumsq(std::span<const double>(eps).subspan(start));
    fit.sigma2 = ssr / static_cast<double>(fit.n_effective);
    const double sigma2_safe = std::max(fit.sigma2, 1e-12);
    const double n_eff = static_cast<double>(fit.n_effective);
    fit.log_likelihood = -0.5 * n_eff * (std::log(2.0 * M_PI * sigma2_safe) + 1.0);
    const double k_total = static_cast<double>(k) + 1.0;  // + innovation variance
    fit.aic = 2.0 * k_total - 2.0 * fit.log_likelihood;
    fit.bic = std::log(n_eff) * k_total - 2.0 * fit.log_likelihood;
    fit.ar_stationary = detail::ar_polynomial_is_stationary(ar_w);
    return fit;
}

int select_d(std::span<const double> series, int max_d) {
    for (int d = 0; d <= max_d; ++d) {
        const auto z = stats::difference(series, d);
        if (stats::adf_test(z).is_stationary) return d;
    }
    return max_d;
}

ArimaFit grid_search(std::span<const double> series, bool seasonal_theme, unsigned jobs) {
    const int d = select_d(series);

    std::vector<ArimaSpec> cells;
    for (int p = 0; p <= 3; ++p) {
        for (int q = 0; q <= 3; ++q) {
            if (!seasonal_theme) {
                ArimaSpec spec;
                spec.p = p;
                spec.d = d;
                spec.q = q;
                cells.push_back(spec);
                continue;
            }
            for (int P = 0; P <= 1; ++P) {
                for (int D = 0; D <= 1; ++D) {
                    for (int Q = 0; Q <= 1; ++Q) {
                        ArimaSpec spec;
                        spec.p = p;
                        spec.d = d;
                        spec.q = q;
                        spec.seasonal = true;
                        spec.P = P;
                        spec.D = D;
                        spec.Q = Q;
                        cells.push_back(spec);
                    }
                }
            }
        }
    }

    const double n = static_cast<double>(series.size());
    std::vector<ArimaFit> fits(cells.size());
    std::vector<char> usable(cells.size(), 0);
    parallel_for(cells.size(), jobs, [&](std::size_t i) {
        if (cells[i].param_count() >= n / 4.0) return;
        try {
            fits[i] = fit_arima(series, cells[i]);
            usable[i] = 1;
        } catch (const std::invalid_argument&) {
            // Cell not estimable on this series length; skip.
        }
    });

    // Deterministic argmin in cell order: AIC, then BIC, then fewer
    // parameters (spec order breaks exact ties by first win).
    const ArimaFit* best = nullptr;
    for (std::size_t i = 0; i < fits.size(); ++i) {
        if (!usable[i]) continue;
        const ArimaFit& fit = fits[i];
        if (!fit.converged || !fit.ar_stationary) continue;
        if (best == nullptr || fit.aic < best->aic ||
            (fit.aic == best->aic && fit.bic < best->bic) ||
            (fit.aic == best->aic && fit.bic == best->bic &&
             fit.spec.param_count() < best->spec.param_count())) {
            best = &fit;
        }
    }
    if (best != nullptr) return *best;

    ArimaSpec fallback;
    fallback.d = d;
    fallback.seasonal = seasonal_theme;
    return fit_arima(series, fallback);
}

Forecast forecast(const ArimaFit& fit, std::span<const double> history) {
    const ArimaSpec& spec = fit.spec;
    const DifferencedLevels levels = build_levels(history, spec);
    const std::vector<double>& z = levels.innermost();

    const auto ar_w =
        ar_weights(poly_mul(ar_factor(fit.ar, 1), ar_factor(fit.sar, spec.s)));
    const auto ma_w =
        ma_weights(poly_mul(ma_factor(fit.ma, 1), ma_factor(fit.sma, spec.s)));

    std::vector<double> eps;
    std::size_t start = 0;
    if (!css_residuals(z, fit.mean, ar_w, ma_w, eps, start)) {
        throw std::runtime_error("forecast: residual recursion diverged for " +
                                 spec.label());
    }

    // Mean path on the differenced scale: future innovations are zero.
    const std::size_t n = z.size();
    std::vector<double> centered(n + Forecast::kHorizon);
    for (std::size_t t = 0; t < n; ++t) centered[t] = z[t] - fit.mean;
    std::vector<double> eps_ext = eps;
    eps_ext.resize(n + Forecast::kHorizon, 0.0);
    for (int h = 0; h < Forecast::kHorizon; ++h) {
        const std::size_t t = n + static_cast<std::size_t>(h);
        double value = 0.0;
        for (std::size_t i = 0; i < ar_w.size() && i < t; ++i) {
            value += ar_w[i] * centered[t - 1 - i];
        }
        for (std::size_t j = 0; j < ma_w.size() && j < t; ++j) {
            value += ma_w[j] * eps_ext[t - 1 - j];
        }
        centered[t] = value;
    }
    std::vector<double> level_forecast(Forecast::kHorizon);
    for (int h = 0; h < Forecast::kHorizon; ++h) {
        level_forecast[static_cast<std::size_t>(h)] =
            centered[n + static_cast<std::size_t>(h)] + fit.mean;
    }

    // Integrate back through the differencing levels, innermost-first.
    for (std::size_t k = levels.lags.size(); k > 0; --k) {
        const int lag = levels.lags[k - 1];
        std::vector<double> base = levels.levels[k - 1];
        for (double& value : level_forecast) {
            value += base[base.size() - static_cast<std::size_t>(lag)];
            base.push_back(value);
        }
    }

    // Forecast-error variance from the psi-weights of the full integrated
    // AR side.
    std::vector<double> full_poly = poly_mul(ar_factor(fit.ar, 1), ar_factor(fit.sar, spec.s));
    const std::vector<double> unit_diff = {1.0, -1.0};
    for (int i = 0; i < spec.d; ++i) full_poly = poly_mul(full_poly, unit_diff);
    if (spec.seasonal && spec.D > 0) {
        std::vector<double> seasonal_diff(static_cast<std::size_t>(spec.s) + 1, 0.0);
        seasonal_diff[0] = 1.0;
        seasonal_diff[static_cast<std::size_t>(spec.s)] = -1.0;
        for (int i = 0; i < spec.D; ++i) full_poly = poly_mul(full_poly, seasonal_diff);
    }
    const auto psi = detail::psi_weights(ar_weights(full_poly), ma_w, Forecast::kHorizon);

    Forecast out;
    double var = 0.0;
    for (int h = 0; h < Forecast::kHorizon; ++h) {
        var += psi[static_cast<std::size_t>(h)] * psi[static_cast<std::size_t>(h)];
        const double band = kZ975 * std::sqrt(std::max(0.0, fit.sigma2 * var));
        out.mean[static_cast<std::size_t>(h)] = level_forecast[static_cast<std::size_t>(h)];
        out.lower95[static_cast<std::size_t>(h)] = level_forecast[static_cast<std::size_t>(h)] - band;
        out.upper95[static_cast<std::size_t>(h)] = level_forecast[static_cast<std::size_t>(h)] + band;
    }
    return out;
}

std::vector<double> normalize_to_peak(std::span<const double> history,
                                      std::span<const double> values) {
    double peak = 0.0;
    for (double v : history) peak = std::max(peak, v);
    if (!(peak > 0.0)) {
        throw std::invalid_argument("normalize_to_peak: history peak must be positive");
    }
    std::vector<double> out(values.begin(), values.end());
    for (double& v : out) v = 100.0 * v / peak;
    return out;
}

}  // namespace trendlab::arima
