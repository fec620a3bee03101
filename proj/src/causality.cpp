#include "trendlab/causality.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "trendlab/parallel.hpp"
#include "trendlab/stats.hpp"

namespace trendlab::causality {

std::string_view to_string(Strength strength) {
    switch (strength) {
        case Strength::very_strong: return "very_strong";
        case Strength::strong: return "strong";
        case Strength::moderate: return "moderate";
        case Strength::weak: return "weak";
        case Strength::none: return "none";
    }
    return "?";
}

double granger_p(std::span<const double> x, std::span<const double> y, int lag) {
    if (lag < 1) throw std::invalid_argument("granger_p: lag must be >= 1");
    if (x.size() != y.size()) throw std::invalid_argument("granger_p: length mismatch");
    const std::size_t n = y.size();
    const std::size_t rows = n > static_cast<std::size_t>(lag)
                                 ? n - static_cast<std::size_t>(lag)
                                 : 0;
    const int dof = static_cast<int>(rows) - 2 * lag - 1;
    if (dof < 10) throw std::invalid_argument("granger_p: series too short for lag");

    std::vector<double> target(rows);
    std::vector<std::vector<double>> restricted(1 + lag, std::vector<double>(rows));
    std::vector<std::vector<double>> unrestricted(1 + 2 * lag, std::vector<double>(rows));
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t t = r + static_cast<std::size_t>(lag);
        target[r] = y[t];
        restricted[0][r] = 1.0;
        unrestricted[0][r] = 1.0;
        for (int j = 1; j <= lag; ++j) {
            const double y_lag = y[t - static_cast<std::size_t>(j)];
            const double x_lag = x[t - static_cast<std::size_t>(j)];
            restricted[static_cast<std::size_t>(j)][r] = y_lag;
            unrestricted[static_cast<std::size_t>(j)][r] = y_lag;
            unrestricted[static_cast<std::size_t>(lag + j)][r] = x_lag;
        }
    }

    const auto fit_r = stats::ols_multi(restricted, target);
    const auto fit_u = stats::ols_multi(unrestricted, target);
    if (!fit_r.ok || !fit_u.ok || fit_u.ssr <= 0.0) {
        return 1.0;  // collinear convention
    }
    const double numerator = std::max(0.0, fit_r.ssr - fit_u.ssr) / lag;
    const double denominator = fit_u.ssr / dof;
    const double f = numerator / denominator;
    return stats::f_sf(f, lag, dof);
}

Strength classify_strength(double min_p, std::size_t significant_lag_count,
                           double alpha) {
    if (significant_lag_count == 0) return Strength::none;
    if (significant_lag_count == 1) return Strength::weak;
    if (min_p < 0.001) return Strength::very_strong;
    if (min_p < alpha) return Strength::strong;
    return Strength::weak;  // unreachable when min_p is among significant lags
}

CausalEdge classify_edge(ThemeId source, ThemeId target,
                         std::span<const double> source_series,
                         std::span<const double> target_series, double alpha) {
    CausalEdge edge;
    edge.source = source;
    edge.target = target;
    for (int lag = 1; lag <= kMaxLag; ++lag) {
        const double p = granger_p(source_series, target_series, lag);
        edge.p_by_lag[static_cast<std::size_t>(lag - 1)] = p;
        edge.min_p = std::min(edge.min_p, p);
        if (p < alpha) edge.significant_lags.push_back(lag);
    }
    edge.strength = classify_strength(edge.min_p, edge.significant_lags.size(), alpha);
    return edge;
}

CausalNetwork build_network(
    const std::vector<std::pair<ThemeId, std::vector<double>>>& series, double alpha,
    unsigned jobs) {
    if (series.size() < 2) {
        throw std::invalid_argument("build_network: need at least 2 themes");
    }
    std::size_t common = std::numeric_limits<std::size_t>::max();
    for (const auto& [theme, values] : series) common = std::min(common, values.size());

    CausalNetwork network;
    for (const auto& [theme, values] : series) network.nodes.push_back(theme);

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < series.size(); ++i) {
        for (std::size_t j = 0; j < series.size(); ++j) {
            if (i != j) pairs.emplace_back(i, j);
        }
    }
    std::vector<CausalEdge> all(pairs.size());
    parallel_for(pairs.size(), jobs, [&](std::size_t k) {
        const auto [i, j] = pairs[k];
        const auto& sx = series[i].second;
        const auto& sy = series[j].second;
        // Align differenced series by trimming the front.
        const std::span<const double> x(sx.data() + (sx.size() - common), common);
        const std::span<const double> y(sy.data() + (sy.size() - common), common);
        all[k] = classify_edge(series[i].first, series[j].first, x, y, alpha);
    });

    for (const auto& edge : all) {
        if (edge.strength != Strength::none) network.edges.push_back(edge);
    }
    for (const auto& edge : network.edges) {
        const bool reverse_present =
            std::any_of(network.edges.begin(), network.edges.end(), [&](const CausalEdge& e) {
                return e.source == edge.target && e.target == edge.source;
            });
        if (reverse_present && static_cast<int>(edge.source) < static_cast<int>(edge.target)) {
            network.bidirectional_pairs.emplace_back(edge.source, edge.target);
        }
    }
    return network;
}

std::string export_dot(const CausalNetwork& network) {
    std::ostringstream out;
    out << "digraph fashion_causality {\n";
    out << "  rankdir=LR;\n";
    for (ThemeId theme : network.nodes) {
        out << "  \"" << to_string(theme) << "\";\n";
    }
    std::vector<CausalEdge> edges = network.edges;
    std::sort(edges.begin(), edges.end(), [](const CausalEdge& a, const CausalEdge& b) {
        if (a.source != b.source) return static_cast<int>(a.source) < static_cast<int>(b.source);
        return static_cast<int>(a.target) < static_cast<int>(b.target);
    });
    for (const auto& edge : edges) {
        const double width = std::min(6.0, -std::log10(std::max(edge.min_p, 1e-300)));
        char attr[96];
        std::snprintf(attr, sizeof(attr), " [penwidth=%.2f, label=\"%s\"]", width,
                      std::string(to_string(edge.strength)).c_str());
        out << "  \"" << to_string(edge.source) << "\" -> \"" << to_string(edge.target)
            << "\"" << attr << ";\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace trendlab::causality
