#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "trendlab/types.hpp"

namespace trendlab::causality {

inline constexpr int kMaxLag = 4;

/// Strength rubric over (min p, number of significant lags). "Moderate" is
/// indistinguishable from "strong" given those inputs and is never emitted.
enum class Strength { very_strong, strong, moderate, weak, none };

std::string_view to_string(Strength strength);

/**
 * Granger F-test p-value for "x helps predict y" at the given lag, on
 * stationarized series of equal length. Perfectly collinear regressors are
 * reported with the p = 1 convention.
 */
double granger_p(std::span<const double> x, std::span<const double> y, int lag);

Strength classify_strength(double min_p, std::size_t significant_lag_count,
                           double alpha = 0.05);

struct CausalEdge {
    ThemeId source = ThemeId::vintage;
    ThemeId target = ThemeId::vintage;
    std::array<double, kMaxLag> p_by_lag{};  // index i holds lag i+1
    std::vector<int> significant_lags;
    double min_p = 1.0;
    Strength strength = Strength::none;
};

/// Test lags 1..4 of source -> target and classify the edge.
CausalEdge classify_edge(ThemeId source, ThemeId target,
                         std::span<const double> source_series,
                         std::span<const double> target_series, double alpha = 0.05);

struct CausalNetwork {
    std::vector<ThemeId> nodes;
    std::vector<CausalEdge> edges;  ///< strength != none, deterministic order
    std::vector<std::pair<ThemeId, ThemeId>> bidirectional_pairs;
};

/// All ordered pairs of the given stationarized per-theme series. Series are
/// aligned to a common length by trimming the front. Needs >= 2 themes.
CausalNetwork build_network(
    const std::vector<std::pair<ThemeId, std::vector<double>>>& series,
    double alpha = 0.05, unsigned jobs = 1);

/// Graphviz rendering with pen width proportional to -log10(min p), capped.
std::string export_dot(const CausalNetwork& network);

}  // namespace trendlab::causality
