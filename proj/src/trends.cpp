#include "trendlab/trends.hpp"

#include <numeric>
#include <stdexcept>
#include <vector>

#include "trendlab/stats.hpp"

namespace trendlab::trends {

std::string_view to_string(Direction direction) {
    switch (direction) {
        case Direction::strongly_rising: return "Strongly Rising";
        case Direction::moderately_rising: return "Moderately Rising";
        case Direction::slightly_rising: return "Slightly Rising";
        case Direction::stable: return "Stable (No Clear Trend)";
        case Direction::slightly_falling: return "Slightly Falling";
        case Direction::moderately_falling: return "Moderately Falling";
        case Direction::strongly_falling: return "Strongly Falling";
    }
    return "?";
}

std::string_view to_string(Confidence confidence) {
    switch (confidence) {
        case Confidence::high: return "High";
        case Confidence::medium: return "Medium";
        case Confidence::low: return "Low";
    }
    return "?";
}

Direction direction_of(double slope, bool significant, double r_squared,
                       const ClassifyOptions& options) {
    if (!significant) return Direction::stable;
    if (slope > 0.0) {
        if (r_squared >= options.strong_r2) return Direction::strongly_rising;
        if (r_squared >= options.moderate_r2) return Direction::moderately_rising;
        return Direction::slightly_rising;
    }
    if (r_squared >= options.strong_r2) return Direction::strongly_falling;
    if (r_squared >= options.moderate_r2) return Direction::moderately_falling;
    return Direction::slightly_falling;
}

Confidence confidence_of(double p_value, std::size_t record_count,
                         const ClassifyOptions& options) {
    Confidence level = Confidence::low;
    if (p_value < options.high_conf_p) {
        level = Confidence::high;
    } else if (p_value < options.alpha) {
        level = Confidence::medium;
    }
    if (options.small_sample_downgrade && record_count < options.small_sample_threshold) {
        if (level == Confidence::high) {
            level = Confidence::medium;
        } else {
            level = Confidence::low;
        }
    }
    return level;
}

TrendReport classify_trend(const chronos::ThemeSeries& series,
                           const ClassifyOptions& options) {
    std::size_t active_weeks = 0;
    for (auto c : series.counts) active_weeks += c > 0;
    if (active_weeks < 20) {
        throw std::invalid_argument("classify_trend: fewer than 20 non-degenerate weeks");
    }

    std::vector<double> x(kWeekCount), y = series.counts_as_doubles();
    for (std::size_t w = 0; w < kWeekCount; ++w) x[w] = static_cast<double>(w);
    const stats::OlsFit fit = stats::ols_line(x, y);

    TrendReport report;
    report.theme = series.theme;
    report.slope = fit.slope;
    report.p_value = fit.p_value;
    report.r_squared = fit.r_squared;
    report.significant = fit.p_value < options.alpha;
    report.direction = direction_of(fit.slope, report.significant, fit.r_squared, options);
    report.record_count = static_cast<std::size_t>(
        std::accumulate(series.counts.begin(), series.counts.end(), std::int64_t{0}));
    report.confidence = confidence_of(fit.p_value, report.record_count, options);
    return report;
}

}  // namespace trendlab::trends
