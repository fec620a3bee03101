#pragma once

#include <cstddef>
#include <string_view>

#include "trendlab/chronos.hpp"
#include "trendlab/types.hpp"

namespace trendlab::trends {

enum class Direction {
    strongly_rising,
    moderately_rising,
    slightly_rising,
    stable,
    slightly_falling,
    moderately_falling,
    strongly_falling,
};

enum class Confidence { high, medium, low };

std::string_view to_string(Direction direction);
std::string_view to_string(Confidence confidence);

struct ClassifyOptions {
    double alpha = 0.05;        ///< significance threshold
    double high_conf_p = 0.005; ///< below this, confidence is high
    double strong_r2 = 0.5;
    double moderate_r2 = 0.3;
    /// Themes with fewer than `small_sample_threshold` records have their
    /// confidence downgraded one level when this is enabled.
    bool small_sample_downgrade = true;
    std::size_t small_sample_threshold = 300;
};

struct TrendReport {
    ThemeId theme = ThemeId::vintage;
    double slope = 0.0;  ///< mentions per week
    double p_value = 1.0;
    double r_squared = 0.0;
    Direction direction = Direction::stable;
    bool significant = false;
    Confidence confidence = Confidence::low;
    std::size_t record_count = 0;
};

/// Rubric core: direction from (sign of slope, significance, R-squared band).
Direction direction_of(double slope, bool significant, double r_squared,
                       const ClassifyOptions& options = {});

/// Rubric core: confidence from the p-value, optionally downgraded for
/// small themes.
Confidence confidence_of(double p_value, std::size_t record_count,
                         const ClassifyOptions& options = {});

/// OLS of weekly counts against the week index, classified by the rubric.
/// Requires at least 20 weeks with a nonzero count.
TrendReport classify_trend(const chronos::ThemeSeries& series,
                           const ClassifyOptions& options = {});

}  // namespace trendlab::trends
