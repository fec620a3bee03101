#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "trendlab/sentiment.hpp"
#include "trendlab/types.hpp"

namespace trendlab::chronos {

// The synthetic calendar is the 104 ISO weeks 2022-W01 through 2023-W52,
// i.e. Mondays from 2022-01-03 to 2023-12-25.

/// ISO Monday of a week slot, as "YYYY-MM-DD".
std::string week_start_date(WeekIndex week);

/// (ISO year, ISO week number) of a week slot.
std::pair<int, int> week_iso_label(WeekIndex week);

/// Week slot containing a civil date, if it falls inside the calendar.
std::optional<WeekIndex> week_of_date(int year, int month, int day);

/// Sampling weight per week slot; all weights strictly positive.
struct CalendarWeights {
    std::array<double, kWeekCount> weight{};
};

CalendarWeights uniform_weights();

/// Base weight 1.0; 1.8 in fashion-week months (Feb-Mar, Sep-Oct); 1.5 from
/// the last week of November through December. A week's month is the month
/// of its Thursday.
CalendarWeights default_fashion_weights();

/// Draw each record's week independently from the categorical distribution
/// proportional to `weights`, seeded and order-deterministic.
void assign_synthetic_timestamps(std::vector<MergedRecord>& records,
                                 const CalendarWeights& weights, std::uint64_t seed);

/// Weekly mention counts and mean sentiment for one theme.
struct ThemeSeries {
    ThemeId theme = ThemeId::vintage;
    std::array<std::int64_t, kWeekCount> counts{};
    std::array<std::optional<double>, kWeekCount> mean_sentiment{};

    std::vector<double> counts_as_doubles() const;
};

ThemeSeries build_weekly_series(std::span<const MergedRecord> records, ThemeId theme,
                                sentiment::Rubric rubric = sentiment::Rubric::improved);

/// Additive decomposition Y = T + S + R with a centered moving average
/// trend. Trend (and residual) are absent in the half-window edges; the
/// seasonal component is exactly periodic and sums to zero over one period.
struct Decomposition {
    std::vector<std::optional<double>> trend;
    std::vector<double> seasonal;
    std::vector<std::optional<double>> residual;
    int period = 0;
};

Decomposition decompose_additive(std::span<const double> values, int period = 13);

}  // namespace trendlab::chronos
