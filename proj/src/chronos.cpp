#include "trendlab/chronos.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "trendlab/rng.hpp"

namespace trendlab::chronos {

namespace {

/// Days since 1970-01-01 for a civil date (Howard Hinnant's algorithm).
long days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2) / 5 +
                         static_cast<unsigned>(d) - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long>(doe) - 719468;
}

struct Civil {
    int year;
    int month;
    int day;
};

Civil civil_from_days(long z) {
    z += 719468;
    const long era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const long y = static_cast<long>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return {static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

// Monday of 2022-W01.
const long kCalendarBase = days_from_civil(2022, 1, 3);

void check_week(WeekIndex week) {
    if (week < 0 || week >= kWeekCount) {
        throw std::out_of_range("week index outside [0, 104)");
    }
}

}  // namespace

std::string week_start_date(WeekIndex week) {
    check_week(week);
    const Civil c = civil_from_days(kCalendarBase + 7L * week);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", c.year, c.month, c.day);
    return buf;
}

std::pair<int, int> week_iso_label(WeekIndex week) {
    check_week(week);
    return {week < 52 ? 2022 : 2023, week % 52 + 1};
}

std::optional<WeekIndex> week_of_date(int year, int month, int day) {
    const long offset = days_from_civil(year, month, day) - kCalendarBase;
    if (offset < 0 || offset >= 7L * kWeekCount) return std::nullopt;
    return static_cast<WeekIndex>(offset / 7);
}

CalendarWeights uniform_weights() {
    CalendarWeights w;
    w.weight.fill(1.0);
    return w;
}

CalendarWeights default_fashion_weights() {
    CalendarWeights w;
    for (WeekIndex week = 0; week < kWeekCount; ++week) {
        const Civil thursday = civil_from_days(kCalendarBase + 7L * week + 3);
        double value = 1.0;
        if (thursday.month == 2 || thursday.month == 3 || thursday.month == 9 ||
            thursday.month == 10) {
            value = 1.8;  // fashion weeks
        } else if (thursday.month == 12 || (thursday.month == 11 && thursday.day >= 22)) {
            value = 1.5;  // holiday season
        }
        w.weight[static_cast<std::size_t>(week)] = value;
    }
    return w;
}

void assign_synthetic_timestamps(std::vector<MergedRecord>& records,
                                 const CalendarWeights& weights, std::uint64_t seed) {
    std::vector<double> cumulative(kWeekCount);
    double acc = 0.0;
    for (std::size_t i = 0; i < kWeekCount; ++i) {
        if (!(weights.weight[i] > 0.0)) {
            throw std::invalid_argument("calendar weights must be positive");
        }
        acc += weights.weight[i];
        cumulative[i] = acc;
    }
    Rng rng(seed);
    for (auto& record : records) {
        record.week = static_cast<WeekIndex>(rng.next_categorical(cumulative));
    }
}

std::vector<double> ThemeSeries::counts_as_doubles() const {
    return std::vector<double>(counts.begin(), counts.end());
}

ThemeSeries build_weekly_series(std::span<const MergedRecord> records, ThemeId theme,
                                sentiment::Rubric rubric) {
    ThemeSeries series;
    series.theme = theme;
    std::array<double, kWeekCount> sums{};
    for (const auto& record : records) {
        if (!record.week || !has_theme(record.themes, theme)) continue;
        const auto w = static_cast<std::size_t>(*record.week);
        const CompoundScores scores =
            record.scores ? *record.scores : sentiment::score(record.sentiment);
        ++series.counts[w];
        sums[w] += rubric == sentiment::Rubric::improved ? scores.improved : scores.compound;
    }
    for (std::size_t w = 0; w < kWeekCount; ++w) {
        if (series.counts[w] > 0) {
            series.mean_sentiment[w] = sums[w] / static_cast<double>(series.counts[w]);
        }
    }
    return series;
}

Decomposition decompose_additive(std::span<const double> values, int period) {
    const std::size_t n = values.size();
    if (period < 2) throw std::invalid_argument("decompose_additive: period must be >= 2");
    if (n < 2 * static_cast<std::size_t>(period)) {
        throw std::invalid_argument("decompose_additive: need at least two periods of data");
    }

    Decomposition out;
    out.period = period;
    out.trend.assign(n, std::nullopt);
    out.seasonal.assign(n, 0.0);
    out.residual.assign(n, std::nullopt);

    // Centered moving average; an even period gets half weights at the ends.
    const std::size_t half = static_cast<std::size_t>(period) / 2;
    const bool even = period % 2 == 0;
    for (std::size_t t = half; t + half < n; ++t) {
        double acc = 0.0;
        if (even) {
            acc += 0.5 * values[t - half] + 0.5 * values[t + half];
            for (std::size_t j = t - half + 1; j < t + half; ++j) acc += values[j];
        } else {
            for (std::size_t j = t - half; j <= t + half; ++j) acc += values[j];
        }
        out.trend[t] = acc / period;
    }

    // Seasonal means over detrended values, then de-meaned so one period
    // sums to zero.
    std::vector<double> season_sum(static_cast<std::size_t>(period), 0.0);
    std::vector<std::size_t> season_count(static_cast<std::size_t>(period), 0);
    for (std::size_t t = 0; t < n; ++t) {
        if (!out.trend[t]) continue;
        const std::size_t k = t % static_cast<std::size_t>(period);
        season_sum[k] += values[t] - *out.trend[t];
        ++season_count[k];
    }
    std::vector<double> seasonal(static_cast<std::size_t>(period), 0.0);
    for (std::size_t k = 0; k < seasonal.size(); ++k) {
        if (season_count[k] > 0) seasonal[k] = season_sum[k] / season_count[k];
    }
    double mean = 0.0;
    for (double s : seasonal) mean += s;
    mean /= period;
    for (double& s : seasonal) s -= mean;

    for (std::size_t t = 0; t < n; ++t) {
        out.seasonal[t] = seasonal[t % static_cast<std::size_t>(period)];
        if (out.trend[t]) {
            out.residual[t] = values[t] - *out.trend[t] - out.seasonal[t];
        }
    }
    return out;
}

}  // namespace trendlab::chronos
