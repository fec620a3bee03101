#pragma once

#include <array>
#include <bitset>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace trendlab {

// ---------------------------------------------------------------------------
// Themes
// ---------------------------------------------------------------------------

/// The seven fashion themes. The enumerator order is the canonical report
/// order and is used for every deterministic iteration.
enum class ThemeId : std::uint8_t {
    vintage,
    luxury,
    accessories,
    seasonal,
    sustainability,
    streetwear,
    minimalist,
};

inline constexpr std::size_t kThemeCount = 7;

inline constexpr std::array<ThemeId, kThemeCount> kAllThemes = {
    ThemeId::vintage,     ThemeId::luxury,     ThemeId::accessories,
    ThemeId::seasonal,    ThemeId::sustainability, ThemeId::streetwear,
    ThemeId::minimalist,
};

std::string_view to_string(ThemeId theme);
std::optional<ThemeId> theme_from_string(std::string_view name);

/// Multilabel theme assignment for one record.
using ThemeSet = std::bitset<kThemeCount>;

inline bool has_theme(const ThemeSet& set, ThemeId theme) {
    return set.test(static_cast<std::size_t>(theme));
}
inline void add_theme(ThemeSet& set, ThemeId theme) {
    set.set(static_cast<std::size_t>(theme));
}

// ---------------------------------------------------------------------------
// Sentiment
// ---------------------------------------------------------------------------

/// Pre-computed positive/negative/neutral probabilities for one tweet.
struct SentimentTriple {
    double pos = 0.0;
    double neg = 0.0;
    double neu = 0.0;
};

enum class SentimentCategory : std::uint8_t {
    very_negative,
    negative,
    neutral,
    positive,
    very_positive,
};

inline constexpr std::size_t kCategoryCount = 5;

std::string_view to_string(SentimentCategory category);

/// Three-class collapse used by the text classifier and summary reports.
enum class Polarity : std::uint8_t { negative, neutral, positive };

inline constexpr std::size_t kPolarityCount = 3;

std::string_view to_string(Polarity polarity);

/// Derived sentiment scores under both normalizations.
struct CompoundScores {
    double compound = 0.0;
    double improved = 0.0;
    SentimentCategory category_original = SentimentCategory::neutral;
    SentimentCategory category_improved = SentimentCategory::neutral;
};

// ---------------------------------------------------------------------------
// Records
// ---------------------------------------------------------------------------

/// Week slot in the fixed 104-week calendar (Jan 2022 - Dec 2023).
using WeekIndex = int;
inline constexpr int kWeekCount = 104;

/// One tweet after merging, cleaning, and enrichment by later stages.
struct MergedRecord {
    std::string id;
    std::string raw_text;
    std::string clean_text;
    std::vector<std::string> hashtags;
    SentimentTriple sentiment;
    ThemeSet themes;
    std::optional<WeekIndex> week;
    std::optional<CompoundScores> scores;
};

}  // namespace trendlab
