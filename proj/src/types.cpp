#include "trendlab/types.hpp"

namespace trendlab {

std::string_view to_string(ThemeId theme) {
    switch (theme) {
        case ThemeId::vintage: return "vintage";
        case ThemeId::luxury: return "luxury";
        case ThemeId::accessories: return "accessories";
        case ThemeId::seasonal: return "seasonal";
        case ThemeId::sustainability: return "sustainability";
        case ThemeId::streetwear: return "streetwear";
        case ThemeId::minimalist: return "minimalist";
    }
    return "?";
}

std::optional<ThemeId> theme_from_string(std::string_view name) {
    for (ThemeId theme : kAllThemes) {
        if (to_string(theme) == name) return theme;
    }
    return std::nullopt;
}

std::string_view to_string(SentimentCategory category) {
    switch (category) {
        case SentimentCategory::very_negative: return "very_negative";
        case SentimentCategory::negative: return "negative";
        case SentimentCategory::neutral: return "neutral";
        case SentimentCategory::positive: return "positive";
        case SentimentCategory::very_positive: return "very_positive";
    }
    return "?";
}

std::string_view to_string(Polarity polarity) {
    switch (polarity) {
        case Polarity::negative: return "negative";
        case Polarity::neutral: return "neutral";
        case Polarity::positive: return "positive";
    }
    return "?";
}

}  // namespace trendlab
