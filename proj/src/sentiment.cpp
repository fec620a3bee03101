#include "trendlab/sentiment.hpp"

#include <cmath>
#include <stdexcept>

namespace trendlab::sentiment {

double compound(double pos, double neg) {
    return (pos - neg) / (pos + neg + 0.001);
}

double improved_compound(double pos, double neg, double neu) {
    return std::tanh(2.0 * (pos - neg)) * (1.0 - neu * 0.7);
}

SentimentCategory categorize_original(double c) {
    if (c >= 0.5) return SentimentCategory::very_positive;
    if (c >= 0.05) return SentimentCategory::positive;
    if (c > -0.05) return SentimentCategory::neutral;
    if (c > -0.5) return SentimentCategory::negative;
    return SentimentCategory::very_negative;
}

SentimentCategory categorize_improved(double c) {
    if (c >= 0.5) return SentimentCategory::very_positive;
    if (c >= 0.15) return SentimentCategory::positive;
    if (c > -0.15) return SentimentCategory::neutral;
    if (c > -0.5) return SentimentCategory::negative;
    return SentimentCategory::very_negative;
}

Polarity collapse(SentimentCategory category) {
    switch (category) {
        case SentimentCategory::very_negative:
        case SentimentCategory::negative:
            return Polarity::negative;
        case SentimentCategory::neutral:
            return Polarity::neutral;
        case SentimentCategory::positive:
        case SentimentCategory::very_positive:
            return Polarity::positive;
    }
    return Polarity::neutral;
}

CompoundScores score(const SentimentTriple& triple) {
    CompoundScores s;
    s.compound = compound(triple.pos, triple.neg);
    s.improved = improved_compound(triple.pos, triple.neg, triple.neu);
    s.category_original = categorize_original(s.compound);
    s.category_improved = categorize_improved(s.improved);
    return s;
}

void score_records(std::vector<MergedRecord>& records) {
    for (auto& record : records) record.scores = score(record.sentiment);
}

Distribution distribution(std::span<const MergedRecord> records, Rubric rubric) {
    if (records.empty()) {
        throw std::invalid_argument("distribution: empty record list");
    }
    Distribution dist;
    dist.n = records.size();
    std::array<std::size_t, kCategoryCount> counts{};
    for (const auto& record : records) {
        const CompoundScores s = record.scores ? *record.scores : score(record.sentiment);
        const SentimentCategory cat =
            rubric == Rubric::original ? s.category_original : s.category_improved;
        ++counts[static_cast<std::size_t>(cat)];
    }
    for (std::size_t i = 0; i < kCategoryCount; ++i) {
        dist.fractions[i] = static_cast<double>(counts[i]) / static_cast<double>(dist.n);
        const auto polarity = collapse(static_cast<SentimentCategory>(i));
        dist.three_class[static_cast<std::size_t>(polarity)] += dist.fractions[i];
    }
    return dist;
}

}  // namespace trendlab::sentiment
