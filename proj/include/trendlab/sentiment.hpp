#pragma once

#include <array>
#include <span>
#include <vector>

#include "trendlab/types.hpp"

namespace trendlab::sentiment {

enum class Rubric { original, improved };

/// Ratio-form compound score (pos - neg) / (pos + neg + 0.001). The 0.001
/// keeps the score defined when pos = neg = 0.
double compound(double pos, double neg);

/// Normalized compound tanh(2 (pos - neg)) * (1 - 0.7 neu): the tanh squashes
/// extreme scores and the neutrality factor dampens weak signals.
double improved_compound(double pos, double neg, double neu);

/// Five-class rubric for the ratio-form score (bands at +-0.05 and +-0.5).
SentimentCategory categorize_original(double c);

/// Five-class rubric for the normalized score (bands at +-0.15 and +-0.5).
SentimentCategory categorize_improved(double c);

/// Order-preserving collapse onto negative/neutral/positive.
Polarity collapse(SentimentCategory category);

CompoundScores score(const SentimentTriple& triple);

/// Fill `scores` on every record.
void score_records(std::vector<MergedRecord>& records);

struct Distribution {
    std::array<double, kCategoryCount> fractions{};   // indexed by SentimentCategory
    std::array<double, kPolarityCount> three_class{}; // indexed by Polarity
    std::size_t n = 0;
};

/// Category fractions over scored records under the chosen rubric.
/// Throws on an empty record list.
Distribution distribution(std::span<const MergedRecord> records, Rubric rubric);

}  // namespace trendlab::sentiment
