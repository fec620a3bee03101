#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "trendlab/types.hpp"

namespace trendlab::themes {

/// Keyword sets per theme, indexed by ThemeId. Sets may overlap across
/// themes; every theme must have at least one keyword.
using Taxonomy = std::array<std::vector<std::string>, kThemeCount>;

const Taxonomy& default_taxonomy();

/// Parse "theme: kw, kw, ..." lines. Every theme must end up non-empty.
Taxonomy load_taxonomy(const std::filesystem::path& path);

/// Multilabel tagging: a theme applies when any of its keywords matches the
/// record's clean text under the whole-word rule used by the fashion filter.
ThemeSet tag_themes(const MergedRecord& record, const Taxonomy& taxonomy,
                    bool hashtag_substring = false);

void tag_all(std::vector<MergedRecord>& records, const Taxonomy& taxonomy,
             bool hashtag_substring = false);

/// Records per theme; a record with k themes contributes to k counts.
std::array<std::size_t, kThemeCount> theme_counts(std::span<const MergedRecord> records);

struct TagCount {
    std::string tag;
    std::size_t count = 0;
    bool operator==(const TagCount&) const = default;
};

/// Tag counts across records (one per record per distinct tag), descending
/// by count with lexicographic tie-break, truncated to top_k.
std::vector<TagCount> hashtag_frequency(std::span<const MergedRecord> records,
                                        std::size_t top_k);

struct CooccurrencePair {
    std::string tag_a;  // lexicographically smaller
    std::string tag_b;
    std::size_t count = 0;
    bool operator==(const CooccurrencePair&) const = default;
};

/// Unordered pairs of distinct tags counted once per record, aggregated and
/// ranked like hashtag_frequency.
std::vector<CooccurrencePair> cooccurrence_pairs(std::span<const MergedRecord> records,
                                                 std::size_t top_k);

enum class ScoreField { compound, improved };

struct TagSentiment {
    std::string tag;
    double mean_score = 0.0;
    std::size_t count = 0;
};

struct SentimentRanking {
    std::vector<TagSentiment> most_positive;
    std::vector<TagSentiment> most_negative;
};

/// Mean chosen score per tag over the records carrying it, restricted to
/// tags seen at least min_count times; top/bottom lists of size <= top_k.
SentimentRanking hashtag_sentiment_ranking(std::span<const MergedRecord> records,
                                           std::size_t min_count, ScoreField field,
                                           std::size_t top_k = 10);

}  // namespace trendlab::themes
