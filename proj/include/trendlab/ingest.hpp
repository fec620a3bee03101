#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "trendlab/types.hpp"

namespace trendlab::ingest {

/// One row of the raw text corpus.
struct RawText {
    std::string id;
    std::string text;
};

/// Inner-join bookkeeping reported next to the merged records.
struct JoinSummary {
    std::size_t kept = 0;
    std::size_t texts_without_score = 0;
    std::size_t scores_without_text = 0;
};

struct FilterSummary {
    std::size_t total = 0;
    std::size_t kept = 0;
    double kept_fraction = 0.0;
};

/// Load the id,text corpus. Throws on a missing file, a missing column, an
/// empty id, or a duplicate id (named in the message). Row order preserved.
std::vector<RawText> load_text_corpus(const std::filesystem::path& path);

/// Load the TWID,NEG,NEU,POS score table. Scores must parse as reals in
/// [0,1] and sum to 1 within the [0.99, 1.01] simplex tolerance.
std::unordered_map<std::string, SentimentTriple>
load_t4sa(const std::filesystem::path& path);

/// Inner join on id: rows without a partner are counted and dropped. Output
/// follows the text-corpus row order, with clean text and hashtags filled.
std::pair<std::vector<MergedRecord>, JoinSummary>
merge_by_id(const std::vector<RawText>& texts,
            const std::unordered_map<std::string, SentimentTriple>& scores);

/// Remove URL and @-mention tokens, lowercase, strip characters outside
/// [a-z0-9 space #], collapse whitespace, trim. Total and idempotent.
std::string clean_text(const std::string& raw);

/// Lowercased '#'-tags in order of first appearance, deduplicated per tweet.
/// A tag is a maximal run of word characters ([A-Za-z0-9_]) after '#'.
std::vector<std::string> extract_hashtags(const std::string& raw);

/// Keep records whose clean text contains any keyword as a whole word
/// (hashtag-substring matching behind the flag). Throws on empty keywords.
std::pair<std::vector<MergedRecord>, FilterSummary>
filter_fashion(const std::vector<MergedRecord>& records,
               const std::vector<std::string>& keywords,
               bool hashtag_substring = false);

/// One keyword per line; blank lines and '#'-prefixed comment lines skipped.
std::vector<std::string> load_keywords(const std::filesystem::path& path);

/// The built-in 23-term fashion keyword list.
const std::vector<std::string>& default_keywords();

}  // namespace trendlab::ingest
