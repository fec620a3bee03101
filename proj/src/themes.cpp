#include "trendlab/themes.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include "trendlab/matching.hpp"
#include "trendlab/sentiment.hpp"

namespace trendlab::themes {

namespace {

std::string trim_lower(std::string s) {
    const auto from = s.find_first_not_of(" \t\r");
    const auto to = s.find_last_not_of(" \t\r");
    if (from == std::string::npos) return {};
    s = s.substr(from, to - from + 1);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return s;
}

/// Distinct, sorted copy of a record's tags.
std::vector<std::string> distinct_tags(const MergedRecord& record) {
    std::vector<std::string> tags = record.hashtags;
    std::sort(tags.begin(), tags.end());
    tags.erase(std::unique(tags.begin(), tags.end()), tags.end());
    return tags;
}

template <typename Map>
std::vector<TagCount> ranked_counts(const Map& counts, std::size_t top_k) {
    std::vector<TagCount> out;
    out.reserve(counts.size());
    for (const auto& [tag, count] : counts) out.push_back({tag, count});
    std::sort(out.begin(), out.end(), [](const TagCount& a, const TagCount& b) {
        if (a.count != b.count) return a.count > b.count;
        return a.tag < b.tag;
    });
    if (out.size() > top_k) out.resize(top_k);
    return out;
}

}  // namespace

const Taxonomy& default_taxonomy() {
    static const Taxonomy taxonomy = [] {
        Taxonomy t;
        auto set = [&t](ThemeId id, std::vector<std::string> kws) {
            t[static_cast<std::size_t>(id)] = std::move(kws);
        };
        set(ThemeId::vintage, {"vintage", "retro", "classic", "secondhand", "thrift", "y2k"});
        set(ThemeId::luxury, {"luxury", "designer", "couture", "premium", "exclusive", "highend"});
        set(ThemeId::accessories,
            {"accessories", "jewelry", "handbag", "shoes", "bag", "watch"});
        set(ThemeId::seasonal, {"seasonal", "summer", "winter", "spring", "autumn", "holiday"});
        set(ThemeId::sustainability,
            {"sustainable", "sustainability", "ecofriendly", "ethical", "recycled", "upcycled"});
        set(ThemeId::streetwear, {"streetwear", "urban", "sneakers", "hypebeast", "skate", "casual"});
        set(ThemeId::minimalist, {"minimalist", "minimal", "simple", "capsule", "monochrome", "clean"});
        return t;
    }();
    return taxonomy;
}

Taxonomy load_taxonomy(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open taxonomy file: " + path.string());
    Taxonomy taxonomy;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim_lower(line);
        if (stripped.empty() || stripped.front() == '#') continue;
        const auto colon = stripped.find(':');
        if (colon == std::string::npos) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": expected 'theme: keyword, keyword'");
        }
        const std::string name = trim_lower(stripped.substr(0, colon));
        const auto theme = theme_from_string(name);
        if (!theme) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": unknown theme '" + name + "'");
        }
        auto& keywords = taxonomy[static_cast<std::size_t>(*theme)];
        std::string rest = stripped.substr(colon + 1);
        std::size_t pos = 0;
        while (pos <= rest.size()) {
            const auto comma = rest.find(',', pos);
            const std::string kw =
                trim_lower(rest.substr(pos, comma == std::string::npos ? comma : comma - pos));
            if (!kw.empty()) keywords.push_back(kw);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    for (ThemeId theme : kAllThemes) {
        if (taxonomy[static_cast<std::size_t>(theme)].empty()) {
            throw std::runtime_error("taxonomy is missing keywords for theme '" +
                                     std::string(to_string(theme)) + "'");
        }
    }
    return taxonomy;
}

ThemeSet tag_themes(const MergedRecord& record, const Taxonomy& taxonomy,
                    bool hashtag_substring) {
    ThemeSet set;
    for (ThemeId theme : kAllThemes) {
        const auto& keywords = taxonomy[static_cast<std::size_t>(theme)];
        if (contains_any_keyword(record.clean_text, keywords, hashtag_substring)) {
            add_theme(set, theme);
        }
    }
    return set;
}

void tag_all(std::vector<MergedRecord>& records, const Taxonomy& taxonomy,
             bool hashtag_substring) {
    for (auto& record : records) {
        record.themes = tag_themes(record, taxonomy, hashtag_substring);
    }
}

std::array<std::size_t, kThemeCount> theme_counts(std::span<const MergedRecord> records) {
    std::array<std::size_t, kThemeCount> counts{};
    for (const auto& record : records) {
        for (ThemeId theme : kAllThemes) {
            if (has_theme(record.themes, theme)) ++counts[static_cast<std::size_t>(theme)];
        }
    }
    return counts;
}

std::vector<TagCount> hashtag_frequency(std::span<const MergedRecord> records,
                                        std::size_t top_k) {
    if (top_k < 1) throw std::invalid_argument("hashtag_frequency: top_k must be >= 1");
    std::unordered_map<std::string, std::size_t> counts;
    for (const auto& record : records) {
        for (const auto& tag : distinct_tags(record)) ++counts[tag];
    }
    return ranked_counts(counts, top_k);
}

std::vector<CooccurrencePair> cooccurrence_pairs(std::span<const MergedRecord> records,
                                                 std::size_t top_k) {
    if (top_k < 1) throw std::invalid_argument("cooccurrence_pairs: top_k must be >= 1");
    std::map<std::pair<std::string, std::string>, std::size_t> counts;
    for (const auto& record : records) {
        const auto tags = distinct_tags(record);
        for (std::size_t i = 0; i < tags.size(); ++i) {
            for (std::size_t j = i + 1; j < tags.size(); ++j) {
                ++counts[{tags[i], tags[j]}];  // tags sorted, so a < b
            }
        }
    }
    std::vector<CooccurrencePair> out;
    out.reserve(counts.size());
    for (const auto& [pair, count] : counts) out.push_back({pair.first, pair.second, count});
    std::sort(out.begin(), out.end(),
              [](const CooccurrencePair& a, const CooccurrencePair& b) {
                  if (a.count != b.count) return a.count > b.count;
                  if (a.tag_a != b.tag_a) return a.tag_a < b.tag_a;
                  return a.tag_b < b.tag_b;
              });
    if (out.size() > top_k) out.resize(top_k);
    return out;
}

SentimentRanking hashtag_sentiment_ranking(std::span<const MergedRecord> records,
                                           std::size_t min_count, ScoreField field,
                                           std::size_t top_k) {
    if (min_count < 1) {
        throw std::invalid_argument("hashtag_sentiment_ranking: min_count must be >= 1");
    }
    struct Acc {
        double sum = 0.0;
        std::size_t count = 0;
    };
    std::unordered_map<std::string, Acc> groups;
    for (const auto& record : records) {
        const CompoundScores scores =
            record.scores ? *record.scores : sentiment::score(record.sentiment);
        const double value =
            field == ScoreField::compound ? scores.compound : scores.improved;
        for (const auto& tag : distinct_tags(record)) {
            auto& acc = groups[tag];
            acc.sum += value;
            ++acc.count;
        }
    }
    std::vector<TagSentiment> qualified;
    for (const auto& [tag, acc] : groups) {
        if (acc.count >= min_count) {
            qualified.push_back({tag, acc.sum / static_cast<double>(acc.count), acc.count});
        }
    }
    auto by_mean_desc = [](const TagSentiment& a, const TagSentiment& b) {
        if (a.mean_score != b.mean_score) return a.mean_score > b.mean_score;
        return a.tag < b.tag;
    };
    std::sort(qualified.begin(), qualified.end(), by_mean_desc);

    SentimentRanking ranking;
    const std::size_t take = std::min(top_k, qualified.size());
    ranking.most_positive.assign(qualified.begin(), qualified.begin() + take);
    ranking.most_negative.assign(qualified.end() - take, qualified.end());
    std::reverse(ranking.most_negative.begin(), ranking.most_negative.end());
    return ranking;
}

}  // namespace trendlab::themes
