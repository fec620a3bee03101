#include "trendlab/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include "trendlab/csv.hpp"
#include "trendlab/matching.hpp"

namespace trendlab::ingest {

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

bool starts_with_ci(std::string_view token, std::string_view prefix) {
    if (token.size() < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(token[i])) != prefix[i]) return false;
    }
    return true;
}

bool is_url_token(std::string_view token) {
    return starts_with_ci(token, "http://") || starts_with_ci(token, "https://") ||
           starts_with_ci(token, "www.");
}

double parse_score(const std::string& field, const std::string& column,
                   const std::string& id) {
    double value = 0.0;
    const auto* begin = field.data();
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw std::runtime_error("row '" + id + "': cannot parse " + column +
                                 " value '" + field + "' as a number");
    }
    if (value < 0.0 || value > 1.0) {
        throw std::runtime_error("row '" + id + "': " + column + " value " + field +
                                 " outside [0,1]");
    }
    return value;
}

}  // namespace

std::vector<RawText> load_text_corpus(const std::filesystem::path& path) {
    const csv::Table table = csv::read_file(path);
    const std::size_t id_col = table.column("id");
    const std::size_t text_col = table.column("text");

    std::vector<RawText> out;
    out.reserve(table.rows.size());
    std::unordered_set<std::string> seen;
    seen.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        if (row.size() <= std::max(id_col, text_col)) {
            throw std::runtime_error("short row in " + path.string());
        }
        RawText rec{row[id_col], row[text_col]};
        if (rec.id.empty()) throw std::runtime_error("empty id in " + path.string());
        if (!seen.insert(rec.id).second) {
            throw std::runtime_error("duplicate id '" + rec.id + "' in " + path.string());
        }
        out.push_back(std::move(rec));
    }
    return out;
}

std::unordered_map<std::string, SentimentTriple>
load_t4sa(const std::filesystem::path& path) {
    const csv::Table table = csv::read_file(path);
    const std::size_t id_col = table.column("TWID");
    const std::size_t neg_col = table.column("NEG");
    const std::size_t neu_col = table.column("NEU");
    const std::size_t pos_col = table.column("POS");

    std::unordered_map<std::string, SentimentTriple> out;
    out.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        if (row.size() <= std::max({id_col, neg_col, neu_col, pos_col})) {
            throw std::runtime_error("short row in " + path.string());
        }
        const std::string& id = row[id_col];
        if (id.empty()) throw std::runtime_error("empty TWID in " + path.string());
        SentimentTriple triple;
        triple.neg = parse_score(row[neg_col], "NEG", id);
        triple.neu = parse_score(row[neu_col], "NEU", id);
        triple.pos = parse_score(row[pos_col], "POS", id);
        const double total = triple.pos + triple.neg + triple.neu;
        if (total < 0.99 || total > 1.01) {
            throw std::runtime_error("row '" + id + "': scores sum to " +
                                     csv::format_double(total) +
                                     ", outside the [0.99, 1.01] tolerance");
        }
        if (!out.emplace(id, triple).second) {
            throw std::runtime_error("duplicate TWID '" + id + "' in " + path.string());
        }
    }
    return out;
}

std::pair<std::vector<MergedRecord>, JoinSummary>
merge_by_id(const std::vector<RawText>& texts,
            const std::unordered_map<std::string, SentimentTriple>& scores) {
    std::vector<MergedRecord> merged;
    JoinSummary summary;
    std::unordered_set<std::string_view> matched;
    matched.reserve(texts.size());

    for (const auto& text : texts) {
        const auto it = scores.find(text.id);
        if (it == scores.end()) {
            ++summary.texts_without_score;
            continue;
        }
        matched.insert(text.id);
        MergedRecord record;
        record.id = text.id;
        record.raw_text = text.text;
        record.clean_text = clean_text(text.text);
        record.hashtags = extract_hashtags(text.text);
        record.sentiment = it->second;
        merged.push_back(std::move(record));
    }
    summary.kept = merged.size();
    summary.scores_without_text = scores.size() - matched.size();
    return {std::move(merged), summary};
}

std::string clean_text(const std::string& raw) {
    // Drop URL and mention tokens first, then normalize characters.
    std::string kept;
    kept.reserve(raw.size());
    std::size_t pos = 0;
    while (pos < raw.size()) {
        while (pos < raw.size() && is_space(raw[pos])) ++pos;
        std::size_t end = pos;
        while (end < raw.size() && !is_space(raw[end])) ++end;
        if (end > pos) {
            const std::string_view token(&raw[pos], end - pos);
            if (!is_url_token(token) && token.front() != '@') {
                if (!kept.empty()) kept += ' ';
                kept += token;
            }
        }
        pos = end;
    }

    std::string out;
    out.reserve(kept.size());
    bool pending_space = false;
    for (char raw_char : kept) {
        char c = raw_char;
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        const bool keep = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '#';
        if (keep) {
            if (pending_space && !out.empty()) out += ' ';
            pending_space = false;
            out += c;
        } else if (c == ' ') {
            pending_space = true;
        }
        // Anything else (punctuation, non-ASCII bytes) is dropped.
    }
    return out;
}

std::vector<std::string> extract_hashtags(const std::string& raw) {
    std::vector<std::string> tags;
    std::unordered_set<std::string> seen;
    std::size_t pos = 0;
    auto is_word = [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
               (c >= '0' && c <= '9') || c == '_';
    };
    while ((pos = raw.find('#', pos)) != std::string::npos) {
        std::size_t end = pos + 1;
        while (end < raw.size() && is_word(raw[end])) ++end;
        if (end > pos + 1) {
            std::string tag = raw.substr(pos + 1, end - pos - 1);
            std::transform(tag.begin(), tag.end(), tag.begin(), [](unsigned char c) {
                return static_cast<char>(std::tolower(c));
            });
            if (seen.insert(tag).second) tags.push_back(std::move(tag));
        }
        pos = end;
    }
    return tags;
}

std::pair<std::vector<MergedRecord>, FilterSummary>
filter_fashion(const std::vector<MergedRecord>& records,
               const std::vector<std::string>& keywords, bool hashtag_substring) {
    if (keywords.empty()) {
        throw std::invalid_argument("filter_fashion: empty keyword set");
    }
    std::vector<MergedRecord> kept;
    for (const auto& record : records) {
        if (contains_any_keyword(record.clean_text, keywords, hashtag_substring)) {
            kept.push_back(record);
        }
    }
    FilterSummary summary;
    summary.total = records.size();
    summary.kept = kept.size();
    summary.kept_fraction =
        records.empty() ? 0.0
                        : static_cast<double>(kept.size()) / static_cast<double>(records.size());
    return {std::move(kept), summary};
}

std::vector<std::string> load_keywords(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open keyword file: " + path.string());
    std::vector<std::string> keywords;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        std::size_t start = line.find_first_not_of(' ');
        if (start == std::string::npos) continue;
        line = line.substr(start);
        if (line.empty() || line.front() == '#') continue;
        std::transform(line.begin(), line.end(), line.begin(), [](unsigned char c) {
            return static_cast<char>(std::tolower(c));
        });
        keywords.push_back(line);
    }
    if (keywords.empty()) {
        throw std::runtime_error("keyword file has no entries: " + path.string());
    }
    return keywords;
}

const std::vector<std::string>& default_keywords() {
    static const std::vector<std::string> keywords = {
        "fashion",     "style",      "outfit",     "dress",       "shoes",
        "jewelry",     "handbag",    "accessories", "vintage",    "luxury",
        "streetwear",  "minimalist", "sustainable", "couture",    "runway",
        "ootd",        "clothing",   "wardrobe",   "sneakers",    "denim",
        "trend",       "chic",       "apparel",
    };
    return keywords;
}

}  // namespace trendlab::ingest
