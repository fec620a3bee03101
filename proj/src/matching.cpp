#include "trendlab/matching.hpp"

namespace trendlab {

bool contains_any_keyword(std::string_view clean_text,
                          std::span<const std::string> keywords,
                          bool hashtag_substring) {
    std::size_t pos = 0;
    while (pos < clean_text.size()) {
        while (pos < clean_text.size() && clean_text[pos] == ' ') ++pos;
        std::size_t end = pos;
        while (end < clean_text.size() && clean_text[end] != ' ') ++end;
        if (end > pos) {
            std::string_view token = clean_text.substr(pos, end - pos);
            const bool is_hashtag = token.front() == '#';
            if (is_hashtag) token.remove_prefix(1);
            if (!token.empty()) {
                for (const auto& keyword : keywords) {
                    if (token == keyword) return true;
                    if (is_hashtag && hashtag_substring &&
                        token.find(keyword) != std::string_view::npos) {
                        return true;
                    }
                }
            }
        }
        pos = end;
    }
    return false;
}

}  // namespace trendlab
