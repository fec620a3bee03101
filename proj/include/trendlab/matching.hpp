#pragma once

#include <span>
#include <string>
#include <string_view>

namespace trendlab {

/**
 * Whole-word keyword matching over cleaned text. A token matches a keyword
 * only by full equality; a '#'-prefixed token is compared by its word part,
 * and additionally by substring when `hashtag_substring` is set (so the tag
 * "streetstyle" can match the keyword "style" behind the opt-in flag).
 */
bool contains_any_keyword(std::string_view clean_text,
                          std::span<const std::string> keywords,
                          bool hashtag_substring = false);

}  // namespace trendlab
