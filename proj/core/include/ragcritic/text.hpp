#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ragcritic {

/// Trim ASCII whitespace from both ends.
std::string_view trim(std::string_view text);

std::string to_lower_ascii(std::string_view text);

/// Tokenize for overlap metrics: lowercase, drop punctuation, split on
/// whitespace. This is the extractive-QA normalization convention.
std::vector<std::string> normalize_tokens(std::string_view text);

/// normalize_tokens joined back with single spaces.
std::string normalize_text(std::string_view text);

/// Answer-matching normalization: normalize_text plus English article
/// removal (a/an/the).
std::string normalize_answer(std::string_view text);

bool is_stopword(std::string_view token);

/// normalize_tokens minus stopwords, original order kept.
std::vector<std::string> content_tokens(std::string_view text);

/// True when `phrase` (normalized) occurs as a contiguous token run inside
/// `text` (normalized).
bool contains_phrase(std::string_view text, std::string_view phrase);

}  // namespace ragcritic
