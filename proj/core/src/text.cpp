#include "ragcritic/text.hpp"

#include <array>
#include <cctype>
#include <sstream>
#include <unordered_set>

namespace ragcritic {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

// Multi-byte punctuation that shows up in scraped web text. ASCII punctuation
// is handled by ispunct below.
constexpr std::array<std::string_view, 10> kWidePunct = {
    "‘", "’", "“", "”", "–",
    "—", "…", "«", "»", "·"};

const std::unordered_set<std::string_view>& stopwords() {
    static const std::unordered_set<std::string_view> words = {
        "a",    "an",    "the",   "and",  "or",   "but",  "if",    "then",
        "of",   "in",    "on",    "at",   "to",   "for",  "from",  "by",
        "with", "about", "as",    "is",   "are",  "was",  "were",  "be",
        "been", "being", "it",    "its",  "this", "that", "these", "those",
        "he",   "she",   "they",  "them", "his",  "her",  "their", "we",
        "you",  "i",     "not",   "no",   "do",   "does", "did",   "so",
        "such", "can",   "could", "will", "would", "should", "has", "have",
        "had",  "there", "here",  "what", "which", "who",  "when",  "where",
        "why",  "how",   "than",  "too",  "very", "also", "into",  "over",
        "under", "again", "more", "most", "some", "any",  "each",  "own"};
    return words;
}

}  // namespace

std::string_view trim(std::string_view text) {
    size_t begin = 0;
    size_t end = text.size();
    while (begin < end && is_space(text[begin])) ++begin;
    while (end > begin && is_space(text[end - 1])) --end;
    return text.substr(begin, end - begin);
}

std::string to_lower_ascii(std::string_view text) {
    std::string out(text);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::vector<std::string> normalize_tokens(std::string_view text) {
    std::string lowered = to_lower_ascii(text);

    for (std::string_view punct : kWidePunct) {
        size_t pos = 0;
        while ((pos = lowered.find(punct, pos)) != std::string::npos) {
            lowered.replace(pos, punct.size(), " ");
        }
    }

    std::string stripped;
    stripped.reserve(lowered.size());
    for (char c : lowered) {
        if (std::ispunct(static_cast<unsigned char>(c))) continue;
        stripped.push_back(c);
    }

    std::vector<std::string> tokens;
    std::istringstream stream(stripped);
    std::string token;
    while (stream >> token) tokens.push_back(token);
    return tokens;
}

std::string normalize_text(std::string_view text) {
    std::string out;
    for (const std::string& token : normalize_tokens(text)) {
        if (!out.empty()) out.push_back(' ');
        out += token;
    }
    return out;
}

std::string normalize_answer(std::string_view text) {
    std::string out;
    for (const std::string& token : normalize_tokens(text)) {
        if (token == "a" || token == "an" || token == "the") continue;
        if (!out.empty()) out.push_back(' ');
        out += token;
    }
    return out;
}

bool is_stopword(std::string_view token) { return stopwords().count(token) > 0; }

std::vector<std::string> content_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    for (std::string& token : normalize_tokens(text)) {
        if (is_stopword(token)) continue;
        tokens.push_back(std::move(token));
    }
    return tokens;
}

bool contains_phrase(std::string_view text, std::string_view phrase) {
    const std::vector<std::string> haystack = normalize_tokens(text);
    const std::vector<std::string> needle = normalize_tokens(phrase);
    if (needle.empty() || haystack.size() < needle.size()) return false;
    for (size_t i = 0; i + needle.size() <= haystack.size(); ++i) {
        bool match = true;
        for (size_t j = 0; j < needle.size(); ++j) {
            if (haystack[i + j] != needle[j]) {
                match = false;
                break;
            }
        }
        if (match) return true;
    }
    return false;
}

}  // namespace ragcritic
