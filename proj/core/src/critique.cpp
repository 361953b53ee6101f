#include "ragcritic/critique.hpp"

#include <array>
#include <cctype>

#include "ragcritic/errors.hpp"
#include "ragcritic/text.hpp"

namespace ragcritic {

namespace {

constexpr std::array<std::string_view, 4> kFieldOrder = {"verdict", "location",
                                                         "reason", "fix"};

std::string open_tag(std::string_view name) {
    return "<" + std::string(name) + ">";
}

std::string close_tag(std::string_view name) {
    return "</" + std::string(name) + ">";
}

struct RecoveredFields {
    std::optional<std::string> verdict;
    std::optional<std::string> location;
    std::optional<std::string> reason;
    std::optional<std::string> fix;

    bool any() const {
        return verdict.has_value() || location.has_value() || reason.has_value() ||
               fix.has_value();
    }
};

/// First well-formed <name>...</name> span anywhere in `raw`.
std::optional<std::string> find_span(std::string_view raw, std::string_view name) {
    const std::string open = open_tag(name);
    const std::string close = close_tag(name);
    size_t begin = raw.find(open);
    if (begin == std::string_view::npos) return std::nullopt;
    size_t content_begin = begin + open.size();
    size_t end = raw.find(close, content_begin);
    if (end == std::string_view::npos) return std::nullopt;
    return std::string(trim(raw.substr(content_begin, end - content_begin)));
}

RecoveredFields recover_fields(std::string_view raw) {
    RecoveredFields out;
    out.verdict = find_span(raw, "verdict");
    out.location = find_span(raw, "location");
    out.reason = find_span(raw, "reason");
    out.fix = find_span(raw, "fix");
    return out;
}

/// Strict sequential parse. Returns field contents in order when the string
/// is exactly four spans with only whitespace between them.
std::optional<std::array<std::string, 4>> strict_fields(std::string_view raw) {
    std::array<std::string, 4> fields;
    size_t pos = 0;
    for (size_t i = 0; i < kFieldOrder.size(); ++i) {
        while (pos < raw.size() && std::isspace(static_cast<unsigned char>(raw[pos])))
            ++pos;
        const std::string open = open_tag(kFieldOrder[i]);
        if (raw.compare(pos, open.size(), open) != 0) return std::nullopt;
        pos += open.size();
        const std::string close = close_tag(kFieldOrder[i]);
        size_t end = raw.find(close, pos);
        if (end == std::string_view::npos) return std::nullopt;
        fields[i] = std::string(trim(raw.substr(pos, end - pos)));
        pos = end + close.size();
    }
    while (pos < raw.size() && std::isspace(static_cast<unsigned char>(raw[pos])))
        ++pos;
    if (pos != raw.size()) return std::nullopt;
    return fields;
}

/// Parses an optional ":<digits>" suffix with flexible spacing and an
/// optional word (Doc/Document/Step) before the digits. Returns false on a
/// malformed suffix.
bool parse_index_suffix(std::string_view rest, std::string_view word_a,
                        std::string_view word_b, std::optional<int>& index) {
    rest = trim(rest);
    if (rest.empty()) return true;  // bare type, no index
    if (rest.front() != ':') return false;
    rest = trim(rest.substr(1));
    for (std::string_view word : {word_a, word_b}) {
        if (word.empty()) continue;
        if (rest.size() >= word.size() &&
            to_lower_ascii(rest.substr(0, word.size())) == word) {
            rest = trim(rest.substr(word.size()));
            break;
        }
    }
    if (rest.empty()) return false;
    long value = 0;
    for (char c : rest) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        value = value * 10 + (c - '0');
        if (value > 1'000'000) return false;
    }
    if (value <= 0) return false;
    index = static_cast<int>(value);
    return true;
}

}  // namespace

// ===========================================================================
// Verdict labels
// ===========================================================================

std::string_view verdict_name(Verdict v) {
    switch (v) {
        case Verdict::correct: return "CORRECT";
        case Verdict::incorrect: return "INCORRECT";
        case Verdict::unsure: return "UNSURE";
    }
    return "UNSURE";
}

std::optional<Verdict> parse_verdict(std::string_view text) {
    const std::string lowered = to_lower_ascii(trim(text));
    if (lowered == "correct") return Verdict::correct;
    if (lowered == "incorrect") return Verdict::incorrect;
    if (lowered == "unsure") return Verdict::unsure;
    return std::nullopt;
}

// ===========================================================================
// Error locations
// ===========================================================================

std::optional<ErrorLocation> parse_location(std::string_view text) {
    const std::string lowered = to_lower_ascii(trim(text));
    if (lowered.empty()) return std::nullopt;

    for (StepKind kind : kAllStepKinds) {
        const std::string_view name = step_kind_name(kind);
        if (lowered.compare(0, name.size(), name) != 0) continue;
        std::string_view rest = std::string_view(lowered).substr(name.size());
        std::optional<int> index;
        switch (kind) {
            case StepKind::information:
                if (!parse_index_suffix(rest, "document", "doc", index)) continue;
                break;
            case StepKind::think:
                if (!parse_index_suffix(rest, "step", "", index)) continue;
                break;
            default:
                if (!trim(rest).empty()) continue;
                break;
        }
        return ErrorLocation{kind, index};
    }
    return std::nullopt;
}

std::string serialize_location(const ErrorLocation& loc) {
    std::string out(step_kind_name(loc.loc_type));
    if (loc.index) {
        if (loc.loc_type == StepKind::information) {
            out += ":Doc" + std::to_string(*loc.index);
        } else {
            out += ":" + std::to_string(*loc.index);
        }
    }
    return out;
}

// ===========================================================================
// Critique parsing
// ===========================================================================

bool validate_format(std::string_view raw) {
    auto fields = strict_fields(raw);
    if (!fields) return false;
    // A complete tag pair hidden inside a field would mean a second
    // well-formed span for that tag, so each must appear exactly once.
    for (const std::string& content : *fields) {
        for (std::string_view name : kFieldOrder) {
            if (find_span(content, name).has_value()) return false;
        }
    }
    return parse_verdict((*fields)[0]).has_value();
}

Critique parse_critique(std::string_view raw, ParseMode mode) {
    Critique out;
    out.raw_text = std::string(raw);
    out.format_valid = validate_format(raw);

    if (mode == ParseMode::strict) {
        if (!out.format_valid) return out;
        auto fields = strict_fields(raw);
        out.verdict = *parse_verdict((*fields)[0]);
        out.location = parse_location((*fields)[1]);
        out.reason = (*fields)[2];
        out.fix = (*fields)[3];
        return out;
    }

    const RecoveredFields found = recover_fields(raw);
    if (found.verdict) {
        if (auto v = parse_verdict(*found.verdict)) out.verdict = *v;
    }
    if (found.location) out.location = parse_location(*found.location);
    if (found.reason) out.reason = *found.reason;
    if (found.fix) out.fix = *found.fix;
    return out;
}

bool any_critique_tag(std::string_view raw) { return recover_fields(raw).any(); }

Critique fallback_critique(std::string_view raw) {
    Critique out;
    out.verdict = Verdict::unsure;
    out.reason = "parse failure";
    out.fix.clear();
    out.location.reset();
    out.raw_text = std::string(raw);
    out.format_valid = false;
    return out;
}

bool is_fallback_critique(const Critique& c) {
    return !c.format_valid && !c.location.has_value() && c.fix.empty() &&
           c.reason == "parse failure" && c.verdict == Verdict::unsure;
}

std::string serialize_critique(const Critique& c) {
    for (std::string_view field : {std::string_view(c.reason), std::string_view(c.fix)}) {
        for (std::string_view name : kFieldOrder) {
            if (field.find(close_tag(name)) != std::string_view::npos) {
                throw EncodeError("unencodable content: field contains closing tag " +
                                  close_tag(name));
            }
        }
    }
    const std::string location = c.location ? serialize_location(*c.location) : "none";
    std::string out;
    out += "<verdict> " + std::string(verdict_name(c.verdict)) + " </verdict> ";
    out += "<location> " + location + " </location> ";
    out += "<reason> " + std::string(trim(c.reason)) + " </reason> ";
    out += "<fix> " + std::string(trim(c.fix)) + " </fix>";
    return out;
}

}  // namespace ragcritic
