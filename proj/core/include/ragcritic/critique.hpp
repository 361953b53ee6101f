#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "ragcritic/tags.hpp"

namespace ragcritic {

// ===========================================================================
// Label spaces
// ===========================================================================

enum class Verdict { correct, incorrect, unsure };

inline constexpr Verdict kAllVerdicts[] = {Verdict::correct, Verdict::incorrect,
                                           Verdict::unsure};

/// Uppercase canonical spelling: CORRECT / INCORRECT / UNSURE.
std::string_view verdict_name(Verdict v);

/// Case-insensitive, whitespace-tolerant. Anything else -> nullopt.
std::optional<Verdict> parse_verdict(std::string_view text);

/// Where an error lives in a trajectory. `index` is a document index for
/// information locations and a 1-based step ordinal for think locations.
struct ErrorLocation {
    StepKind loc_type = StepKind::answer;
    std::optional<int> index;

    bool operator==(const ErrorLocation&) const = default;
};

/// Accepts "think", "search", "answer", "information", "information:DocN"
/// (flexible whitespace/casing, "Doc"/"Document" optional before the digits)
/// and the indexed think form "think:N". Anything else -> nullopt.
std::optional<ErrorLocation> parse_location(std::string_view text);

/// Canonical spellings: "think", "think:2", "search", "answer",
/// "information", "information:Doc3".
std::string serialize_location(const ErrorLocation& loc);

// ===========================================================================
// Critique
// ===========================================================================

/// The four-field structured critique. `raw_text` keeps the original model
/// output byte-for-byte; parsed fields are trimmed.
struct Critique {
    Verdict verdict = Verdict::unsure;
    std::optional<ErrorLocation> location;
    std::string reason;
    std::string fix;
    std::string raw_text;
    bool format_valid = false;
};

/// Strict format check: exactly one well-formed span per tag, order
/// verdict -> location -> reason -> fix, nothing but whitespace outside the
/// spans, and the verdict content must parse to a label.
bool validate_format(std::string_view raw);

enum class ParseMode { strict, recovery };

/// Total function. Strict mode yields default fields when validate_format
/// fails; recovery mode scavenges each tag pair wherever it appears and
/// fills the rest with defaults. format_valid always reports the strict
/// verdict of the original string.
Critique parse_critique(std::string_view raw, ParseMode mode);

/// True when at least one complete tag pair of any field exists in `raw`,
/// i.e. recovery parsing would find something.
bool any_critique_tag(std::string_view raw);

/// The conservative substitute for judge outputs that stay unparseable after
/// recovery: verdict UNSURE, reason "parse failure", empty fix, no location.
Critique fallback_critique(std::string_view raw);

/// True when recovery found none of the four tag pairs in `raw`.
bool is_fallback_critique(const Critique& c);

/// Emit the canonical strict form. Throws EncodeError when reason or fix
/// contains a closing-tag sequence, which no well-formed output can carry.
std::string serialize_critique(const Critique& c);

}  // namespace ragcritic
