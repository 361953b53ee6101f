#pragma once

#include <optional>
#include <string_view>

namespace ragcritic {

/// The four step kinds of a tagged RAG rollout. Error locations reuse the
/// same label space.
enum class StepKind { think, search, information, answer };

inline constexpr StepKind kAllStepKinds[] = {
    StepKind::think, StepKind::search, StepKind::information, StepKind::answer};

constexpr std::string_view step_kind_name(StepKind kind) {
    switch (kind) {
        case StepKind::think: return "think";
        case StepKind::search: return "search";
        case StepKind::information: return "information";
        case StepKind::answer: return "answer";
    }
    return "";
}

constexpr std::optional<StepKind> step_kind_from_name(std::string_view name) {
    for (StepKind kind : kAllStepKinds) {
        if (name == step_kind_name(kind)) return kind;
    }
    return std::nullopt;
}

}  // namespace ragcritic
