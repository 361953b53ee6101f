#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ragcritic/critique.hpp"
#include "ragcritic/tags.hpp"

namespace ragcritic {

/// One QA example: the question, its reference answers, and the raw tagged
/// rollout produced by the generator.
struct QaRecord {
    std::string id;
    std::string question;
    std::vector<std::string> gold_answers;
    std::string trajectory_text;
};

/// A retrieved passage inside an information step. `index` is the label as
/// written in the source text, not a position.
struct DocumentRef {
    int index = 0;
    std::string text;

    bool operator==(const DocumentRef&) const = default;
};

struct TrajectoryStep {
    StepKind kind = StepKind::think;
    std::string content;
    std::vector<DocumentRef> documents;  // populated only for information steps

    bool operator==(const TrajectoryStep&) const = default;
};

struct Trajectory {
    std::vector<TrajectoryStep> steps;
    std::optional<std::string> final_answer;

    bool has_step(StepKind kind) const;
    int count_steps(StepKind kind) const;
    bool has_document(int index) const;

    /// Text of the document labelled `index`, searching all information steps.
    std::optional<std::string> document_text(int index) const;

    /// Step contents joined with newlines; the haystack for groundedness.
    std::string joined_text() const;
};

/// Lenient segmentation of a tagged rollout. Never fails: unparseable input
/// yields an empty trajectory. Text outside recognized tag pairs is ignored,
/// unclosed tags are dropped, and tags opening inside another tag's content
/// are kept as plain text.
Trajectory parse_trajectory(std::string_view raw);

/// Canonical tag form: each step re-emitted as <kind>content</kind> in step
/// order. Parsing the result reproduces the step sequence.
std::string serialize_trajectory(const Trajectory& traj);

/// True when the trajectory contains a step of loc's type and, for indexed
/// locations, the referenced component: an information document with that
/// label, or the N-th think step.
bool locate_component(const Trajectory& traj, const ErrorLocation& loc);

}  // namespace ragcritic
