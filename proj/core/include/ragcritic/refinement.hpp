#pragma once

#include <optional>
#include <span>
#include <string>

#include "ragcritic/critique.hpp"
#include "ragcritic/gateway.hpp"
#include "ragcritic/trajectory.hpp"

namespace ragcritic {

/// Verdict -> keep/refine mapping. CORRECT never triggers; INCORRECT always
/// does; UNSURE follows the configured action (keep by default).
enum class UnsureAction { keep, refine };

struct InterventionPolicy {
    UnsureAction on_unsure = UnsureAction::keep;
};

bool decide_intervention(Verdict verdict, const InterventionPolicy& policy);

/// One example's intervention record, the unit all behavioral metrics count
/// over. `location` carries the critique's predicted location so confusion
/// matrices can be computed from outcome files alone.
struct RefinementOutcome {
    std::string id;
    std::string initial_answer;
    bool initial_correct = false;
    Verdict verdict = Verdict::unsure;
    std::optional<ErrorLocation> location;
    bool triggered = false;
    std::string final_answer;
    bool final_correct = false;
    bool fallback_used = false;
};

enum class JudgeMode { substring, exact, llm };

std::optional<JudgeMode> parse_judge_mode(std::string_view name);

/// Answer correctness. Offline modes normalize (lowercase, strip
/// punctuation and articles, collapse whitespace) and compare against every
/// gold reference; llm mode asks the judge endpoint for a yes/no grade.
bool judge_answer(std::string_view predicted, std::span<const std::string> gold,
                  JudgeMode mode, ModelEndpoint* judge = nullptr);

/// System prompt handed to the generator for refinement runs.
const std::string& generator_system_prompt();

/// Refinement prompt: question, previous trajectory, canonical critique,
/// and the full rule block ending with the answer-span requirement.
std::string build_refinement_prompt(const QaRecord& record, const Trajectory& prev,
                                    const Critique& critique);

/// Every rule line the refinement prompt must carry, for contract checks.
std::span<const std::string_view> refinement_rule_lines();

/// Critique-gated single-round refinement. Invalid-format critiques count
/// as UNSURE for the trigger decision. Generator responses without an
/// answer span fall back to the initial answer.
RefinementOutcome refine(const QaRecord& record, const Trajectory& prev,
                         const Critique& critique, const InterventionPolicy& policy,
                         ModelEndpoint* generator, JudgeMode mode,
                         ModelEndpoint* judge = nullptr);

}  // namespace ragcritic
