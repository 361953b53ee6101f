#include "ragcritic/refinement.hpp"

#include <array>

#include "ragcritic/errors.hpp"
#include "ragcritic/text.hpp"

namespace ragcritic {

namespace {

constexpr std::array<std::string_view, 16> kRuleLines = {
    "You are also given:",
    "1. A previous trajectory from an earlier attempt.",
    "2. An external critique of that previous trajectory.",
    "Important rules:",
    "- The previous trajectory may contain mistakes.",
    "- The previous final answer may be wrong.",
    "- The external critique may also be wrong.",
    "- Do NOT blindly trust the previous trajectory.",
    "- Do NOT blindly trust the critique.",
    "- Use the critique only as a hint about possible problems to check.",
    "- Re-solve the question with fresh reasoning instead of simply copying the previous answer.",
    "- If the critique points out a possible issue, verify it by your own reasoning and search.",
    "- If the critique is unsupported or mistaken, ignore it.",
    "- Do not change your answer just because the critique suggests a change.",
    "- Base your final answer on your own reasoning process and the retrieved information.",
    "- You MUST end with exactly one final answer inside <answer> and </answer>.",
};

bool offline_match(std::string_view predicted, std::string_view gold, JudgeMode mode) {
    const std::string pred_norm = normalize_answer(predicted);
    const std::string gold_norm = normalize_answer(gold);
    if (pred_norm.empty() || gold_norm.empty()) return false;
    if (mode == JudgeMode::exact) return pred_norm == gold_norm;
    return pred_norm.find(gold_norm) != std::string::npos ||
           gold_norm.find(pred_norm) != std::string::npos;
}

}  // namespace

bool decide_intervention(Verdict verdict, const InterventionPolicy& policy) {
    switch (verdict) {
        case Verdict::correct: return false;
        case Verdict::incorrect: return true;
        case Verdict::unsure: return policy.on_unsure == UnsureAction::refine;
    }
    return false;
}

std::optional<JudgeMode> parse_judge_mode(std::string_view name) {
    const std::string lowered = to_lower_ascii(trim(name));
    if (lowered == "substring") return JudgeMode::substring;
    if (lowered == "exact") return JudgeMode::exact;
    if (lowered == "llm") return JudgeMode::llm;
    return std::nullopt;
}

bool judge_answer(std::string_view predicted, std::span<const std::string> gold,
                  JudgeMode mode, ModelEndpoint* judge) {
    if (mode == JudgeMode::llm) {
        if (judge == nullptr) throw ConfigError("llm judge mode requires a judge endpoint");
        std::string gold_joined;
        for (const std::string& answer : gold) {
            if (!gold_joined.empty()) gold_joined += " | ";
            gold_joined += answer;
        }
        const std::string system =
            "You grade question answering. Reply with exactly yes when the candidate "
            "answer matches any reference answer in meaning, otherwise reply with "
            "exactly no.";
        const std::string user = "Reference answers: " + gold_joined +
                                 "\nCandidate answer: " + std::string(predicted) +
                                 "\nDoes the candidate match? yes or no:";
        ChatExchange exchange = judge->complete(system, user);
        const std::string reply = to_lower_ascii(trim(exchange.response_text));
        return reply.rfind("yes", 0) == 0;
    }
    for (const std::string& answer : gold) {
        if (offline_match(predicted, answer, mode)) return true;
    }
    return false;
}

const std::string& generator_system_prompt() {
    static const std::string prompt =
        "You answer questions with a tagged trajectory: reason inside <think> tags, "
        "issue at most one query inside <search> tags, read results inside "
        "<information> tags, and finish with the final answer inside <answer> tags.";
    return prompt;
}

std::span<const std::string_view> refinement_rule_lines() {
    return std::span<const std::string_view>(kRuleLines.data(), kRuleLines.size());
}

std::string build_refinement_prompt(const QaRecord& record, const Trajectory& prev,
                                    const Critique& critique) {
    const std::string trajectory_text =
        record.trajectory_text.empty() ? serialize_trajectory(prev) : record.trajectory_text;

    std::string prompt;
    prompt += "Question: " + record.question + "\n\n";
    prompt += std::string(kRuleLines[0]) + "\n";
    prompt += std::string(kRuleLines[1]) + "\n";
    prompt += std::string(kRuleLines[2]) + "\n\n";
    prompt += "Previous trajectory:\n" + trajectory_text + "\n\n";
    prompt += "External critique:\n" + serialize_critique(critique) + "\n\n";
    for (size_t i = 3; i < kRuleLines.size(); ++i) {
        prompt += std::string(kRuleLines[i]);
        if (i + 1 < kRuleLines.size()) prompt.push_back('\n');
    }
    return prompt;
}

RefinementOutcome refine(const QaRecord& record, const Trajectory& prev,
                         const Critique& critique, const InterventionPolicy& policy,
                         ModelEndpoint* generator, JudgeMode mode, ModelEndpoint* judge) {
    RefinementOutcome out;
    out.id = record.id;
    out.initial_answer = prev.final_answer.value_or("");
    out.initial_correct = judge_answer(out.initial_answer, record.gold_answers, mode, judge);

    // An invalid-format critique carries no trustworthy verdict; treat it as
    // an abstention.
    out.verdict = critique.format_valid ? critique.verdict : Verdict::unsure;
    out.location = critique.location;
    out.triggered = decide_intervention(out.verdict, policy);

    if (!out.triggered) {
        out.final_answer = out.initial_answer;
        out.final_correct = out.initial_correct;
        return out;
    }

    if (generator == nullptr) {
        throw ConfigError("refinement triggered but no generator endpoint configured");
    }
    const std::string prompt = build_refinement_prompt(record, prev, critique);
    ChatExchange exchange = generator->complete(generator_system_prompt(), prompt);
    const Trajectory revised = parse_trajectory(exchange.response_text);
    if (revised.final_answer) {
        out.final_answer = *revised.final_answer;
        out.final_correct = judge_answer(out.final_answer, record.gold_answers, mode, judge);
    } else {
        out.fallback_used = true;
        out.final_answer = out.initial_answer;
        out.final_correct = out.initial_correct;
    }
    return out;
}

}  // namespace ragcritic
