#include "ragcritic/supervision.hpp"

#include <algorithm>
#include <array>
#include <unordered_set>

#include "ragcritic/config.hpp"
#include "ragcritic/text.hpp"

namespace ragcritic {

namespace {

bool token_set_contains(const std::unordered_set<std::string>& set,
                        const std::string& token) {
    return set.count(token) > 0;
}

std::unordered_set<std::string> token_set(std::string_view text) {
    std::unordered_set<std::string> set;
    for (std::string& token : normalize_tokens(text)) set.insert(std::move(token));
    return set;
}

void push_unique(std::vector<std::string>& out, std::unordered_set<std::string>& seen,
                 const std::string& token) {
    if (seen.insert(token).second) out.push_back(token);
}

}  // namespace

SupervisionConfig SupervisionConfig::from_config(const Config& config) {
    SupervisionConfig out;
    out.k_samples = static_cast<int>(config.get_long("k_samples"));
    out.judge_temperature = config.get_double("judge_temperature");
    out.w_keyword = config.get_double("quality_w_keyword");
    out.w_reason = config.get_double("quality_w_reason");
    out.w_fix = config.get_double("quality_w_fix");
    out.w_location = config.get_double("quality_w_location");
    out.keyword_limit = static_cast<int>(config.get_long("keyword_limit"));
    out.seed = config.get_long("seed");
    out.min_field_tokens = static_cast<int>(config.get_long("min_field_tokens"));
    out.generic_phrases = config.get_list("generic_phrases");
    for (std::string& phrase : out.generic_phrases) phrase = to_lower_ascii(phrase);
    return out;
}

Critique judge_output_to_critique(std::string_view raw) {
    Critique strict = parse_critique(raw, ParseMode::strict);
    if (strict.format_valid) return strict;
    if (any_critique_tag(raw)) return parse_critique(raw, ParseMode::recovery);
    return fallback_critique(raw);
}

const std::string& judge_system_prompt() {
    static const std::string prompt =
        "You are a careful critic for retrieval-augmented question answering. "
        "You are shown a complete solving trajectory: reasoning inside <think> tags, "
        "a search query inside <search> tags, retrieved passages inside <information> "
        "tags, and the final answer inside <answer> tags. Ground every judgement in the "
        "evidence shown; do not rely on outside knowledge when the passages contradict it. "
        "Answer CORRECT when the final answer matches the reference answer, INCORRECT when "
        "you can point to a concrete failure in the trajectory, and UNSURE when the "
        "evidence is insufficient to decide either way.";
    return prompt;
}

std::string build_judge_prompt(const QaRecord& record, const Trajectory& traj) {
    std::string gold;
    for (const std::string& answer : record.gold_answers) {
        if (!gold.empty()) gold += " | ";
        gold += answer;
    }
    const std::string trajectory_text =
        record.trajectory_text.empty() ? serialize_trajectory(traj) : record.trajectory_text;

    std::string prompt;
    prompt += "Question: " + record.question + "\n";
    prompt += "Reference answer: " + gold + "\n\n";
    prompt += "Trajectory:\n" + trajectory_text + "\n\n";
    prompt +=
        "Assess the trajectory and reply with exactly four tagged fields, in this "
        "order, with nothing outside the tags:\n"
        "<verdict> CORRECT, INCORRECT, or UNSURE </verdict>\n"
        "<location> think, search, information:DocN, or answer; use none when no error "
        "exists </location>\n"
        "<reason> one or two concrete sentences explaining the judgement </reason>\n"
        "<fix> a specific, actionable instruction for the retry; name the evidence or "
        "constraint to check </fix>";
    return prompt;
}

std::vector<Critique> sample_judge_critiques(const QaRecord& record, const Trajectory& traj,
                                             const SupervisionConfig& config,
                                             ModelEndpoint& judge) {
    const std::string prompt = build_judge_prompt(record, traj);
    std::vector<Critique> samples;
    samples.reserve(static_cast<size_t>(config.k_samples));
    for (int i = 0; i < config.k_samples; ++i) {
        ChatExchange exchange = judge.complete(judge_system_prompt(), prompt);
        samples.push_back(judge_output_to_critique(exchange.response_text));
    }
    return samples;
}

Verdict consensus_verdict(std::span<const Critique> samples) {
    std::array<int, 3> votes = {0, 0, 0};
    for (const Critique& sample : samples) {
        ++votes[static_cast<size_t>(sample.verdict)];
    }
    int best = 0;
    for (int count : votes) best = std::max(best, count);
    int winners = 0;
    Verdict winner = Verdict::unsure;
    for (Verdict v : kAllVerdicts) {
        if (votes[static_cast<size_t>(v)] == best) {
            ++winners;
            winner = v;
        }
    }
    // Ties abstain: UNSURE regardless of which labels tied.
    if (winners > 1) return Verdict::unsure;
    return winner;
}

QualityScore score_quality(const Critique& critique, const Trajectory& traj,
                           std::span<const std::string> gold,
                           const SupervisionConfig& config) {
    QualityScore out;

    // Location: the named component must actually exist.
    if (critique.location && locate_component(traj, *critique.location)) {
        out.s_location = 1.0;
    }

    // Reason groundedness: share of content tokens that occur in the
    // trajectory text.
    const std::vector<std::string> reason_terms = content_tokens(critique.reason);
    if (!reason_terms.empty()) {
        const std::unordered_set<std::string> haystack = token_set(traj.joined_text());
        long grounded = 0;
        for (const std::string& term : reason_terms) {
            if (token_set_contains(haystack, term)) ++grounded;
        }
        out.s_reason = static_cast<double>(grounded) / static_cast<double>(reason_terms.size());
    }

    // Fix actionability: long enough and free of generic phrasings.
    const std::vector<std::string> fix_tokens = normalize_tokens(critique.fix);
    bool fix_ok = fix_tokens.size() >= static_cast<size_t>(config.min_field_tokens);
    if (fix_ok) {
        for (const std::string& phrase : config.generic_phrases) {
            if (contains_phrase(critique.fix, phrase)) {
                fix_ok = false;
                break;
            }
        }
    }
    out.s_fix = fix_ok ? 1.0 : 0.0;

    // Keyword richness: uncapped extractable-keyword count against the limit.
    std::unordered_set<std::string> seen;
    std::vector<std::string> keywords;
    for (const std::string& term : content_tokens(critique.fix)) {
        push_unique(keywords, seen, term);
    }
    const std::string documents_text = [&] {
        std::string text;
        for (const TrajectoryStep& step : traj.steps) {
            if (step.kind != StepKind::information) continue;
            for (const DocumentRef& doc : step.documents) {
                text += doc.text;
                text.push_back('\n');
            }
        }
        return text;
    }();
    const std::unordered_set<std::string> doc_tokens = token_set(documents_text);
    for (const std::string& answer : gold) {
        for (const std::string& token : normalize_tokens(answer)) {
            if (token_set_contains(doc_tokens, token)) push_unique(keywords, seen, token);
        }
    }
    out.s_keyword = std::min(
        1.0, static_cast<double>(keywords.size()) / static_cast<double>(config.keyword_limit));

    out.total = config.w_keyword * out.s_keyword + config.w_reason * out.s_reason +
                config.w_fix * out.s_fix + config.w_location * out.s_location;
    return out;
}

std::vector<std::string> extract_keywords(std::string_view fix,
                                          std::span<const std::string> gold,
                                          const Trajectory& traj, int limit) {
    std::unordered_set<std::string> seen;
    std::vector<std::string> keywords;
    for (const std::string& term : content_tokens(fix)) {
        push_unique(keywords, seen, term);
    }
    std::string documents_text;
    for (const TrajectoryStep& step : traj.steps) {
        if (step.kind != StepKind::information) continue;
        for (const DocumentRef& doc : step.documents) {
            documents_text += doc.text;
            documents_text.push_back('\n');
        }
    }
    const std::unordered_set<std::string> doc_tokens = token_set(documents_text);
    for (const std::string& answer : gold) {
        for (const std::string& token : normalize_tokens(answer)) {
            if (token_set_contains(doc_tokens, token)) push_unique(keywords, seen, token);
        }
    }
    if (keywords.size() > static_cast<size_t>(limit)) keywords.resize(static_cast<size_t>(limit));
    return keywords;
}

SupervisionRecord build_supervision_from_samples(const QaRecord& record, const Trajectory& traj,
                                                 const SupervisionConfig& config,
                                                 std::vector<Critique> samples) {
    SupervisionRecord out;
    out.id = record.id;
    out.verdict = consensus_verdict(samples);

    std::vector<size_t> candidates;
    int votes = 0;
    for (size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].verdict != out.verdict) continue;
        ++votes;
        if (!is_fallback_critique(samples[i])) candidates.push_back(i);
    }
    out.consensus_size = votes;
    out.judge_samples = std::move(samples);

    if (candidates.empty()) {
        // Nothing usable to copy diagnostics from (all fallbacks, or the
        // tie-break picked a verdict nobody voted for). Keep the record
        // empty; stage-2 gating will rarely activate on it.
        return out;
    }

    size_t best = candidates.front();
    double best_total = -1.0;
    for (size_t index : candidates) {
        const QualityScore score =
            score_quality(out.judge_samples[index], traj, record.gold_answers, config);
        if (score.total > best_total) {
            best_total = score.total;
            best = index;
        }
    }
    const Critique& selected = out.judge_samples[best];
    out.location = selected.location;
    out.reason = selected.reason;
    out.fix = selected.fix;
    out.quality_score = best_total;

    out.keywords = extract_keywords(selected.fix, record.gold_answers, traj,
                                    config.keyword_limit);
    if (out.keywords.empty()) {
        // Recovery pass over the supporting information step.
        std::optional<std::string> support;
        if (selected.location && selected.location->loc_type == StepKind::information &&
            selected.location->index) {
            support = traj.document_text(*selected.location->index);
        }
        if (!support) {
            for (const TrajectoryStep& step : traj.steps) {
                if (step.kind == StepKind::information) {
                    support = step.content;
                    break;
                }
            }
        }
        if (support) {
            std::vector<std::string> recovered = content_tokens(*support);
            std::unordered_set<std::string> seen;
            for (const std::string& token : recovered) {
                if (out.keywords.size() >= static_cast<size_t>(config.keyword_limit)) break;
                push_unique(out.keywords, seen, token);
            }
        }
    }
    return out;
}

SupervisionRecord build_supervision(const QaRecord& record, const Trajectory& traj,
                                    const SupervisionConfig& config, ModelEndpoint& judge) {
    return build_supervision_from_samples(record, traj, config,
                                          sample_judge_critiques(record, traj, config, judge));
}

}  // namespace ragcritic
