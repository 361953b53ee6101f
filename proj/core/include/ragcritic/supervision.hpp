#pragma once

#include <span>
#include <string>
#include <vector>

#include "ragcritic/critique.hpp"
#include "ragcritic/gateway.hpp"
#include "ragcritic/trajectory.hpp"

namespace ragcritic {

class Config;

struct SupervisionConfig {
    int k_samples = 5;           // K judge samples per trajectory
    double judge_temperature = 0.7;
    double w_keyword = 1.0;
    double w_reason = 1.0;
    double w_fix = 1.0;
    double w_location = 1.0;
    int keyword_limit = 8;
    long seed = 0;
    // Shared with the reward engine's degenerate-critique rules.
    int min_field_tokens = 5;
    std::vector<std::string> generic_phrases = {"search again", "try again",
                                                "check the answer", "be more careful"};

    static SupervisionConfig from_config(const Config& config);
};

/// The consensus reference critique for one trajectory, plus the raw judge
/// samples it was distilled from.
struct SupervisionRecord {
    std::string id;
    Verdict verdict = Verdict::unsure;
    std::optional<ErrorLocation> location;
    std::string reason;
    std::string fix;
    std::vector<std::string> keywords;
    std::vector<Critique> judge_samples;
    int consensus_size = 0;
    double quality_score = 0.0;
};

/// Per-candidate structural-diagnostic quality, each sub-score in [0,1].
struct QualityScore {
    double s_keyword = 0.0;
    double s_reason = 0.0;
    double s_fix = 0.0;
    double s_location = 0.0;
    double total = 0.0;
};

/// Strict parse, then recovery, then fallback substitution. Never returns
/// an unusable value.
Critique judge_output_to_critique(std::string_view raw);

/// Judge prompts: role/grounding system prompt and the per-record
/// instruction prompt carrying question, reference answer, and trajectory.
const std::string& judge_system_prompt();
std::string build_judge_prompt(const QaRecord& record, const Trajectory& traj);

/// K critiques, one per judge sample; invalid outputs are recovered or
/// replaced by the fallback critique. Transport errors propagate.
std::vector<Critique> sample_judge_critiques(const QaRecord& record, const Trajectory& traj,
                                             const SupervisionConfig& config,
                                             ModelEndpoint& judge);

/// Modal verdict; any tie resolves to UNSURE.
Verdict consensus_verdict(std::span<const Critique> samples);

QualityScore score_quality(const Critique& critique, const Trajectory& traj,
                           std::span<const std::string> gold,
                           const SupervisionConfig& config);

/// Fix content terms plus gold-answer tokens found in retrieved documents,
/// first-occurrence order, capped at `limit`.
std::vector<std::string> extract_keywords(std::string_view fix,
                                          std::span<const std::string> gold,
                                          const Trajectory& traj, int limit);

/// Consensus voting + quality-based selection over already-materialized
/// samples. This is the deterministic core shared by live and replay runs.
SupervisionRecord build_supervision_from_samples(const QaRecord& record, const Trajectory& traj,
                                                 const SupervisionConfig& config,
                                                 std::vector<Critique> samples);

SupervisionRecord build_supervision(const QaRecord& record, const Trajectory& traj,
                                    const SupervisionConfig& config, ModelEndpoint& judge);

}  // namespace ragcritic
