#include "ragcritic/reward.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "ragcritic/config.hpp"
#include "ragcritic/errors.hpp"
#include "ragcritic/text.hpp"

namespace ragcritic {

namespace {

constexpr std::string_view kVerdictKeys[] = {"correct", "incorrect", "unsure"};

size_t verdict_row(Verdict v) { return static_cast<size_t>(v); }

bool field_is_degenerate(std::string_view field, const RewardConfig& config) {
    const std::vector<std::string> tokens = normalize_tokens(field);
    if (tokens.size() < static_cast<size_t>(config.min_field_tokens)) return true;
    for (const std::string& phrase : config.generic_phrases) {
        if (contains_phrase(field, phrase)) return true;
    }
    return false;
}

}  // namespace

RewardConfig RewardConfig::from_config(const Config& config) {
    RewardConfig out;
    out.alpha_format = config.get_double("alpha_format");
    out.gamma_format = config.get_double("gamma_format");
    for (size_t gt = 0; gt < 3; ++gt) {
        for (size_t pred = 0; pred < 3; ++pred) {
            const std::string key = "verdict_r_" + std::string(kVerdictKeys[gt]) + "_" +
                                    std::string(kVerdictKeys[pred]);
            out.verdict_matrix[gt][pred] = config.get_double(key);
        }
    }
    out.lambda_type = config.get_double("lambda_type");
    out.lambda_index = config.get_double("lambda_index");
    out.reason_max = config.get_double("reason_max");
    out.beta_reason = config.get_double("beta_reason");
    out.fix_alpha = config.get_double("fix_alpha");
    out.fix_max = config.get_double("fix_max");
    out.beta_fix = config.get_double("beta_fix");
    // Penalty magnitudes are accepted with either sign and stored negative.
    out.aux_penalty_per_violation = -std::fabs(config.get_double("aux_penalty_per_violation"));
    out.aux_floor = -std::fabs(config.get_double("aux_floor"));
    out.min_field_tokens = static_cast<int>(config.get_long("min_field_tokens"));
    out.generic_phrases = config.get_list("generic_phrases");
    for (std::string& phrase : out.generic_phrases) phrase = to_lower_ascii(phrase);
    if (out.beta_reason <= 0.0 || out.beta_fix <= 0.0) {
        throw ConfigError("beta_reason and beta_fix must be positive");
    }
    if (out.fix_alpha < 0.0 || out.fix_alpha > 1.0) {
        throw ConfigError("fix_alpha must lie in [0,1]");
    }
    if (out.aux_floor > out.aux_penalty_per_violation) {
        throw ConfigError("aux_floor must not exceed aux_penalty_per_violation");
    }
    return out;
}

double token_f1(std::string_view pred, std::string_view ref) {
    const std::vector<std::string> pred_tokens = normalize_tokens(pred);
    const std::vector<std::string> ref_tokens = normalize_tokens(ref);
    if (pred_tokens.empty() && ref_tokens.empty()) return 1.0;
    if (pred_tokens.empty() || ref_tokens.empty()) return 0.0;

    std::unordered_map<std::string, int> counts;
    for (const std::string& token : ref_tokens) ++counts[token];
    long overlap = 0;
    for (const std::string& token : pred_tokens) {
        auto it = counts.find(token);
        if (it != counts.end() && it->second > 0) {
            --it->second;
            ++overlap;
        }
    }
    return 2.0 * static_cast<double>(overlap) /
           static_cast<double>(pred_tokens.size() + ref_tokens.size());
}

double format_reward(bool format_valid, const RewardConfig& config) {
    return format_valid ? config.alpha_format : -config.gamma_format;
}

double verdict_reward(Verdict ground_truth, Verdict predicted, const RewardConfig& config) {
    return config.verdict_matrix[verdict_row(ground_truth)][verdict_row(predicted)];
}

double location_reward(const std::optional<ErrorLocation>& predicted,
                       const std::optional<ErrorLocation>& reference,
                       const RewardConfig& config) {
    if (!predicted || !reference) return 0.0;
    if (predicted->loc_type != reference->loc_type) return 0.0;
    double reward = config.lambda_type;
    const bool index_match =
        (!predicted->index && !reference->index) ||
        (predicted->index && reference->index && *predicted->index == *reference->index);
    if (index_match) reward += config.lambda_index;
    return reward;
}

double exp_transform(double score, double r_max, double beta) {
    return r_max * (std::exp(beta * score) - 1.0) / (std::exp(beta) - 1.0);
}

double reason_reward(std::string_view predicted_reason, std::string_view reference_reason,
                     const RewardConfig& config) {
    return exp_transform(token_f1(predicted_reason, reference_reason), config.reason_max,
                         config.beta_reason);
}

double keyword_coverage(std::string_view predicted_fix, std::span<const std::string> keywords) {
    if (keywords.empty()) return 1.0;
    long covered = 0;
    for (const std::string& keyword : keywords) {
        if (contains_phrase(predicted_fix, keyword)) ++covered;
    }
    return static_cast<double>(covered) / static_cast<double>(keywords.size());
}

double fix_reward(std::string_view predicted_fix, std::string_view reference_fix,
                  std::span<const std::string> keywords, const RewardConfig& config) {
    const double f1 = token_f1(predicted_fix, reference_fix);
    const double coverage = keyword_coverage(predicted_fix, keywords);
    const double mixed = config.fix_alpha * f1 + (1.0 - config.fix_alpha) * coverage;
    return exp_transform(mixed, config.fix_max, config.beta_fix);
}

double aux_penalty(const Critique& critique, const RewardConfig& config) {
    int violations = 0;
    if (field_is_degenerate(critique.reason, config)) ++violations;
    if (field_is_degenerate(critique.fix, config)) ++violations;
    if (critique.verdict == Verdict::incorrect && !critique.location) ++violations;
    if (violations == 0) return 0.0;
    const double raw = static_cast<double>(violations) * config.aux_penalty_per_violation;
    return std::max(raw, config.aux_floor);
}

RewardBreakdown compute_reward(const Critique& predicted, const SupervisionRecord& reference,
                               int stage, const RewardConfig& config) {
    if (stage != 1 && stage != 2) {
        throw UsageError("reward stage must be 1 or 2, got " + std::to_string(stage));
    }
    RewardBreakdown out;
    out.stage = stage;

    if (!predicted.format_valid) {
        out.total = -config.gamma_format;
        return out;
    }

    out.r_format = format_reward(true, config);
    out.r_verdict = verdict_reward(reference.verdict, predicted.verdict, config);

    if (stage == 1) {
        out.r_aux = aux_penalty(predicted, config);
        out.total = out.r_format + out.r_verdict + out.r_aux;
        return out;
    }

    out.gated = predicted.verdict == reference.verdict;
    if (out.gated) {
        out.r_loc = location_reward(predicted.location, reference.location, config);
        out.s_reason = token_f1(predicted.reason, reference.reason);
        out.r_reason = exp_transform(out.s_reason, config.reason_max, config.beta_reason);
        out.s_fix_f1 = token_f1(predicted.fix, reference.fix);
        out.s_fix_kw = keyword_coverage(predicted.fix, reference.keywords);
        const double mixed =
            config.fix_alpha * out.s_fix_f1 + (1.0 - config.fix_alpha) * out.s_fix_kw;
        out.r_fix = exp_transform(mixed, config.fix_max, config.beta_fix);
        out.r_aux = aux_penalty(predicted, config);
    }
    out.total = out.r_format + out.r_verdict + out.r_loc + out.r_reason + out.r_fix + out.r_aux;
    return out;
}

}  // namespace ragcritic
