#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ragcritic/critique.hpp"
#include "ragcritic/supervision.hpp"

namespace ragcritic {

class Config;

/// All reward hyperparameters. The verdict matrix defaults to the
/// conservative judgement values; everything else is this artifact's
/// documented default and sweepable through configuration.
struct RewardConfig {
    double alpha_format = 0.1;   // reward for a valid structured output
    double gamma_format = 1.0;   // penalty magnitude for invalid format

    // Rows: ground-truth verdict; columns: predicted verdict.
    // Order: CORRECT, INCORRECT, UNSURE.
    std::array<std::array<double, 3>, 3> verdict_matrix = {{
        {{0.7, -1.0, -0.1}},
        {{-0.3, 0.5, -0.1}},
        {{0.1, -0.2, 0.0}},
    }};

    double lambda_type = 0.3;    // location type match
    double lambda_index = 0.2;   // location index match, gated on type

    double reason_max = 0.5;
    double beta_reason = 2.0;

    double fix_alpha = 0.5;      // F1 vs keyword-coverage mix
    double fix_max = 0.5;
    double beta_fix = 2.0;

    double aux_penalty_per_violation = -0.2;  // per degenerate field, <= 0
    double aux_floor = -0.5;                  // clamp, <= per-violation value
    int min_field_tokens = 5;
    std::vector<std::string> generic_phrases = {"search again", "try again",
                                                "check the answer", "be more careful"};

    static RewardConfig from_config(const Config& config);
};

/// Per-component decomposition of one critique's reward.
struct RewardBreakdown {
    double r_format = 0.0;
    double r_verdict = 0.0;
    double r_loc = 0.0;
    double r_reason = 0.0;
    double r_fix = 0.0;
    double r_aux = 0.0;
    bool gated = false;  // diagnostics activated (stage 2, verdicts agree)
    double total = 0.0;
    int stage = 1;
    double s_reason = 0.0;
    double s_fix_f1 = 0.0;
    double s_fix_kw = 0.0;
};

/// Token-level F1 over normalized token multisets. Both empty -> 1,
/// exactly one empty -> 0.
double token_f1(std::string_view pred, std::string_view ref);

double format_reward(bool format_valid, const RewardConfig& config);

double verdict_reward(Verdict ground_truth, Verdict predicted, const RewardConfig& config);

/// lambda_type when both locations exist with equal type; plus lambda_index
/// when the type matched and the indices agree (both absent counts as
/// agreement).
double location_reward(const std::optional<ErrorLocation>& predicted,
                       const std::optional<ErrorLocation>& reference,
                       const RewardConfig& config);

/// r_max * (exp(beta*s) - 1) / (exp(beta) - 1); fixes 0 -> 0 and 1 -> r_max.
double exp_transform(double score, double r_max, double beta);

double reason_reward(std::string_view predicted_reason, std::string_view reference_reason,
                     const RewardConfig& config);

double fix_reward(std::string_view predicted_fix, std::string_view reference_fix,
                  std::span<const std::string> keywords, const RewardConfig& config);

/// Fraction of keywords present in the normalized fix; empty list -> 1.
double keyword_coverage(std::string_view predicted_fix, std::span<const std::string> keywords);

/// Degenerate-critique penalty, always <= 0. A field counts as one violation
/// when it is shorter than min_field_tokens or carries a generic phrase; an
/// INCORRECT verdict without a location is a third violation. Clamped at
/// aux_floor.
double aux_penalty(const Critique& critique, const RewardConfig& config);

/// The two-stage gated total. Invalid format short-circuits to -gamma with
/// every component zero. Stage 1 adds format, verdict, and aux; stage 2
/// activates location/reason/fix/aux only when the predicted verdict equals
/// the reference verdict.
RewardBreakdown compute_reward(const Critique& predicted, const SupervisionRecord& reference,
                               int stage, const RewardConfig& config);

}  // namespace ragcritic
