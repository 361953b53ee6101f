#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ragcritic/gateway.hpp"
#include "ragcritic/refinement.hpp"
#include "ragcritic/supervision.hpp"

namespace ragcritic {

/// 3x3 verdict counts; rows = ground truth, columns = prediction, both in
/// CORRECT / INCORRECT / UNSURE order.
struct VerdictConfusion {
    std::array<std::array<long, 3>, 3> counts = {};

    long total() const;
};

/// Square location counts over configurable buckets (default think /
/// information / answer / none). Only records where reference and predicted
/// verdicts are both INCORRECT contribute.
struct LocationConfusion {
    std::vector<std::string> labels;
    std::vector<std::vector<long>> counts;

    long total() const;
};

inline const std::vector<std::string>& default_location_buckets() {
    static const std::vector<std::string> buckets = {"think", "information", "answer", "none"};
    return buckets;
}

/// Error-detection behavior. The positive class is a predicted INCORRECT
/// verdict; UNSURE counts as a non-flag. Rates with an empty denominator
/// stay unset rather than being coerced to zero.
struct DetectionStats {
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> false_alarm;
    long tp = 0;
    long fp = 0;
    long fn = 0;
    long tn = 0;
};

struct RefinementStats {
    std::optional<double> imp;             // wrong -> correct, over all records
    std::optional<double> harm;            // correct -> wrong, over all records
    std::optional<double> prec;            // final-correct rate among triggered edits
    std::optional<double> corr;            // corrected rate among triggered-on-wrong
    std::optional<double> corr_per_trig;   // corrected over all triggered edits
    std::optional<double> corr_per_wrong;  // corrected over all initially wrong
    long n = 0;
    long triggered = 0;
    long triggered_wrong = 0;
    long initially_wrong = 0;
    long initially_correct = 0;
    long imp_count = 0;
    long harm_count = 0;
    long corrected_count = 0;  // triggered && initially wrong && finally correct
    long final_correct_count = 0;
    long initial_correct_count = 0;
};

/// Reference verdict from answer correctness. Supervision records, when
/// available, override this (that path supplies UNSURE ground truth).
Verdict verdict_ground_truth(const RefinementOutcome& outcome);

DetectionStats detection_stats(std::span<const RefinementOutcome> outcomes);

RefinementStats refinement_stats(std::span<const RefinementOutcome> outcomes);

std::pair<VerdictConfusion, LocationConfusion> confusion_matrices(
    std::span<const RefinementOutcome> outcomes,
    const std::vector<SupervisionRecord>* supervision = nullptr,
    const std::vector<std::string>& location_buckets = default_location_buckets());

/// Max over gold references of the cosine similarity between embeddings.
/// Throws UsageError on an empty gold list.
double sbert_similarity(std::string_view predicted, std::span<const std::string> gold,
                        ModelEndpoint& embedder);

}  // namespace ragcritic
