#include "ragcritic/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "ragcritic/errors.hpp"

namespace ragcritic {

namespace {

std::optional<double> ratio(long numerator, long denominator) {
    if (denominator == 0) return std::nullopt;
    return static_cast<double>(numerator) / static_cast<double>(denominator);
}

size_t bucket_index(const std::optional<ErrorLocation>& location,
                    const std::vector<std::string>& buckets) {
    size_t none_bucket = buckets.size() - 1;
    for (size_t i = 0; i < buckets.size(); ++i) {
        if (buckets[i] == "none") none_bucket = i;
    }
    if (!location) return none_bucket;
    const std::string_view name = step_kind_name(location->loc_type);
    for (size_t i = 0; i < buckets.size(); ++i) {
        if (buckets[i] == name) return i;
    }
    return none_bucket;
}

}  // namespace

long VerdictConfusion::total() const {
    long sum = 0;
    for (const auto& row : counts) {
        for (long cell : row) sum += cell;
    }
    return sum;
}

long LocationConfusion::total() const {
    long sum = 0;
    for (const auto& row : counts) {
        for (long cell : row) sum += cell;
    }
    return sum;
}

Verdict verdict_ground_truth(const RefinementOutcome& outcome) {
    return outcome.initial_correct ? Verdict::correct : Verdict::incorrect;
}

DetectionStats detection_stats(std::span<const RefinementOutcome> outcomes) {
    DetectionStats out;
    for (const RefinementOutcome& outcome : outcomes) {
        const bool flagged = outcome.verdict == Verdict::incorrect;
        const bool wrong = !outcome.initial_correct;
        if (flagged && wrong) ++out.tp;
        if (flagged && !wrong) ++out.fp;
        if (!flagged && wrong) ++out.fn;
        if (!flagged && !wrong) ++out.tn;
    }
    out.precision = ratio(out.tp, out.tp + out.fp);
    out.recall = ratio(out.tp, out.tp + out.fn);
    out.false_alarm = ratio(out.fp, out.fp + out.tn);
    return out;
}

RefinementStats refinement_stats(std::span<const RefinementOutcome> outcomes) {
    RefinementStats out;
    out.n = static_cast<long>(outcomes.size());
    long triggered_final_correct = 0;
    for (const RefinementOutcome& outcome : outcomes) {
        if (outcome.initial_correct) {
            ++out.initially_correct;
            ++out.initial_correct_count;
        } else {
            ++out.initially_wrong;
        }
        if (outcome.final_correct) ++out.final_correct_count;
        if (!outcome.initial_correct && outcome.final_correct) ++out.imp_count;
        if (outcome.initial_correct && !outcome.final_correct) ++out.harm_count;
        if (outcome.triggered) {
            ++out.triggered;
            if (outcome.final_correct) ++triggered_final_correct;
            if (!outcome.initial_correct) {
                ++out.triggered_wrong;
                if (outcome.final_correct) ++out.corrected_count;
            }
        }
    }
    out.imp = ratio(out.imp_count, out.n);
    out.harm = ratio(out.harm_count, out.n);
    out.prec = ratio(triggered_final_correct, out.triggered);
    out.corr = ratio(out.corrected_count, out.triggered_wrong);
    out.corr_per_trig = ratio(out.corrected_count, out.triggered);
    out.corr_per_wrong = ratio(out.imp_count, out.initially_wrong);
    return out;
}

std::pair<VerdictConfusion, LocationConfusion> confusion_matrices(
    std::span<const RefinementOutcome> outcomes,
    const std::vector<SupervisionRecord>* supervision,
    const std::vector<std::string>& location_buckets) {
    std::unordered_map<std::string, const SupervisionRecord*> references;
    if (supervision != nullptr) {
        for (const SupervisionRecord& record : *supervision) {
            references.emplace(record.id, &record);
        }
    }

    VerdictConfusion verdicts;
    LocationConfusion locations;
    locations.labels = location_buckets;
    locations.counts.assign(location_buckets.size(),
                            std::vector<long>(location_buckets.size(), 0));

    for (const RefinementOutcome& outcome : outcomes) {
        const SupervisionRecord* reference = nullptr;
        if (auto it = references.find(outcome.id); it != references.end()) {
            reference = it->second;
        }
        const Verdict truth =
            reference != nullptr ? reference->verdict : verdict_ground_truth(outcome);
        verdicts.counts[static_cast<size_t>(truth)][static_cast<size_t>(outcome.verdict)] += 1;

        if (reference != nullptr && truth == Verdict::incorrect &&
            outcome.verdict == Verdict::incorrect) {
            const size_t row = bucket_index(reference->location, location_buckets);
            const size_t col = bucket_index(outcome.location, location_buckets);
            locations.counts[row][col] += 1;
        }
    }
    return {verdicts, locations};
}

double sbert_similarity(std::string_view predicted, std::span<const std::string> gold,
                        ModelEndpoint& embedder) {
    if (gold.empty()) throw UsageError("sbert_similarity requires at least one reference");
    std::vector<std::string> batch;
    batch.reserve(gold.size() + 1);
    batch.emplace_back(predicted);
    for (const std::string& answer : gold) batch.push_back(answer);

    const std::vector<std::vector<double>> vectors = embedder.embed(batch);
    const std::vector<double>& pred_vec = vectors.front();

    auto cosine = [](const std::vector<double>& a, const std::vector<double>& b) {
        if (a.size() != b.size() || a.empty()) {
            throw ProtocolError("embedding dimensions disagree within one batch");
        }
        double dot = 0.0, norm_a = 0.0, norm_b = 0.0;
        for (size_t i = 0; i < a.size(); ++i) {
            dot += a[i] * b[i];
            norm_a += a[i] * a[i];
            norm_b += b[i] * b[i];
        }
        if (norm_a == 0.0 || norm_b == 0.0) return 0.0;
        return dot / (std::sqrt(norm_a) * std::sqrt(norm_b));
    };

    double best = -1.0;
    for (size_t i = 1; i < vectors.size(); ++i) {
        best = std::max(best, cosine(pred_vec, vectors[i]));
    }
    return best;
}

}  // namespace ragcritic
