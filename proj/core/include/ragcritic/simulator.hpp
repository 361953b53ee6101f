#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ragcritic/critique.hpp"
#include "ragcritic/gateway.hpp"
#include "ragcritic/refinement.hpp"
#include "ragcritic/supervision.hpp"
#include "ragcritic/trajectory.hpp"

namespace ragcritic {

/// Scripted critic behaviors for offline pipeline validation.
enum class CriticProfile { aggressive, conservative, oracle, random_verdicts };

std::optional<CriticProfile> parse_critic_profile(std::string_view name);
std::string_view critic_profile_name(CriticProfile profile);

struct SimulatorOptions {
    CriticProfile profile = CriticProfile::oracle;
    long size = 1000;
    unsigned long long seed = 0;
    double base_accuracy = 0.6;       // P(initial answer correct)
    double false_alarm_rate = 0.1;    // P(flag INCORRECT | initially correct)
    double miss_rate = 0.2;           // P(say CORRECT | initially wrong)
    double unsure_rate = 0.0;         // conservative abstention on correct records
    double fix_success = 0.7;         // P(generator emits the gold answer | triggered)
    double missing_answer_rate = 0.0; // P(generator response carries no answer span)
};

/// One synthetic QA example with known ground truth.
struct SimulatedExample {
    QaRecord record;
    bool answer_correct = false;
    ErrorLocation true_location;  // meaningful only when answer_correct is false
};

/// Seed-deterministic synthetic population. Gold answers occur verbatim in
/// the retrieved documents so keyword recovery has something to find.
std::vector<SimulatedExample> make_population(const SimulatorOptions& options);

/// Scripted critic: one canonical-format critique per example, deterministic
/// under the seed. Each example draws from its own derived RNG stream, so
/// profile changes never shift another record's rolls.
std::vector<Critique> simulate_critic(const SimulatorOptions& options,
                                      std::span<const SimulatedExample> population);

/// Ground-truth reference critiques, one per example, usable as supervision
/// for reward scoring and location confusion.
std::vector<SupervisionRecord> reference_supervision(
    std::span<const SimulatedExample> population, const SupervisionConfig& config);

/// Script for the generator endpoint: one response per triggered record, in
/// input order, honoring fix_success and missing_answer_rate.
std::vector<ScriptEntry> script_generator(const SimulatorOptions& options,
                                          std::span<const SimulatedExample> population,
                                          std::span<const Critique> critiques,
                                          const InterventionPolicy& policy);

}  // namespace ragcritic
