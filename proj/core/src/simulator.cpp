#include "ragcritic/simulator.hpp"

#include <cstdio>
#include <random>

#include "ragcritic/text.hpp"

namespace ragcritic {

namespace {

constexpr unsigned long long kPopulationSalt = 0x9E3779B97F4A7C15ULL;
constexpr unsigned long long kCriticSalt = 0xC2B2AE3D27D4EB4FULL;
constexpr unsigned long long kGeneratorSalt = 0x165667B19E3779F9ULL;

/// Per-record RNG stream with portable uniform doubles.
class Rolls {
public:
    Rolls(unsigned long long seed, unsigned long long salt, long index)
        : engine_(seed ^ (salt * static_cast<unsigned long long>(index + 1))) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    long pick(long bound) { return static_cast<long>(engine_() % static_cast<unsigned long long>(bound)); }

private:
    std::mt19937_64 engine_;
};

std::string region(long i) { return std::to_string(i); }
std::string gold_entity(long i) { return "landmark" + std::to_string(i); }
std::string wrong_entity(long i) { return "obelisk" + std::to_string(i); }
std::string broken_entity(long i) { return "temple" + std::to_string(i); }

ErrorLocation roll_true_location(Rolls& rolls) {
    switch (rolls.pick(3)) {
        case 0: return ErrorLocation{StepKind::think, std::nullopt};
        case 1:
            return ErrorLocation{StepKind::information,
                                 static_cast<int>(1 + rolls.pick(3))};
        default: return ErrorLocation{StepKind::answer, std::nullopt};
    }
}

ErrorLocation rotate_location(const ErrorLocation& loc) {
    switch (loc.loc_type) {
        case StepKind::think: return ErrorLocation{StepKind::answer, std::nullopt};
        case StepKind::answer: return ErrorLocation{StepKind::information, 1};
        default: return ErrorLocation{StepKind::think, std::nullopt};
    }
}

std::string correct_reason(long i) {
    return "the answer " + gold_entity(i) + " is confirmed by doc 2 in the retrieved evidence for region " + region(i);
}

std::string incorrect_reason(long i) {
    return "the answer conflicts with doc 2 which names " + gold_entity(i) +
           " as the anchor of region " + region(i);
}

std::string unsure_reason(long i) {
    return "the retrieved evidence for region " + region(i) +
           " is not decisive about the anchor";
}

std::string correct_fix(long i) {
    return "keep the answer " + gold_entity(i) + " because doc 2 already confirms it for region " + region(i);
}

std::string incorrect_fix(long i) {
    return "re-read doc 2 and answer with the anchor " + gold_entity(i) +
           " named for region " + region(i);
}

std::string unsure_fix(long i) {
    return "look up the registry entry that names the anchor of region " + region(i);
}

Critique make_critique(Verdict verdict, std::optional<ErrorLocation> location,
                       std::string reason, std::string fix) {
    Critique critique;
    critique.verdict = verdict;
    critique.location = std::move(location);
    critique.reason = std::move(reason);
    critique.fix = std::move(fix);
    critique.raw_text = serialize_critique(critique);
    critique.format_valid = true;
    return critique;
}

}  // namespace

std::optional<CriticProfile> parse_critic_profile(std::string_view name) {
    const std::string lowered = to_lower_ascii(trim(name));
    if (lowered == "aggressive") return CriticProfile::aggressive;
    if (lowered == "conservative") return CriticProfile::conservative;
    if (lowered == "oracle") return CriticProfile::oracle;
    if (lowered == "random") return CriticProfile::random_verdicts;
    return std::nullopt;
}

std::string_view critic_profile_name(CriticProfile profile) {
    switch (profile) {
        case CriticProfile::aggressive: return "aggressive";
        case CriticProfile::conservative: return "conservative";
        case CriticProfile::oracle: return "oracle";
        case CriticProfile::random_verdicts: return "random";
    }
    return "oracle";
}

std::vector<SimulatedExample> make_population(const SimulatorOptions& options) {
    std::vector<SimulatedExample> population;
    population.reserve(static_cast<size_t>(options.size));
    for (long i = 0; i < options.size; ++i) {
        Rolls rolls(options.seed, kPopulationSalt, i);
        SimulatedExample example;
        example.answer_correct = rolls.uniform() < options.base_accuracy;
        example.true_location = example.answer_correct
                                    ? ErrorLocation{StepKind::answer, std::nullopt}
                                    : roll_true_location(rolls);

        QaRecord& record = example.record;
        char id[32];
        std::snprintf(id, sizeof(id), "sim-%06ld", i);
        record.id = id;
        record.question = "Which landmark anchors study region " + region(i) + "?";
        record.gold_answers = {gold_entity(i)};

        const std::string answer =
            example.answer_correct ? gold_entity(i) : wrong_entity(i);
        record.trajectory_text =
            "<think>the question asks which landmark anchors study region " + region(i) +
            " so the registry should be consulted</think>"
            "<search>landmark anchoring study region " + region(i) + "</search>"
            "<information>Doc 1: survey notes for region " + region(i) +
            " mention several candidate sites. Doc 2: the registry lists " + gold_entity(i) +
            " as the anchor of study region " + region(i) +
            ". Doc 3: unrelated trivia about region " + region(i + 1) + ".</information>"
            "<answer>" + answer + "</answer>";

        population.push_back(std::move(example));
    }
    return population;
}

std::vector<Critique> simulate_critic(const SimulatorOptions& options,
                                      std::span<const SimulatedExample> population) {
    std::vector<Critique> critiques;
    critiques.reserve(population.size());
    for (long i = 0; i < static_cast<long>(population.size()); ++i) {
        const SimulatedExample& example = population[static_cast<size_t>(i)];
        Rolls rolls(options.seed, kCriticSalt, i);

        Verdict verdict = Verdict::unsure;
        switch (options.profile) {
            case CriticProfile::oracle:
                verdict = example.answer_correct ? Verdict::correct : Verdict::incorrect;
                break;
            case CriticProfile::random_verdicts:
                verdict = static_cast<Verdict>(rolls.pick(3));
                break;
            case CriticProfile::conservative:
                if (example.answer_correct && rolls.uniform() < options.unsure_rate) {
                    verdict = Verdict::unsure;
                    break;
                }
                [[fallthrough]];
            case CriticProfile::aggressive:
                if (example.answer_correct) {
                    verdict = rolls.uniform() < options.false_alarm_rate ? Verdict::incorrect
                                                                         : Verdict::correct;
                } else {
                    verdict = rolls.uniform() < options.miss_rate ? Verdict::correct
                                                                  : Verdict::incorrect;
                }
                break;
        }

        std::optional<ErrorLocation> location;
        std::string reason;
        std::string fix;
        switch (verdict) {
            case Verdict::correct:
                reason = correct_reason(i);
                fix = correct_fix(i);
                break;
            case Verdict::unsure:
                reason = unsure_reason(i);
                fix = unsure_fix(i);
                break;
            case Verdict::incorrect:
                if (options.profile == CriticProfile::oracle) {
                    location = example.true_location;
                } else {
                    // Imperfect localization: point at the true component 70%
                    // of the time, otherwise at a neighboring one.
                    location = rolls.uniform() < 0.7 ? example.true_location
                                                     : rotate_location(example.true_location);
                }
                reason = incorrect_reason(i);
                fix = incorrect_fix(i);
                break;
        }
        critiques.push_back(make_critique(verdict, location, reason, fix));
    }
    return critiques;
}

std::vector<SupervisionRecord> reference_supervision(
    std::span<const SimulatedExample> population, const SupervisionConfig& config) {
    std::vector<SupervisionRecord> records;
    records.reserve(population.size());
    for (long i = 0; i < static_cast<long>(population.size()); ++i) {
        const SimulatedExample& example = population[static_cast<size_t>(i)];
        const Trajectory traj = parse_trajectory(example.record.trajectory_text);

        SupervisionRecord record;
        record.id = example.record.id;
        record.consensus_size = 1;
        if (example.answer_correct) {
            record.verdict = Verdict::correct;
            record.reason = correct_reason(i);
            record.fix = correct_fix(i);
        } else {
            record.verdict = Verdict::incorrect;
            record.location = example.true_location;
            record.reason = incorrect_reason(i);
            record.fix = incorrect_fix(i);
        }
        record.keywords = extract_keywords(record.fix, example.record.gold_answers, traj,
                                           config.keyword_limit);
        records.push_back(std::move(record));
    }
    return records;
}

std::vector<ScriptEntry> script_generator(const SimulatorOptions& options,
                                          std::span<const SimulatedExample> population,
                                          std::span<const Critique> critiques,
                                          const InterventionPolicy& policy) {
    std::vector<ScriptEntry> entries;
    for (long i = 0; i < static_cast<long>(population.size()); ++i) {
        const Critique& critique = critiques[static_cast<size_t>(i)];
        const Verdict effective =
            critique.format_valid ? critique.verdict : Verdict::unsure;
        if (!decide_intervention(effective, policy)) continue;

        Rolls rolls(options.seed, kGeneratorSalt, i);
        ScriptEntry entry;
        if (rolls.uniform() < options.missing_answer_rate) {
            entry.response = "the registry for region " + region(i) +
                             " should be checked once more before answering";
        } else {
            const bool success = rolls.uniform() < options.fix_success;
            const std::string answer = success ? gold_entity(i) : broken_entity(i);
            entry.response = "<think>re-checking the registry for region " + region(i) +
                             " as the critique suggests</think><answer>" + answer +
                             "</answer>";
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

}  // namespace ragcritic
