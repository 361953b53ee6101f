#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <thread>

#include <nlohmann/json.hpp>

#include "ragcritic/advantage.hpp"
#include "ragcritic/errors.hpp"
#include "ragcritic/evaluation.hpp"
#include "ragcritic/jsonl.hpp"
#include "ragcritic/manifest.hpp"
#include "ragcritic/refinement.hpp"
#include "ragcritic/reward.hpp"
#include "ragcritic/simulator.hpp"
#include "ragcritic/supervision.hpp"
#include "ragcritic/version.hpp"

namespace ragcritic::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// ===========================================================================
// Shared plumbing
// ===========================================================================

int resolve_jobs(const Config& config) {
    long jobs = config.get_long("jobs");
    if (jobs <= 0) {
        unsigned hw = std::thread::hardware_concurrency();
        jobs = hw == 0 ? 1 : static_cast<long>(hw);
    }
    return static_cast<int>(jobs);
}

/// Index-ordered parallel map; results land in input order regardless of
/// completion order.
template <typename Fn>
void parallel_for(long n, int jobs, Fn&& fn) {
    if (jobs <= 1 || n <= 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<long> next{0};
    std::vector<std::thread> workers;
    const int worker_count = static_cast<int>(std::min<long>(jobs, n));
    workers.reserve(static_cast<size_t>(worker_count));
    for (int w = 0; w < worker_count; ++w) {
        workers.emplace_back([&] {
            while (true) {
                const long i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    }
    for (std::thread& worker : workers) worker.join();
}

RunManifest start_manifest(const std::string& command, const Config& config,
                           const std::vector<fs::path>& inputs) {
    RunManifest manifest;
    manifest.command = command;
    manifest.config_digest = config.digest();
    for (const fs::path& input : inputs) {
        manifest.input_digests.emplace_back(input.string(), sha256_hex_file(input));
    }
    manifest.seed = config.get_long("seed");
    manifest.started_at = utc_timestamp_now();
    manifest.tool_version = kToolVersion;
    return manifest;
}

void finish_manifest(RunManifest& manifest, const fs::path& output, long read, long processed,
                     long failed) {
    manifest.finished_at = utc_timestamp_now();
    manifest.records_read = read;
    manifest.records_processed = processed;
    manifest.records_failed = failed;
    write_manifest(fs::path(output.string() + ".manifest.json"), manifest);
}

std::ofstream open_output(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream stream(path, std::ios::binary);
    if (!stream) throw ConfigError("cannot open output file: " + path.string());
    return stream;
}

ordered_json error_entry(const std::string& id, const std::string& message) {
    ordered_json doc;
    doc["id"] = id;
    doc["error"] = message;
    return doc;
}

ordered_json optional_to_json(const std::optional<double>& value) {
    return value ? ordered_json(*value) : ordered_json(nullptr);
}

std::string render_cell(const std::optional<double>& value, bool percent) {
    if (!value) return "n/a";
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), percent ? "%.1f" : "%.4f",
                  percent ? *value * 100.0 : *value);
    return buffer;
}

InterventionPolicy policy_from_config(const Config& config) {
    const std::string action = config.get_string("on_unsure");
    InterventionPolicy policy;
    if (action == "refine") {
        policy.on_unsure = UnsureAction::refine;
    } else if (action == "keep") {
        policy.on_unsure = UnsureAction::keep;
    } else {
        throw ConfigError("on_unsure must be keep or refine, got: " + action);
    }
    return policy;
}

JudgeMode judge_mode_from_config(const Config& config) {
    const std::string mode = config.get_string("judge_mode");
    if (auto parsed = parse_judge_mode(mode)) return *parsed;
    throw ConfigError("judge_mode must be substring, exact, or llm, got: " + mode);
}

SimulatorOptions simulator_options_from_config(const Config& config) {
    SimulatorOptions options;
    auto profile = parse_critic_profile(config.get_string("sim_profile"));
    if (!profile) {
        throw ConfigError("sim_profile must be aggressive, conservative, oracle, or random");
    }
    options.profile = *profile;
    options.size = config.get_long("sim_size");
    options.seed = static_cast<unsigned long long>(config.get_long("seed"));
    options.base_accuracy = config.get_double("sim_base_accuracy");
    options.false_alarm_rate = config.get_double("sim_false_alarm");
    options.miss_rate = config.get_double("sim_miss_rate");
    options.unsure_rate = config.get_double("sim_unsure_rate");
    options.fix_success = config.get_double("sim_fix_success");
    options.missing_answer_rate = config.get_double("sim_missing_answer_rate");
    return options;
}

// ===========================================================================
// Report rendering
// ===========================================================================

struct EvaluationBundle {
    std::string label;
    DetectionStats detection;
    RefinementStats refinement;
    VerdictConfusion verdicts;
    LocationConfusion locations;
};

EvaluationBundle evaluate_outcomes(const std::string& label,
                                   const std::vector<RefinementOutcome>& outcomes,
                                   const std::vector<SupervisionRecord>* supervision) {
    EvaluationBundle bundle;
    bundle.label = label;
    bundle.detection = detection_stats(outcomes);
    bundle.refinement = refinement_stats(outcomes);
    auto [verdicts, locations] = confusion_matrices(outcomes, supervision);
    bundle.verdicts = verdicts;
    bundle.locations = locations;
    return bundle;
}

ordered_json detection_to_json(const DetectionStats& stats) {
    ordered_json doc;
    doc["precision"] = optional_to_json(stats.precision);
    doc["recall"] = optional_to_json(stats.recall);
    doc["false_alarm"] = optional_to_json(stats.false_alarm);
    doc["tp"] = stats.tp;
    doc["fp"] = stats.fp;
    doc["fn"] = stats.fn;
    doc["tn"] = stats.tn;
    return doc;
}

ordered_json refinement_to_json(const RefinementStats& stats) {
    ordered_json doc;
    doc["imp"] = optional_to_json(stats.imp);
    doc["harm"] = optional_to_json(stats.harm);
    doc["prec"] = optional_to_json(stats.prec);
    doc["corr"] = optional_to_json(stats.corr);
    doc["corr_per_trig"] = optional_to_json(stats.corr_per_trig);
    doc["corr_per_wrong"] = optional_to_json(stats.corr_per_wrong);
    doc["n"] = stats.n;
    doc["triggered"] = stats.triggered;
    doc["initially_wrong"] = stats.initially_wrong;
    doc["imp_count"] = stats.imp_count;
    doc["harm_count"] = stats.harm_count;
    doc["corrected_count"] = stats.corrected_count;
    return doc;
}

ordered_json confusions_to_json(const VerdictConfusion& verdicts,
                                const LocationConfusion& locations) {
    ordered_json doc;
    doc["verdict_confusion"] = {
        {"labels", {"CORRECT", "INCORRECT", "UNSURE"}},
        {"counts", verdicts.counts},
    };
    doc["location_confusion"] = {
        {"labels", locations.labels},
        {"counts", locations.counts},
    };
    return doc;
}

void write_confusion_csvs(const fs::path& prefix, const EvaluationBundle& bundle) {
    {
        std::ofstream csv = open_output(fs::path(prefix.string() + ".verdict.csv"));
        csv << "gt\\pred,CORRECT,INCORRECT,UNSURE\n";
        const char* row_labels[] = {"CORRECT", "INCORRECT", "UNSURE"};
        for (size_t row = 0; row < 3; ++row) {
            csv << row_labels[row];
            for (size_t col = 0; col < 3; ++col) csv << "," << bundle.verdicts.counts[row][col];
            csv << "\n";
        }
    }
    {
        std::ofstream csv = open_output(fs::path(prefix.string() + ".location.csv"));
        csv << "ref\\pred";
        for (const std::string& label : bundle.locations.labels) csv << "," << label;
        csv << "\n";
        for (size_t row = 0; row < bundle.locations.labels.size(); ++row) {
            csv << bundle.locations.labels[row];
            for (long cell : bundle.locations.counts[row]) csv << "," << cell;
            csv << "\n";
        }
    }
}

std::string render_tables(const std::vector<EvaluationBundle>& bundles) {
    std::string out;
    char line[256];

    size_t label_width = 8;
    for (const EvaluationBundle& bundle : bundles) {
        label_width = std::max(label_width, bundle.label.size() + 2);
    }
    const int lw = static_cast<int>(label_width);

    out += "== Error detection (percent; n/a = undefined) ==\n";
    std::snprintf(line, sizeof(line), "%-*s %10s %10s %12s\n", lw, "", "Precision", "Recall",
                  "False Alarm");
    out += line;
    for (const EvaluationBundle& bundle : bundles) {
        std::snprintf(line, sizeof(line), "%-*s %10s %10s %12s\n", lw, bundle.label.c_str(),
                      render_cell(bundle.detection.precision, true).c_str(),
                      render_cell(bundle.detection.recall, true).c_str(),
                      render_cell(bundle.detection.false_alarm, true).c_str());
        out += line;
    }

    out += "\n== Refinement analysis (percent) ==\n";
    std::snprintf(line, sizeof(line), "%-*s %8s %8s %8s %8s\n", lw, "", "Imp", "Harm", "Prec",
                  "Corr");
    out += line;
    for (const EvaluationBundle& bundle : bundles) {
        std::snprintf(line, sizeof(line), "%-*s %8s %8s %8s %8s\n", lw, bundle.label.c_str(),
                      render_cell(bundle.refinement.imp, true).c_str(),
                      render_cell(bundle.refinement.harm, true).c_str(),
                      render_cell(bundle.refinement.prec, true).c_str(),
                      render_cell(bundle.refinement.corr, true).c_str());
        out += line;
    }

    out += "\n== Correction behavior (percent) ==\n";
    std::snprintf(line, sizeof(line), "%-*s %12s %12s\n", lw, "", "Corr./Trig.", "Corr./Wrong");
    out += line;
    for (const EvaluationBundle& bundle : bundles) {
        std::snprintf(line, sizeof(line), "%-*s %12s %12s\n", lw, bundle.label.c_str(),
                      render_cell(bundle.refinement.corr_per_trig, true).c_str(),
                      render_cell(bundle.refinement.corr_per_wrong, true).c_str());
        out += line;
    }
    return out;
}

}  // namespace

// ===========================================================================
// score
// ===========================================================================

int cmd_score(const Invocation& inv) {
    const RewardConfig reward_config = RewardConfig::from_config(inv.config);
    const int stage = static_cast<int>(inv.config.get_long("stage"));
    if (stage != 1 && stage != 2) throw ConfigError("--stage must be 1 or 2");
    const long group_size = inv.config.get_long("group_size");

    RunManifest manifest = start_manifest("score", inv.config, {inv.input, inv.supervision});

    const std::vector<CritiqueRow> rows = load_critique_rows(inv.input);
    const std::vector<SupervisionRecord> supervision = load_supervision(inv.supervision);
    std::map<std::string, const SupervisionRecord*> references;
    for (const SupervisionRecord& record : supervision) references.emplace(record.id, &record);

    struct Scored {
        ordered_json doc;
        bool failed = false;
        std::string id;
        double total = 0.0;
    };
    std::vector<Scored> results(rows.size());

    parallel_for(static_cast<long>(rows.size()), resolve_jobs(inv.config), [&](long i) {
        const CritiqueRow& row = rows[static_cast<size_t>(i)];
        Scored& scored = results[static_cast<size_t>(i)];
        scored.id = row.id;
        try {
            auto it = references.find(row.id);
            if (it == references.end()) {
                throw ConfigError("no supervision record for id");
            }
            const Critique critique = parse_critique(row.critique, ParseMode::strict);
            const RewardBreakdown breakdown = compute_reward(critique, *it->second, stage,
                                                             reward_config);
            scored.total = breakdown.total;
            ordered_json doc;
            doc["id"] = row.id;
            doc["stage"] = breakdown.stage;
            doc["total"] = breakdown.total;
            doc["r_format"] = breakdown.r_format;
            doc["r_verdict"] = breakdown.r_verdict;
            doc["r_loc"] = breakdown.r_loc;
            doc["r_reason"] = breakdown.r_reason;
            doc["r_fix"] = breakdown.r_fix;
            doc["r_aux"] = breakdown.r_aux;
            doc["gated"] = breakdown.gated;
            doc["format_valid"] = critique.format_valid;
            doc["s_reason"] = breakdown.s_reason;
            doc["s_fix_f1"] = breakdown.s_fix_f1;
            doc["s_fix_kw"] = breakdown.s_fix_kw;
            scored.doc = std::move(doc);
        } catch (const Error& e) {
            scored.failed = true;
            scored.doc = error_entry(row.id, e.what());
        }
    });

    // Optional GRPO advantages over consecutive same-id runs.
    if (group_size > 0) {
        const double epsilon = inv.config.get_double("advantage_epsilon");
        const StdMode mode = inv.config.get_bool("advantage_sample_std") ? StdMode::sample
                                                                         : StdMode::population;
        size_t begin = 0;
        while (begin < results.size()) {
            size_t end = begin;
            while (end < results.size() && !results[end].failed &&
                   results[end].id == results[begin].id) {
                ++end;
            }
            if (end == begin) {  // failed row: skip it
                ++begin;
                continue;
            }
            RewardGroup group;
            group.epsilon = epsilon;
            for (size_t i = begin; i < end; ++i) group.rewards.push_back(results[i].total);
            if (static_cast<long>(group.rewards.size()) != group_size) {
                std::cerr << "warning: id " << results[begin].id << " has "
                          << group.rewards.size() << " critiques, expected --group-size "
                          << group_size << "\n";
            }
            const AdvantageSet advantages = compute_advantages(group, mode);
            for (size_t i = begin; i < end; ++i) {
                results[i].doc["advantage"] = advantages.advantages[i - begin];
                results[i].doc["group_mean"] = advantages.mean;
                results[i].doc["group_std"] = advantages.std_dev;
                results[i].doc["group_degenerate"] = advantages.degenerate;
                results[i].doc["group_size"] = group.rewards.size();
            }
            begin = end;
        }
    }

    long failed = 0;
    {
        std::ofstream out = open_output(inv.output);
        for (const Scored& scored : results) {
            if (scored.failed) ++failed;
            write_jsonl_line(out, scored.doc);
        }
    }
    finish_manifest(manifest, inv.output, static_cast<long>(rows.size()),
                    static_cast<long>(rows.size()) - failed, failed);
    return failed > 0 ? 1 : 0;
}

// ===========================================================================
// annotate
// ===========================================================================

int cmd_annotate(const Invocation& inv) {
    const SupervisionConfig sup_config = SupervisionConfig::from_config(inv.config);
    const bool replay_mode = !inv.replay.empty();

    std::vector<fs::path> manifest_inputs = {inv.input};
    if (replay_mode) manifest_inputs.push_back(inv.replay);
    RunManifest manifest = start_manifest("annotate", inv.config, manifest_inputs);

    const std::vector<QaRecord> records = load_qa_records(inv.input);

    std::map<std::string, std::map<int, std::string>> replayed;
    std::unique_ptr<ModelEndpoint> judge;
    if (replay_mode) {
        for (const TranscriptRow& row : load_transcripts(inv.replay)) {
            replayed[row.id][row.sample] = row.response;
        }
    } else {
        EndpointConfig endpoint = endpoint_from_config(inv.config, "judge");
        if (endpoint.base_url.empty()) {
            throw ConfigError("annotate needs judge_base_url or --replay <transcripts>");
        }
        endpoint.temperature = sup_config.judge_temperature;
        judge = make_http_endpoint(std::move(endpoint));
    }

    struct Annotated {
        ordered_json doc;
        std::vector<Critique> samples;
        bool failed = false;
        std::string id;
    };
    std::vector<Annotated> results(records.size());

    const int jobs = replay_mode ? 1 : resolve_jobs(inv.config);
    parallel_for(static_cast<long>(records.size()), jobs, [&](long i) {
        const QaRecord& record = records[static_cast<size_t>(i)];
        Annotated& result = results[static_cast<size_t>(i)];
        result.id = record.id;
        try {
            const Trajectory traj = parse_trajectory(record.trajectory_text);
            std::vector<Critique> samples;
            if (replay_mode) {
                auto it = replayed.find(record.id);
                if (it == replayed.end() || it->second.empty()) {
                    throw ConfigError("no replay transcripts for id " + record.id);
                }
                for (const auto& [sample_index, response] : it->second) {
                    samples.push_back(judge_output_to_critique(response));
                }
            } else {
                samples = sample_judge_critiques(record, traj, sup_config, *judge);
            }
            SupervisionRecord supervision =
                build_supervision_from_samples(record, traj, sup_config, std::move(samples));
            result.samples = supervision.judge_samples;
            result.doc = supervision_to_json(supervision);
        } catch (const Error& e) {
            result.failed = true;
            result.doc = error_entry(record.id, e.what());
        }
    });

    long failed = 0;
    {
        std::ofstream out = open_output(inv.output);
        for (const Annotated& result : results) {
            if (result.failed) ++failed;
            write_jsonl_line(out, result.doc);
        }
    }
    {
        const fs::path transcripts_path =
            inv.transcripts.empty() ? fs::path(inv.output.string() + ".transcripts.jsonl")
                                    : inv.transcripts;
        std::ofstream out = open_output(transcripts_path);
        for (const Annotated& result : results) {
            for (size_t k = 0; k < result.samples.size(); ++k) {
                TranscriptRow row;
                row.id = result.id;
                row.sample = static_cast<int>(k);
                row.response = result.samples[k].raw_text;
                write_jsonl_line(out, transcript_row_to_json(row));
            }
        }
    }
    finish_manifest(manifest, inv.output, static_cast<long>(records.size()),
                    static_cast<long>(records.size()) - failed, failed);
    return failed > 0 ? 1 : 0;
}

// ===========================================================================
// refine
// ===========================================================================

int cmd_refine(const Invocation& inv) {
    const InterventionPolicy policy = policy_from_config(inv.config);
    const JudgeMode mode = judge_mode_from_config(inv.config);

    std::unique_ptr<ModelEndpoint> judge;
    if (mode == JudgeMode::llm) {
        EndpointConfig endpoint = endpoint_from_config(inv.config, "judge");
        if (endpoint.base_url.empty()) {
            throw ConfigError("judge_mode=llm requires judge_base_url");
        }
        judge = make_http_endpoint(std::move(endpoint));
    }

    std::unique_ptr<ModelEndpoint> generator;
    bool scripted = false;
    if (!inv.generator_stub.empty()) {
        generator = make_scripted_endpoint(load_script(inv.generator_stub));
        scripted = true;
    } else if (!inv.config.get_string("gen_base_url").empty()) {
        generator = make_http_endpoint(endpoint_from_config(inv.config, "gen"));
    }

    std::vector<fs::path> manifest_inputs = {inv.input, inv.critiques};
    if (!inv.generator_stub.empty()) manifest_inputs.push_back(inv.generator_stub);
    RunManifest manifest = start_manifest("refine", inv.config, manifest_inputs);

    const std::vector<QaRecord> records = load_qa_records(inv.input);
    std::map<std::string, std::string> critiques;
    for (const CritiqueRow& row : load_critique_rows(inv.critiques)) {
        critiques.emplace(row.id, row.critique);
    }

    struct Refined {
        ordered_json doc;
        bool failed = false;
    };
    std::vector<Refined> results(records.size());

    // A scripted generator consumes entries in call order, so replay runs
    // stay sequential for determinism.
    const int jobs = scripted ? 1 : resolve_jobs(inv.config);
    parallel_for(static_cast<long>(records.size()), jobs, [&](long i) {
        const QaRecord& record = records[static_cast<size_t>(i)];
        Refined& result = results[static_cast<size_t>(i)];
        try {
            auto it = critiques.find(record.id);
            if (it == critiques.end()) {
                throw ConfigError("no critique for id " + record.id);
            }
            const Critique critique = parse_critique(it->second, ParseMode::strict);
            const Trajectory traj = parse_trajectory(record.trajectory_text);
            const RefinementOutcome outcome =
                refine(record, traj, critique, policy, generator.get(), mode, judge.get());
            result.doc = outcome_to_json(outcome);
        } catch (const Error& e) {
            result.failed = true;
            result.doc = error_entry(record.id, e.what());
        }
    });

    long failed = 0;
    {
        std::ofstream out = open_output(inv.output);
        for (const Refined& result : results) {
            if (result.failed) ++failed;
            write_jsonl_line(out, result.doc);
        }
    }
    finish_manifest(manifest, inv.output, static_cast<long>(records.size()),
                    static_cast<long>(records.size()) - failed, failed);
    return failed > 0 ? 1 : 0;
}

// ===========================================================================
// evaluate
// ===========================================================================

int cmd_evaluate(const Invocation& inv) {
    std::vector<fs::path> manifest_inputs = {inv.input};
    if (!inv.supervision.empty()) manifest_inputs.push_back(inv.supervision);
    RunManifest manifest = start_manifest("evaluate", inv.config, manifest_inputs);

    JsonlReadStats stats;
    const std::vector<RefinementOutcome> outcomes = load_outcomes(inv.input, &stats);
    std::vector<SupervisionRecord> supervision;
    if (!inv.supervision.empty()) supervision = load_supervision(inv.supervision);

    if (outcomes.empty()) {
        std::cerr << "warning: no outcome records in " << inv.input.string()
                  << "; all rates undefined\n";
    }
    if (stats.bad_lines > 0) {
        std::cerr << "warning: " << stats.bad_lines << " malformed lines in "
                  << inv.input.string() << "\n";
    }

    const EvaluationBundle bundle =
        evaluate_outcomes(inv.input.stem().string(), outcomes,
                          supervision.empty() ? nullptr : &supervision);

    ordered_json report;
    report["input"] = inv.input.filename().string();
    report["records"] = outcomes.size();
    report["bad_lines"] = stats.bad_lines;
    report["detection"] = detection_to_json(bundle.detection);
    report["refinement"] = refinement_to_json(bundle.refinement);
    const ordered_json confusions = confusions_to_json(bundle.verdicts, bundle.locations);
    report["verdict_confusion"] = confusions["verdict_confusion"];
    report["location_confusion"] = confusions["location_confusion"];

    {
        std::ofstream out = open_output(fs::path(inv.output.string() + ".json"));
        out << report.dump(2) << "\n";
    }
    {
        std::ofstream out = open_output(fs::path(inv.output.string() + ".txt"));
        out << render_tables({bundle});
    }
    write_confusion_csvs(inv.output, bundle);

    finish_manifest(manifest, fs::path(inv.output.string() + ".json"), stats.lines,
                    static_cast<long>(outcomes.size()), stats.bad_lines);

    const long threshold = inv.config.get_long("eval_bad_line_threshold");
    return stats.bad_lines > threshold ? 1 : 0;
}

// ===========================================================================
// simulate
// ===========================================================================

int cmd_simulate(const Invocation& inv) {
    const SimulatorOptions options = simulator_options_from_config(inv.config);
    const SupervisionConfig sup_config = SupervisionConfig::from_config(inv.config);
    const InterventionPolicy policy = policy_from_config(inv.config);

    RunManifest manifest = start_manifest("simulate", inv.config, {});

    const fs::path dir = inv.output;
    fs::create_directories(dir);

    const std::vector<SimulatedExample> population = make_population(options);
    const std::vector<Critique> critiques = simulate_critic(options, population);
    const std::vector<SupervisionRecord> supervision =
        reference_supervision(population, sup_config);
    const std::vector<ScriptEntry> generator_script =
        script_generator(options, population, critiques, policy);

    {
        std::ofstream out = open_output(dir / "dataset.jsonl");
        for (const SimulatedExample& example : population) {
            write_jsonl_line(out, qa_record_to_json(example.record));
        }
    }
    {
        std::ofstream out = open_output(dir / "critiques.jsonl");
        for (size_t i = 0; i < critiques.size(); ++i) {
            CritiqueRow row{population[i].record.id, critiques[i].raw_text};
            write_jsonl_line(out, critique_row_to_json(row));
        }
    }
    {
        std::ofstream out = open_output(dir / "supervision.jsonl");
        for (const SupervisionRecord& record : supervision) {
            write_jsonl_line(out, supervision_to_json(record));
        }
    }
    {
        std::ofstream out = open_output(dir / "generator_stub.jsonl");
        for (const ScriptEntry& entry : generator_script) {
            ordered_json doc;
            if (entry.response) doc["response"] = *entry.response;
            if (entry.status) doc["status"] = *entry.status;
            write_jsonl_line(out, doc);
        }
    }
    {
        std::unique_ptr<ModelEndpoint> generator = make_scripted_endpoint(generator_script);
        std::ofstream out = open_output(dir / "outcomes.jsonl");
        for (size_t i = 0; i < population.size(); ++i) {
            const QaRecord& record = population[i].record;
            const Trajectory traj = parse_trajectory(record.trajectory_text);
            const RefinementOutcome outcome = refine(record, traj, critiques[i], policy,
                                                     generator.get(), JudgeMode::substring);
            write_jsonl_line(out, outcome_to_json(outcome));
        }
    }

    finish_manifest(manifest, dir / "outcomes.jsonl", options.size, options.size, 0);
    return 0;
}

// ===========================================================================
// report
// ===========================================================================

int cmd_report(const Invocation& inv) {
    std::vector<SupervisionRecord> supervision;
    if (!inv.supervision.empty()) supervision = load_supervision(inv.supervision);

    std::vector<EvaluationBundle> bundles;
    for (const fs::path& input : inv.inputs) {
        const std::vector<RefinementOutcome> outcomes = load_outcomes(input);
        bundles.push_back(evaluate_outcomes(input.stem().string(), outcomes,
                                            supervision.empty() ? nullptr : &supervision));
    }

    const std::string text = render_tables(bundles);
    if (inv.output.empty()) {
        std::cout << text;
    } else {
        RunManifest manifest = start_manifest("report", inv.config, inv.inputs);
        std::ofstream out = open_output(inv.output);
        out << text;
        long records = 0;
        for (const EvaluationBundle& bundle : bundles) records += bundle.refinement.n;
        finish_manifest(manifest, inv.output, records, records, 0);
    }
    return 0;
}

}  // namespace ragcritic::cli
