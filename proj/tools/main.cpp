#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "ragcritic/errors.hpp"
#include "ragcritic/version.hpp"

namespace {

using ragcritic::cli::Invocation;

struct CommonFlags {
    std::string config_path;
    std::string input;
    std::string output;
    long seed = 0;
    bool seed_set = false;
    long jobs = 0;
    bool jobs_set = false;
};

/// Layered resolution: defaults < config file < CRITIC_* env < flags.
ragcritic::Config resolve_config(const std::string& config_path) {
    ragcritic::Config config = ragcritic::Config::defaults();
    if (!config_path.empty()) config.load_file(config_path);
    config.apply_env();
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Structured critique toolkit for RAG trajectories"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(ragcritic::kToolVersion));

    // score ------------------------------------------------------------------
    std::string sc_config, sc_input, sc_supervision, sc_output;
    long sc_stage = 0, sc_group = 0, sc_jobs = 0, sc_seed = 0;
    CLI::App* score = app.add_subcommand("score", "Compute gated critique rewards");
    score->add_option("--config", sc_config, "Config file (key=value)");
    score->add_option("--input", sc_input, "Critique JSONL (id, critique)")->required();
    score->add_option("--supervision", sc_supervision, "Supervision JSONL")->required();
    score->add_option("--output", sc_output, "Reward JSONL output")->required();
    CLI::Option* sc_stage_opt = score->add_option("--stage", sc_stage, "Reward stage (1 or 2)");
    CLI::Option* sc_group_opt =
        score->add_option("--group-size", sc_group, "Group consecutive critiques per id");
    CLI::Option* sc_jobs_opt = score->add_option("--jobs", sc_jobs, "Worker threads");
    CLI::Option* sc_seed_opt = score->add_option("--seed", sc_seed, "Run seed");

    // annotate ---------------------------------------------------------------
    std::string an_config, an_input, an_output, an_replay, an_transcripts;
    long an_jobs = 0, an_seed = 0, an_k = 0;
    CLI::App* annotate =
        app.add_subcommand("annotate", "Build consensus supervision from a judge");
    annotate->add_option("--config", an_config, "Config file (key=value)");
    annotate->add_option("--input", an_input, "QA dataset JSONL")->required();
    annotate->add_option("--output", an_output, "Supervision JSONL output")->required();
    annotate->add_option("--replay", an_replay, "Replay recorded judge transcripts");
    annotate->add_option("--transcripts", an_transcripts,
                         "Transcript sidecar path (default <output>.transcripts.jsonl)");
    CLI::Option* an_jobs_opt = annotate->add_option("--jobs", an_jobs, "Worker threads");
    CLI::Option* an_seed_opt = annotate->add_option("--seed", an_seed, "Run seed");
    CLI::Option* an_k_opt = annotate->add_option("--k-samples", an_k, "Judge samples per record");

    // refine -----------------------------------------------------------------
    std::string rf_config, rf_input, rf_critiques, rf_output, rf_stub, rf_mode, rf_unsure;
    long rf_jobs = 0, rf_seed = 0;
    CLI::App* refine = app.add_subcommand("refine", "Critique-gated answer refinement");
    refine->add_option("--config", rf_config, "Config file (key=value)");
    refine->add_option("--input", rf_input, "QA dataset JSONL")->required();
    refine->add_option("--critiques", rf_critiques, "Critique JSONL (id, critique)")->required();
    refine->add_option("--output", rf_output, "Outcome JSONL output")->required();
    refine->add_option("--generator-stub", rf_stub, "Scripted generator JSONL");
    CLI::Option* rf_mode_opt =
        refine->add_option("--judge-mode", rf_mode, "substring, exact, or llm");
    CLI::Option* rf_unsure_opt =
        refine->add_option("--on-unsure", rf_unsure, "keep or refine (default keep)");
    CLI::Option* rf_jobs_opt = refine->add_option("--jobs", rf_jobs, "Worker threads");
    CLI::Option* rf_seed_opt = refine->add_option("--seed", rf_seed, "Run seed");

    // evaluate ----------------------------------------------------------------
    std::string ev_config, ev_input, ev_supervision, ev_output;
    CLI::App* evaluate = app.add_subcommand("evaluate", "Behavioral metrics from outcomes");
    evaluate->add_option("--config", ev_config, "Config file (key=value)");
    evaluate->add_option("--input", ev_input, "Outcome JSONL")->required();
    evaluate->add_option("--supervision", ev_supervision,
                         "Supervision JSONL (enables location confusion)");
    evaluate->add_option("--output", ev_output, "Report prefix (.json/.txt/.csv)")->required();

    // simulate ----------------------------------------------------------------
    std::string sm_config, sm_output, sm_profile;
    long sm_seed = 0, sm_size = 0;
    double sm_accuracy = -1.0, sm_false_alarm = -1.0, sm_miss = -1.0, sm_unsure = -1.0;
    double sm_fix = -1.0, sm_missing = -1.0;
    CLI::App* simulate =
        app.add_subcommand("simulate", "Seeded synthetic population + scripted critic");
    simulate->add_option("--config", sm_config, "Config file (key=value)");
    simulate->add_option("--output", sm_output, "Output directory")->required();
    simulate->add_option("--seed", sm_seed, "Run seed (mandatory for reproducibility)")
        ->required();
    CLI::Option* sm_size_opt = simulate->add_option("--size", sm_size, "Population size");
    CLI::Option* sm_profile_opt = simulate->add_option(
        "--profile", sm_profile, "aggressive, conservative, oracle, or random");
    CLI::Option* sm_acc_opt =
        simulate->add_option("--base-accuracy", sm_accuracy, "P(initial answer correct)");
    CLI::Option* sm_fa_opt =
        simulate->add_option("--false-alarm", sm_false_alarm, "P(flag correct as INCORRECT)");
    CLI::Option* sm_miss_opt =
        simulate->add_option("--miss-rate", sm_miss, "P(call a wrong answer CORRECT)");
    CLI::Option* sm_unsure_opt =
        simulate->add_option("--unsure-rate", sm_unsure, "Conservative abstention rate");
    CLI::Option* sm_fix_opt =
        simulate->add_option("--fix-success", sm_fix, "P(generator fixes a triggered record)");
    CLI::Option* sm_missing_opt = simulate->add_option(
        "--missing-answer-rate", sm_missing, "P(generator response lacks an answer span)");

    // report ------------------------------------------------------------------
    std::string rp_config, rp_supervision, rp_output;
    std::vector<std::string> rp_inputs;
    CLI::App* report = app.add_subcommand("report", "Render metric tables from outcome files");
    report->add_option("--config", rp_config, "Config file (key=value)");
    report->add_option("--input", rp_inputs, "Outcome JSONL (repeatable)")->required();
    report->add_option("--supervision", rp_supervision, "Supervision JSONL");
    report->add_option("--output", rp_output, "Write tables here instead of stdout");

    try {
        app.parse(argc, argv);

        Invocation inv;
        if (score->parsed()) {
            inv.config = resolve_config(sc_config);
            if (*sc_stage_opt) inv.config.set("stage", std::to_string(sc_stage));
            if (*sc_group_opt) inv.config.set("group_size", std::to_string(sc_group));
            if (*sc_jobs_opt) inv.config.set("jobs", std::to_string(sc_jobs));
            if (*sc_seed_opt) inv.config.set("seed", std::to_string(sc_seed));
            inv.input = sc_input;
            inv.supervision = sc_supervision;
            inv.output = sc_output;
            return ragcritic::cli::cmd_score(inv);
        }
        if (annotate->parsed()) {
            inv.config = resolve_config(an_config);
            if (*an_jobs_opt) inv.config.set("jobs", std::to_string(an_jobs));
            if (*an_seed_opt) inv.config.set("seed", std::to_string(an_seed));
            if (*an_k_opt) inv.config.set("k_samples", std::to_string(an_k));
            inv.input = an_input;
            inv.output = an_output;
            inv.replay = an_replay;
            inv.transcripts = an_transcripts;
            return ragcritic::cli::cmd_annotate(inv);
        }
        if (refine->parsed()) {
            inv.config = resolve_config(rf_config);
            if (*rf_mode_opt) inv.config.set("judge_mode", rf_mode);
            if (*rf_unsure_opt) inv.config.set("on_unsure", rf_unsure);
            if (*rf_jobs_opt) inv.config.set("jobs", std::to_string(rf_jobs));
            if (*rf_seed_opt) inv.config.set("seed", std::to_string(rf_seed));
            inv.input = rf_input;
            inv.critiques = rf_critiques;
            inv.output = rf_output;
            inv.generator_stub = rf_stub;
            return ragcritic::cli::cmd_refine(inv);
        }
        if (evaluate->parsed()) {
            inv.config = resolve_config(ev_config);
            inv.input = ev_input;
            inv.supervision = ev_supervision;
            inv.output = ev_output;
            return ragcritic::cli::cmd_evaluate(inv);
        }
        if (simulate->parsed()) {
            inv.config = resolve_config(sm_config);
            inv.config.set("seed", std::to_string(sm_seed));
            if (*sm_size_opt) inv.config.set("sim_size", std::to_string(sm_size));
            if (*sm_profile_opt) inv.config.set("sim_profile", sm_profile);
            if (*sm_acc_opt) inv.config.set("sim_base_accuracy", std::to_string(sm_accuracy));
            if (*sm_fa_opt) inv.config.set("sim_false_alarm", std::to_string(sm_false_alarm));
            if (*sm_miss_opt) inv.config.set("sim_miss_rate", std::to_string(sm_miss));
            if (*sm_unsure_opt) inv.config.set("sim_unsure_rate", std::to_string(sm_unsure));
            if (*sm_fix_opt) inv.config.set("sim_fix_success", std::to_string(sm_fix));
            if (*sm_missing_opt) {
                inv.config.set("sim_missing_answer_rate", std::to_string(sm_missing));
            }
            inv.output = sm_output;
            return ragcritic::cli::cmd_simulate(inv);
        }
        if (report->parsed()) {
            inv.config = resolve_config(rp_config);
            for (const std::string& path : rp_inputs) inv.inputs.emplace_back(path);
            inv.supervision = rp_supervision;
            inv.output = rp_output;
            return ragcritic::cli::cmd_report(inv);
        }
        return 2;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        app.exit(e);
        return 2;
    } catch (const ragcritic::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
