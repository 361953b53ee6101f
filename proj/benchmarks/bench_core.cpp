#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "ragcritic/advantage.hpp"
#include "ragcritic/critique.hpp"
#include "ragcritic/reward.hpp"
#include "ragcritic/trajectory.hpp"

namespace {

using namespace ragcritic;

std::string sample_trajectory() {
    return "<think>the question asks which landmark anchors study region 7 so the "
           "registry should be consulted</think>"
           "<search>landmark anchoring study region 7</search>"
           "<information>Doc 1: survey notes for region 7 mention several candidate "
           "sites. Doc 2: the registry lists landmark7 as the anchor of study region 7. "
           "Doc 3: unrelated trivia about region 8. Doc 4: more candidate notes. "
           "Doc 5: closing remarks about the survey.</information>"
           "<answer>landmark7</answer>";
}

std::string sample_critique() {
    return "<verdict> INCORRECT </verdict> <location> information:Doc2 </location> "
           "<reason> the answer conflicts with doc 2 which names landmark7 as the "
           "anchor of region 7 </reason> "
           "<fix> re-read doc 2 and answer with the anchor landmark7 named for "
           "region 7 </fix>";
}

SupervisionRecord sample_reference() {
    SupervisionRecord reference;
    reference.id = "bench";
    reference.verdict = Verdict::incorrect;
    reference.location = ErrorLocation{StepKind::information, 2};
    reference.reason = "the answer conflicts with doc 2 which names landmark7 as the anchor";
    reference.fix = "re-read doc 2 and answer with the anchor landmark7";
    reference.keywords = {"landmark7", "doc", "anchor"};
    return reference;
}

void BM_ParseTrajectory(benchmark::State& state) {
    const std::string raw = sample_trajectory();
    for (auto _ : state) {
        benchmark::DoNotOptimize(parse_trajectory(raw));
    }
}
BENCHMARK(BM_ParseTrajectory);

void BM_ValidateFormat(benchmark::State& state) {
    const std::string raw = sample_critique();
    for (auto _ : state) {
        benchmark::DoNotOptimize(validate_format(raw));
    }
}
BENCHMARK(BM_ValidateFormat);

void BM_ParseCritiqueStrict(benchmark::State& state) {
    const std::string raw = sample_critique();
    for (auto _ : state) {
        benchmark::DoNotOptimize(parse_critique(raw, ParseMode::strict));
    }
}
BENCHMARK(BM_ParseCritiqueStrict);

void BM_TokenF1(benchmark::State& state) {
    const std::string pred =
        "the registry lists landmark7 as the anchor of study region 7 per doc 2";
    const std::string ref =
        "doc 2 names landmark7 as the anchor of region 7 in the registry";
    for (auto _ : state) {
        benchmark::DoNotOptimize(token_f1(pred, ref));
    }
}
BENCHMARK(BM_TokenF1);

void BM_ComputeRewardStage2(benchmark::State& state) {
    const RewardConfig config;
    const Critique critique = parse_critique(sample_critique(), ParseMode::strict);
    const SupervisionRecord reference = sample_reference();
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_reward(critique, reference, 2, config));
    }
}
BENCHMARK(BM_ComputeRewardStage2);

void BM_ComputeAdvantages(benchmark::State& state) {
    std::mt19937_64 rng(1);
    RewardGroup group;
    for (int i = 0; i < 8; ++i) {
        group.rewards.push_back(static_cast<double>(rng() >> 11) * 0x1.0p-53);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_advantages(group));
    }
}
BENCHMARK(BM_ComputeAdvantages);

}  // namespace

BENCHMARK_MAIN();
