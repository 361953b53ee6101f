#include <doctest.h>

#include "ragcritic/errors.hpp"
#include "ragcritic/refinement.hpp"

using namespace ragcritic;

namespace {

QaRecord paris_record() {
    QaRecord record;
    record.id = "r1";
    record.question = "Where is the Eiffel Tower?";
    record.gold_answers = {"Paris"};
    record.trajectory_text =
        "<think>the landmark is famous</think>"
        "<information>Doc 1: The Eiffel Tower stands in Paris.</information>"
        "<answer>London</answer>";
    return record;
}

Critique incorrect_critique() {
    Critique critique;
    critique.verdict = Verdict::incorrect;
    critique.location = ErrorLocation{StepKind::answer, std::nullopt};
    critique.reason = "the answer contradicts the retrieved passage about the tower";
    critique.fix = "answer with the city named in document one";
    critique.format_valid = true;
    return critique;
}

ScriptEntry text_entry(std::string response) {
    ScriptEntry entry;
    entry.response = std::move(response);
    return entry;
}

}  // namespace

TEST_CASE("intervention decisions") {
    const InterventionPolicy keep_policy;
    CHECK_FALSE(decide_intervention(Verdict::correct, keep_policy));
    CHECK(decide_intervention(Verdict::incorrect, keep_policy));
    CHECK_FALSE(decide_intervention(Verdict::unsure, keep_policy));

    const InterventionPolicy refine_policy{UnsureAction::refine};
    CHECK(decide_intervention(Verdict::unsure, refine_policy));
    CHECK_FALSE(decide_intervention(Verdict::correct, refine_policy));
}

TEST_CASE("judge_answer offline modes normalize before comparing") {
    const std::vector<std::string> gold = {"Eiffel Tower"};
    const std::vector<std::string> london = {"London"};
    const std::vector<std::string> x = {"x"};
    CHECK(judge_answer("the Eiffel Tower", gold, JudgeMode::substring));
    CHECK(judge_answer("The  EIFFEL tower!", gold, JudgeMode::exact));
    CHECK_FALSE(judge_answer("Paris", london, JudgeMode::exact));
    CHECK_FALSE(judge_answer("Paris", london, JudgeMode::substring));
    CHECK_FALSE(judge_answer("", x, JudgeMode::substring));
    CHECK_FALSE(judge_answer("", x, JudgeMode::exact));
    CHECK(judge_answer("It is the Eiffel Tower in Paris", gold, JudgeMode::substring));
}

TEST_CASE("judge_answer llm mode asks the endpoint") {
    const std::vector<std::string> paris = {"Paris"};
    auto yes = make_scripted_endpoint({text_entry("Yes, it matches.")});
    CHECK(judge_answer("Paris", paris, JudgeMode::llm, yes.get()));
    auto no = make_scripted_endpoint({text_entry("no")});
    CHECK_FALSE(judge_answer("London", paris, JudgeMode::llm, no.get()));
    CHECK_THROWS_AS(judge_answer("x", paris, JudgeMode::llm, nullptr), ConfigError);
}

TEST_CASE("refinement prompt carries the full contract") {
    const QaRecord record = paris_record();
    const Trajectory traj = parse_trajectory(record.trajectory_text);
    const std::string prompt = build_refinement_prompt(record, traj, incorrect_critique());

    CHECK(prompt.find(record.question) != std::string::npos);
    CHECK(prompt.find(record.trajectory_text) != std::string::npos);
    CHECK(prompt.find("<verdict> INCORRECT </verdict>") != std::string::npos);
    for (std::string_view rule : refinement_rule_lines()) {
        CHECK(prompt.find(rule) != std::string::npos);
    }
    CHECK(prompt.find("Use the critique only as a hint") != std::string::npos);
    const std::string last_line =
        "- You MUST end with exactly one final answer inside <answer> and </answer>.";
    CHECK(prompt.rfind(last_line) == prompt.size() - last_line.size());
}

TEST_CASE("correct verdicts never touch the generator") {
    const QaRecord record = paris_record();
    const Trajectory traj = parse_trajectory(record.trajectory_text);
    Critique critique = incorrect_critique();
    critique.verdict = Verdict::correct;
    critique.location.reset();
    // Empty script: any generator call would throw ProtocolError.
    auto generator = make_scripted_endpoint({});
    const RefinementOutcome outcome = refine(record, traj, critique, {}, generator.get(),
                                             JudgeMode::substring);
    CHECK_FALSE(outcome.triggered);
    CHECK(outcome.final_answer == outcome.initial_answer);
    CHECK(outcome.final_correct == outcome.initial_correct);
    CHECK_FALSE(outcome.fallback_used);
}

TEST_CASE("triggered refinement extracts the last answer span") {
    const QaRecord record = paris_record();
    const Trajectory traj = parse_trajectory(record.trajectory_text);
    auto generator = make_scripted_endpoint(
        {text_entry("<think>checking doc 1 again</think><answer>Paris</answer>")});
    const RefinementOutcome outcome = refine(record, traj, incorrect_critique(), {},
                                             generator.get(), JudgeMode::substring);
    CHECK(outcome.triggered);
    CHECK(outcome.initial_answer == "London");
    CHECK_FALSE(outcome.initial_correct);
    CHECK(outcome.final_answer == "Paris");
    CHECK(outcome.final_correct);
    CHECK_FALSE(outcome.fallback_used);
}

TEST_CASE("missing answer span falls back to the initial answer") {
    const QaRecord record = paris_record();
    const Trajectory traj = parse_trajectory(record.trajectory_text);
    auto generator = make_scripted_endpoint(
        {text_entry("I believe the passage needs another look before answering.")});
    const RefinementOutcome outcome = refine(record, traj, incorrect_critique(), {},
                                             generator.get(), JudgeMode::substring);
    CHECK(outcome.triggered);
    CHECK(outcome.fallback_used);
    CHECK(outcome.final_answer == outcome.initial_answer);
    CHECK(outcome.final_correct == outcome.initial_correct);
}

TEST_CASE("invalid-format critiques are treated as abstentions") {
    const QaRecord record = paris_record();
    const Trajectory traj = parse_trajectory(record.trajectory_text);
    Critique invalid = incorrect_critique();
    invalid.format_valid = false;
    auto generator = make_scripted_endpoint({});
    const RefinementOutcome outcome =
        refine(record, traj, invalid, {}, generator.get(), JudgeMode::substring);
    CHECK(outcome.verdict == Verdict::unsure);
    CHECK_FALSE(outcome.triggered);
    CHECK(outcome.final_answer == outcome.initial_answer);
}

TEST_CASE("triggered refinement without a generator is a configuration error") {
    const QaRecord record = paris_record();
    const Trajectory traj = parse_trajectory(record.trajectory_text);
    CHECK_THROWS_AS(
        refine(record, traj, incorrect_critique(), {}, nullptr, JudgeMode::substring),
        ConfigError);
}
