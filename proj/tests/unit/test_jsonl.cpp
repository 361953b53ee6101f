#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "ragcritic/errors.hpp"
#include "ragcritic/jsonl.hpp"

using namespace ragcritic;

TEST_CASE("qa records parse the documented fields and ignore unknowns") {
    const auto doc = nlohmann::json::parse(
        R"({"id":"q7","question":"who?","golden_answers":["a","b"],)"
        R"("trajectory":"<answer>a</answer>","extra_field":42})");
    const QaRecord record = qa_record_from_json(doc);
    CHECK(record.id == "q7");
    CHECK(record.question == "who?");
    CHECK(record.gold_answers == std::vector<std::string>{"a", "b"});
    CHECK(record.trajectory_text == "<answer>a</answer>");
}

TEST_CASE("supervision records round-trip through JSON") {
    SupervisionRecord record;
    record.id = "s1";
    record.verdict = Verdict::incorrect;
    record.location = ErrorLocation{StepKind::information, 4};
    record.reason = "documented conflict";
    record.fix = "use the anchor from document four";
    record.keywords = {"anchor", "registry"};
    record.consensus_size = 3;
    record.quality_score = 2.5;
    Critique sample;
    sample.verdict = Verdict::incorrect;
    sample.reason = "r";
    sample.fix = "f words here";
    sample.raw_text = serialize_critique(sample);
    sample.format_valid = true;
    record.judge_samples = {sample};

    const auto doc = supervision_to_json(record);
    const SupervisionRecord loaded = supervision_from_json(doc);
    CHECK(loaded.id == record.id);
    CHECK(loaded.verdict == record.verdict);
    CHECK(loaded.location == record.location);
    CHECK(loaded.reason == record.reason);
    CHECK(loaded.fix == record.fix);
    CHECK(loaded.keywords == record.keywords);
    CHECK(loaded.consensus_size == record.consensus_size);
    REQUIRE(loaded.judge_samples.size() == 1);
    CHECK(loaded.judge_samples[0].raw_text == sample.raw_text);
}

TEST_CASE("outcome records round-trip through JSON") {
    RefinementOutcome outcome;
    outcome.id = "o1";
    outcome.initial_answer = "london";
    outcome.initial_correct = false;
    outcome.verdict = Verdict::incorrect;
    outcome.location = ErrorLocation{StepKind::answer, std::nullopt};
    outcome.triggered = true;
    outcome.final_answer = "paris";
    outcome.final_correct = true;
    outcome.fallback_used = false;

    const RefinementOutcome loaded = outcome_from_json(outcome_to_json(outcome));
    CHECK(loaded.id == outcome.id);
    CHECK(loaded.initial_answer == outcome.initial_answer);
    CHECK(loaded.initial_correct == outcome.initial_correct);
    CHECK(loaded.verdict == outcome.verdict);
    CHECK(loaded.location == outcome.location);
    CHECK(loaded.triggered == outcome.triggered);
    CHECK(loaded.final_answer == outcome.final_answer);
    CHECK(loaded.final_correct == outcome.final_correct);
    CHECK(loaded.fallback_used == outcome.fallback_used);
}

TEST_CASE("read_jsonl counts malformed lines without aborting") {
    const std::string path = "test_jsonl_bad.jsonl";
    {
        std::ofstream out(path);
        out << R"({"id": "ok1"})" << "\n";
        out << "this is not json\n";
        out << "\n";
        out << R"({"id": "ok2"})" << "\n";
        out << R"([1, 2, 3])" << "\n";  // not an object
    }
    long seen = 0;
    const JsonlReadStats stats =
        read_jsonl(path, [&](nlohmann::json&&, long) { ++seen; });
    CHECK(seen == 2);
    CHECK(stats.lines == 4);
    CHECK(stats.bad_lines == 2);
    std::remove(path.c_str());
}

TEST_CASE("missing required fields raise protocol errors") {
    const auto doc = nlohmann::json::parse(R"({"question": "no id"})");
    CHECK_THROWS_AS(qa_record_from_json(doc), ProtocolError);
}
