#include "ragcritic/jsonl.hpp"

#include <fstream>

#include "ragcritic/errors.hpp"
#include "ragcritic/text.hpp"

namespace ragcritic {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

json require(const json& doc, const char* field) {
    if (!doc.contains(field)) {
        throw ProtocolError(std::string("record missing field: ") + field);
    }
    return doc.at(field);
}

std::optional<ErrorLocation> location_from_json(const json& doc, const char* field) {
    if (!doc.contains(field) || doc.at(field).is_null()) return std::nullopt;
    return parse_location(doc.at(field).get<std::string>());
}

template <typename T, typename Fn>
std::vector<T> load_rows(const std::filesystem::path& path, JsonlReadStats* stats, Fn&& parse) {
    std::vector<T> rows;
    JsonlReadStats local = read_jsonl(path, [&](json&& doc, long) {
        rows.push_back(parse(doc));
    });
    if (stats != nullptr) *stats = local;
    return rows;
}

}  // namespace

JsonlReadStats read_jsonl(const std::filesystem::path& path,
                          const std::function<void(json&&, long)>& on_record) {
    std::ifstream stream(path);
    if (!stream) throw ConfigError("cannot open input file: " + path.string());
    JsonlReadStats stats;
    std::string line;
    long lineno = 0;
    while (std::getline(stream, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        ++stats.lines;
        json doc = json::parse(line, nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) {
            ++stats.bad_lines;
            continue;
        }
        on_record(std::move(doc), lineno);
    }
    return stats;
}

void write_jsonl_line(std::ostream& stream, const ordered_json& record) {
    stream << record.dump() << "\n";
}

// ---------------------------------------------------------------------------
// QaRecord
// ---------------------------------------------------------------------------

QaRecord qa_record_from_json(const json& doc) {
    QaRecord record;
    record.id = require(doc, "id").get<std::string>();
    record.question = doc.value("question", std::string());
    if (doc.contains("golden_answers")) {
        record.gold_answers = doc.at("golden_answers").get<std::vector<std::string>>();
    }
    record.trajectory_text = doc.value("trajectory", std::string());
    return record;
}

ordered_json qa_record_to_json(const QaRecord& record) {
    ordered_json doc;
    doc["id"] = record.id;
    doc["question"] = record.question;
    doc["golden_answers"] = record.gold_answers;
    doc["trajectory"] = record.trajectory_text;
    return doc;
}

std::vector<QaRecord> load_qa_records(const std::filesystem::path& path, JsonlReadStats* stats) {
    return load_rows<QaRecord>(path, stats, [](const json& doc) { return qa_record_from_json(doc); });
}

// ---------------------------------------------------------------------------
// Critique rows
// ---------------------------------------------------------------------------

CritiqueRow critique_row_from_json(const json& doc) {
    CritiqueRow row;
    row.id = require(doc, "id").get<std::string>();
    row.critique = require(doc, "critique").get<std::string>();
    return row;
}

ordered_json critique_row_to_json(const CritiqueRow& row) {
    ordered_json doc;
    doc["id"] = row.id;
    doc["critique"] = row.critique;
    return doc;
}

std::vector<CritiqueRow> load_critique_rows(const std::filesystem::path& path,
                                            JsonlReadStats* stats) {
    return load_rows<CritiqueRow>(path, stats,
                                  [](const json& doc) { return critique_row_from_json(doc); });
}

// ---------------------------------------------------------------------------
// SupervisionRecord
// ---------------------------------------------------------------------------

SupervisionRecord supervision_from_json(const json& doc) {
    SupervisionRecord record;
    record.id = require(doc, "id").get<std::string>();
    if (auto verdict = parse_verdict(require(doc, "verdict").get<std::string>())) {
        record.verdict = *verdict;
    }
    record.location = location_from_json(doc, "location");
    record.reason = doc.value("reason", std::string());
    record.fix = doc.value("fix", std::string());
    if (doc.contains("keywords")) {
        record.keywords = doc.at("keywords").get<std::vector<std::string>>();
    }
    record.consensus_size = doc.value("consensus_size", 0);
    record.quality_score = doc.value("quality_score", 0.0);
    if (doc.contains("judge_samples")) {
        for (const json& raw : doc.at("judge_samples")) {
            record.judge_samples.push_back(
                parse_critique(raw.get<std::string>(), ParseMode::recovery));
        }
    }
    return record;
}

ordered_json supervision_to_json(const SupervisionRecord& record) {
    ordered_json doc;
    doc["id"] = record.id;
    doc["verdict"] = std::string(verdict_name(record.verdict));
    doc["location"] =
        record.location ? ordered_json(serialize_location(*record.location)) : ordered_json(nullptr);
    doc["reason"] = record.reason;
    doc["fix"] = record.fix;
    doc["keywords"] = record.keywords;
    doc["consensus_size"] = record.consensus_size;
    doc["quality_score"] = record.quality_score;
    ordered_json samples = ordered_json::array();
    for (const Critique& sample : record.judge_samples) samples.push_back(sample.raw_text);
    doc["judge_samples"] = samples;
    return doc;
}

std::vector<SupervisionRecord> load_supervision(const std::filesystem::path& path,
                                                JsonlReadStats* stats) {
    return load_rows<SupervisionRecord>(
        path, stats, [](const json& doc) { return supervision_from_json(doc); });
}

// ---------------------------------------------------------------------------
// RefinementOutcome
// ---------------------------------------------------------------------------

RefinementOutcome outcome_from_json(const json& doc) {
    RefinementOutcome outcome;
    outcome.id = require(doc, "id").get<std::string>();
    outcome.initial_answer = doc.value("initial_answer", std::string());
    outcome.initial_correct = require(doc, "initial_correct").get<bool>();
    if (auto verdict = parse_verdict(require(doc, "verdict").get<std::string>())) {
        outcome.verdict = *verdict;
    }
    outcome.location = location_from_json(doc, "location");
    outcome.triggered = require(doc, "triggered").get<bool>();
    outcome.final_answer = doc.value("final_answer", std::string());
    outcome.final_correct = require(doc, "final_correct").get<bool>();
    outcome.fallback_used = doc.value("fallback_used", false);
    return outcome;
}

ordered_json outcome_to_json(const RefinementOutcome& outcome) {
    ordered_json doc;
    doc["id"] = outcome.id;
    doc["initial_answer"] = outcome.initial_answer;
    doc["initial_correct"] = outcome.initial_correct;
    doc["verdict"] = std::string(verdict_name(outcome.verdict));
    doc["location"] = outcome.location ? ordered_json(serialize_location(*outcome.location))
                                       : ordered_json(nullptr);
    doc["triggered"] = outcome.triggered;
    doc["final_answer"] = outcome.final_answer;
    doc["final_correct"] = outcome.final_correct;
    doc["fallback_used"] = outcome.fallback_used;
    return doc;
}

std::vector<RefinementOutcome> load_outcomes(const std::filesystem::path& path,
                                             JsonlReadStats* stats) {
    return load_rows<RefinementOutcome>(
        path, stats, [](const json& doc) { return outcome_from_json(doc); });
}

// ---------------------------------------------------------------------------
// Judge transcripts
// ---------------------------------------------------------------------------

TranscriptRow transcript_row_from_json(const json& doc) {
    TranscriptRow row;
    row.id = require(doc, "id").get<std::string>();
    row.sample = require(doc, "sample").get<int>();
    row.response = require(doc, "response").get<std::string>();
    return row;
}

ordered_json transcript_row_to_json(const TranscriptRow& row) {
    ordered_json doc;
    doc["id"] = row.id;
    doc["sample"] = row.sample;
    doc["response"] = row.response;
    return doc;
}

std::vector<TranscriptRow> load_transcripts(const std::filesystem::path& path,
                                            JsonlReadStats* stats) {
    return load_rows<TranscriptRow>(
        path, stats, [](const json& doc) { return transcript_row_from_json(doc); });
}

}  // namespace ragcritic
