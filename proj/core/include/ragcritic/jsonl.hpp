#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ragcritic/refinement.hpp"
#include "ragcritic/supervision.hpp"
#include "ragcritic/trajectory.hpp"

namespace ragcritic {

struct JsonlReadStats {
    long lines = 0;      // non-blank lines seen
    long bad_lines = 0;  // lines that failed to parse as JSON objects
};

/// Stream a JSON-lines file. Blank lines are skipped; unparseable lines are
/// counted but do not abort the read.
JsonlReadStats read_jsonl(const std::filesystem::path& path,
                          const std::function<void(nlohmann::json&&, long)>& on_record);

void write_jsonl_line(std::ostream& stream, const nlohmann::ordered_json& record);

// ---------------------------------------------------------------------------
// Record schemas
// ---------------------------------------------------------------------------

/// Dataset rows: {"id", "question", "golden_answers": [...], "trajectory"}.
/// Unknown fields are ignored.
QaRecord qa_record_from_json(const nlohmann::json& doc);
nlohmann::ordered_json qa_record_to_json(const QaRecord& record);
std::vector<QaRecord> load_qa_records(const std::filesystem::path& path,
                                      JsonlReadStats* stats = nullptr);

/// Critique rows: {"id", "critique"}.
struct CritiqueRow {
    std::string id;
    std::string critique;
};
CritiqueRow critique_row_from_json(const nlohmann::json& doc);
nlohmann::ordered_json critique_row_to_json(const CritiqueRow& row);
std::vector<CritiqueRow> load_critique_rows(const std::filesystem::path& path,
                                            JsonlReadStats* stats = nullptr);

SupervisionRecord supervision_from_json(const nlohmann::json& doc);
nlohmann::ordered_json supervision_to_json(const SupervisionRecord& record);
std::vector<SupervisionRecord> load_supervision(const std::filesystem::path& path,
                                                JsonlReadStats* stats = nullptr);

RefinementOutcome outcome_from_json(const nlohmann::json& doc);
nlohmann::ordered_json outcome_to_json(const RefinementOutcome& outcome);
std::vector<RefinementOutcome> load_outcomes(const std::filesystem::path& path,
                                             JsonlReadStats* stats = nullptr);

/// Judge transcript sidecar rows: {"id", "sample", "response"}.
struct TranscriptRow {
    std::string id;
    int sample = 0;
    std::string response;
};
TranscriptRow transcript_row_from_json(const nlohmann::json& doc);
nlohmann::ordered_json transcript_row_to_json(const TranscriptRow& row);
std::vector<TranscriptRow> load_transcripts(const std::filesystem::path& path,
                                            JsonlReadStats* stats = nullptr);

}  // namespace ragcritic
