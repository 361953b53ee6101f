#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ragcritic/config.hpp"

namespace ragcritic::cli {

/// Shared invocation state: resolved configuration plus the paths the
/// subcommand works on. Exit codes: 0 success, 1 partial record failures,
/// 2 configuration errors.
struct Invocation {
    Config config;
    std::filesystem::path input;
    std::vector<std::filesystem::path> inputs;  // report accepts several
    std::filesystem::path output;
    std::filesystem::path supervision;
    std::filesystem::path critiques;
    std::filesystem::path replay;
    std::filesystem::path generator_stub;
    std::filesystem::path transcripts;
};

int cmd_score(const Invocation& inv);
int cmd_annotate(const Invocation& inv);
int cmd_refine(const Invocation& inv);
int cmd_evaluate(const Invocation& inv);
int cmd_simulate(const Invocation& inv);
int cmd_report(const Invocation& inv);

}  // namespace ragcritic::cli
