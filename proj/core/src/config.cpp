#include "ragcritic/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>

#include "ragcritic/errors.hpp"
#include "ragcritic/manifest.hpp"
#include "ragcritic/text.hpp"

namespace ragcritic {

namespace {

const std::map<std::string, std::string>& default_values() {
    static const std::map<std::string, std::string> defaults = {
        // Reward shaping
        {"alpha_format", "0.1"},
        {"gamma_format", "1.0"},
        {"verdict_r_correct_correct", "0.7"},
        {"verdict_r_correct_incorrect", "-1.0"},
        {"verdict_r_correct_unsure", "-0.1"},
        {"verdict_r_incorrect_correct", "-0.3"},
        {"verdict_r_incorrect_incorrect", "0.5"},
        {"verdict_r_incorrect_unsure", "-0.1"},
        {"verdict_r_unsure_correct", "0.1"},
        {"verdict_r_unsure_incorrect", "-0.2"},
        {"verdict_r_unsure_unsure", "0.0"},
        {"lambda_type", "0.3"},
        {"lambda_index", "0.2"},
        {"reason_max", "0.5"},
        {"beta_reason", "2.0"},
        {"fix_alpha", "0.5"},
        {"fix_max", "0.5"},
        {"beta_fix", "2.0"},
        {"aux_penalty_per_violation", "-0.2"},
        {"aux_floor", "-0.5"},
        {"min_field_tokens", "5"},
        {"generic_phrases", "search again,try again,check the answer,be more careful"},
        // Group advantage
        {"advantage_epsilon", "1e-8"},
        {"advantage_sample_std", "false"},
        // Supervision construction
        {"k_samples", "5"},
        {"judge_temperature", "0.7"},
        {"quality_w_keyword", "1.0"},
        {"quality_w_reason", "1.0"},
        {"quality_w_fix", "1.0"},
        {"quality_w_location", "1.0"},
        {"keyword_limit", "8"},
        // Judge endpoint
        {"judge_base_url", ""},
        {"judge_model", ""},
        {"judge_top_p", "0.9"},
        {"judge_max_tokens", "1024"},
        {"judge_repetition_penalty", "1.1"},
        {"judge_timeout_seconds", "30"},
        {"judge_max_retries", "2"},
        {"judge_concurrency", "4"},
        // Generator endpoint
        {"gen_base_url", ""},
        {"gen_model", ""},
        {"gen_temperature", "0.7"},
        {"gen_top_p", "0.9"},
        {"gen_max_tokens", "1024"},
        {"gen_repetition_penalty", "1.1"},
        {"gen_timeout_seconds", "30"},
        {"gen_max_retries", "2"},
        {"gen_concurrency", "4"},
        // Embedding endpoint
        {"embed_base_url", ""},
        {"embed_model", ""},
        {"embed_timeout_seconds", "30"},
        {"embed_max_retries", "2"},
        {"embed_concurrency", "4"},
        // Refinement
        {"on_unsure", "keep"},
        {"judge_mode", "substring"},
        // Evaluation
        {"eval_bad_line_threshold", "0"},
        // Simulation
        {"sim_profile", "oracle"},
        {"sim_size", "1000"},
        {"sim_base_accuracy", "0.6"},
        {"sim_false_alarm", "0.1"},
        {"sim_miss_rate", "0.2"},
        {"sim_unsure_rate", "0.0"},
        {"sim_fix_success", "0.7"},
        {"sim_missing_answer_rate", "0.0"},
        // Run control
        {"seed", "0"},
        {"jobs", "0"},
        {"stage", "2"},
        {"group_size", "0"},
    };
    return defaults;
}

}  // namespace

Config Config::defaults() {
    Config config;
    config.values_ = default_values();
    return config;
}

void Config::load_file(const std::filesystem::path& path) {
    std::ifstream stream(path);
    if (!stream) throw ConfigError("cannot open config file: " + path.string());
    std::string line;
    long lineno = 0;
    while (std::getline(stream, line)) {
        ++lineno;
        std::string_view view = line;
        if (size_t hash = view.find('#'); hash != std::string_view::npos) {
            view = view.substr(0, hash);
        }
        view = trim(view);
        if (view.empty()) continue;
        size_t eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(lineno) +
                              " is not key=value: " + std::string(view));
        }
        const std::string key = std::string(trim(view.substr(0, eq)));
        if (key.empty()) {
            throw ConfigError("config line " + std::to_string(lineno) + " has empty key");
        }
        values_[key] = std::string(trim(view.substr(eq + 1)));
    }
}

void Config::apply_env() {
    for (auto& [key, value] : values_) {
        std::string env_name = "CRITIC_";
        for (char c : key) {
            env_name.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
        }
        if (const char* env = std::getenv(env_name.c_str())) {
            value = env;
        }
    }
}

void Config::set(std::string_view key, std::string_view value) {
    values_[std::string(key)] = std::string(value);
}

bool Config::has(std::string_view key) const {
    return values_.count(std::string(key)) > 0;
}

std::string Config::get_string(std::string_view key) const {
    auto it = values_.find(std::string(key));
    if (it == values_.end()) throw ConfigError("unknown config key: " + std::string(key));
    return it->second;
}

double Config::get_double(std::string_view key) const {
    const std::string value = get_string(key);
    try {
        size_t consumed = 0;
        double parsed = std::stod(value, &consumed);
        if (consumed != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError("config key " + std::string(key) + " is not a number: " + value);
    }
}

long Config::get_long(std::string_view key) const {
    const std::string value = get_string(key);
    try {
        size_t consumed = 0;
        long parsed = std::stol(value, &consumed);
        if (consumed != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw ConfigError("config key " + std::string(key) + " is not an integer: " + value);
    }
}

bool Config::get_bool(std::string_view key) const {
    const std::string value = to_lower_ascii(get_string(key));
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw ConfigError("config key " + std::string(key) + " is not a boolean: " + value);
}

std::vector<std::string> Config::get_list(std::string_view key) const {
    const std::string value = get_string(key);
    std::vector<std::string> items;
    size_t begin = 0;
    while (begin <= value.size()) {
        size_t comma = value.find(',', begin);
        if (comma == std::string::npos) comma = value.size();
        std::string_view item = trim(std::string_view(value).substr(begin, comma - begin));
        if (!item.empty()) items.emplace_back(item);
        begin = comma + 1;
    }
    return items;
}

std::string Config::canonical() const {
    std::string out;
    for (const auto& [key, value] : values_) {
        out += key;
        out.push_back('=');
        out += value;
        out.push_back('\n');
    }
    return out;
}

std::string Config::digest() const { return sha256_hex(canonical()); }

}  // namespace ragcritic
