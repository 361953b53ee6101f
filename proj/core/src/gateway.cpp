#include "ragcritic/gateway.hpp"

#include <cctype>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <random>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "ragcritic/config.hpp"
#include "ragcritic/errors.hpp"
#include "ragcritic/text.hpp"

namespace ragcritic {

namespace {

using nlohmann::json;

/// Bounds the number of in-flight requests per endpoint.
class ConcurrencyGate {
public:
    explicit ConcurrencyGate(int cap) : cap_(cap > 0 ? cap : 1) {}

    void acquire() {
        std::unique_lock lock(mutex_);
        cv_.wait(lock, [&] { return in_flight_ < cap_; });
        ++in_flight_;
    }

    void release() {
        {
            std::lock_guard lock(mutex_);
            --in_flight_;
        }
        cv_.notify_one();
    }

private:
    std::mutex mutex_;
    std::condition_variable cv_;
    int cap_;
    int in_flight_ = 0;
};

struct GateScope {
    explicit GateScope(ConcurrencyGate& gate) : gate_(gate) { gate_.acquire(); }
    ~GateScope() { gate_.release(); }
    ConcurrencyGate& gate_;
};

/// One transport attempt: either a body or a retryable/permanent status.
struct AttemptResult {
    std::optional<std::string> body;
    int status = 0;        // 0 = transport-level failure with no HTTP status
    std::string detail;
};

bool is_permanent(int status) { return status >= 400 && status < 500; }

/// Shared retry loop. `attempt` performs one transport round-trip.
template <typename Fn>
std::pair<std::string, int> run_with_retries(const EndpointConfig& config, Fn&& attempt,
                                             std::mt19937_64& jitter_rng) {
    const int total_attempts = config.max_retries + 1;
    int last_status = 0;
    std::string last_detail;
    for (int i = 0; i < total_attempts; ++i) {
        if (i > 0 && config.backoff_base_seconds > 0.0) {
            const double base = config.backoff_base_seconds * static_cast<double>(1 << (i - 1));
            const double jitter =
                0.25 * base * ((jitter_rng() >> 11) * 0x1.0p-53);
            std::this_thread::sleep_for(
                std::chrono::duration<double>(base + jitter));
        }
        AttemptResult result = attempt();
        if (result.body) return {std::move(*result.body), i + 1};
        if (is_permanent(result.status)) {
            throw ConfigError("endpoint rejected request (status " +
                              std::to_string(result.status) + "): " + result.detail);
        }
        last_status = result.status;
        last_detail = result.detail;
    }
    throw TransportError("endpoint failed after " + std::to_string(total_attempts) +
                             " attempts (last status " + std::to_string(last_status) +
                             "): " + last_detail,
                         last_status);
}

// ===========================================================================
// HTTP endpoint
// ===========================================================================

class HttpEndpoint final : public ModelEndpoint {
public:
    explicit HttpEndpoint(EndpointConfig config)
        : config_(std::move(config)),
          gate_(config_.request_concurrency),
          jitter_rng_(std::random_device{}()) {
        if (config_.base_url.empty()) {
            throw ConfigError("endpoint base_url is empty");
        }
        split_url(config_.base_url, host_, path_prefix_);
    }

    ChatExchange complete(const std::string& system_prompt,
                          const std::string& user_prompt) override {
        GateScope scope(gate_);
        json body;
        body["model"] = config_.model_name;
        body["messages"] = json::array({{{"role", "system"}, {"content", system_prompt}},
                                        {{"role", "user"}, {"content", user_prompt}}});
        body["temperature"] = config_.temperature;
        body["top_p"] = config_.top_p;
        body["max_tokens"] = config_.max_tokens;
        body["repetition_penalty"] = config_.repetition_penalty;

        const auto start = std::chrono::steady_clock::now();
        auto [response, attempts] = run_with_retries(
            config_, [&] { return post_json("/chat/completions", body.dump()); },
            jitter_rng_);

        ChatExchange exchange;
        exchange.system_prompt = system_prompt;
        exchange.user_prompt = user_prompt;
        exchange.response_text = extract_message(response);
        exchange.attempt_count = attempts;
        exchange.latency_ms = std::chrono::duration<double, std::milli>(
                                  std::chrono::steady_clock::now() - start)
                                  .count();
        return exchange;
    }

    std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override {
        if (texts.empty()) return {};
        GateScope scope(gate_);
        json body;
        body["model"] = config_.model_name;
        body["input"] = texts;

        auto [response, attempts] = run_with_retries(
            config_, [&] { return post_json("/embeddings", body.dump()); }, jitter_rng_);
        (void)attempts;
        return extract_embeddings(response, texts.size());
    }

private:
    static void split_url(const std::string& url, std::string& host, std::string& prefix) {
        const std::string_view schemes[] = {"http://", "https://"};
        size_t host_begin = std::string::npos;
        for (std::string_view scheme : schemes) {
            if (url.rfind(scheme, 0) == 0) {
                host_begin = scheme.size();
                break;
            }
        }
        if (host_begin == std::string::npos) {
            throw ConfigError("endpoint base_url must start with http:// or https://: " + url);
        }
        size_t path_begin = url.find('/', host_begin);
        if (path_begin == std::string::npos) {
            host = url;
            prefix.clear();
        } else {
            host = url.substr(0, path_begin);
            prefix = url.substr(path_begin);
            while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
        }
    }

    AttemptResult post_json(const std::string& route, const std::string& payload) {
        httplib::Client client(host_);
        client.set_connection_timeout(std::chrono::duration<double>(config_.timeout_seconds));
        client.set_read_timeout(std::chrono::duration<double>(config_.timeout_seconds));
        httplib::Headers headers;
        if (!config_.api_key.empty()) {
            headers.emplace("Authorization", "Bearer " + config_.api_key);
        }
        auto result = client.Post(path_prefix_ + route, headers, payload, "application/json");
        AttemptResult attempt;
        if (!result) {
            attempt.detail = httplib::to_string(result.error());
            return attempt;
        }
        attempt.status = result->status;
        if (result->status == 200) {
            attempt.body = result->body;
        } else {
            attempt.detail = result->body;
        }
        return attempt;
    }

    static std::string extract_message(const std::string& body) {
        json doc = json::parse(body, nullptr, false);
        if (doc.is_discarded() || !doc.contains("choices") || doc["choices"].empty() ||
            !doc["choices"][0].contains("message")) {
            throw ProtocolError("malformed chat-completions response");
        }
        return doc["choices"][0]["message"].value("content", std::string());
    }

    static std::vector<std::vector<double>> extract_embeddings(const std::string& body,
                                                               size_t expected) {
        json doc = json::parse(body, nullptr, false);
        if (doc.is_discarded() || !doc.contains("data") || !doc["data"].is_array()) {
            throw ProtocolError("malformed embeddings response");
        }
        std::vector<std::vector<double>> vectors;
        for (const json& item : doc["data"]) {
            if (!item.contains("embedding")) throw ProtocolError("embedding item missing vector");
            vectors.push_back(item["embedding"].get<std::vector<double>>());
        }
        if (vectors.size() != expected) {
            throw ProtocolError("embeddings batch size mismatch: expected " +
                                std::to_string(expected) + ", got " +
                                std::to_string(vectors.size()));
        }
        return vectors;
    }

    EndpointConfig config_;
    std::string host_;
    std::string path_prefix_;
    ConcurrencyGate gate_;
    std::mt19937_64 jitter_rng_;
};

// ===========================================================================
// Scripted endpoint
// ===========================================================================

class ScriptedEndpoint final : public ModelEndpoint {
public:
    ScriptedEndpoint(std::vector<ScriptEntry> script, EndpointConfig config)
        : script_(std::move(script)), config_(std::move(config)),
          gate_(config_.request_concurrency), jitter_rng_(0) {}

    ChatExchange complete(const std::string& system_prompt,
                          const std::string& user_prompt) override {
        GateScope scope(gate_);
        auto [response, attempts] =
            run_with_retries(config_, [&] { return next_text_entry(); }, jitter_rng_);
        ChatExchange exchange;
        exchange.system_prompt = system_prompt;
        exchange.user_prompt = user_prompt;
        exchange.response_text = std::move(response);
        exchange.attempt_count = attempts;
        exchange.latency_ms = 0.0;
        return exchange;
    }

    std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) override {
        if (texts.empty()) return {};
        GateScope scope(gate_);
        ScriptEntry entry = consume();
        if (entry.status && *entry.status >= 400) {
            if (is_permanent(*entry.status)) {
                throw ConfigError("scripted endpoint returned status " +
                                  std::to_string(*entry.status));
            }
            throw TransportError("scripted endpoint failure", *entry.status);
        }
        if (!entry.embeddings) throw ProtocolError("script entry has no embeddings");
        if (entry.embeddings->size() != texts.size()) {
            throw ProtocolError("embeddings batch size mismatch: expected " +
                                std::to_string(texts.size()) + ", got " +
                                std::to_string(entry.embeddings->size()));
        }
        return *entry.embeddings;
    }

private:
    ScriptEntry consume() {
        std::lock_guard lock(script_mutex_);
        if (cursor_ >= script_.size()) {
            throw ProtocolError("scripted endpoint exhausted after " +
                                std::to_string(script_.size()) + " entries");
        }
        return script_[cursor_++];
    }

    AttemptResult next_text_entry() {
        ScriptEntry entry = consume();
        AttemptResult attempt;
        if (entry.status && *entry.status >= 400) {
            attempt.status = *entry.status;
            attempt.detail = "scripted failure";
            return attempt;
        }
        if (!entry.response) throw ProtocolError("script entry has no response text");
        attempt.body = *entry.response;
        attempt.status = 200;
        return attempt;
    }

    std::vector<ScriptEntry> script_;
    std::mutex script_mutex_;
    size_t cursor_ = 0;
    EndpointConfig config_;
    ConcurrencyGate gate_;
    std::mt19937_64 jitter_rng_;
};

}  // namespace

std::unique_ptr<ModelEndpoint> make_http_endpoint(EndpointConfig config) {
    return std::make_unique<HttpEndpoint>(std::move(config));
}

EndpointConfig scripted_defaults() {
    EndpointConfig config;
    config.base_url = "scripted://local";
    config.backoff_base_seconds = 0.0;
    return config;
}

std::unique_ptr<ModelEndpoint> make_scripted_endpoint(std::vector<ScriptEntry> script,
                                                      EndpointConfig config) {
    return std::make_unique<ScriptedEndpoint>(std::move(script), std::move(config));
}

std::vector<ScriptEntry> load_script(const std::filesystem::path& path) {
    std::ifstream stream(path);
    if (!stream) throw ConfigError("cannot open script file: " + path.string());
    std::vector<ScriptEntry> entries;
    std::string line;
    long lineno = 0;
    while (std::getline(stream, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        json doc = json::parse(line, nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) {
            throw ConfigError("bad script line " + std::to_string(lineno) + " in " +
                              path.string());
        }
        ScriptEntry entry;
        if (doc.contains("response")) entry.response = doc["response"].get<std::string>();
        if (doc.contains("status")) entry.status = doc["status"].get<int>();
        if (doc.contains("embeddings")) {
            entry.embeddings = doc["embeddings"].get<std::vector<std::vector<double>>>();
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

EndpointConfig endpoint_from_config(const Config& config, const std::string& prefix) {
    EndpointConfig endpoint;
    endpoint.base_url = config.get_string(prefix + "_base_url");
    endpoint.model_name = config.get_string(prefix + "_model");
    if (config.has(prefix + "_temperature")) {
        endpoint.temperature = config.get_double(prefix + "_temperature");
    }
    if (config.has(prefix + "_top_p")) endpoint.top_p = config.get_double(prefix + "_top_p");
    if (config.has(prefix + "_max_tokens")) {
        endpoint.max_tokens = static_cast<int>(config.get_long(prefix + "_max_tokens"));
    }
    if (config.has(prefix + "_repetition_penalty")) {
        endpoint.repetition_penalty = config.get_double(prefix + "_repetition_penalty");
    }
    endpoint.timeout_seconds = config.get_double(prefix + "_timeout_seconds");
    endpoint.max_retries = static_cast<int>(config.get_long(prefix + "_max_retries"));
    endpoint.request_concurrency = static_cast<int>(config.get_long(prefix + "_concurrency"));

    std::string env_name = "CRITIC_";
    for (char c : prefix) {
        env_name.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
    env_name += "_API_KEY";
    if (const char* key = std::getenv(env_name.c_str())) endpoint.api_key = key;
    return endpoint;
}

}  // namespace ragcritic
