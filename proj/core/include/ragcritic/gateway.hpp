#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ragcritic {

class Config;

/// Sampling and transport settings for one chat-completions-compatible
/// endpoint. Decoding defaults: temperature 0.7, top_p 0.9, repetition
/// penalty 1.1, max generation length 1024.
struct EndpointConfig {
    std::string base_url;   // e.g. http://localhost:8000/v1
    std::string api_key;    // loaded from environment only, never from files
    std::string model_name;
    double temperature = 0.7;
    double top_p = 0.9;
    int max_tokens = 1024;
    double repetition_penalty = 1.1;
    double timeout_seconds = 30.0;
    int max_retries = 2;
    int request_concurrency = 4;
    double backoff_base_seconds = 1.0;
};

/// One completed chat request; response_text is the raw assistant message.
struct ChatExchange {
    std::string system_prompt;
    std::string user_prompt;
    std::string response_text;
    double latency_ms = 0.0;
    int attempt_count = 0;
};

class ModelEndpoint {
public:
    virtual ~ModelEndpoint() = default;

    /// Single chat completion with retry/backoff on transport or 5xx
    /// failures. Throws TransportError after exhausting the retry budget and
    /// ConfigError on 4xx responses.
    virtual ChatExchange complete(const std::string& system_prompt,
                                  const std::string& user_prompt) = 0;

    /// One embedding vector per input text. Throws ProtocolError when the
    /// endpoint returns a mismatched batch.
    virtual std::vector<std::vector<double>> embed(const std::vector<std::string>& texts) = 0;
};

/// HTTP(S) endpoint speaking the chat-completions JSON wire format
/// (POST <base_url>/chat/completions and <base_url>/embeddings).
std::unique_ptr<ModelEndpoint> make_http_endpoint(EndpointConfig config);

// ===========================================================================
// Scripted stub for offline runs
// ===========================================================================

/// One scripted attempt outcome: a response body, an HTTP-like failure
/// status, or an embeddings batch.
struct ScriptEntry {
    std::optional<std::string> response;
    std::optional<int> status;
    std::optional<std::vector<std::vector<double>>> embeddings;
};

/// JSON-lines script: one entry per request attempt, in order. Objects carry
/// "response", "status", or "embeddings".
std::vector<ScriptEntry> load_script(const std::filesystem::path& path);

/// EndpointConfig tuned for scripted replay: zero backoff, no network.
EndpointConfig scripted_defaults();

/// Deterministic endpoint replaying a script. Each transport attempt
/// consumes one entry, so failure entries exercise the retry path. Backoff
/// defaults to zero.
std::unique_ptr<ModelEndpoint> make_scripted_endpoint(std::vector<ScriptEntry> script,
                                                      EndpointConfig config = scripted_defaults());

/// Build an EndpointConfig from config keys with the given prefix
/// ("judge", "gen", "embed"); the API key comes from CRITIC_<PREFIX>_API_KEY.
EndpointConfig endpoint_from_config(const Config& config, const std::string& prefix);

}  // namespace ragcritic
