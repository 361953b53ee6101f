#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "ragcritic/config.hpp"
#include "ragcritic/errors.hpp"
#include "ragcritic/gateway.hpp"

using namespace ragcritic;

namespace {

ScriptEntry text_entry(std::string response) {
    ScriptEntry entry;
    entry.response = std::move(response);
    return entry;
}

ScriptEntry status_entry(int status) {
    ScriptEntry entry;
    entry.status = status;
    return entry;
}

}  // namespace

TEST_CASE("scripted endpoint returns the scripted text on the first attempt") {
    auto endpoint = make_scripted_endpoint({text_entry("<verdict> CORRECT </verdict>")});
    const ChatExchange exchange = endpoint->complete("system", "user");
    CHECK(exchange.response_text == "<verdict> CORRECT </verdict>");
    CHECK(exchange.attempt_count == 1);
    CHECK(exchange.system_prompt == "system");
    CHECK(exchange.user_prompt == "user");
}

TEST_CASE("transient failures consume the retry budget then succeed") {
    EndpointConfig config = scripted_defaults();
    config.max_retries = 3;
    auto endpoint = make_scripted_endpoint(
        {status_entry(500), status_entry(503), text_entry("ok")}, config);
    const ChatExchange exchange = endpoint->complete("s", "u");
    CHECK(exchange.response_text == "ok");
    CHECK(exchange.attempt_count == 3);
}

TEST_CASE("exhausted retries raise a transport error with the last status") {
    EndpointConfig config = scripted_defaults();
    config.max_retries = 2;
    auto endpoint = make_scripted_endpoint(
        {status_entry(500), status_entry(500), status_entry(500)}, config);
    try {
        endpoint->complete("s", "u");
        FAIL("expected TransportError");
    } catch (const TransportError& e) {
        CHECK(e.last_status() == 500);
    }
}

TEST_CASE("4xx responses are configuration errors, not retried") {
    EndpointConfig config = scripted_defaults();
    config.max_retries = 5;
    auto endpoint = make_scripted_endpoint({status_entry(404), text_entry("never used")}, config);
    CHECK_THROWS_AS(endpoint->complete("s", "u"), ConfigError);
}

TEST_CASE("scripted embeddings are deterministic and validated") {
    ScriptEntry batch;
    batch.embeddings = {{1.0, 0.0}, {1.0, 0.0}};
    auto endpoint = make_scripted_endpoint({batch});
    const auto vectors = endpoint->embed({"a", "a"});
    REQUIRE(vectors.size() == 2);
    CHECK(vectors[0] == vectors[1]);
}

TEST_CASE("empty embedding input short-circuits without consuming the script") {
    auto endpoint = make_scripted_endpoint({});
    CHECK(endpoint->embed({}).empty());
}

TEST_CASE("mismatched embedding batch raises a protocol error") {
    ScriptEntry batch;
    batch.embeddings = {{1.0, 0.0}};
    auto endpoint = make_scripted_endpoint({batch});
    CHECK_THROWS_AS(endpoint->embed({"a", "b"}), ProtocolError);
}

TEST_CASE("script files load responses, statuses, and embeddings") {
    const std::string path = "test_gateway_script.jsonl";
    {
        std::ofstream out(path);
        out << R"({"response": "hello"})" << "\n";
        out << "\n";
        out << R"({"status": 500})" << "\n";
        out << R"({"embeddings": [[0.5, 0.5]]})" << "\n";
    }
    const std::vector<ScriptEntry> script = load_script(path);
    REQUIRE(script.size() == 3);
    CHECK(script[0].response == "hello");
    CHECK(script[1].status == 500);
    REQUIRE(script[2].embeddings.has_value());
    CHECK((*script[2].embeddings)[0] == std::vector<double>{0.5, 0.5});
    std::remove(path.c_str());
}

TEST_CASE("exhausted scripts raise a protocol error") {
    auto endpoint = make_scripted_endpoint({text_entry("only one")});
    endpoint->complete("s", "u");
    CHECK_THROWS_AS(endpoint->complete("s", "u"), ProtocolError);
}

TEST_CASE("endpoint_from_config reads prefixed keys and env API keys") {
    Config config = Config::defaults();
    config.set("judge_base_url", "http://localhost:9999/v1");
    config.set("judge_model", "test-model");
    setenv("CRITIC_JUDGE_API_KEY", "secret-token", 1);
    const EndpointConfig endpoint = endpoint_from_config(config, "judge");
    CHECK(endpoint.base_url == "http://localhost:9999/v1");
    CHECK(endpoint.model_name == "test-model");
    CHECK(endpoint.api_key == "secret-token");
    CHECK(endpoint.temperature == doctest::Approx(0.7));
    CHECK(endpoint.top_p == doctest::Approx(0.9));
    CHECK(endpoint.max_tokens == 1024);
    CHECK(endpoint.repetition_penalty == doctest::Approx(1.1));
    unsetenv("CRITIC_JUDGE_API_KEY");
}
