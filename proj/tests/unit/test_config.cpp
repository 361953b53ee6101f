#include <doctest.h>

#include <cstdlib>
#include <fstream>

#include "ragcritic/config.hpp"
#include "ragcritic/errors.hpp"
#include "ragcritic/reward.hpp"

using namespace ragcritic;

TEST_CASE("defaults carry the full verdict matrix") {
    const Config config = Config::defaults();
    const RewardConfig reward = RewardConfig::from_config(config);
    CHECK(reward.verdict_matrix[0][0] == doctest::Approx(0.7));
    CHECK(reward.verdict_matrix[0][1] == doctest::Approx(-1.0));
    CHECK(reward.verdict_matrix[0][2] == doctest::Approx(-0.1));
    CHECK(reward.verdict_matrix[1][0] == doctest::Approx(-0.3));
    CHECK(reward.verdict_matrix[1][1] == doctest::Approx(0.5));
    CHECK(reward.verdict_matrix[1][2] == doctest::Approx(-0.1));
    CHECK(reward.verdict_matrix[2][0] == doctest::Approx(0.1));
    CHECK(reward.verdict_matrix[2][1] == doctest::Approx(-0.2));
    CHECK(reward.verdict_matrix[2][2] == doctest::Approx(0.0));
    CHECK(reward.generic_phrases.size() == 4);
}

TEST_CASE("config file layering and comments") {
    const std::string path = "test_config_layering.cfg";
    {
        std::ofstream out(path);
        out << "# comment line\n";
        out << "alpha_format = 0.25   # trailing comment\n";
        out << "\n";
        out << "generic_phrases = look it up, try once more\n";
    }
    Config config = Config::defaults();
    config.load_file(path);
    CHECK(config.get_double("alpha_format") == doctest::Approx(0.25));
    CHECK(config.get_list("generic_phrases") ==
          std::vector<std::string>{"look it up", "try once more"});
    CHECK(config.get_double("gamma_format") == doctest::Approx(1.0));  // untouched default
    std::remove(path.c_str());
}

TEST_CASE("environment overrides known keys with CRITIC_ prefix") {
    setenv("CRITIC_LAMBDA_TYPE", "0.9", 1);
    Config config = Config::defaults();
    config.apply_env();
    CHECK(config.get_double("lambda_type") == doctest::Approx(0.9));
    unsetenv("CRITIC_LAMBDA_TYPE");
}

TEST_CASE("explicit set wins over everything") {
    setenv("CRITIC_STAGE", "1", 1);
    Config config = Config::defaults();
    config.apply_env();
    config.set("stage", "2");
    CHECK(config.get_long("stage") == 2);
    unsetenv("CRITIC_STAGE");
}

TEST_CASE("digest is stable and value-sensitive") {
    Config a = Config::defaults();
    Config b = Config::defaults();
    CHECK(a.digest() == b.digest());
    b.set("alpha_format", "0.2");
    CHECK(a.digest() != b.digest());
}

TEST_CASE("malformed config lines raise ConfigError") {
    const std::string path = "test_config_bad.cfg";
    {
        std::ofstream out(path);
        out << "this line has no equals sign\n";
    }
    Config config = Config::defaults();
    CHECK_THROWS_AS(config.load_file(path), ConfigError);
    CHECK_THROWS_AS(config.get_double("generic_phrases"), ConfigError);
    CHECK_THROWS_AS(Config::defaults().get_string("no_such_key"), ConfigError);
    std::remove(path.c_str());
}

TEST_CASE("aux penalty signs are normalized to non-positive") {
    Config config = Config::defaults();
    config.set("aux_penalty_per_violation", "0.2");  // magnitude spelling
    config.set("aux_floor", "0.5");
    const RewardConfig reward = RewardConfig::from_config(config);
    CHECK(reward.aux_penalty_per_violation == doctest::Approx(-0.2));
    CHECK(reward.aux_floor == doctest::Approx(-0.5));
}
