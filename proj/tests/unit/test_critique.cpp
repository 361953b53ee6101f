#include <doctest.h>

#include <random>

#include "ragcritic/critique.hpp"
#include "ragcritic/errors.hpp"

using namespace ragcritic;

namespace {

const std::string kValidFixture =
    "<verdict> INCORRECT </verdict> "
    "<location> information:Doc3 </location> "
    "<reason> The information does not support the final answer </reason> "
    "<fix> search for additional evidence about the founding date </fix>";

Critique random_valid_critique(std::mt19937_64& rng) {
    const char* words[] = {"evidence", "document", "answer", "query",
                           "registry", "date", "support", "conflict"};
    auto sentence = [&](int count) {
        std::string text;
        for (int i = 0; i < count; ++i) {
            if (!text.empty()) text.push_back(' ');
            text += words[rng() % 8];
        }
        return text;
    };
    Critique critique;
    critique.verdict = static_cast<Verdict>(rng() % 3);
    switch (rng() % 6) {
        case 0: critique.location = ErrorLocation{StepKind::think, std::nullopt}; break;
        case 1: critique.location = ErrorLocation{StepKind::think, static_cast<int>(1 + rng() % 4)}; break;
        case 2: critique.location = ErrorLocation{StepKind::search, std::nullopt}; break;
        case 3: critique.location = ErrorLocation{StepKind::answer, std::nullopt}; break;
        case 4:
            critique.location =
                ErrorLocation{StepKind::information, static_cast<int>(1 + rng() % 9)};
            break;
        default: critique.location.reset(); break;
    }
    critique.reason = sentence(static_cast<int>(2 + rng() % 6));
    critique.fix = sentence(static_cast<int>(2 + rng() % 6));
    return critique;
}

}  // namespace

TEST_CASE("verdict labels parse case-insensitively and print uppercase") {
    CHECK(parse_verdict(" correct ") == Verdict::correct);
    CHECK(parse_verdict("InCorrect") == Verdict::incorrect);
    CHECK(parse_verdict("UNSURE") == Verdict::unsure);
    CHECK_FALSE(parse_verdict("maybe").has_value());
    CHECK(verdict_name(Verdict::incorrect) == "INCORRECT");
}

TEST_CASE("validate_format accepts the canonical example") {
    CHECK(validate_format(kValidFixture));
}

TEST_CASE("validate_format rejects swapped field order") {
    const std::string swapped =
        "<verdict> INCORRECT </verdict> "
        "<reason> The information does not support the final answer </reason> "
        "<location> information:Doc3 </location> "
        "<fix> search for additional evidence about the founding date </fix>";
    CHECK_FALSE(validate_format(swapped));
}

TEST_CASE("validate_format rejects content outside the tags") {
    CHECK_FALSE(validate_format(kValidFixture + " I hope this helps"));
    CHECK_FALSE(validate_format("Sure! " + kValidFixture));
}

TEST_CASE("validate_format rejects duplicate or missing fields") {
    CHECK_FALSE(validate_format(kValidFixture + " <fix> another </fix>"));
    CHECK_FALSE(validate_format("<verdict> CORRECT </verdict>"));
    const std::string bad_verdict =
        "<verdict> FINE </verdict> <location> none </location> "
        "<reason> words </reason> <fix> words </fix>";
    CHECK_FALSE(validate_format(bad_verdict));
}

TEST_CASE("strict parse extracts the four fields") {
    const Critique critique = parse_critique(kValidFixture, ParseMode::strict);
    CHECK(critique.format_valid);
    CHECK(critique.verdict == Verdict::incorrect);
    REQUIRE(critique.location.has_value());
    CHECK(*critique.location == ErrorLocation{StepKind::information, 3});
    CHECK(critique.reason == "The information does not support the final answer");
    CHECK(critique.fix == "search for additional evidence about the founding date");
    CHECK(critique.raw_text == kValidFixture);
}

TEST_CASE("strict parse on invalid input yields defaults") {
    const Critique critique = parse_critique("Verdict: CORRECT", ParseMode::strict);
    CHECK_FALSE(critique.format_valid);
    CHECK(critique.verdict == Verdict::unsure);
    CHECK_FALSE(critique.location.has_value());
    CHECK(critique.reason.empty());
    CHECK(critique.fix.empty());
}

TEST_CASE("recovery parse finds nothing in tagless prose") {
    const Critique critique = parse_critique("Verdict: CORRECT", ParseMode::recovery);
    CHECK_FALSE(critique.format_valid);
    CHECK(critique.verdict == Verdict::unsure);
    CHECK_FALSE(critique.location.has_value());
    CHECK(critique.reason.empty());
    CHECK(critique.fix.empty());
}

TEST_CASE("recovery parse scavenges out-of-order fields") {
    const std::string shuffled =
        "preamble <reason> because the evidence conflicts </reason> "
        "<verdict> incorrect </verdict> middle "
        "<fix> check document two </fix> <location> answer </location> postscript";
    const Critique critique = parse_critique(shuffled, ParseMode::recovery);
    CHECK_FALSE(critique.format_valid);
    CHECK(critique.verdict == Verdict::incorrect);
    REQUIRE(critique.location.has_value());
    CHECK(critique.location->loc_type == StepKind::answer);
    CHECK(critique.reason == "because the evidence conflicts");
    CHECK(critique.fix == "check document two");
}

TEST_CASE("parse_location grammar") {
    CHECK(parse_location("information:Doc3") == ErrorLocation{StepKind::information, 3});
    CHECK(parse_location(" information : doc 12 ") == ErrorLocation{StepKind::information, 12});
    CHECK(parse_location("information:Document4") == ErrorLocation{StepKind::information, 4});
    CHECK(parse_location("information") ==
          ErrorLocation{StepKind::information, std::nullopt});
    CHECK(parse_location("answer") == ErrorLocation{StepKind::answer, std::nullopt});
    CHECK(parse_location("SEARCH") == ErrorLocation{StepKind::search, std::nullopt});
    CHECK(parse_location("think") == ErrorLocation{StepKind::think, std::nullopt});
    CHECK(parse_location("think:2") == ErrorLocation{StepKind::think, 2});
    CHECK_FALSE(parse_location("paragraph 7").has_value());
    CHECK_FALSE(parse_location("information:Doc0").has_value());
    CHECK_FALSE(parse_location("none").has_value());
    CHECK_FALSE(parse_location("").has_value());
}

TEST_CASE("serialize emits the canonical strict form") {
    Critique critique;
    critique.verdict = Verdict::correct;
    critique.reason = "grounded";
    critique.fix = "no change needed";
    const std::string text = serialize_critique(critique);
    CHECK(validate_format(text));
    const Critique reparsed = parse_critique(text, ParseMode::strict);
    CHECK(reparsed.verdict == Verdict::correct);
    CHECK_FALSE(reparsed.location.has_value());
    CHECK(reparsed.reason == "grounded");
    CHECK(reparsed.fix == "no change needed");
}

TEST_CASE("serialize rejects closing-tag sequences in content") {
    Critique critique;
    critique.verdict = Verdict::incorrect;
    critique.fix = "write </fix> here";
    CHECK_THROWS_AS(serialize_critique(critique), EncodeError);
}

TEST_CASE("fallback critique shape") {
    const Critique fallback = fallback_critique("free prose");
    CHECK(fallback.verdict == Verdict::unsure);
    CHECK(fallback.reason == "parse failure");
    CHECK(fallback.fix.empty());
    CHECK_FALSE(fallback.location.has_value());
    CHECK_FALSE(fallback.format_valid);
    CHECK(is_fallback_critique(fallback));
    CHECK_FALSE(is_fallback_critique(parse_critique(kValidFixture, ParseMode::strict)));
}

TEST_CASE("round-trip laws over generated critiques") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 200; ++i) {
        const Critique original = random_valid_critique(rng);
        const std::string text = serialize_critique(original);
        CHECK(validate_format(text));

        const Critique strict = parse_critique(text, ParseMode::strict);
        CHECK(strict.format_valid);
        CHECK(strict.verdict == original.verdict);
        CHECK(strict.location == original.location);
        CHECK(strict.reason == original.reason);
        CHECK(strict.fix == original.fix);

        // Recovery on a valid string agrees with strict.
        const Critique recovered = parse_critique(text, ParseMode::recovery);
        CHECK(recovered.verdict == strict.verdict);
        CHECK(recovered.location == strict.location);
        CHECK(recovered.reason == strict.reason);
        CHECK(recovered.fix == strict.fix);
        CHECK(recovered.format_valid == validate_format(text));
    }
}

TEST_CASE("recovery never populates fewer fields than strict") {
    const std::string inputs[] = {
        kValidFixture,
        "prose only",
        "<verdict> CORRECT </verdict> trailing",
        "<fix> f </fix> <verdict> INCORRECT </verdict>",
    };
    auto populated = [](const Critique& c) {
        return (c.location.has_value() ? 1 : 0) + (c.reason.empty() ? 0 : 1) +
               (c.fix.empty() ? 0 : 1);
    };
    for (const std::string& raw : inputs) {
        const Critique strict = parse_critique(raw, ParseMode::strict);
        const Critique recovered = parse_critique(raw, ParseMode::recovery);
        CHECK(populated(recovered) >= populated(strict));
    }
}
