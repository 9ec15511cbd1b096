#include <doctest.h>

#include <algorithm>

#include "rpmsim/config.h"
#include "support.h"

using namespace rpm;

#ifndef RPMSIM_SOURCE_DIR
#error "RPMSIM_SOURCE_DIR must point at the repository root"
#endif

namespace {

bool mentions(const std::vector<std::string>& problems, const std::string& key) {
    return std::any_of(problems.begin(), problems.end(), [&](const auto& p) { return p.rfind(key, 0) == 0; });
}

std::vector<std::string> problems_of(const nlohmann::json& overrides) {
    try {
        config_from_json(overrides);
    } catch (const ValidationError& e) {
        return e.details();
    }
    return {};
}

} // namespace

TEST_SUITE("config") {

TEST_CASE("defaults are valid and sized like the reference cohort") {
    SimulationConfig c = default_config();
    CHECK(config_problems(c).empty());
    CHECK(c.n_patients == 10);
    CHECK(c.n_hcps == 6);
    CHECK(c.duration_days == 180);
    CHECK(c.config_version == 1);
    CHECK(c.mode == Mode::batch);
    CHECK(c.admission_adherence_multiplier == doctest::Approx(0.1));
}

TEST_CASE("shipped config file equals the built-in defaults") {
    SimulationConfig c = load_config_file(std::string(RPMSIM_SOURCE_DIR) + "/config/default.conf");
    CHECK(c == default_config());
}

TEST_CASE("json round trip of every field") {
    SimulationConfig c = default_config();
    c.seed = 18446744073709551557ull;
    c.mode = Mode::interactive;
    c.start_date = make_date(2023, 11, 30);
    c.noise_for(StabilityClass::spiky)[Vital::heart_rate] = 6.25;
    c.messiness.p_duplicate = 0.137;
    CHECK(config_from_json(config_to_json(c)) == c);
    CHECK(config_from_json(nlohmann::json::parse(config_to_json(c).dump())) == c);
}

TEST_CASE("partial overrides keep the base") {
    SimulationConfig c = config_from_json({{"n_patients", 3}, {"abrupt_delta", {{"weight", 2.0}}}});
    CHECK(c.n_patients == 3);
    CHECK(c.abrupt_delta[Vital::weight] == doctest::Approx(2.0));
    CHECK(c.abrupt_delta[Vital::heart_rate] == doctest::Approx(default_config().abrupt_delta[Vital::heart_rate]));
    CHECK(c.n_hcps == 6);
}

TEST_CASE("validation errors name the offending fields") {
    CHECK(mentions(problems_of({{"n_patients", -1}}), "n_patients"));
    CHECK(mentions(problems_of({{"n_patients", "ten"}}), "n_patients"));
    CHECK(mentions(problems_of({{"n_hcps", 2.5}}), "n_hcps"));
    CHECK(mentions(problems_of({{"mode", "turbo"}}), "mode"));
    CHECK(mentions(problems_of({{"start_date", "yesterday"}}), "start_date"));
    CHECK(mentions(problems_of({{"messiness", {{"p_duplicate", 1.5}}}}), "messiness.p_duplicate"));
    CHECK(mentions(problems_of({{"abrupt_delta", {{"weight", 0}}}}), "abrupt_delta.weight"));
    CHECK(mentions(problems_of({{"spike", {{"duration_min", 4}, {"duration_max", 2}}}}), "spike.duration_max"));
    CHECK(mentions(problems_of({{"admission_policy", {{"stay_min", 0}}}}), "admission_policy.stay_min"));
    CHECK(mentions(problems_of({{"colour", "blue"}}), "colour"));
    CHECK(mentions(problems_of({{"noise", {{"stable", {{"pulse", 1}}}}}}), "noise.stable.pulse"));

    auto several = problems_of({{"n_patients", -1}, {"n_hcps", -2}});
    CHECK(mentions(several, "n_patients"));
    CHECK(mentions(several, "n_hcps"));
}

TEST_CASE("text format: comments, dotted keys, quoting") {
    auto c = parse_config_text(R"(
        # comment line
        config_version = 1
        n_patients = 4        # trailing comment
        mode = "interactive"
        seed = 99
        noise.stable.weight = 0.3
        start_date = 2024-06-01
    )");
    CHECK(c.n_patients == 4);
    CHECK(c.mode == Mode::interactive);
    CHECK(c.seed == 99);
    CHECK(c.noise_for(StabilityClass::stable)[Vital::weight] == doctest::Approx(0.3));
    CHECK(c.start_date == make_date(2024, 6, 1));
}

TEST_CASE("text format: version and syntax errors") {
    CHECK_THROWS_AS(parse_config_text("n_patients = 4\n"), FormatError);
    CHECK_THROWS_AS(parse_config_text("config_version = 2\n"), VersionError);
    CHECK_THROWS_AS(parse_config_text("config_version = 1\njust words\n"), FormatError);
    CHECK_THROWS_AS(parse_config_text("config_version = 1\nn_patients = many\n"), ValidationError);
    CHECK_THROWS_AS(load_config_file("/nonexistent/rpmsim.conf"), IoError);
}

}
