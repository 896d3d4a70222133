/* backhaul-sim
 * Copyright (C) 2026 the backhaul-sim developers
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License. */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "backhaul/config.hpp"

using namespace backhaul::config;

TEST_CASE("defaults validate cleanly and round-trip through serialization") {
    ScenarioConfig c;
    const auto warnings = validate(c);
    CHECK(warnings.empty());

    std::ostringstream out;
    write_config(c, out);
    std::istringstream in(out.str());
    const ScenarioConfig back = parse_config(in);
    CHECK(back == c);
}

TEST_CASE("round-trip preserves every field exactly") {
    ScenarioConfig c;
    c.kind = ScenarioKind::strategy_compare;
    c.trials = 37;
    c.master_seed = 987654321098765ULL;
    c.output_dir = "results/run_a";
    c.emit_svg = true;
    c.grid_dim = 17;
    c.spacing = 123.456;
    c.perturbation = 0.25;
    c.density = 0.7071067811865476;
    c.box_side = 19.5;
    c.cell_side = 1.875;
    c.alpha = 4.5;
    c.mu_db = -3.25;
    c.wavelength = 0.009993081933333334;
    c.array_area = 49;
    c.psi = 36;
    c.psi_rule = "sqrt_n";
    c.couple_wavelength = true;
    c.reuse_p = 2;
    c.pattern = "random";
    c.n_grid = {81, 144, 10000};
    c.rho = 0.125;
    c.beta = 0.75;

    std::ostringstream out;
    write_config(c, out);
    std::istringstream in(out.str());
    CHECK(parse_config(in) == c);
}

TEST_CASE("parser handles comments, blanks, and carrier frequency") {
    std::istringstream in(
        "# full line comment\n"
        "\n"
        "scenario.kind = rate_pdf   # trailing comment\n"
        "channel.f_carrier_ghz = 30\n");
    const ScenarioConfig c = parse_config(in);
    CHECK(c.kind == ScenarioKind::rate_pdf);
    CHECK(c.wavelength == doctest::Approx(2.99792458e8 / 30e9).epsilon(1e-15));
}

TEST_CASE("parser rejects malformed input with line context") {
    auto expect_error = [](const std::string& text, const std::string& needle) {
        std::istringstream in(text);
        try {
            parse_config(in);
            FAIL_CHECK("expected ConfigError for: " << text);
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    expect_error("scenario.bogus = 1\n", "unknown key");
    expect_error("just some words\n", "expected");
    expect_error("channel.alpha = fast\n", "channel.alpha");
    expect_error("scenario.trials = 12abc\n", "scenario.trials");
    expect_error("channel.psi = 3.5\n", "channel.psi");
    expect_error("scenario.emit_svg = yep\n", "scenario.emit_svg");
    expect_error("sweep.n_grid = 16,,36\n", "sweep.n_grid");
    expect_error(
        "channel.wavelength = 0.01\nchannel.f_carrier_ghz = 30\n",
        "alternatives");
    expect_error("scenario.kind = mystery\n", "scenario.kind");
}

TEST_CASE("validation enforces kind-specific domains") {
    auto expect_fail = [](ScenarioConfig c, const std::string& needle) {
        try {
            validate(c);
            FAIL_CHECK("expected ConfigError mentioning: " << needle);
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };

    ScenarioConfig c;
    c.trials = 0;
    expect_fail(c, "scenario.trials");

    c = ScenarioConfig{};
    c.pattern = "det4";
    expect_fail(c, "det4");
    c.reuse_p = 4;
    CHECK(validate(c).empty());

    c = ScenarioConfig{};
    c.pattern = "det9";
    c.reuse_p = 3;
    expect_fail(c, "det9");

    c = ScenarioConfig{};
    c.kind = ScenarioKind::cutset_sweep;
    expect_fail(c, "sweep.n_grid");
    c.n_grid = {16};
    c.alpha = 4.2;  // log_16(64) = 1.5, needs alpha > 7
    expect_fail(c, "cut capacity scale");
    c.psi = 2;
    c.alpha = 5.0;
    CHECK(validate(c).empty());

    c = ScenarioConfig{};
    c.kind = ScenarioKind::strategy_compare;
    c.n_grid = {64, 200};
    expect_fail(c, "perfect square");

    c = ScenarioConfig{};
    c.kind = ScenarioKind::highway_census;
    c.cell_side = 50.0;
    expect_fail(c, "geometry.cell_side");

    c = ScenarioConfig{};
    c.kind = ScenarioKind::gateway_boundary;
    c.rho = 1.0;
    expect_fail(c, "gateway.rho");

    c = ScenarioConfig{};
    c.kind = ScenarioKind::gateway_grid;
    c.grid_dim = 10;
    c.beta = 0.5;  // 10^0.5 is not an integer block count
    expect_fail(c, "gateway.beta");
    c.grid_dim = 16;
    CHECK(validate(c).empty());

    c = ScenarioConfig{};
    c.kind = ScenarioKind::rate_pdf;
    c.grid_dim = 2;
    expect_fail(c, "geometry.grid_dim");
}

TEST_CASE("small rate_pdf trial counts warn instead of failing") {
    ScenarioConfig c;
    c.kind = ScenarioKind::rate_pdf;
    c.trials = 50;
    const auto warnings = validate(c);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("unstable") != std::string::npos);
}

TEST_CASE("scenario kinds map to names and back") {
    const ScenarioKind kinds[] = {
        ScenarioKind::fig_reuse,        ScenarioKind::rate_pdf,
        ScenarioKind::cutset_sweep,     ScenarioKind::strategy_compare,
        ScenarioKind::highway_census,   ScenarioKind::gateway_boundary,
        ScenarioKind::gateway_grid};
    for (ScenarioKind k : kinds) CHECK(kind_from_string(to_string(k)) == k);
    CHECK_THROWS_AS((void)kind_from_string("nope"), ConfigError);
}

TEST_CASE("psi rules resolve per sweep point") {
    ScenarioConfig c;
    c.psi = 7;
    CHECK(resolved_psi(c, 4096) == 7);
    c.psi_rule = "sqrt_n";
    CHECK(resolved_psi(c, 256) == 16);
    c.psi_rule = "n_alpha_over_4";
    c.alpha = 4.0;
    CHECK(resolved_psi(c, 81) == 81);
}
