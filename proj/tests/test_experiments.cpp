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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "backhaul/channel.hpp"
#include "backhaul/config.hpp"
#include "backhaul/experiments.hpp"
#include "backhaul/linkrate.hpp"

using namespace backhaul;
using experiments::LinkScenario;

namespace {

config::ScenarioConfig small_link_config() {
    config::ScenarioConfig c;
    c.grid_dim = 7;
    c.psi = 8;
    c.trials = 5;
    return c;
}

// Split a CSV body into data lines (metadata comments and header dropped).
std::vector<std::string> data_lines(const std::string& body) {
    std::vector<std::string> lines;
    std::istringstream in(body);
    std::string line;
    bool seen_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!seen_header) {
            seen_header = true;
            continue;
        }
        lines.push_back(line);
    }
    return lines;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string field;
    while (std::getline(in, field, ',')) out.push_back(field);
    return out;
}

}  // namespace

TEST_CASE("fast channel fill agrees with the reference matrix builder") {
    channel::LinkBudget budget;
    const auto tx = channel::place_antennas({0.0, 0.0}, 8.0, 16, 42);
    const auto rx = channel::place_antennas({300.0, 400.0}, 8.0, 16, 43);

    const auto ref = channel::build_channel_matrix(tx, rx, budget);
    arma::cx_mat fast(16, 16);
    experiments::fill_channel(tx, rx, budget, fast.memptr());

    const double scale = arma::abs(ref.h).max();
    CHECK(arma::abs(fast - ref.h).max() <= 1e-9 * scale);
}

TEST_CASE("channel fill rejects degenerate arrays") {
    channel::LinkBudget budget;
    const auto a = channel::place_antennas({0.0, 0.0}, 8.0, 4, 1);
    const auto b = channel::place_antennas({0.0, 0.0}, 8.0, 4, 2);
    std::vector<std::complex<double>> buf(16);
    CHECK_THROWS_AS(experiments::fill_channel(a, b, budget, buf.data()),
                    std::invalid_argument);
    channel::AntennaArray empty;
    CHECK_THROWS_AS(experiments::fill_channel(empty, a, budget, buf.data()),
                    std::invalid_argument);
}

TEST_CASE("link scenario picks the center receiver and its +x neighbour") {
    config::ScenarioConfig c;
    const LinkScenario s = experiments::make_link_scenario(c);
    CHECK(s.rx_index == 11 * 23 + 11);
    CHECK(s.tx_index == s.rx_index + 23);
    CHECK(s.bss.points.size() == 529);
    CHECK(s.psi == 64);
    const double d =
        geometry::distance(s.bss.points[s.rx_index], s.bss.points[s.tx_index]);
    CHECK(d == doctest::Approx(100.0).epsilon(1e-12));

    // Overrides replace the configured antenna count and wavelength.
    const LinkScenario o = experiments::make_link_scenario(c, 16, 0.04);
    CHECK(o.psi == 16);
    CHECK(o.budget.wavelength == doctest::Approx(0.04).epsilon(1e-15));
}

TEST_CASE("reuse patterns produce the documented activation sets") {
    config::ScenarioConfig c;
    const LinkScenario s = experiments::make_link_scenario(c);
    const int g = 23;
    const int ti = s.tx_index / g, tj = s.tx_index % g;

    const auto full = experiments::reuse_active_set(s, "full", 1, 1, 0);
    CHECK(full.size() == 527);
    for (int b : full) {
        CHECK(b != s.rx_index);
        CHECK(b != s.tx_index);
    }

    // Bernoulli(1/p) keeps everything at p = 1, so random@1 is full reuse.
    const auto rnd1 = experiments::reuse_active_set(s, "random", 1, 1, 7);
    CHECK(rnd1 == full);

    const auto rnd4 = experiments::reuse_active_set(s, "random", 4, 1, 7);
    CHECK(rnd4.size() < full.size());
    CHECK(rnd4 != experiments::reuse_active_set(s, "random", 4, 1, 8));

    const auto det4 = experiments::reuse_active_set(s, "det4", 4, 1, 0);
    CHECK(det4.size() == 131);  // 12 even columns x 11 odd rows minus the TX
    for (int b : det4) {
        CHECK((b / g) % 2 == ti % 2);
        CHECK(b % g % 2 == tj % 2);
        CHECK(b != s.tx_index);
    }

    const auto det9 = experiments::reuse_active_set(s, "det9", 9, 1, 0);
    CHECK(det9.size() == 55);  // 8 x 7 coset members minus the TX
    for (int b : det9) {
        CHECK((b / g) % 3 == ti % 3);
        CHECK(b % g % 3 == tj % 3);
    }

    CHECK_THROWS_AS(
        (void)experiments::reuse_active_set(s, "det4", 9, 1, 0),
        std::invalid_argument);
    CHECK_THROWS_AS(
        (void)experiments::reuse_active_set(s, "hex", 3, 1, 0),
        std::invalid_argument);
}

TEST_CASE("link trials are deterministic in all seed inputs") {
    const auto c = small_link_config();
    const LinkScenario s = experiments::make_link_scenario(c);
    const auto active = experiments::reuse_active_set(s, "full", 1, 1, 0);

    const auto a = experiments::link_trial(s, active, 1, 1, 0);
    const auto b = experiments::link_trial(s, active, 1, 1, 0);
    CHECK(a.rate == b.rate);
    CHECK(a.rate > 0.0);

    const auto other = experiments::link_trial(s, active, 1, 1, 1);
    CHECK(other.rate != a.rate);
}

TEST_CASE("ergodic lower bound sits below the sampled rate") {
    const auto c = small_link_config();
    const LinkScenario s = experiments::make_link_scenario(c);
    const auto active = experiments::reuse_active_set(s, "full", 1, 1, 0);
    const double q =
        linkrate::ring_interference_constant(c.spacing, c.alpha, 1.0, 4096)
            .value;
    const auto out = experiments::link_trial(s, active, 1, 1, 0, q);
    CHECK(out.lower_bound > 0.0);
    CHECK(out.lower_bound < out.rate);
}

TEST_CASE("rate grows with antennas under fixed aperture-bandwidth product") {
    config::ScenarioConfig c;
    const long trials = 6;
    double mean16 = 0.0, mean32 = 0.0;
    {
        const LinkScenario s = experiments::make_link_scenario(c, 16, 0.04);
        const auto active = experiments::reuse_active_set(s, "full", 1, 1, 0);
        for (long t = 0; t < trials; ++t)
            mean16 += experiments::link_trial(s, active, 1, 1, t).rate;
    }
    {
        const LinkScenario s = experiments::make_link_scenario(c, 32, 0.02);
        const auto active = experiments::reuse_active_set(s, "full", 1, 1, 0);
        for (long t = 0; t < trials; ++t)
            mean32 += experiments::link_trial(s, active, 1, 1, t).rate;
    }
    CHECK(mean32 / mean16 > 1.3);
}

TEST_CASE("fig_reuse sweep reports all patterns with paired seeds") {
    config::ScenarioConfig c;
    c.kind = config::ScenarioKind::fig_reuse;
    c.grid_dim = 5;
    c.psi = 4;
    c.trials = 3;

    const auto art = experiments::run_fig_reuse(c);
    CHECK(art.label == "fig_reuse");
    REQUIRE(art.summary.points.size() == 7);
    CHECK(art.summary.points[0].label == "full");
    CHECK(art.summary.points[1].label == "random");
    // Identical activation sets and antenna seeds: the two sweeps coincide.
    CHECK(art.summary.points[0].mean == art.summary.points[1].mean);
    CHECK(art.csv_body.find("pattern,p,mean_rate,std_rate,trials\n") !=
          std::string::npos);
    CHECK(data_lines(art.csv_body).size() == 7);
    for (const auto& pt : art.summary.points) CHECK(pt.count == 3);
    CHECK(art.svg_body.find("<svg") != std::string::npos);
    CHECK(art.svg_body.find("polyline") != std::string::npos);
}

TEST_CASE("rate_pdf sweep keeps quantiles ordered and bins complete") {
    auto c = small_link_config();
    c.kind = config::ScenarioKind::rate_pdf;
    c.trials = 40;

    const auto art = experiments::run_rate_pdf(c);
    REQUIRE(art.summary.points.size() == 1);
    const auto& pt = art.summary.points[0];
    CHECK(pt.count == 40);
    CHECK(pt.q05 <= pt.q50);
    CHECK(pt.q50 <= pt.q95);
    CHECK(pt.mean > pt.q05 - 3 * pt.std_dev);
    CHECK(pt.mean < pt.q95 + 3 * pt.std_dev);
    CHECK(art.summary.scalars.count("ergodic_lower_bound") == 1);
    CHECK(art.summary.scalars.at("ergodic_lower_bound") < pt.q05);

    bool warned = false;
    for (const auto& note : art.notices)
        warned = warned || note.find("unstable") != std::string::npos;
    CHECK(warned);

    const auto rows = data_lines(art.csv_body);
    REQUIRE(rows.size() == 40);
    long total = 0;
    double prev_hi = -1e300;
    for (const auto& row : rows) {
        const auto f = split(row);
        REQUIRE(f.size() == 3);
        CHECK(std::stod(f[0]) < std::stod(f[1]));
        CHECK(std::stod(f[0]) >= prev_hi - 1e-9);
        prev_hi = std::stod(f[1]);
        total += std::stol(f[2]);
    }
    CHECK(total == 40);
}

TEST_CASE("cutset sweep skips over-cap points with a notice") {
    config::ScenarioConfig c;
    c.kind = config::ScenarioKind::cutset_sweep;
    c.psi = 2;
    c.alpha = 5.0;
    c.density = 1.0;
    c.spacing = 1.0;
    c.trials = 3;
    c.n_grid = {16, 10000};

    const auto art = experiments::run_cutset_sweep(c);
    bool skipped = false;
    for (const auto& note : art.notices)
        skipped = skipped || note.find("matrix cap") != std::string::npos;
    CHECK(skipped);

    const auto rows = data_lines(art.csv_body);
    REQUIRE(rows.size() == 1);
    const auto f = split(rows[0]);
    REQUIRE(f.size() == 8);
    CHECK(std::stol(f[0]) == 16);
    const double exact = std::stod(f[3]);
    const double hadamard = std::stod(f[4]);
    const double strip = std::stod(f[5]);
    CHECK(exact <= hadamard * (1 + 1e-9));
    CHECK(hadamard <= strip * (1 + 1e-9));
}

TEST_CASE("strategy comparison emits both strategies per sweep point") {
    config::ScenarioConfig c;
    c.kind = config::ScenarioKind::strategy_compare;
    c.psi_rule = "sqrt_n";
    c.alpha = 4.0;
    c.trials = 2;
    c.n_grid = {9};

    const auto art = experiments::run_strategy_compare(c);
    REQUIRE(art.summary.points.size() == 3);
    CHECK(art.summary.points[0].label == "short_min");
    CHECK(art.summary.points[1].label == "short_mean");
    CHECK(art.summary.points[2].label == "long");
    for (const auto& pt : art.summary.points) {
        CHECK(pt.axis == 9.0);
        CHECK(pt.mean > 0.0);
    }

    const auto rows = data_lines(art.csv_body);
    REQUIRE(rows.size() == 1);
    const auto f = split(rows[0]);
    REQUIRE(f.size() == 7);
    CHECK(std::stol(f[1]) == 3);  // sqrt_n rule at n = 9
    const double d_c = std::stod(f[2]);
    CHECK(d_c ==
          doctest::Approx(linkrate::long_hop_range(1.0, 1.0, 3, 4.0, 100.0))
              .epsilon(1e-12));
}

TEST_CASE("highway census summarizes both orientations") {
    config::ScenarioConfig c;
    c.kind = config::ScenarioKind::highway_census;
    c.box_side = 10.0;
    c.density = 1.0;
    c.cell_side = 2.0;
    c.trials = 6;

    const auto art = experiments::run_highway_census(c);
    REQUIRE(art.summary.points.size() == 2);
    CHECK(art.summary.points[0].label == "horizontal");
    CHECK(art.summary.points[1].label == "vertical");
    CHECK(art.csv_body.find("seed,n,horizontal,vertical,failed_slabs\n") !=
          std::string::npos);
    CHECK(data_lines(art.csv_body).size() == 6);
    CHECK(art.summary.scalars.count("failed_slab_fraction") == 1);
}

TEST_CASE("boundary gateways absorb the external traffic exactly once") {
    config::ScenarioConfig c;
    c.kind = config::ScenarioKind::gateway_boundary;
    c.grid_dim = 8;
    c.rho = 0.5;
    c.trials = 10;

    const auto art = experiments::run_gateway_scenarios(c);
    REQUIRE(art.summary.points.size() == 8);
    double total = 0.0;
    for (const auto& pt : art.summary.points) total += pt.mean;
    // Every external BS lands on exactly one gateway; E[total] = (1-rho) n.
    CHECK(total > 32.0 - 6.0);
    CHECK(total < 32.0 + 6.0);
    CHECK(art.summary.scalars.at("expected_load") ==
          doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("gateway grid partitions into live mini-networks") {
    config::ScenarioConfig c;
    c.kind = config::ScenarioKind::gateway_grid;
    c.grid_dim = 4;
    c.beta = 0.5;
    c.trials = 3;
    c.psi = 8;

    const auto art = experiments::run_gateway_scenarios(c);
    REQUIRE(art.summary.points.size() == 4);
    for (const auto& pt : art.summary.points) CHECK(pt.mean > 0.0);
    const auto rows = data_lines(art.csv_body);
    REQUIRE(rows.size() == 4);
    const auto f = split(rows[0]);
    REQUIRE(f.size() == 5);
    CHECK(std::stol(f[1]) == 2);  // psi = n^{(1-beta)/2} = 16^{1/4}
    CHECK(std::stol(f[2]) == 4);  // 2x2 blocks
}

TEST_CASE("run_scenario dispatches on the configured kind") {
    config::ScenarioConfig c;
    c.kind = config::ScenarioKind::highway_census;
    c.box_side = 10.0;
    c.trials = 2;
    CHECK(experiments::run_scenario(c).label == "highway_census");
}

TEST_CASE("output files are deterministic and honor the env override") {
    namespace fs = std::filesystem;
    config::ScenarioConfig c;
    c.kind = config::ScenarioKind::highway_census;
    c.box_side = 10.0;
    c.trials = 4;
    c.master_seed = 77;
    c.emit_svg = true;

    const auto art = experiments::run_scenario(c);
    const auto art2 = experiments::run_scenario(c);
    CHECK(art.csv_body == art2.csv_body);
    CHECK(art.svg_body == art2.svg_body);

    const fs::path dir = fs::temp_directory_path() / "backhaul_emit_test";
    fs::remove_all(dir);
    setenv("BACKHAUL_OUTPUT_DIR", dir.c_str(), 1);

    const auto paths = experiments::emit_outputs(art, c);
    REQUIRE(paths.size() == 2);
    CHECK(paths[0].find("highway_census_77.csv") != std::string::npos);
    CHECK(paths[1].find("highway_census_77.svg") != std::string::npos);

    auto slurp = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string first = slurp(paths[0]);
    (void)experiments::emit_outputs(art2, c);
    CHECK(slurp(paths[0]) == first);
    CHECK(first == art.csv_body);

    c.emit_svg = false;
    CHECK(experiments::emit_outputs(art, c).size() == 1);

    experiments::ScenarioArtifacts empty;
    CHECK_THROWS_AS((void)experiments::emit_outputs(empty, c),
                    std::runtime_error);

    setenv("BACKHAUL_OUTPUT_DIR", "/proc/backhaul_nowhere/x", 1);
    CHECK_THROWS_AS((void)experiments::emit_outputs(art, c),
                    std::runtime_error);

    unsetenv("BACKHAUL_OUTPUT_DIR");
    fs::remove_all(dir);
}

TEST_CASE("seed report covers every stream deterministically") {
    config::ScenarioConfig c;
    c.master_seed = 123;
    const auto rows = experiments::seed_report(c, 4);
    CHECK(rows.size() == 8 * 4);
    for (const auto& row : rows)
        CHECK(row.value ==
              backhaul::derive_seed(123, row.stream, row.counter));
}
