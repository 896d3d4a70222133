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

#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "backhaul/channel.hpp"
#include "backhaul/config.hpp"
#include "backhaul/geometry.hpp"

namespace backhaul::experiments {

// Seed derivation scheme (documented, surfaced by the CLI seed report):
// every random draw uses derive_seed(master_seed, stream, counter) with the
// purpose-specific stream below. Trial results are therefore independent of
// execution order.
inline constexpr std::uint64_t kRateStream = 0;      // counter = trial
inline constexpr std::uint64_t kAntennaStream = 1;   // counter = trial * n_bs + bs
inline constexpr std::uint64_t kActivationStream = 2;  // counter = trial * 16 + p
inline constexpr std::uint64_t kPairingStream = 3;   // counter = trial or point
inline constexpr std::uint64_t kTieStream = 4;       // counter = trial or point
inline constexpr std::uint64_t kPppStream = 5;       // counter = trial
inline constexpr std::uint64_t kGatewayStream = 6;   // counter = trial
inline constexpr std::uint64_t kBlockStream = 7;     // counter = block * trials + trial

struct SweepPoint {
    std::string label;      // series name (pattern, strategy, block, ...)
    double axis = 0.0;
    double mean = 0.0;
    double std_dev = 0.0;   // sample standard deviation
    double q05 = 0.0;
    double q50 = 0.0;
    double q95 = 0.0;
    long count = 0;         // samples behind the point, equals trials
};

struct SweepResult {
    std::string axis_name;
    std::vector<SweepPoint> points;
    std::map<std::string, double> scalars;  // named headline numbers
    double runtime_seconds = 0.0;           // never serialized into artifacts
};

// A finished scenario: CSV body (metadata comments + header + rows), an
// optional SVG body, the numeric summary, and human-readable notices (e.g.
// skipped sweep points). Bodies are byte-stable for a fixed config.
struct ScenarioArtifacts {
    std::string label;
    std::string csv_body;
    std::string svg_body;
    SweepResult summary;
    std::vector<std::string> notices;
};

// Measured-link fixture: receiver at the lattice center, transmitter its
// horizontal (+x) neighbour, every other BS a potential interferer.
struct LinkScenario {
    geometry::Realization bss;
    int rx_index = -1;
    int tx_index = -1;
    channel::LinkBudget budget;
    int psi = 0;
    double array_side = 0.0;
};

// psi_override/wavelength_override replace the config values when positive
// (used by sweeps that scale psi and keep lambda * psi fixed).
LinkScenario make_link_scenario(const config::ScenarioConfig& c,
                                int psi_override = 0,
                                double wavelength_override = 0.0);

// Vectorized column-major channel fill (rx antennas x tx antennas) into
// `out`; same formula as build_channel_matrix, batched for throughput.
// Agreement with the reference path is a tested invariant (1e-9 per entry;
// the two paths differ only in ulp-level distance rounding).
void fill_channel(const channel::AntennaArray& tx, const channel::AntennaArray& rx,
                  const channel::LinkBudget& budget, std::complex<double>* out);

// Interferer indices active in the measured slot under a reuse pattern:
//   full    all BSs except the measured pair (any p)
//   random  each BS kept independently with probability 1/p
//   det4    BSs sharing the TX coset (i mod 2, j mod 2), p = 4
//   det9    BSs sharing the TX coset (i mod 3, j mod 3), p = 9
// Errors: std::invalid_argument for unknown patterns or det/p mismatches.
std::vector<int> reuse_active_set(const LinkScenario& s, const std::string& pattern,
                                  int p, std::uint64_t master_seed, long trial);

struct TrialOutput {
    double rate = 0.0;
    double lower_bound = 0.0;  // filled when ring_q > 0
};

// One Monte-Carlo trial: resample all antenna arrays, accumulate the active
// interference covariance, evaluate the reuse-weighted rate (and the ergodic
// lower bound of this trial's desired channel when ring_q > 0).
TrialOutput link_trial(const LinkScenario& s, const std::vector<int>& active,
                       int reuse_p, std::uint64_t master_seed, long trial,
                       double ring_q = 0.0);

ScenarioArtifacts run_fig_reuse(const config::ScenarioConfig& c);
ScenarioArtifacts run_rate_pdf(const config::ScenarioConfig& c);
ScenarioArtifacts run_cutset_sweep(const config::ScenarioConfig& c);
ScenarioArtifacts run_strategy_compare(const config::ScenarioConfig& c);
ScenarioArtifacts run_highway_census(const config::ScenarioConfig& c);
ScenarioArtifacts run_gateway_scenarios(const config::ScenarioConfig& c);

// Dispatch on c.kind. Errors: config::ConfigError from validation,
// std::runtime_error for numerical failures.
ScenarioArtifacts run_scenario(const config::ScenarioConfig& c);

// Writes `<scenario>_<master_seed>.csv` (and `.svg` when configured and the
// scenario plots) under the output directory; the BACKHAUL_OUTPUT_DIR
// environment variable overrides config.output_dir. Returns written paths.
// Errors: std::runtime_error for empty results or unwritable destinations.
std::vector<std::string> emit_outputs(const ScenarioArtifacts& artifacts,
                                      const config::ScenarioConfig& c);

struct SeedReportRow {
    std::string purpose;
    std::uint64_t stream = 0;
    std::uint64_t counter = 0;
    std::uint64_t value = 0;
};

// First derived seeds of every stream the scenario will consume.
std::vector<SeedReportRow> seed_report(const config::ScenarioConfig& c,
                                       long max_rows = 4);

}  // namespace backhaul::experiments
