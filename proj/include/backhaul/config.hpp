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

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace backhaul::config {

enum class ScenarioKind {
    fig_reuse,
    rate_pdf,
    cutset_sweep,
    strategy_compare,
    highway_census,
    gateway_boundary,
    gateway_grid,
};

const char* to_string(ScenarioKind kind);
ScenarioKind kind_from_string(const std::string& name);

// Raised for malformed files, unknown keys, and parameter values that would
// violate a downstream module's preconditions.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One scenario per file; flat `section.key = value` lines, `#` comments.
// Every field has a §-free default; unknown keys are rejected so typos
// cannot silently fall back to defaults.
struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::rate_pdf;
    long trials = 100;
    std::uint64_t master_seed = 1;
    std::string output_dir = "out";
    bool emit_svg = false;

    // geometry: lattice scenarios use grid_dim/spacing/perturbation, PPP
    // scenarios use box_side/density, highways use cell_side.
    int grid_dim = 23;
    double spacing = 100.0;
    double perturbation = 0.0;
    double density = 1.0;
    double box_side = 20.0;
    double cell_side = 2.0;

    // channel
    double alpha = 5.0;
    double mu_db = 0.0;
    double wavelength = 0.01;
    double array_area = 64.0;
    int psi = 64;
    std::string psi_rule = "fixed";  // fixed | sqrt_n | n_alpha_over_4
    // Keep lambda * psi at its configured product as psi varies with a rule.
    bool couple_wavelength = false;

    // reuse
    int reuse_p = 1;
    std::string pattern = "full";  // full | random | det4 | det9

    // sweeps (cutset_sweep, strategy_compare)
    std::vector<long> n_grid;

    // gateway scenarios
    double rho = 0.5;   // fraction of traffic staying local (boundary kind)
    double beta = 0.5;  // mini-network exponent (grid kind)

    bool operator==(const ScenarioConfig&) const = default;
};

// Errors: ConfigError naming the offending line or key.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig parse_config_file(const std::string& path);

// Canonical serialization; parse_config(write_config(c)) == c exactly.
void write_config(const ScenarioConfig& c, std::ostream& out);

// Antenna count at sweep point n under the configured psi rule.
int resolved_psi(const ScenarioConfig& c, long n);

// Rejects any parameter that would violate a downstream precondition before
// any computation starts; returns non-fatal warnings (e.g. low trial counts).
// Errors: ConfigError naming the key and the violated condition.
std::vector<std::string> validate(const ScenarioConfig& c);

}  // namespace backhaul::config
