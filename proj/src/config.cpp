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

#include "backhaul/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace backhaul::config {

namespace {

constexpr double kLightSpeed = 2.99792458e8;  // m/s

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError(key + ": not a number: '" + v + "'");
    }
    if (pos != v.size()) throw ConfigError(key + ": trailing junk in '" + v + "'");
    return x;
}

long parse_long(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    long x = 0;
    try {
        x = std::stol(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError(key + ": not an integer: '" + v + "'");
    }
    if (pos != v.size()) throw ConfigError(key + ": trailing junk in '" + v + "'");
    return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::vector<long> parse_long_list(const std::string& key, const std::string& v) {
    std::vector<long> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty())
            throw ConfigError(key + ": empty list entry in '" + v + "'");
        out.push_back(parse_long(key, item));
    }
    return out;
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

bool is_square_of_int(long n, long* root = nullptr) {
    if (n < 0) return false;
    const long r = std::lround(std::sqrt(static_cast<double>(n)));
    if (root) *root = r;
    return r * r == n;
}

}  // namespace

const char* to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::fig_reuse: return "fig_reuse";
        case ScenarioKind::rate_pdf: return "rate_pdf";
        case ScenarioKind::cutset_sweep: return "cutset_sweep";
        case ScenarioKind::strategy_compare: return "strategy_compare";
        case ScenarioKind::highway_census: return "highway_census";
        case ScenarioKind::gateway_boundary: return "gateway_boundary";
        case ScenarioKind::gateway_grid: return "gateway_grid";
    }
    return "unknown";
}

ScenarioKind kind_from_string(const std::string& name) {
    for (ScenarioKind k :
         {ScenarioKind::fig_reuse, ScenarioKind::rate_pdf, ScenarioKind::cutset_sweep,
          ScenarioKind::strategy_compare, ScenarioKind::highway_census,
          ScenarioKind::gateway_boundary, ScenarioKind::gateway_grid})
        if (name == to_string(k)) return k;
    throw ConfigError("scenario.kind: unknown scenario '" + name + "'");
}

ScenarioConfig parse_config(std::istream& in) {
    ScenarioConfig c;
    bool saw_wavelength = false, saw_carrier = false;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) +
                              ": expected 'section.key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "scenario.kind") c.kind = kind_from_string(value);
        else if (key == "scenario.trials") c.trials = parse_long(key, value);
        else if (key == "scenario.master_seed")
            c.master_seed = static_cast<std::uint64_t>(parse_long(key, value));
        else if (key == "scenario.output_dir") c.output_dir = value;
        else if (key == "scenario.emit_svg") c.emit_svg = parse_bool(key, value);
        else if (key == "geometry.grid_dim")
            c.grid_dim = static_cast<int>(parse_long(key, value));
        else if (key == "geometry.spacing") c.spacing = parse_double(key, value);
        else if (key == "geometry.perturbation")
            c.perturbation = parse_double(key, value);
        else if (key == "geometry.density") c.density = parse_double(key, value);
        else if (key == "geometry.box_side") c.box_side = parse_double(key, value);
        else if (key == "geometry.cell_side") c.cell_side = parse_double(key, value);
        else if (key == "channel.alpha") c.alpha = parse_double(key, value);
        else if (key == "channel.mu_db") c.mu_db = parse_double(key, value);
        else if (key == "channel.wavelength") {
            c.wavelength = parse_double(key, value);
            saw_wavelength = true;
        } else if (key == "channel.f_carrier_ghz") {
            const double f = parse_double(key, value);
            if (!(f > 0.0)) throw ConfigError("channel.f_carrier_ghz: must be > 0");
            c.wavelength = kLightSpeed / (f * 1e9);
            saw_carrier = true;
        } else if (key == "channel.array_area")
            c.array_area = parse_double(key, value);
        else if (key == "channel.psi") c.psi = static_cast<int>(parse_long(key, value));
        else if (key == "channel.psi_rule") c.psi_rule = value;
        else if (key == "channel.couple_wavelength")
            c.couple_wavelength = parse_bool(key, value);
        else if (key == "reuse.p") c.reuse_p = static_cast<int>(parse_long(key, value));
        else if (key == "reuse.pattern") c.pattern = value;
        else if (key == "sweep.n_grid") c.n_grid = parse_long_list(key, value);
        else if (key == "gateway.rho") c.rho = parse_double(key, value);
        else if (key == "gateway.beta") c.beta = parse_double(key, value);
        else
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" +
                              key + "'");
    }
    if (saw_wavelength && saw_carrier)
        throw ConfigError(
            "channel.wavelength and channel.f_carrier_ghz are alternatives; "
            "set only one");
    return c;
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in);
}

void write_config(const ScenarioConfig& c, std::ostream& out) {
    out << "scenario.kind = " << to_string(c.kind) << "\n";
    out << "scenario.trials = " << c.trials << "\n";
    out << "scenario.master_seed = " << c.master_seed << "\n";
    out << "scenario.output_dir = " << c.output_dir << "\n";
    out << "scenario.emit_svg = " << (c.emit_svg ? "true" : "false") << "\n";
    out << "geometry.grid_dim = " << c.grid_dim << "\n";
    out << "geometry.spacing = " << format_double(c.spacing) << "\n";
    out << "geometry.perturbation = " << format_double(c.perturbation) << "\n";
    out << "geometry.density = " << format_double(c.density) << "\n";
    out << "geometry.box_side = " << format_double(c.box_side) << "\n";
    out << "geometry.cell_side = " << format_double(c.cell_side) << "\n";
    out << "channel.alpha = " << format_double(c.alpha) << "\n";
    out << "channel.mu_db = " << format_double(c.mu_db) << "\n";
    out << "channel.wavelength = " << format_double(c.wavelength) << "\n";
    out << "channel.array_area = " << format_double(c.array_area) << "\n";
    out << "channel.psi = " << c.psi << "\n";
    out << "channel.psi_rule = " << c.psi_rule << "\n";
    out << "channel.couple_wavelength = " << (c.couple_wavelength ? "true" : "false")
        << "\n";
    out << "reuse.p = " << c.reuse_p << "\n";
    out << "reuse.pattern = " << c.pattern << "\n";
    out << "sweep.n_grid = ";
    for (std::size_t i = 0; i < c.n_grid.size(); ++i)
        out << (i ? "," : "") << c.n_grid[i];
    out << "\n";
    out << "gateway.rho = " << format_double(c.rho) << "\n";
    out << "gateway.beta = " << format_double(c.beta) << "\n";
}

int resolved_psi(const ScenarioConfig& c, long n) {
    if (c.psi_rule == "sqrt_n")
        return static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    if (c.psi_rule == "n_alpha_over_4")
        return static_cast<int>(
            std::lround(std::pow(static_cast<double>(n), c.alpha / 4.0)));
    return c.psi;
}

std::vector<std::string> validate(const ScenarioConfig& c) {
    auto fail = [](const std::string& msg) { throw ConfigError(msg); };
    std::vector<std::string> warnings;

    if (c.trials < 1) fail("scenario.trials: must be >= 1");
    if (c.output_dir.empty()) fail("scenario.output_dir: must not be empty");
    if (c.grid_dim < 1) fail("geometry.grid_dim: must be >= 1");
    if (!(c.spacing > 0.0)) fail("geometry.spacing: must be > 0");
    if (!(c.perturbation >= 0.0) || c.perturbation > 1.0)
        fail("geometry.perturbation: must lie in [0, 1]");
    if (!(c.density > 0.0)) fail("geometry.density: must be > 0");
    if (!(c.box_side > 0.0)) fail("geometry.box_side: must be > 0");
    if (!(c.cell_side > 0.0)) fail("geometry.cell_side: must be > 0");
    if (!(c.alpha > 2.0)) fail("channel.alpha: must be > 2");
    if (std::isnan(c.mu_db)) fail("channel.mu_db: must not be NaN");
    if (!(c.wavelength > 0.0)) fail("channel.wavelength: must be > 0");
    if (!(c.array_area > 0.0)) fail("channel.array_area: must be > 0");
    if (c.psi < 1) fail("channel.psi: must be >= 1");
    if (c.psi_rule != "fixed" && c.psi_rule != "sqrt_n" &&
        c.psi_rule != "n_alpha_over_4")
        fail("channel.psi_rule: must be fixed, sqrt_n, or n_alpha_over_4");
    if (c.reuse_p < 1) fail("reuse.p: must be >= 1");
    if (c.pattern != "full" && c.pattern != "random" && c.pattern != "det4" &&
        c.pattern != "det9")
        fail("reuse.pattern: must be full, random, det4, or det9");
    if (c.pattern == "det4" && c.reuse_p != 4)
        fail("reuse.pattern: det4 is defined only for reuse.p = 4");
    if (c.pattern == "det9" && c.reuse_p != 9)
        fail("reuse.pattern: det9 is defined only for reuse.p = 9");

    const bool lattice_link =
        c.kind == ScenarioKind::fig_reuse || c.kind == ScenarioKind::rate_pdf;
    if (lattice_link && c.grid_dim < 3)
        fail("geometry.grid_dim: link scenarios need a center BS with a "
             "horizontal neighbour (grid_dim >= 3)");

    switch (c.kind) {
        case ScenarioKind::fig_reuse:
            break;
        case ScenarioKind::rate_pdf:
            if (c.trials < 100)
                warnings.push_back(
                    "scenario.trials < 100 gives an unstable rate pdf");
            break;
        case ScenarioKind::cutset_sweep: {
            if (c.n_grid.empty()) fail("sweep.n_grid: must list at least one n");
            for (long n : c.n_grid) {
                if (n < 4) fail("sweep.n_grid: every n must be >= 4");
                // Scaling formula domain: alpha > 2 * (2 + log_n(psi)).
                const double log_n_psi =
                    std::log(static_cast<double>(resolved_psi(c, n))) /
                    std::log(static_cast<double>(n));
                if (!(c.alpha / 2.0 - 2.0 - log_n_psi > 0.0))
                    fail("channel.alpha: cut capacity scale requires alpha > "
                         "2 * (2 + log_n(psi)) at n = " +
                         std::to_string(n));
            }
            break;
        }
        case ScenarioKind::strategy_compare: {
            if (c.n_grid.empty()) fail("sweep.n_grid: must list at least one n");
            for (long n : c.n_grid) {
                long root = 0;
                if (!is_square_of_int(n, &root) || root < 3)
                    fail("sweep.n_grid: strategy_compare runs on square "
                         "lattices; every n must be a perfect square >= 9");
            }
            break;
        }
        case ScenarioKind::highway_census:
            if (std::llround(c.box_side / c.cell_side) < 1)
                fail("geometry.cell_side: larger than the box side");
            break;
        case ScenarioKind::gateway_boundary:
            if (!(c.rho > 0.0) || !(c.rho < 1.0))
                fail("gateway.rho: must lie strictly in (0, 1)");
            if (c.grid_dim < 3) fail("geometry.grid_dim: must be >= 3");
            break;
        case ScenarioKind::gateway_grid: {
            if (!(c.beta >= 0.0) || !(c.beta <= 1.0))
                fail("gateway.beta: must lie in [0, 1]");
            if (c.grid_dim < 2) fail("geometry.grid_dim: must be >= 2");
            // n^beta mini-networks must tile the lattice as whole blocks.
            const double blocks_per_side =
                std::pow(static_cast<double>(c.grid_dim), c.beta);
            const long b = std::lround(blocks_per_side);
            if (std::abs(blocks_per_side - static_cast<double>(b)) > 1e-9 ||
                b < 1 || c.grid_dim % b != 0)
                fail("gateway.beta: grid_dim^beta must be an integer dividing "
                     "grid_dim");
            break;
        }
    }
    return warnings;
}

}  // namespace backhaul::config
