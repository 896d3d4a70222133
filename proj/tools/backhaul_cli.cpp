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

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "backhaul/config.hpp"
#include "backhaul/experiments.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kRuntimeError = 3;

backhaul::config::ScenarioConfig load(const std::string& path) {
    auto c = backhaul::config::parse_config_file(path);
    for (const auto& w : backhaul::config::validate(c))
        std::cerr << "warning: " << w << "\n";
    return c;
}

int cmd_run(const std::string& path) {
    const auto c = load(path);
    const auto art = backhaul::experiments::run_scenario(c);
    for (const auto& note : art.notices) std::cerr << "note: " << note << "\n";
    for (const auto& p : backhaul::experiments::emit_outputs(art, c))
        std::cout << p << "\n";
    std::fprintf(stderr, "done in %.2f s\n", art.summary.runtime_seconds);
    return kOk;
}

int cmd_validate(const std::string& path) {
    load(path);
    std::cout << "ok\n";
    return kOk;
}

int cmd_list() {
    using backhaul::config::ScenarioKind;
    for (auto k : {ScenarioKind::fig_reuse, ScenarioKind::rate_pdf,
                   ScenarioKind::cutset_sweep, ScenarioKind::strategy_compare,
                   ScenarioKind::highway_census, ScenarioKind::gateway_boundary,
                   ScenarioKind::gateway_grid})
        std::cout << backhaul::config::to_string(k) << "\n";
    return kOk;
}

int cmd_seed_report(const std::string& path) {
    const auto c = load(path);
    std::cout << "purpose,stream,counter,seed\n";
    for (const auto& row : backhaul::experiments::seed_report(c))
        std::cout << row.purpose << "," << row.stream << "," << row.counter << ","
                  << row.value << "\n";
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"backhaul capacity-scaling simulator"};
    app.require_subcommand(1);

    std::string run_cfg, validate_cfg, seed_cfg;
    auto* run = app.add_subcommand("run", "execute a scenario config");
    run->add_option("config", run_cfg, "path to a scenario config file")
        ->required();
    auto* validate = app.add_subcommand("validate", "check a config file");
    validate->add_option("config", validate_cfg, "path to a scenario config file")
        ->required();
    auto* list = app.add_subcommand("list-scenarios", "print known scenario kinds");
    auto* seeds = app.add_subcommand("seed-report",
                                     "print the derived seed table for a config");
    seeds->add_option("config", seed_cfg, "path to a scenario config file")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(run_cfg);
        if (validate->parsed()) return cmd_validate(validate_cfg);
        if (list->parsed()) return cmd_list();
        if (seeds->parsed()) return cmd_seed_report(seed_cfg);
    } catch (const backhaul::config::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
    return kOk;
}
