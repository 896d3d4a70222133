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

#include "backhaul/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "backhaul/bounds.hpp"
#include "backhaul/linkrate.hpp"
#include "backhaul/plot.hpp"
#include "backhaul/routing.hpp"
#include "backhaul/rng.hpp"

namespace backhaul::experiments {

namespace {

using config::ScenarioConfig;

std::string f12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct Stats {
    double mean = 0.0, std_dev = 0.0, q05 = 0.0, q50 = 0.0, q95 = 0.0;
};

double quantile(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

Stats summarize(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("summarize: no samples");
    Stats s;
    for (double x : v) s.mean += x;
    s.mean /= static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - s.mean) * (x - s.mean);
        s.std_dev = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
    std::sort(v.begin(), v.end());
    s.q05 = quantile(v, 0.05);
    s.q50 = quantile(v, 0.50);
    s.q95 = quantile(v, 0.95);
    return s;
}

SweepPoint make_point(const std::string& label, double axis, const Stats& s,
                      long count) {
    return {label, axis, s.mean, s.std_dev, s.q05, s.q50, s.q95, count};
}

using Meta = std::vector<std::pair<std::string, std::string>>;

void common_meta(Meta& m, const ScenarioConfig& c) {
    m.emplace_back("scenario", config::to_string(c.kind));
    m.emplace_back("master_seed", std::to_string(c.master_seed));
    m.emplace_back("trials", std::to_string(c.trials));
}

void channel_meta(Meta& m, const ScenarioConfig& c) {
    m.emplace_back("grid_dim", std::to_string(c.grid_dim));
    m.emplace_back("spacing", f12(c.spacing));
    m.emplace_back("alpha", f12(c.alpha));
    m.emplace_back("mu_db", f12(c.mu_db));
    m.emplace_back("wavelength", f12(c.wavelength));
    m.emplace_back("array_area", f12(c.array_area));
    m.emplace_back("psi", std::to_string(c.psi));
}

void write_meta(std::ostringstream& out, const Meta& m,
                const std::map<std::string, double>& scalars) {
    for (const auto& [k, v] : m) out << "# " << k << " = " << v << "\n";
    for (const auto& [k, v] : scalars) out << "# " << k << " = " << f12(v) << "\n";
}

double coupled_wavelength(const ScenarioConfig& c, int psi_point) {
    if (!c.couple_wavelength || psi_point == c.psi) return c.wavelength;
    return c.wavelength * static_cast<double>(c.psi) /
           static_cast<double>(psi_point);
}

channel::AntennaArray trial_array(const LinkScenario& s, std::uint64_t master,
                                  long trial, int bs) {
    const std::uint64_t counter =
        static_cast<std::uint64_t>(trial) * s.bss.points.size() +
        static_cast<std::uint64_t>(bs);
    return channel::place_antennas(s.bss.points[bs], s.array_side, s.psi,
                                   derive_seed(master, kAntennaStream, counter));
}

// Representative nearest-neighbour MIMO rate for one lattice size: mean of
// the measured-link trials under full reuse.
double representative_rate(const LinkScenario& s, std::uint64_t master,
                           long trials, long trial_base) {
    const auto active = reuse_active_set(s, "full", 1, master, 0);
    double sum = 0.0;
    for (long t = 0; t < trials; ++t)
        sum += link_trial(s, active, 1, master, trial_base + t).rate;
    return sum / static_cast<double>(trials);
}

std::runtime_error io_error(const std::string& path) {
    return std::runtime_error("emit_outputs: cannot write '" + path + "'");
}

}  // namespace

LinkScenario make_link_scenario(const ScenarioConfig& c, int psi_override,
                                double wavelength_override) {
    LinkScenario s;
    s.bss = geometry::sample_perturbed_lattice(
        c.grid_dim, c.spacing, derive_seed(c.master_seed, kPppStream, 0),
        c.perturbation);
    const int g = c.grid_dim;
    s.rx_index = (g / 2) * g + g / 2;
    s.tx_index = s.rx_index + g;  // +x neighbour; fall back to -x on the edge
    if (s.tx_index >= static_cast<int>(s.bss.points.size()))
        s.tx_index = s.rx_index - g;
    if (s.tx_index < 0)
        throw config::ConfigError(
            "geometry.grid_dim: no horizontal neighbour for the measured link");
    s.psi = psi_override > 0 ? psi_override : c.psi;
    s.budget.pathloss_exponent = c.alpha;
    s.budget.ref_snr_db = c.mu_db;
    s.budget.ref_distance = c.spacing;
    s.budget.wavelength =
        wavelength_override > 0.0 ? wavelength_override : c.wavelength;
    s.budget.validate();
    s.array_side = std::sqrt(c.array_area);
    return s;
}

void fill_channel(const channel::AntennaArray& tx, const channel::AntennaArray& rx,
                  const channel::LinkBudget& budget, std::complex<double>* out) {
    const std::size_t nr = rx.elements.size(), nt = tx.elements.size();
    if (nr == 0 || nt == 0)
        throw std::invalid_argument("fill_channel: empty antenna array");
    const double d_center = geometry::distance(tx.center, rx.center);
    if (!(d_center > 0.0))
        throw std::invalid_argument("fill_channel: coincident array centers");
    const double ratio = d_center / budget.ref_distance;
    const double amp = std::sqrt(budget.mu_linear()) *
                       (ratio <= 1.0
                            ? 1.0
                            : std::pow(ratio, -budget.pathloss_exponent / 2.0));

    std::vector<double> dist(nr);
    for (std::size_t j = 0; j < nt; ++j) {
        const double tx_x = tx.elements[j].x, tx_y = tx.elements[j].y;
        for (std::size_t i = 0; i < nr; ++i) {
            const double dx = rx.elements[i].x - tx_x;
            const double dy = rx.elements[i].y - tx_y;
            dist[i] = std::sqrt(dx * dx + dy * dy);
        }
        std::complex<double>* col = out + j * nr;
        for (std::size_t i = 0; i < nr; ++i) {
            const double cycles = dist[i] / budget.wavelength;
            const double frac = cycles - std::floor(cycles);
            double sv, cv;
            sincos(2.0 * M_PI * frac, &sv, &cv);
            col[i] = {amp * cv, -amp * sv};
        }
    }
}

std::vector<int> reuse_active_set(const LinkScenario& s, const std::string& pattern,
                                  int p, std::uint64_t master_seed, long trial) {
    const int n = static_cast<int>(s.bss.points.size());
    const int g = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    if (g * g != n)
        throw std::invalid_argument("reuse_active_set: lattice scenarios only");
    if (p < 1) throw std::invalid_argument("reuse_active_set: p must be >= 1");

    std::vector<int> active;
    auto coset_match = [&](int b, int mod) {
        const int bi = b / g, bj = b % g;
        const int ti = s.tx_index / g, tj = s.tx_index % g;
        return bi % mod == ti % mod && bj % mod == tj % mod;
    };

    if (pattern == "full") {
        for (int b = 0; b < n; ++b)
            if (b != s.rx_index && b != s.tx_index) active.push_back(b);
    } else if (pattern == "random") {
        Rng rng = make_rng(derive_seed(master_seed, kActivationStream,
                                       static_cast<std::uint64_t>(trial) * 16 + p));
        for (int b = 0; b < n; ++b) {
            if (b == s.rx_index || b == s.tx_index) continue;
            if (uniform_unit(rng) < 1.0 / static_cast<double>(p)) active.push_back(b);
        }
    } else if (pattern == "det4" || pattern == "det9") {
        const int mod = pattern == "det4" ? 2 : 3;
        if (p != mod * mod)
            throw std::invalid_argument("reuse_active_set: " + pattern +
                                        " requires p = " + std::to_string(mod * mod));
        for (int b = 0; b < n; ++b)
            if (b != s.rx_index && b != s.tx_index && coset_match(b, mod))
                active.push_back(b);
    } else {
        throw std::invalid_argument("reuse_active_set: unknown pattern '" +
                                    pattern + "'");
    }
    return active;
}

TrialOutput link_trial(const LinkScenario& s, const std::vector<int>& active,
                       int reuse_p, std::uint64_t master_seed, long trial,
                       double ring_q) {
    const auto rx_arr = trial_array(s, master_seed, trial, s.rx_index);
    const auto tx_arr = trial_array(s, master_seed, trial, s.tx_index);

    arma::cx_mat h(s.psi, s.psi);
    fill_channel(tx_arr, rx_arr, s.budget, h.memptr());

    const double scale =
        reuse_p * s.budget.tx_power / static_cast<double>(s.psi);
    linkrate::CovarianceAccumulator acc(s.psi, scale);
    for (int b : active) {
        const auto arr = trial_array(s, master_seed, trial, b);
        fill_channel(arr, rx_arr, s.budget, acc.claim(s.psi));
    }
    const arma::cx_mat r = acc.finish();

    TrialOutput out;
    out.rate = linkrate::link_rate(h, r, s.budget.tx_power, s.psi, reuse_p,
                                   derive_seed(master_seed, kRateStream,
                                               static_cast<std::uint64_t>(trial)))
                   .rate_bps_hz;
    if (ring_q > 0.0)
        out.lower_bound =
            linkrate::ergodic_lower_bound(h, ring_q, s.budget.tx_power, s.psi);
    return out;
}

ScenarioArtifacts run_fig_reuse(const ScenarioConfig& c) {
    ScenarioArtifacts art;
    art.label = config::to_string(config::ScenarioKind::fig_reuse);
    art.notices = config::validate(c);
    const auto t0 = std::chrono::steady_clock::now();

    const LinkScenario s = make_link_scenario(c);
    const std::vector<std::pair<std::string, int>> combos = {
        {"full", 1},   {"random", 1}, {"random", 2}, {"random", 4},
        {"random", 9}, {"det4", 4},   {"det9", 9}};

    art.summary.axis_name = "reuse_p";
    double se_max = 0.0;
    for (const auto& [pattern, p] : combos) {
        std::vector<double> rates(c.trials);
        for (long t = 0; t < c.trials; ++t) {
            const auto active = reuse_active_set(s, pattern, p, c.master_seed, t);
            rates[t] = link_trial(s, active, p, c.master_seed, t).rate;
        }
        const Stats st = summarize(rates);
        art.summary.points.push_back(
            make_point(pattern, static_cast<double>(p), st, c.trials));
        se_max = std::max(
            se_max, st.std_dev / std::sqrt(static_cast<double>(c.trials)));
    }
    art.summary.scalars["se_mean_max"] = se_max;

    Meta meta;
    common_meta(meta, c);
    channel_meta(meta, c);
    std::ostringstream csv;
    write_meta(csv, meta, art.summary.scalars);
    csv << "pattern,p,mean_rate,std_rate,trials\n";
    for (const auto& pt : art.summary.points)
        csv << pt.label << "," << static_cast<int>(pt.axis) << "," << f12(pt.mean)
            << "," << f12(pt.std_dev) << "," << pt.count << "\n";
    art.csv_body = csv.str();

    std::map<std::string, plot::Series> series;
    for (const auto& pt : art.summary.points)
        series[pt.label].points.emplace_back(pt.axis, pt.mean);
    std::vector<plot::Series> ordered;
    for (auto& [name, sr] : series) {
        sr.name = name;
        ordered.push_back(sr);
    }
    art.svg_body = plot::line_chart("Mean link rate vs reuse factor",
                                    "reuse factor p", "rate (bps/Hz)", ordered);

    art.summary.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return art;
}

ScenarioArtifacts run_rate_pdf(const ScenarioConfig& c) {
    ScenarioArtifacts art;
    art.label = config::to_string(config::ScenarioKind::rate_pdf);
    art.notices = config::validate(c);
    const auto t0 = std::chrono::steady_clock::now();

    const LinkScenario s = make_link_scenario(c);
    const double ring_q =
        linkrate::ring_interference_constant(c.spacing, c.alpha,
                                             s.budget.tx_power, 4096)
            .value;

    std::vector<double> rates(c.trials), lbs(c.trials);
    for (long t = 0; t < c.trials; ++t) {
        const auto active =
            reuse_active_set(s, c.pattern, c.reuse_p, c.master_seed, t);
        const TrialOutput o =
            link_trial(s, active, c.reuse_p, c.master_seed, t, ring_q);
        rates[t] = o.rate;
        lbs[t] = o.lower_bound;
    }

    const Stats st = summarize(rates);
    double lb_mean = 0.0;
    for (double v : lbs) lb_mean += v;
    lb_mean /= static_cast<double>(c.trials);

    art.summary.axis_name = "psi";
    art.summary.points.push_back(
        make_point("rate", static_cast<double>(s.psi), st, c.trials));
    auto& sc = art.summary.scalars;
    sc["mean"] = st.mean;
    sc["std_dev"] = st.std_dev;
    sc["cov"] = st.std_dev / st.mean;
    sc["q05"] = st.q05;
    sc["q50"] = st.q50;
    sc["q95"] = st.q95;
    sc["ergodic_lower_bound"] = lb_mean;
    sc["ring_q"] = ring_q;
    sc["se_mean"] = st.std_dev / std::sqrt(static_cast<double>(c.trials));

    // Fixed-width histogram over the observed support.
    const double lo = *std::min_element(rates.begin(), rates.end());
    const double hi = *std::max_element(rates.begin(), rates.end());
    const int n_bins = 40;
    const double width = hi > lo ? (hi - lo) / n_bins : 1.0;
    std::vector<plot::HistogramBin> bins(n_bins);
    for (int k = 0; k < n_bins; ++k)
        bins[k] = {lo + k * width, lo + (k + 1) * width, 0};
    for (double rate : rates) {
        int k = static_cast<int>((rate - lo) / width);
        k = std::clamp(k, 0, n_bins - 1);
        bins[k].count += 1;
    }

    Meta meta;
    common_meta(meta, c);
    channel_meta(meta, c);
    meta.emplace_back("reuse_p", std::to_string(c.reuse_p));
    meta.emplace_back("pattern", c.pattern);
    std::ostringstream csv;
    write_meta(csv, meta, sc);
    csv << "bin_lo,bin_hi,count\n";
    for (const auto& b : bins)
        csv << f12(b.lo) << "," << f12(b.hi) << "," << b.count << "\n";
    art.csv_body = csv.str();

    art.svg_body = plot::histogram_chart(
        "Link rate distribution", "rate (bps/Hz)", bins,
        {{"mean " + f12(st.mean), st.mean},
         {"ergodic LB " + f12(lb_mean), lb_mean}});

    art.summary.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return art;
}

ScenarioArtifacts run_cutset_sweep(const ScenarioConfig& c) {
    ScenarioArtifacts art;
    art.label = config::to_string(config::ScenarioKind::cutset_sweep);
    art.notices = config::validate(c);
    const auto t0 = std::chrono::steady_clock::now();

    channel::LinkBudget budget;
    budget.pathloss_exponent = c.alpha;
    budget.ref_snr_db = c.mu_db;
    budget.ref_distance = c.spacing;
    budget.wavelength = c.wavelength;
    budget.validate();

    std::vector<bounds::CutsetRow> rows;
    art.summary.axis_name = "n";
    double ratio_min = 0.0, ratio_max = 0.0;
    for (std::size_t idx = 0; idx < c.n_grid.size(); ++idx) {
        const long n = c.n_grid[idx];
        const int psi_n = config::resolved_psi(c, n);
        if (static_cast<long>(psi_n) * n > bounds::kMatrixCap) {
            art.notices.push_back("skipped n = " + std::to_string(n) +
                                  ": n * psi exceeds the matrix cap");
            continue;
        }
        const double side = std::sqrt(static_cast<double>(n) / c.density);

        std::vector<double> exacts, hads, strips;
        for (long t = 0; t < c.trials; ++t) {
            for (int attempt = 0; attempt < 50; ++attempt) {
                const std::uint64_t seed =
                    derive_seed(c.master_seed, kPppStream,
                                (idx * static_cast<std::uint64_t>(c.trials) + t) *
                                        64 +
                                    attempt);
                const auto r =
                    geometry::sample_ppp({0.0, 0.0, side}, c.density, seed);
                try {
                    const auto cut = bounds::cutset_numeric(r, psi_n, budget, seed);
                    exacts.push_back(cut.exact_logdet);
                    hads.push_back(cut.hadamard_bound);
                    strips.push_back(cut.strip_bound);
                    break;
                } catch (const std::invalid_argument&) {
                    // one-sided or empty realization; redraw
                }
            }
        }
        if (exacts.empty()) {
            art.notices.push_back("skipped n = " + std::to_string(n) +
                                  ": no valid realization found");
            continue;
        }

        bounds::CutsetRow row;
        row.n = n;
        row.psi = psi_n;
        row.alpha = c.alpha;
        row.exact = summarize(exacts).mean;
        row.hadamard = summarize(hads).mean;
        const Stats strip_stats = summarize(strips);
        row.strip = strip_stats.mean;
        row.cs_formula = bounds::cut_capacity_scale(
            static_cast<double>(n), static_cast<double>(psi_n), c.alpha);
        row.t_ub_formula = bounds::throughput_upper_scale(
            static_cast<double>(n), static_cast<double>(psi_n), c.alpha);
        rows.push_back(row);
        art.summary.points.push_back(make_point(
            "strip", static_cast<double>(n), strip_stats,
            static_cast<long>(strips.size())));

        const double ratio = row.strip / row.cs_formula;
        if (rows.size() == 1) ratio_min = ratio_max = ratio;
        ratio_min = std::min(ratio_min, ratio);
        ratio_max = std::max(ratio_max, ratio);
    }
    if (rows.empty())
        throw std::runtime_error("cutset_sweep: every sweep point was skipped");
    art.summary.scalars["strip_over_formula_min"] = ratio_min;
    art.summary.scalars["strip_over_formula_max"] = ratio_max;

    Meta meta;
    common_meta(meta, c);
    meta.emplace_back("alpha", f12(c.alpha));
    meta.emplace_back("psi_rule", c.psi_rule);
    meta.emplace_back("density", f12(c.density));
    std::ostringstream csv;
    write_meta(csv, meta, art.summary.scalars);
    bounds::write_cutset_csv(rows, csv);
    art.csv_body = csv.str();

    plot::Series strip_series{"strip bound", {}}, formula_series{"formula", {}};
    for (const auto& row : rows) {
        strip_series.points.emplace_back(static_cast<double>(row.n), row.strip);
        formula_series.points.emplace_back(static_cast<double>(row.n),
                                           row.cs_formula);
    }
    art.svg_body =
        plot::line_chart("Cut-set strip bound vs scaling formula", "n",
                         "bits/channel use", {strip_series, formula_series});

    art.summary.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return art;
}

ScenarioArtifacts run_strategy_compare(const ScenarioConfig& c) {
    ScenarioArtifacts art;
    art.label = config::to_string(config::ScenarioKind::strategy_compare);
    art.notices = config::validate(c);
    const auto t0 = std::chrono::steady_clock::now();

    art.summary.axis_name = "n";
    std::ostringstream body;
    for (std::size_t idx = 0; idx < c.n_grid.size(); ++idx) {
        const long n = c.n_grid[idx];
        const int g =
            static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
        const int psi_n = config::resolved_psi(c, n);
        const double lambda_n = coupled_wavelength(c, psi_n);

        ScenarioConfig cc = c;
        cc.grid_dim = g;
        const LinkScenario s = make_link_scenario(cc, psi_n, lambda_n);
        const double hw_rate = representative_rate(
            s, c.master_seed, c.trials,
            static_cast<long>(idx) * c.trials);

        geometry::Realization r = s.bss;
        geometry::pair_sources_destinations(
            r, derive_seed(c.master_seed, kPairingStream, idx));
        const auto hs = routing::build_highways(r, c.spacing);
        const auto plan = routing::plan_routes(r, hs);
        const auto rates = routing::per_connection_rate(plan, hw_rate, hw_rate);
        double short_min = 0.0, short_mean = 0.0;
        long routable = 0;
        for (std::size_t i = 0; i < plan.connections.size(); ++i) {
            if (!plan.connections[i].routable) continue;
            if (routable == 0 || rates.rate[i] < short_min)
                short_min = rates.rate[i];
            short_mean += rates.rate[i];
            ++routable;
        }
        if (routable == 0)
            throw std::runtime_error("strategy_compare: no routable connection");
        short_mean /= static_cast<double>(routable);

        const double d_c = linkrate::long_hop_range(
            s.budget.tx_power, s.budget.tx_power, psi_n, c.alpha, c.spacing);
        const auto lh = routing::long_hop_route(
            r, d_c, derive_seed(c.master_seed, kTieStream, idx));
        if (lh.stuck > 0)
            art.notices.push_back("long-hop: " + std::to_string(lh.stuck) +
                                  " stuck connections at n = " + std::to_string(n));
        const double hop_rate = std::log2(1.0 + s.budget.mu_linear());
        const double long_rate =
            hop_rate / static_cast<double>(std::max(1, lh.max_relay_load));

        Stats short_stats;
        short_stats.mean = short_min;
        art.summary.points.push_back(
            make_point("short_min", static_cast<double>(n), short_stats, c.trials));
        Stats mean_stats;
        mean_stats.mean = short_mean;
        art.summary.points.push_back(
            make_point("short_mean", static_cast<double>(n), mean_stats, c.trials));
        Stats long_stats;
        long_stats.mean = long_rate;
        art.summary.points.push_back(
            make_point("long", static_cast<double>(n), long_stats, c.trials));

        body << n << "," << psi_n << "," << f12(d_c) << "," << f12(short_min)
             << "," << f12(short_mean) << "," << f12(long_rate) << ","
             << f12(short_min / long_rate) << "\n";
    }

    Meta meta;
    common_meta(meta, c);
    channel_meta(meta, c);
    meta.emplace_back("psi_rule", c.psi_rule);
    meta.emplace_back("couple_wavelength", c.couple_wavelength ? "true" : "false");
    std::ostringstream csv;
    write_meta(csv, meta, art.summary.scalars);
    csv << "n,psi,d_c,short_min_rate,short_mean_rate,long_rate,short_over_long\n";
    csv << body.str();
    art.csv_body = csv.str();

    plot::Series short_series{"short hop (min)", {}}, long_series{"long hop", {}};
    for (const auto& pt : art.summary.points) {
        if (pt.label == "short_min") short_series.points.emplace_back(pt.axis, pt.mean);
        if (pt.label == "long") long_series.points.emplace_back(pt.axis, pt.mean);
    }
    art.svg_body =
        plot::line_chart("Per-connection rate: short vs long hops", "n",
                         "rate (bps/Hz)", {short_series, long_series});

    art.summary.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return art;
}

ScenarioArtifacts run_highway_census(const ScenarioConfig& c) {
    ScenarioArtifacts art;
    art.label = config::to_string(config::ScenarioKind::highway_census);
    art.notices = config::validate(c);
    const auto t0 = std::chrono::steady_clock::now();

    std::vector<routing::CensusRow> rows(c.trials);
    std::vector<double> horiz(c.trials), vert(c.trials), points_n(c.trials);
    double failed = 0.0, slabs = 0.0;
    for (long t = 0; t < c.trials; ++t) {
        const std::uint64_t seed = derive_seed(c.master_seed, kPppStream, t);
        const auto r =
            geometry::sample_ppp({0.0, 0.0, c.box_side}, c.density, seed);
        const auto hs = routing::build_highways(r, c.cell_side);
        rows[t] = {seed, static_cast<long>(r.points.size()), hs.horizontal.size(),
                   hs.vertical.size(), hs.failed_h_slabs + hs.failed_v_slabs};
        horiz[t] = static_cast<double>(hs.horizontal.size());
        vert[t] = static_cast<double>(hs.vertical.size());
        points_n[t] = static_cast<double>(r.points.size());
        failed += static_cast<double>(hs.failed_h_slabs + hs.failed_v_slabs);
        slabs += static_cast<double>(hs.num_h_slabs + hs.num_v_slabs);
    }

    const Stats h_stats = summarize(horiz);
    art.summary.axis_name = "n";
    const double nominal_n = c.density * c.box_side * c.box_side;
    art.summary.points.push_back(
        make_point("horizontal", nominal_n, h_stats, c.trials));
    art.summary.points.push_back(
        make_point("vertical", nominal_n, summarize(vert), c.trials));
    auto& sc = art.summary.scalars;
    sc["mean_horizontal"] = h_stats.mean;
    sc["mean_vertical"] = summarize(vert).mean;
    sc["mean_points"] = summarize(points_n).mean;
    sc["failed_slab_fraction"] = failed / slabs;

    Meta meta;
    common_meta(meta, c);
    meta.emplace_back("box_side", f12(c.box_side));
    meta.emplace_back("density", f12(c.density));
    meta.emplace_back("cell_side", f12(c.cell_side));
    std::ostringstream csv;
    write_meta(csv, meta, sc);
    routing::write_census_csv(rows, csv);
    art.csv_body = csv.str();

    plot::Series hseries{"horizontal", {}};
    for (long t = 0; t < c.trials; ++t)
        hseries.points.emplace_back(static_cast<double>(t), horiz[t]);
    art.svg_body = plot::line_chart("Highway census per realization", "trial",
                                    "crossings", {hseries});

    art.summary.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return art;
}

namespace {

ScenarioArtifacts run_gateway_boundary(const ScenarioConfig& c) {
    ScenarioArtifacts art;
    art.label = config::to_string(config::ScenarioKind::gateway_boundary);
    art.notices = config::validate(c);
    const auto t0 = std::chrono::steady_clock::now();

    const int g = c.grid_dim;
    const long n = static_cast<long>(g) * g;
    const auto r = geometry::sample_perturbed_lattice(
        g, c.spacing, derive_seed(c.master_seed, kPppStream, 0), c.perturbation);

    // Perimeter walk, then sqrt(n) = g evenly spaced gateways along it.
    std::vector<int> ring;
    for (int i = 0; i < g; ++i) ring.push_back(i * g);
    for (int j = 1; j < g; ++j) ring.push_back((g - 1) * g + j);
    for (int i = g - 2; i >= 0; --i) ring.push_back(i * g + (g - 1));
    for (int j = g - 2; j >= 1; --j) ring.push_back(j);
    const int k = g;
    std::vector<int> gateways(k);
    for (int m = 0; m < k; ++m)
        gateways[m] = ring[(static_cast<std::size_t>(m) * ring.size()) / k];

    std::vector<int> nearest(n, 0);
    for (long b = 0; b < n; ++b) {
        double best = std::numeric_limits<double>::infinity();
        for (int m = 0; m < k; ++m) {
            const double d =
                geometry::distance(r.points[b], r.points[gateways[m]]);
            if (d < best - 1e-15) {
                best = d;
                nearest[b] = m;
            }
        }
    }

    std::vector<double> mean_load(k, 0.0);
    for (long t = 0; t < c.trials; ++t) {
        Rng rng = make_rng(derive_seed(c.master_seed, kGatewayStream, t));
        for (long b = 0; b < n; ++b)
            if (uniform_unit(rng) < 1.0 - c.rho) mean_load[nearest[b]] += 1.0;
    }
    for (double& v : mean_load) v /= static_cast<double>(c.trials);

    const double expected =
        (1.0 - c.rho) * static_cast<double>(n) / static_cast<double>(k);
    art.summary.axis_name = "gateway_rank";
    double max_load = 0.0;
    for (int m = 0; m < k; ++m) {
        Stats st;
        st.mean = mean_load[m];
        art.summary.points.push_back(
            make_point("gateway", static_cast<double>(m), st, c.trials));
        max_load = std::max(max_load, mean_load[m]);
    }
    auto& sc = art.summary.scalars;
    sc["expected_load"] = expected;
    sc["max_mean_load"] = max_load;
    sc["load_ratio"] = max_load / expected;

    Meta meta;
    common_meta(meta, c);
    meta.emplace_back("grid_dim", std::to_string(g));
    meta.emplace_back("spacing", f12(c.spacing));
    meta.emplace_back("rho", f12(c.rho));
    meta.emplace_back("gateways", std::to_string(k));
    std::ostringstream csv;
    write_meta(csv, meta, sc);
    csv << "gateway_rank,bs_index,mean_load,expected_load\n";
    for (int m = 0; m < k; ++m)
        csv << m << "," << gateways[m] << "," << f12(mean_load[m]) << ","
            << f12(expected) << "\n";
    art.csv_body = csv.str();

    plot::Series loads{"mean load", {}}, flat{"(1-rho) n / sqrt(n)", {}};
    for (int m = 0; m < k; ++m) {
        loads.points.emplace_back(static_cast<double>(m), mean_load[m]);
        flat.points.emplace_back(static_cast<double>(m), expected);
    }
    art.svg_body = plot::line_chart("Boundary gateway load", "gateway rank",
                                    "connections", {loads, flat});

    art.summary.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return art;
}

ScenarioArtifacts run_gateway_grid(const ScenarioConfig& c) {
    ScenarioArtifacts art;
    art.label = config::to_string(config::ScenarioKind::gateway_grid);
    art.notices = config::validate(c);
    const auto t0 = std::chrono::steady_clock::now();

    const int g = c.grid_dim;
    const long n = static_cast<long>(g) * g;
    const int blocks_per_side =
        static_cast<int>(std::lround(std::pow(static_cast<double>(g), c.beta)));
    const int block_dim = g / blocks_per_side;
    const long n_block = static_cast<long>(block_dim) * block_dim;
    const int psi_b = std::max(
        1, static_cast<int>(std::lround(
               std::pow(static_cast<double>(n), (1.0 - c.beta) / 2.0))));
    const double lambda_b = coupled_wavelength(c, psi_b);
    const int blocks = blocks_per_side * blocks_per_side;

    art.summary.axis_name = "block";
    std::ostringstream body;
    double min_over_blocks = 0.0, mean_over_blocks = 0.0;
    for (int bk = 0; bk < blocks; ++bk) {
        double min_rate = 0.0, mean_rate = 0.0;
        if (n_block >= 4) {
            ScenarioConfig cc = c;
            cc.grid_dim = block_dim;
            const LinkScenario s = make_link_scenario(cc, psi_b, lambda_b);
            const double hw_rate = representative_rate(
                s, c.master_seed, c.trials,
                static_cast<long>(bk) * c.trials);

            std::vector<double> mins(c.trials), means(c.trials);
            for (long t = 0; t < c.trials; ++t) {
                geometry::Realization r = s.bss;
                geometry::pair_sources_destinations(
                    r, derive_seed(c.master_seed, kBlockStream,
                                   static_cast<std::uint64_t>(bk) * c.trials + t));
                const auto hs = routing::build_highways(r, c.spacing);
                const auto plan = routing::plan_routes(r, hs);
                const auto rates =
                    routing::per_connection_rate(plan, hw_rate, hw_rate);
                double mn = 0.0, sum = 0.0;
                long routable = 0;
                for (std::size_t i = 0; i < plan.connections.size(); ++i) {
                    if (!plan.connections[i].routable) continue;
                    if (routable == 0 || rates.rate[i] < mn) mn = rates.rate[i];
                    sum += rates.rate[i];
                    ++routable;
                }
                mins[t] = mn;
                means[t] = routable ? sum / static_cast<double>(routable) : 0.0;
            }
            min_rate = summarize(mins).mean;
            mean_rate = summarize(means).mean;
        } else {
            // Degenerate mini-networks (< 2x2) carry no internal traffic.
            if (bk == 0)
                art.notices.push_back(
                    "mini-networks smaller than 2x2 report zero internal rate");
        }
        Stats st;
        st.mean = min_rate;
        art.summary.points.push_back(
            make_point("block", static_cast<double>(bk), st, c.trials));
        body << bk << "," << psi_b << "," << n_block << "," << f12(min_rate)
             << "," << f12(mean_rate) << "\n";
        if (bk == 0) min_over_blocks = min_rate;
        min_over_blocks = std::min(min_over_blocks, min_rate);
        mean_over_blocks += min_rate;
    }
    mean_over_blocks /= static_cast<double>(blocks);

    auto& sc = art.summary.scalars;
    sc["blocks"] = static_cast<double>(blocks);
    sc["n_block"] = static_cast<double>(n_block);
    sc["psi_block"] = static_cast<double>(psi_b);
    sc["min_rate_over_blocks"] = min_over_blocks;
    sc["mean_min_rate_over_blocks"] = mean_over_blocks;

    Meta meta;
    common_meta(meta, c);
    meta.emplace_back("grid_dim", std::to_string(g));
    meta.emplace_back("beta", f12(c.beta));
    meta.emplace_back("wavelength_block", f12(lambda_b));
    std::ostringstream csv;
    write_meta(csv, meta, sc);
    csv << "block,psi,n_block,min_rate,mean_rate\n";
    csv << body.str();
    art.csv_body = csv.str();

    plot::Series series{"per-block min rate", {}};
    for (const auto& pt : art.summary.points)
        series.points.emplace_back(pt.axis, pt.mean);
    art.svg_body = plot::line_chart("Mini-network per-connection rate", "block",
                                    "rate (bps/Hz)", {series});

    art.summary.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return art;
}

}  // namespace

ScenarioArtifacts run_gateway_scenarios(const ScenarioConfig& c) {
    if (c.kind == config::ScenarioKind::gateway_boundary)
        return run_gateway_boundary(c);
    if (c.kind == config::ScenarioKind::gateway_grid) return run_gateway_grid(c);
    throw config::ConfigError("run_gateway_scenarios: not a gateway scenario");
}

ScenarioArtifacts run_scenario(const ScenarioConfig& c) {
    switch (c.kind) {
        case config::ScenarioKind::fig_reuse: return run_fig_reuse(c);
        case config::ScenarioKind::rate_pdf: return run_rate_pdf(c);
        case config::ScenarioKind::cutset_sweep: return run_cutset_sweep(c);
        case config::ScenarioKind::strategy_compare: return run_strategy_compare(c);
        case config::ScenarioKind::highway_census: return run_highway_census(c);
        case config::ScenarioKind::gateway_boundary:
        case config::ScenarioKind::gateway_grid:
            return run_gateway_scenarios(c);
    }
    throw config::ConfigError("run_scenario: unknown scenario kind");
}

std::vector<std::string> emit_outputs(const ScenarioArtifacts& artifacts,
                                      const ScenarioConfig& c) {
    if (artifacts.csv_body.empty())
        throw std::runtime_error("emit_outputs: empty results");

    std::string dir = c.output_dir;
    if (const char* env = std::getenv("BACKHAUL_OUTPUT_DIR"); env && *env)
        dir = env;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw std::runtime_error("emit_outputs: cannot create directory '" + dir +
                                 "'");

    const std::string stem =
        artifacts.label + "_" + std::to_string(c.master_seed);
    std::vector<std::string> paths;

    const std::string csv_path = (std::filesystem::path(dir) / (stem + ".csv")).string();
    {
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) throw io_error(csv_path);
        out << artifacts.csv_body;
        if (!out) throw io_error(csv_path);
    }
    paths.push_back(csv_path);

    if (c.emit_svg && !artifacts.svg_body.empty()) {
        const std::string svg_path =
            (std::filesystem::path(dir) / (stem + ".svg")).string();
        std::ofstream out(svg_path, std::ios::binary);
        if (!out) throw io_error(svg_path);
        out << artifacts.svg_body;
        if (!out) throw io_error(svg_path);
        paths.push_back(svg_path);
    }
    return paths;
}

std::vector<SeedReportRow> seed_report(const ScenarioConfig& c, long max_rows) {
    const std::vector<std::pair<std::string, std::uint64_t>> streams = {
        {"rate evaluation", kRateStream},   {"antenna placement", kAntennaStream},
        {"reuse activation", kActivationStream}, {"pairing", kPairingStream},
        {"tie breaking", kTieStream},       {"point process", kPppStream},
        {"gateway traffic", kGatewayStream}, {"mini-network", kBlockStream}};
    std::vector<SeedReportRow> rows;
    for (const auto& [purpose, stream] : streams)
        for (long k = 0; k < max_rows; ++k)
            rows.push_back({purpose, stream, static_cast<std::uint64_t>(k),
                            derive_seed(c.master_seed, stream,
                                        static_cast<std::uint64_t>(k))});
    return rows;
}

}  // namespace backhaul::experiments
