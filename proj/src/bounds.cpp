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

#include "backhaul/bounds.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "backhaul/rng.hpp"

namespace backhaul::bounds {

std::pair<double, double> logdet_and_hadamard(const arma::cx_mat& h_eff,
                                              double snr_scale) {
    if (!(snr_scale >= 0.0))
        throw std::invalid_argument("logdet_and_hadamard: scale must be >= 0");
    if (h_eff.n_elem == 0) return {0.0, 0.0};

    // Exact value through the smaller Gram side (same nonzero eigenvalues).
    const bool tall = h_eff.n_rows >= h_eff.n_cols;
    arma::cx_mat g = tall ? arma::cx_mat(h_eff.t() * h_eff)
                          : arma::cx_mat(h_eff * h_eff.t());
    g = 0.5 * (g + g.t());
    arma::cx_mat a =
        arma::cx_mat(g.n_rows, g.n_cols, arma::fill::eye) + snr_scale * g;
    arma::cx_mat l;
    if (!arma::chol(l, a, "lower"))
        throw std::runtime_error("logdet_and_hadamard: matrix not positive definite");
    double exact = 0.0;
    for (arma::uword i = 0; i < l.n_rows; ++i)
        exact += std::log2(l(i, i).real());
    exact *= 2.0;

    // Hadamard term uses the RX-side diagonal (row sums of |h|^2).
    double hadamard = 0.0;
    for (arma::uword i = 0; i < h_eff.n_rows; ++i) {
        double diag = 0.0;
        for (arma::uword j = 0; j < h_eff.n_cols; ++j)
            diag += std::norm(h_eff(i, j));
        hadamard += std::log2(1.0 + snr_scale * diag);
    }
    return {exact, hadamard};
}

CutSetResult cutset_numeric(const geometry::Realization& r, int psi,
                            const channel::LinkBudget& budget, std::uint64_t seed,
                            double array_side_fraction, PhaseMode phases,
                            arma::cx_mat* h_eff_out) {
    budget.validate();
    if (psi < 1)
        throw std::invalid_argument("cutset_numeric: psi must be >= 1");
    if (!(array_side_fraction > 0.0 && array_side_fraction < 1.0))
        throw std::invalid_argument(
            "cutset_numeric: array_side_fraction must be in (0, 1)");
    if (!(r.density > 0.0) || !(r.box.side > 0.0))
        throw std::invalid_argument("cutset_numeric: realization lacks box/density");

    const double scale = std::sqrt(r.density);     // meters -> unit-density units
    const double side_n = r.box.side * scale;      // normalized box side
    const long n = std::lround(side_n * side_n);   // nominal BS count
    if (n < 1)
        throw std::invalid_argument("cutset_numeric: nominal BS count is zero");
    if (n * psi > kMatrixCap)
        throw std::invalid_argument(
            "cutset_numeric: n * psi exceeds the dense-matrix cap of 4096; "
            "reduce the network size or the antenna count");

    // Split by the vertical center cut; left transmits, right receives.
    std::vector<std::size_t> left, right;
    const double cut_x = r.box.x0 + 0.5 * r.box.side;
    for (std::size_t i = 0; i < r.points.size(); ++i)
        (r.points[i].x < cut_x ? left : right).push_back(i);
    if (left.empty() || right.empty())
        throw std::invalid_argument(
            "cutset_numeric: the cut must have at least one BS on each side");

    // Strip decomposition of the normalized box; below the minimum side the
    // whole half collapses into a single strip touching the cut.
    std::vector<double> strip_min{0.0};
    if (side_n >= 2.0 * std::exp(1.0))
        strip_min = geometry::strip_decompose(side_n).min_distance;

    const double mu = budget.mu_linear();
    const double alpha = budget.pathloss_exponent;
    const double c_eff = 1.0 / scale;
    const double array_side = array_side_fraction * c_eff;

    // Antenna arrays, seeded per BS index so left/right order is irrelevant.
    std::vector<channel::AntennaArray> arrays(r.points.size());
    for (std::size_t i = 0; i < r.points.size(); ++i)
        arrays[i] = channel::place_antennas(r.points[i], array_side, psi,
                                            derive_seed(seed, 0, i));

    Rng phase_rng = make_rng(derive_seed(seed, 1, 0));
    const arma::uword pu = static_cast<arma::uword>(psi);
    arma::cx_mat h_eff(right.size() * pu, left.size() * pu);
    for (arma::uword bc = 0; bc < left.size(); ++bc) {
        const auto& txa = arrays[left[bc]];
        for (arma::uword br = 0; br < right.size(); ++br) {
            const auto& rxa = arrays[right[br]];
            const double d_c =
                geometry::distance(txa.center, rxa.center) * scale;
            const double amp =
                std::sqrt(mu) *
                (d_c <= 1.0 ? 1.0 : std::pow(d_c, -0.5 * alpha));
            for (arma::uword b = 0; b < pu; ++b) {
                for (arma::uword a = 0; a < pu; ++a) {
                    double frac;
                    if (phases == PhaseMode::los) {
                        const double d_pair = geometry::distance(
                            rxa.elements[a], txa.elements[b]);
                        const double cycles = d_pair / budget.wavelength;
                        frac = cycles - std::floor(cycles);
                    } else {
                        frac = uniform_unit(phase_rng);
                    }
                    const double theta = 2.0 * M_PI * frac;
                    h_eff(br * pu + a, bc * pu + b) = {amp * std::cos(theta),
                                                       -amp * std::sin(theta)};
                }
            }
        }
    }

    if (h_eff_out) *h_eff_out = h_eff;

    CutSetResult out;
    out.n = n;
    out.psi = psi;
    out.n_left = left.size();
    out.n_right = right.size();

    const double np = static_cast<double>(n) * budget.tx_power;
    auto [exact, hadamard] = logdet_and_hadamard(h_eff, np);
    out.exact_logdet = exact;
    out.hadamard_bound = hadamard;

    // Strip bound: every RX antenna of a strip-s BS has diagonal at most
    // n psi mu min{1, r_s^{-alpha}} because all TX BSs sit across the cut.
    geometry::StripDecomposition decomp;
    decomp.side = side_n;
    decomp.min_distance = strip_min;
    out.strip_caps.resize(strip_min.size());
    out.strip_counts.assign(strip_min.size(), 0);
    for (std::size_t s = 0; s < strip_min.size(); ++s) {
        const double r_s = strip_min[s];
        const double loss = r_s <= 1.0 ? 1.0 : std::pow(r_s, -alpha);
        out.strip_caps[s] = static_cast<double>(n) * psi * mu * loss;
    }
    double strip = 0.0;
    for (std::size_t idx : right) {
        const double d =
            geometry::distance_to_vertical_cut(r.box, r.points[idx]) * scale;
        const std::size_t s = geometry::strip_index(decomp, d);
        out.strip_counts[s] += 1;
        strip += psi * std::log2(1.0 + np * out.strip_caps[s]);
    }
    out.strip_bound = strip;
    return out;
}

double cut_capacity_scale(double n, double psi, double alpha) {
    if (!(n >= 3.0))
        throw std::invalid_argument("cut_capacity_scale: n must be >= 3");
    if (!(psi >= 1.0))
        throw std::invalid_argument("cut_capacity_scale: psi must be >= 1");
    const double kappa = 0.5 * alpha - 2.0 - std::log(psi) / std::log(n);
    if (!(kappa > 0.0))
        throw std::domain_error(
            "cut_capacity_scale: requires alpha > 2 * (2 + log_n(psi))");
    return std::sqrt(n) * std::pow(n, 2.0 / alpha) * std::pow(psi, 1.0 / alpha) *
           std::log(n);
}

double throughput_upper_scale(double n, double psi, double alpha) {
    return (std::exp(1.0) - 1.0) * psi * cut_capacity_scale(n, psi, alpha);
}

double antenna_requirement(double n, double alpha) {
    if (!(n >= 3.0))
        throw std::invalid_argument("antenna_requirement: n must be >= 3");
    if (!(alpha > 4.0))
        throw std::domain_error("antenna_requirement: requires alpha > 4");
    const double base = std::pow(n, 0.5 - 2.0 / alpha) / std::log(n);
    return std::pow(base, alpha / (1.0 + alpha));
}

double long_hop_rate_upper(double n, double psi, double alpha, double epsilon) {
    if (!(n >= 1.0) || !(psi >= 1.0) || !(alpha > 2.0))
        throw std::invalid_argument("long_hop_rate_upper: bad n, psi, or alpha");
    if (!(epsilon > 0.0 && epsilon < 0.5))
        throw std::invalid_argument(
            "long_hop_rate_upper: epsilon must lie strictly inside (0, 1/2)");
    return std::pow(psi, 2.0 / alpha) / std::pow(n, 0.5 - epsilon);
}

void write_cutset_csv(const std::vector<CutsetRow>& rows, std::ostream& out) {
    out << "n,psi,alpha,exact,hadamard,strip,cs_formula,t_ub_formula\n";
    char buf[224];
    auto fmt = [](double v, char* dst, std::size_t cap) {
        if (std::isnan(v))
            std::snprintf(dst, cap, "nan");
        else
            std::snprintf(dst, cap, "%.12g", v);
    };
    for (const auto& row : rows) {
        char cs[32], tub[32];
        fmt(row.cs_formula, cs, sizeof cs);
        fmt(row.t_ub_formula, tub, sizeof tub);
        std::snprintf(buf, sizeof buf, "%ld,%d,%.12g,%.12g,%.12g,%.12g,%s,%s\n",
                      row.n, row.psi, row.alpha, row.exact, row.hadamard,
                      row.strip, cs, tub);
        out << buf;
    }
}

}  // namespace backhaul::bounds
