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

#include <armadillo>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "backhaul/channel.hpp"
#include "backhaul/geometry.hpp"

namespace backhaul::bounds {

// Largest dense system the numeric cut-set bound will factor. Larger
// networks must rely on the closed-form strip bound instead.
constexpr long kMatrixCap = 4096;

// Three nested upper bounds on the information flow across the vertical
// center cut, loosest last:
//   exact_logdet   log2 det(I + nP H_eff H_eff^H), H_eff all left-TX to
//                  right-RX antenna pairs, input covariance nP * I
//   hadamard_bound sum_i log2(1 + nP (H_eff H_eff^H)_ii)
//   strip_bound    Hadamard with each diagonal replaced by its per-strip cap
//                  n Psi mu min{1, r_s^{-alpha}} from the exponential strip
//                  decomposition
struct CutSetResult {
    double exact_logdet = 0.0;
    double hadamard_bound = 0.0;
    double strip_bound = 0.0;
    long n = 0;  // nominal BS count round(density * side^2)
    int psi = 0;
    std::size_t n_left = 0;   // TX side of the cut
    std::size_t n_right = 0;  // RX side of the cut
    std::vector<double> strip_caps;         // per-strip diagonal cap
    std::vector<std::size_t> strip_counts;  // RX-side BSs per strip
};

// Phase assignment for H_eff entries: geometric line-of-sight phases, or
// iid uniform phases (the strip bound depends on magnitudes only and must
// not move between the two).
enum class PhaseMode { los, uniform_random };

// Computes the three bounds on one realization. Coordinates are rescaled to
// unit BS density first (unit distance c_eff = density^{-1/2}); pathloss
// amplitudes anchor at c_eff. budget supplies mu, alpha, wavelength and P;
// budget.ref_distance is not used here. Antennas are placed in squares of
// side array_side_fraction * c_eff; `seed` drives antenna positions and the
// uniform_random phase draw.
// Errors: std::invalid_argument when n * psi exceeds kMatrixCap (reduce n or
// psi), when either side of the cut holds no BS, or on bad parameters.
// When h_eff_out is non-null the assembled matrix is copied there (for
// cross-checks against independent decompositions).
CutSetResult cutset_numeric(const geometry::Realization& r, int psi,
                            const channel::LinkBudget& budget, std::uint64_t seed,
                            double array_side_fraction = 0.08,
                            PhaseMode phases = PhaseMode::los,
                            arma::cx_mat* h_eff_out = nullptr);

// {log2 det(I + s H H^H), sum_i log2(1 + s (H H^H)_ii)} for a given effective
// matrix; exposed so synthetic matrices (e.g. diagonal) can be checked
// directly. Errors: std::runtime_error if I + s H H^H is not positive
// definite.
std::pair<double, double> logdet_and_hadamard(const arma::cx_mat& h_eff,
                                              double snr_scale);

// Dominant term of the cut capacity scale: sqrt(n) n^{2/alpha} psi^{1/alpha} ln n
// (equivalently n^{1 - kappa/alpha} ln n with kappa = alpha/2 - 2 - log_n psi).
// Domain: n >= 3, psi >= 1, kappa > 0. Errors: std::invalid_argument for bad
// n/psi; std::domain_error naming the condition alpha > 2 (2 + log_n psi).
double cut_capacity_scale(double n, double psi, double alpha);

// Aggregate-throughput upper scale: exactly (e - 1) * psi * cut_capacity_scale.
double throughput_upper_scale(double n, double psi, double alpha);

// Antennas per BS needed to keep per-connection rate order-one:
//   [n^{1/2 - 2/alpha} / ln n]^{alpha/(1 + alpha)}.
// Errors: std::domain_error for alpha <= 4 (including the boundary).
double antenna_requirement(double n, double alpha);

// Per-connection rate upper scale for long-hop operation:
//   psi^{2/alpha} / n^{1/2 - epsilon}.
// Errors: std::invalid_argument for epsilon outside the open interval
// (0, 1/2) or bad n/psi/alpha.
double long_hop_rate_upper(double n, double psi, double alpha, double epsilon);

// CSV row combining the numeric bounds with the closed forms evaluated at
// the same (n, psi, alpha); out-of-domain closed forms are recorded as nan.
struct CutsetRow {
    long n = 0;
    int psi = 0;
    double alpha = 0.0;
    double exact = 0.0;
    double hadamard = 0.0;
    double strip = 0.0;
    double cs_formula = 0.0;
    double t_ub_formula = 0.0;
};

// Header: n,psi,alpha,exact,hadamard,strip,cs_formula,t_ub_formula
void write_cutset_csv(const std::vector<CutsetRow>& rows, std::ostream& out);

}  // namespace backhaul::bounds
