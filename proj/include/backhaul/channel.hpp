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
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "backhaul/geometry.hpp"
#include "backhaul/rng.hpp"

namespace backhaul::channel {

// Link-level radio parameters. The budget is normalized so that a
// single-antenna link at distance ref_distance, free of interference,
// has SNR exactly 10^(ref_snr_db/10): antenna gains and the absolute
// pathloss constant are absorbed into ref_snr_db.
struct LinkBudget {
    double pathloss_exponent = 5.0; // alpha, must be > 2
    double ref_snr_db = 0.0;        // SNR at ref_distance in dB
    double ref_distance = 100.0;    // meters
    double wavelength = 0.01;       // meters
    double tx_power = 1.0;          // total transmit power per BS (normalized)
    double noise_psd_bw = 1.0;      // noise power per receive antenna (normalized)

    double mu_linear() const;
    // Errors: std::invalid_argument naming the offending field.
    void validate() const;
};

// Square antenna array: psi elements iid uniform in a square of the given
// side centered at `center`. Errors: std::invalid_argument for psi < 1 or
// side <= 0.
struct AntennaArray {
    geometry::Point center;
    double side = 0.0;
    std::vector<geometry::Point> elements;
};

AntennaArray place_antennas(const geometry::Point& center, double side, int psi,
                            std::uint64_t seed);

// Line-of-sight gain between one TX and one RX antenna. The magnitude uses
// the BS-center separation (arrays are small next to link distances); the
// phase uses the exact antenna-pair distance:
//   g = sqrt(mu) * min{1, (d_center/c)^(-alpha/2)} * exp(-j 2 pi d_pair / lambda).
// Errors: std::invalid_argument for non-positive distances.
std::complex<double> los_gain(double pair_distance, const LinkBudget& budget,
                              double center_distance);

struct ChannelMatrix {
    arma::cx_mat h;                // rows = RX antennas, cols = TX antennas
    double center_distance = 0.0;  // BS center separation used for magnitudes
    bool arrays_overlap = false;   // TX and RX squares intersect (flag, not error)
};

// Errors: std::invalid_argument if any TX/RX antenna pair is coincident
// (zero pair distance) or the array centers coincide.
ChannelMatrix build_channel_matrix(const AntennaArray& tx, const AntennaArray& rx,
                                   const LinkBudget& budget);

// Spatial degrees of freedom supported by square arrays of area `area` at
// separation `distance`:
//   d <= sqrt(area):            min{psi, sqrt(area)/lambda}
//   sqrt(area) < d <= area/lam: min{psi, area/(lambda d)}
//   d > area/lambda:            1
// Total on positive arguments; no clamping beyond the stated branches.
double dof_formula(double psi, double area, double wavelength, double distance);

// The magnitude model treats arrays as points; below ref_distance/100 that
// idealization is no longer meaningful. Callers flag such distances.
bool dof_distance_in_domain(const LinkBudget& budget, double distance);

// Number of singular values >= threshold_fraction * largest. Zero matrix
// gives 0. Errors: std::invalid_argument for threshold outside (0,1).
int empirical_dof(const arma::cx_mat& h, double threshold_fraction);

// CSV serialization: header `re,im`, one row per entry in row-major order,
// 17 significant digits (bit-exact reload given the dimensions).
void write_channel_csv(const arma::cx_mat& h, std::ostream& out);
arma::cx_mat read_channel_csv(std::istream& in, std::size_t n_rows,
                              std::size_t n_cols);

}  // namespace backhaul::channel
