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

#include "backhaul/channel.hpp"

namespace backhaul::linkrate {

// Active interferers as seen by one receiver: one channel matrix per
// interfering TX (all sharing the RX antenna count) plus the per-antenna
// transmit power P/Psi. Noise power is normalized to 1 per RX antenna.
struct InterferenceField {
    std::vector<channel::ChannelMatrix> interferers;
    double per_antenna_power = 0.0;
};

struct RateSample {
    double rate_bps_hz = 0.0;
    int reuse_factor = 1;
    std::uint64_t seed = 0;
};

// Accumulates G = sum_i H_i H_i^H with blocked Hermitian rank-k updates so
// wide interferer sets hit BLAS-3 instead of one gemm per interferer.
// Columns staged via claim() must be fully written before the next call.
class CovarianceAccumulator {
  public:
    CovarianceAccumulator(arma::uword psi_rx, double scale,
                          arma::uword chunk_cols = 4096);

    // Pointer to n_cols fresh staging columns (psi_rx rows, column-major).
    // Errors: std::invalid_argument if n_cols exceeds the chunk size.
    std::complex<double>* claim(arma::uword n_cols);

    // Stages a whole interferer matrix (must have psi_rx rows).
    void add_matrix(const arma::cx_mat& h);

    // R = I + scale * G, exactly Hermitian (upper triangle mirrored).
    arma::cx_mat finish();

  private:
    void flush();

    arma::cx_mat staging_;
    arma::cx_mat gram_;
    double scale_;
    arma::uword used_ = 0;
};

// R = I + per_antenna_power * sum_i H_i H_i^H. Hermitian with all
// eigenvalues >= 1 by construction. With no interferers the identity of size
// psi_rx_hint (or 1 when the hint is 0) is returned. Errors:
// std::invalid_argument on RX dimension mismatch or negative power.
arma::cx_mat interference_covariance(const InterferenceField& field,
                                     arma::uword psi_rx_hint = 0);

// Shared-band rate under reuse factor p:
//   rate = (1/p) * log2 det(I + (p P / Psi) R^{-1} H H^H).
// Evaluated through Cholesky factors on the smaller Gram side; a
// non-positive-definite R raises std::runtime_error (never regularized).
// Errors: std::invalid_argument for p < 1, psi < 1, P <= 0, or dimension
// mismatch between H and R.
RateSample link_rate(const arma::cx_mat& h, const arma::cx_mat& r, double total_power,
                     int psi, int reuse_factor, std::uint64_t seed = 0);

// Jensen bound on the mean rate when the interference covariance averages to
// q * I: log2 det(I + (P/(q Psi)) H H^H). Errors: std::invalid_argument for
// q < 1 or non-positive P/psi.
double ergodic_lower_bound(const arma::cx_mat& h, double ring_constant_q,
                           double total_power, int psi);

// Worst-case interference constant q = 1 + 8P + 8P * sum_{i=2}^{N} i (i-1)^{-alpha}
// for ring i of the surrounding lattice (distances in units of ref_distance,
// which cancels). tail_bound dominates the dropped rings; converged is set
// when tail_bound < 1e-9. Errors: std::invalid_argument for alpha <= 2
// (series diverges), non-positive ref_distance, negative power, or
// num_rings < 1.
struct RingConstant {
    double value = 0.0;
    double tail_bound = 0.0;
    bool converged = false;
};

RingConstant ring_interference_constant(double ref_distance, double alpha,
                                        double total_power, int num_rings = 64);

// Single-stream eigen-beamforming rate and its trace relaxation:
//   exact = log2(1 + P lambda_max(H H^H)), trace_upper = log2(1 + P tr(H H^H)).
// exact <= trace_upper always, equal iff H has numeric rank 1.
struct BeamformingRate {
    double exact = 0.0;
    double trace_upper = 0.0;
};

BeamformingRate beamforming_rate(const arma::cx_mat& h, double total_power);

// Maximum hop length sustaining received power P0 with transmit power P and
// psi antennas: d_c = (P/P0)^{1/alpha} * psi^{2/alpha} * ref_distance (meters).
// Errors: std::invalid_argument for non-positive inputs.
double long_hop_range(double total_power, double target_power, int psi,
                      double alpha, double ref_distance);

// Non-rigorous estimate of how large the interference eigenvalues can get:
// compares the numeric lambda_max(R) against
//   1 + P * sum_i min{1, (d_i/c)^{-alpha}} * d_i / d_max,
// the aperture-limited eigenvalue-mass heuristic (amplitude model with
// mu = 1). d_max <= 0 derives the DoF transition distance area/(lambda psi).
// alpha_valid records the alpha > 3 regime the heuristic is meant for.
struct SpectralDiagnostic {
    double lambda_max_numeric = 1.0;
    double heuristic_bound = 1.0;
    bool alpha_valid = false;
    bool non_rigorous = true; // always true: diagnostic, not a theorem
};

SpectralDiagnostic spectral_radius_diagnostic(const InterferenceField& field,
                                              double d_max, double area,
                                              double wavelength, double alpha,
                                              double ref_distance);

// CSV serialization: header `seed,psi,p,rate_bps_hz`, 12 significant digits.
void write_rate_csv(const std::vector<RateSample>& samples, int psi,
                    std::ostream& out);

}  // namespace backhaul::linkrate
