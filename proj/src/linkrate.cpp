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

#include "backhaul/linkrate.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

// Direct Hermitian rank-k update; alpha/beta are real for *herk. Armadillo
// links the BLAS that provides this symbol.
extern "C" void zherk_(const char* uplo, const char* trans, const int* n,
                       const int* k, const double* alpha,
                       const std::complex<double>* a, const int* lda,
                       const double* beta, std::complex<double>* c,
                       const int* ldc);

namespace backhaul::linkrate {

CovarianceAccumulator::CovarianceAccumulator(arma::uword psi_rx, double scale,
                                             arma::uword chunk_cols)
    : staging_(psi_rx, chunk_cols), gram_(psi_rx, psi_rx, arma::fill::zeros),
      scale_(scale) {
    if (psi_rx < 1 || chunk_cols < 1)
        throw std::invalid_argument("CovarianceAccumulator: empty dimensions");
    if (!(scale >= 0.0))
        throw std::invalid_argument("CovarianceAccumulator: scale must be >= 0");
}

std::complex<double>* CovarianceAccumulator::claim(arma::uword n_cols) {
    if (n_cols > staging_.n_cols)
        throw std::invalid_argument("CovarianceAccumulator: claim exceeds chunk");
    if (used_ + n_cols > staging_.n_cols) flush();
    std::complex<double>* p = staging_.colptr(used_);
    used_ += n_cols;
    return p;
}

void CovarianceAccumulator::add_matrix(const arma::cx_mat& h) {
    if (h.n_rows != staging_.n_rows)
        throw std::invalid_argument("CovarianceAccumulator: RX dimension mismatch");
    arma::uword done = 0;
    while (done < h.n_cols) {
        const arma::uword take = std::min(h.n_cols - done, staging_.n_cols);
        std::complex<double>* dst = claim(take);
        std::copy(h.colptr(done), h.colptr(done) + take * h.n_rows, dst);
        done += take;
    }
}

void CovarianceAccumulator::flush() {
    if (used_ == 0) return;
    const int n = static_cast<int>(staging_.n_rows);
    const int k = static_cast<int>(used_);
    const int lda = n, ldc = n;
    const double one = 1.0;
    zherk_("U", "N", &n, &k, &one, staging_.memptr(), &lda, &one, gram_.memptr(),
           &ldc);
    used_ = 0;
}

arma::cx_mat CovarianceAccumulator::finish() {
    flush();
    const arma::uword n = gram_.n_rows;
    arma::cx_mat r(n, n);
    for (arma::uword j = 0; j < n; ++j) {
        for (arma::uword i = 0; i < j; ++i) {
            r(i, j) = scale_ * gram_(i, j);
            r(j, i) = std::conj(r(i, j));
        }
        r(j, j) = 1.0 + scale_ * gram_(j, j).real();
    }
    return r;
}

arma::cx_mat interference_covariance(const InterferenceField& field,
                                     arma::uword psi_rx_hint) {
    if (!(field.per_antenna_power >= 0.0))
        throw std::invalid_argument(
            "interference_covariance: per-antenna power must be >= 0");
    arma::uword psi_rx = 0;
    for (const auto& m : field.interferers) {
        if (psi_rx == 0) psi_rx = m.h.n_rows;
        if (m.h.n_rows != psi_rx)
            throw std::invalid_argument(
                "interference_covariance: interferers disagree on RX antennas");
    }
    if (psi_rx == 0)
        return arma::cx_mat(std::max<arma::uword>(psi_rx_hint, 1),
                            std::max<arma::uword>(psi_rx_hint, 1),
                            arma::fill::eye);

    CovarianceAccumulator acc(psi_rx, field.per_antenna_power);
    for (const auto& m : field.interferers) acc.add_matrix(m.h);
    return acc.finish();
}

// log2 det(I + s * W^H W) via Cholesky of the smaller Gram side. Throws
// std::runtime_error when the matrix is numerically not positive definite.
static double log2det_gram(const arma::cx_mat& w, double s) {
    const bool tall = w.n_rows >= w.n_cols;
    const arma::cx_mat g = tall ? arma::cx_mat(w.t() * w) : arma::cx_mat(w * w.t());
    arma::cx_mat a = arma::cx_mat(g.n_rows, g.n_cols, arma::fill::eye) + s * g;
    a = 0.5 * (a + a.t()); // exact Hermitian symmetrization before chol
    arma::cx_mat l;
    if (!arma::chol(l, a, "lower"))
        throw std::runtime_error("log2det: matrix not positive definite");
    double acc = 0.0;
    for (arma::uword i = 0; i < l.n_rows; ++i)
        acc += std::log2(l(i, i).real());
    return 2.0 * acc;
}

RateSample link_rate(const arma::cx_mat& h, const arma::cx_mat& r,
                     double total_power, int psi, int reuse_factor,
                     std::uint64_t seed) {
    if (reuse_factor < 1)
        throw std::invalid_argument("link_rate: reuse factor must be >= 1");
    if (psi < 1) throw std::invalid_argument("link_rate: psi must be >= 1");
    if (!(total_power > 0.0))
        throw std::invalid_argument("link_rate: power must be positive");
    if (r.n_rows != r.n_cols || r.n_rows != h.n_rows)
        throw std::invalid_argument("link_rate: covariance does not match H");

    // Whiten by the Cholesky factor of R; failure means R is not PD and is
    // surfaced, never patched.
    arma::cx_mat l;
    if (!arma::chol(l, r, "lower"))
        throw std::runtime_error("link_rate: interference covariance not PD");
    const arma::cx_mat w = arma::solve(arma::trimatl(l), h);

    const double p = static_cast<double>(reuse_factor);
    const double s = p * total_power / static_cast<double>(psi);
    RateSample out;
    out.rate_bps_hz = log2det_gram(w, s) / p;
    out.reuse_factor = reuse_factor;
    out.seed = seed;
    if (!std::isfinite(out.rate_bps_hz) || out.rate_bps_hz < 0.0)
        throw std::runtime_error("link_rate: rate not finite and non-negative");
    return out;
}

double ergodic_lower_bound(const arma::cx_mat& h, double ring_constant_q,
                           double total_power, int psi) {
    if (!(ring_constant_q >= 1.0))
        throw std::invalid_argument("ergodic_lower_bound: q must be >= 1");
    if (psi < 1 || !(total_power > 0.0))
        throw std::invalid_argument("ergodic_lower_bound: bad power or psi");
    return log2det_gram(h, total_power / (ring_constant_q * psi));
}

RingConstant ring_interference_constant(double ref_distance, double alpha,
                                        double total_power, int num_rings) {
    if (!(ref_distance > 0.0))
        throw std::invalid_argument(
            "ring_interference_constant: ref_distance must be positive");
    if (!(alpha > 2.0))
        throw std::invalid_argument(
            "ring_interference_constant: series diverges for alpha <= 2");
    if (!(total_power >= 0.0))
        throw std::invalid_argument(
            "ring_interference_constant: power must be >= 0");
    if (num_rings < 1)
        throw std::invalid_argument(
            "ring_interference_constant: need at least one ring");

    // Ring 1 sits at the reference distance (8 neighbors, pathloss capped at
    // 1); ring i >= 2 has 8i squares at distance >= (i-1) units of c.
    RingConstant q;
    double sum = 0.0;
    for (int i = 2; i <= num_rings; ++i)
        sum += static_cast<double>(i) *
               std::pow(static_cast<double>(i - 1), -alpha);
    q.value = 1.0 + 8.0 * total_power + 8.0 * total_power * sum;

    // Tail: sum_{i>N} i (i-1)^{-alpha} <= 2 sum_{m>=N} m^{1-alpha}
    //       <= 2 (N^{1-alpha} + N^{2-alpha}/(alpha-2)).
    const double n = static_cast<double>(num_rings);
    q.tail_bound = 8.0 * total_power * 2.0 *
                   (std::pow(n, 1.0 - alpha) +
                    std::pow(n, 2.0 - alpha) / (alpha - 2.0));
    q.converged = q.tail_bound < 1e-9;
    return q;
}

BeamformingRate beamforming_rate(const arma::cx_mat& h, double total_power) {
    if (!(total_power > 0.0))
        throw std::invalid_argument("beamforming_rate: power must be positive");
    BeamformingRate out;
    if (h.n_elem == 0) return out;

    const bool tall = h.n_rows >= h.n_cols;
    arma::cx_mat g = tall ? arma::cx_mat(h.t() * h) : arma::cx_mat(h * h.t());
    g = 0.5 * (g + g.t());
    arma::vec eigs = arma::eig_sym(g);
    const double lam_max = std::max(eigs.max(), 0.0);
    const double tr = arma::accu(arma::square(arma::abs(h)));
    out.exact = std::log2(1.0 + total_power * lam_max);
    out.trace_upper = std::log2(1.0 + total_power * tr);
    return out;
}

double long_hop_range(double total_power, double target_power, int psi,
                      double alpha, double ref_distance) {
    if (!(total_power > 0.0) || !(target_power > 0.0) || psi < 1 ||
        !(alpha > 0.0) || !(ref_distance > 0.0))
        throw std::invalid_argument("long_hop_range: inputs must be positive");
    return std::pow(total_power / target_power, 1.0 / alpha) *
           std::pow(static_cast<double>(psi), 2.0 / alpha) * ref_distance;
}

SpectralDiagnostic spectral_radius_diagnostic(const InterferenceField& field,
                                              double d_max, double area,
                                              double wavelength, double alpha,
                                              double ref_distance) {
    if (!(area > 0.0) || !(wavelength > 0.0) || !(ref_distance > 0.0))
        throw std::invalid_argument(
            "spectral_radius_diagnostic: geometry inputs must be positive");

    SpectralDiagnostic out;
    out.alpha_valid = alpha > 3.0;
    if (field.interferers.empty()) return out; // identity covariance

    const arma::cx_mat r = interference_covariance(field);
    arma::cx_mat rh = 0.5 * (r + r.t());
    out.lambda_max_numeric = arma::eig_sym(rh).max();

    arma::uword psi_max = 0;
    for (const auto& m : field.interferers) psi_max = std::max(psi_max, m.h.n_cols);
    if (!(d_max > 0.0))
        d_max = area / (wavelength * static_cast<double>(psi_max));

    double acc = 0.0;
    for (const auto& m : field.interferers) {
        const double d = m.center_distance;
        const double power =
            field.per_antenna_power * static_cast<double>(m.h.n_cols);
        const double loss =
            d <= ref_distance ? 1.0 : std::pow(d / ref_distance, -alpha);
        acc += power * loss * (d / d_max);
    }
    out.heuristic_bound = 1.0 + acc;
    return out;
}

void write_rate_csv(const std::vector<RateSample>& samples, int psi,
                    std::ostream& out) {
    out << "seed,psi,p,rate_bps_hz\n";
    char buf[96];
    for (const auto& s : samples) {
        std::snprintf(buf, sizeof buf, "%llu,%d,%d,%.12g\n",
                      static_cast<unsigned long long>(s.seed), psi, s.reuse_factor,
                      s.rate_bps_hz);
        out << buf;
    }
}

}  // namespace backhaul::linkrate
