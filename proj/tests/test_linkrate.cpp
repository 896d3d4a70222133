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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <sstream>

#include "backhaul/linkrate.hpp"

using namespace backhaul;
using namespace backhaul::linkrate;
using channel::AntennaArray;
using channel::LinkBudget;
using channel::build_channel_matrix;
using channel::place_antennas;
using geometry::Point;

namespace {

LinkBudget small_budget() {
    LinkBudget b;
    b.pathloss_exponent = 5.0;
    b.ref_snr_db = 0.0;
    b.ref_distance = 100.0;
    b.wavelength = 0.08;
    return b;
}

arma::cx_mat random_cx(arma::uword rows, arma::uword cols, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    arma::cx_mat m(rows, cols);
    for (auto& v : m)
        v = {uniform_range(rng, -1.0, 1.0), uniform_range(rng, -1.0, 1.0)};
    return m;
}

channel::ChannelMatrix wrap(const arma::cx_mat& h, double d = 100.0) {
    channel::ChannelMatrix m;
    m.h = h;
    m.center_distance = d;
    return m;
}

}  // namespace

TEST_CASE("interference covariance base cases") {
    InterferenceField f;
    f.per_antenna_power = 1.0;
    auto r0 = interference_covariance(f, 4);
    CHECK(r0.n_rows == 4);
    CHECK(arma::abs(r0 - arma::cx_mat(4, 4, arma::fill::eye)).max() == 0.0);

    f.interferers.push_back(wrap(arma::cx_mat(3, 2, arma::fill::zeros)));
    auto rz = interference_covariance(f);
    CHECK(arma::abs(rz - arma::cx_mat(3, 3, arma::fill::eye)).max() < 1e-15);

    InterferenceField g;
    g.per_antenna_power = 1.0;
    arma::cx_mat one(1, 1);
    one(0, 0) = std::complex<double>(0.6, -0.8);
    g.interferers.push_back(wrap(one));
    auto r1 = interference_covariance(g);
    CHECK(r1(0, 0).real() == doctest::Approx(2.0).epsilon(1e-14)); // 1 + |g|^2
    CHECK(r1(0, 0).imag() == 0.0);

    InterferenceField bad;
    bad.per_antenna_power = 1.0;
    bad.interferers.push_back(wrap(arma::cx_mat(3, 2, arma::fill::ones)));
    bad.interferers.push_back(wrap(arma::cx_mat(4, 2, arma::fill::ones)));
    CHECK_THROWS_AS(interference_covariance(bad), std::invalid_argument);
}

TEST_CASE("covariance is Hermitian with eigenvalues at least one") {
    InterferenceField f;
    f.per_antenna_power = 0.25;
    for (int i = 0; i < 5; ++i)
        f.interferers.push_back(wrap(random_cx(8, 8, derive_seed(1, 5, i))));
    auto r = interference_covariance(f);
    CHECK(arma::abs(r - r.t()).max() / arma::abs(r).max() < 1e-10);
    arma::vec eigs = arma::eig_sym(r);
    CHECK(eigs.min() >= 1.0 - 1e-9);
}

TEST_CASE("blocked accumulator matches the direct gemm route") {
    // Small chunk forces several flushes; reference is plain arma arithmetic.
    const double scale = 0.37;
    CovarianceAccumulator acc(6, scale, 7);
    arma::cx_mat ref(6, 6, arma::fill::zeros);
    for (int i = 0; i < 9; ++i) {
        auto h = random_cx(6, 1 + (i % 5), derive_seed(2, 6, i));
        acc.add_matrix(h);
        ref += h * h.t();
    }
    arma::cx_mat want =
        arma::cx_mat(6, 6, arma::fill::eye) + scale * ref;
    auto got = acc.finish();
    CHECK(arma::abs(got - want).max() < 1e-12);
    CHECK(arma::abs(got - got.t()).max() == 0.0); // exactly Hermitian
    CHECK_THROWS_AS(acc.claim(8), std::invalid_argument);
}

TEST_CASE("single antenna link at reference distance gives 1 bps/Hz") {
    arma::cx_mat h(1, 1);
    h(0, 0) = 1.0;
    arma::cx_mat r(1, 1, arma::fill::eye);
    auto s = link_rate(h, r, 1.0, 1, 1, 42);
    CHECK(s.rate_bps_hz == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(s.reuse_factor == 1);
    CHECK(s.seed == 42);
}

TEST_CASE("zero channel gives zero rate for any covariance") {
    arma::cx_mat h(4, 4, arma::fill::zeros);
    InterferenceField f;
    f.per_antenna_power = 2.0;
    f.interferers.push_back(wrap(random_cx(4, 4, 77)));
    auto r = interference_covariance(f);
    CHECK(link_rate(h, r, 1.0, 4, 1).rate_bps_hz == doctest::Approx(0.0));
    CHECK(link_rate(h, r, 1.0, 4, 3).rate_bps_hz == doctest::Approx(0.0));
}

TEST_CASE("singular covariance is surfaced as a numerical error") {
    arma::cx_mat h = random_cx(3, 3, 5);
    arma::cx_mat r(3, 3, arma::fill::zeros); // not PD
    CHECK_THROWS_AS(link_rate(h, r, 1.0, 3, 1), std::runtime_error);
    CHECK_THROWS_AS(link_rate(h, r, -1.0, 3, 1), std::invalid_argument);
    CHECK_THROWS_AS(link_rate(h, arma::cx_mat(3, 3, arma::fill::eye), 1.0, 3, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(link_rate(h, arma::cx_mat(2, 2, arma::fill::eye), 1.0, 3, 1),
                    std::invalid_argument);
}

TEST_CASE("rate is non-increasing as interference grows in the PSD order") {
    auto h = random_cx(6, 6, 11);
    auto hi = random_cx(6, 6, 12);
    InterferenceField weak, strong;
    weak.per_antenna_power = 0.2;
    strong.per_antenna_power = 0.8; // same interferer, more power
    weak.interferers.push_back(wrap(hi));
    strong.interferers.push_back(wrap(hi));
    const double rw = link_rate(h, interference_covariance(weak), 1.0, 6, 1).rate_bps_hz;
    const double rs = link_rate(h, interference_covariance(strong), 1.0, 6, 1).rate_bps_hz;
    CHECK(rs <= rw + 1e-12);
}

TEST_CASE("determinant route agrees with an independent eigen oracle") {
    for (int psi = 1; psi <= 4; ++psi) {
        auto h = random_cx(psi, psi, derive_seed(3, 1, psi));
        InterferenceField f;
        f.per_antenna_power = 0.5;
        f.interferers.push_back(wrap(random_cx(psi, psi, derive_seed(3, 2, psi))));
        auto r = interference_covariance(f);

        const int p = 2;
        const double s = p * 1.0 / psi;
        const arma::cx_mat a = s * arma::cx_mat(arma::solve(r, h) * h.t());
        // Oracle 1: plain determinant of I + A.
        const arma::cx_mat ipa =
            arma::cx_mat(psi, psi, arma::fill::eye) + a;
        const double via_det = std::log2(std::abs(arma::det(ipa)));
        // Oracle 2: eigenvalues of A (real and non-negative up to rounding).
        arma::cx_vec ev = arma::eig_gen(a);
        double via_eig = 0.0;
        for (const auto& l : ev) via_eig += std::log2(std::abs(1.0 + l));

        const double mine = link_rate(h, r, 1.0, psi, p).rate_bps_hz * p;
        CHECK(mine == doctest::Approx(via_det).epsilon(1e-8));
        CHECK(mine == doctest::Approx(via_eig).epsilon(1e-8));
    }
}

TEST_CASE("ergodic bound consistency and limits") {
    auto h = random_cx(5, 5, 21);
    const double no_interf = link_rate(h, arma::cx_mat(5, 5, arma::fill::eye),
                                       1.0, 5, 1).rate_bps_hz;
    CHECK(ergodic_lower_bound(h, 1.0, 1.0, 5) ==
          doctest::Approx(no_interf).epsilon(1e-12));
    CHECK(ergodic_lower_bound(h, 1e12, 1.0, 5) ==
          doctest::Approx(0.0).epsilon(1e-9));
    CHECK(ergodic_lower_bound(h, 2.0, 1.0, 5) <
          ergodic_lower_bound(h, 1.5, 1.0, 5));
    CHECK_THROWS_AS(ergodic_lower_bound(h, 0.99, 1.0, 5), std::invalid_argument);
}

TEST_CASE("ring interference constant values and convergence") {
    CHECK(ring_interference_constant(100.0, 4.0, 1.0, 1).value ==
          doctest::Approx(9.0).epsilon(1e-14));
    CHECK(ring_interference_constant(100.0, 4.0, 0.0, 64).value ==
          doctest::Approx(1.0).epsilon(1e-14));

    // Independent partial-sum oracle with its own tail estimate.
    double oracle = 0.0;
    for (int i = 2; i <= 200000; ++i)
        oracle += i * std::pow(static_cast<double>(i - 1), -4.0);
    auto q = ring_interference_constant(1.0, 4.0, 1.0, 100000);
    CHECK(q.value == doctest::Approx(9.0 + 8.0 * oracle).epsilon(1e-9));
    CHECK(q.converged);

    // alpha = 5 headline constant, large ring count.
    auto q5 = ring_interference_constant(100.0, 5.0, 1.0, 4096);
    CHECK(q5.value == doctest::Approx(25.954008).epsilon(1e-6));
    CHECK(q5.converged);

    // Few rings: value monotone in the ring count, flag honest.
    auto qa = ring_interference_constant(1.0, 3.0, 1.0, 4);
    auto qb = ring_interference_constant(1.0, 3.0, 1.0, 8);
    CHECK(qa.value <= qb.value);
    CHECK_FALSE(qa.converged);
    CHECK(qa.tail_bound > 0.0);

    CHECK_THROWS_AS(ring_interference_constant(1.0, 2.0, 1.0, 4),
                    std::invalid_argument);
    CHECK_THROWS_AS(ring_interference_constant(0.0, 4.0, 1.0, 4),
                    std::invalid_argument);
}

TEST_CASE("beamforming rate bounds") {
    // Rank-1 channel: all energy in one eigenvalue, bounds coincide.
    arma::cx_vec u = arma::cx_vec(random_cx(6, 1, 31));
    arma::cx_vec v = arma::cx_vec(random_cx(4, 1, 32));
    arma::cx_mat rank1 = u * v.t();
    auto b1 = beamforming_rate(rank1, 2.0);
    CHECK(b1.exact == doctest::Approx(b1.trace_upper).epsilon(1e-12));

    arma::cx_mat h11(1, 1);
    h11(0, 0) = std::complex<double>(0.3, 0.4);
    auto b2 = beamforming_rate(h11, 1.0);
    CHECK(b2.exact == doctest::Approx(b2.trace_upper).epsilon(1e-14));
    CHECK(b2.exact == doctest::Approx(std::log2(1.25)).epsilon(1e-12));

    // Full-rank random channel: strict inequality.
    auto h = random_cx(8, 8, 33);
    auto b3 = beamforming_rate(h, 1.0);
    CHECK(b3.exact < b3.trace_upper - 1e-6);
    CHECK(b3.exact <= b3.trace_upper + 1e-12);
}

TEST_CASE("long hop range closed form") {
    CHECK(long_hop_range(1.0, 1.0, 64, 4.0, 1.0) == doctest::Approx(8.0));
    CHECK(long_hop_range(1.0, 1.0, 1, 4.0, 1.0) == doctest::Approx(1.0));
    CHECK(long_hop_range(16.0, 1.0, 64, 4.0, 1.0) == doctest::Approx(16.0));
    CHECK(long_hop_range(1.0, 1.0, 64, 4.0, 100.0) == doctest::Approx(800.0));
    CHECK_THROWS_AS(long_hop_range(0.0, 1.0, 64, 4.0, 1.0), std::invalid_argument);
}

TEST_CASE("spectral radius diagnostic") {
    InterferenceField empty;
    empty.per_antenna_power = 1.0;
    auto d0 = spectral_radius_diagnostic(empty, 100.0, 64.0, 0.01, 5.0, 100.0);
    CHECK(d0.lambda_max_numeric == doctest::Approx(1.0));
    CHECK(d0.heuristic_bound == doctest::Approx(1.0));
    CHECK(d0.alpha_valid);
    CHECK(d0.non_rigorous);

    InterferenceField one;
    one.per_antenna_power = 1.0;
    arma::cx_mat g(1, 1);
    g(0, 0) = std::complex<double>(0.0, 0.7);
    one.interferers.push_back(wrap(g, 100.0));
    auto d1 = spectral_radius_diagnostic(one, 100.0, 64.0, 0.01, 3.0, 100.0);
    CHECK(d1.lambda_max_numeric == doctest::Approx(1.49).epsilon(1e-12));
    CHECK_FALSE(d1.alpha_valid); // heuristic regime needs alpha > 3
    // Interferer at the reference distance with d_max = c: bound = 1 + P.
    CHECK(d1.heuristic_bound == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("interferer resampling mean stays above the Jensen bound") {
    // 5x5 exact lattice, center RX, neighbor TX, full reuse.
    LinkBudget b = small_budget();
    const int psi = 8;
    const double side = 8.0;
    auto lat = geometry::sample_perturbed_lattice(5, 100.0, 9, 0.0);
    const Point rx_c = lat.points[2 * 5 + 2];
    const Point tx_c = lat.points[3 * 5 + 2];

    auto rx = place_antennas(rx_c, side, psi, derive_seed(4, 1, 0));
    auto tx = place_antennas(tx_c, side, psi, derive_seed(4, 1, 1));
    auto hm = build_channel_matrix(tx, rx, b);

    const int trials = 200;
    double sum = 0.0, sumsq = 0.0;
    for (int t = 0; t < trials; ++t) {
        InterferenceField f;
        f.per_antenna_power = b.tx_power / psi;
        for (std::size_t i = 0; i < lat.points.size(); ++i) {
            if (lat.points[i].x == tx_c.x && lat.points[i].y == tx_c.y) continue;
            if (lat.points[i].x == rx_c.x && lat.points[i].y == rx_c.y) continue;
            auto ia = place_antennas(lat.points[i], side, psi,
                                     derive_seed(4, 2, t * 100 + i));
            f.interferers.push_back(build_channel_matrix(ia, rx, b));
        }
        auto r = interference_covariance(f);
        const double rate = link_rate(hm.h, r, b.tx_power, psi, 1).rate_bps_hz;
        sum += rate;
        sumsq += rate * rate;
    }
    const double mean = sum / trials;
    const double var = (sumsq - sum * sum / trials) / (trials - 1);
    const double se = std::sqrt(var / trials);

    const double q = ring_interference_constant(b.ref_distance, 5.0, 1.0).value;
    const double lb = ergodic_lower_bound(hm.h, q, b.tx_power, psi);
    CHECK(mean >= lb - 3.0 * se);
}

TEST_CASE("rate CSV format") {
    std::vector<RateSample> samples{{12.5, 1, 7}, {3.25, 4, 8}};
    std::stringstream ss;
    write_rate_csv(samples, 64, ss);
    CHECK(ss.str() == "seed,psi,p,rate_bps_hz\n7,64,1,12.5\n8,64,4,3.25\n");
}
