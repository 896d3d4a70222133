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

#include "backhaul/channel.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace backhaul::channel {

double LinkBudget::mu_linear() const { return std::pow(10.0, ref_snr_db / 10.0); }

void LinkBudget::validate() const {
    if (!(pathloss_exponent > 2.0))
        throw std::invalid_argument("LinkBudget: pathloss_exponent must be > 2");
    if (std::isnan(ref_snr_db))
        throw std::invalid_argument("LinkBudget: ref_snr_db must not be NaN");
    if (!(ref_distance > 0.0))
        throw std::invalid_argument("LinkBudget: ref_distance must be positive");
    if (!(wavelength > 0.0))
        throw std::invalid_argument("LinkBudget: wavelength must be positive");
    if (!(tx_power > 0.0))
        throw std::invalid_argument("LinkBudget: tx_power must be positive");
    if (!(noise_psd_bw > 0.0))
        throw std::invalid_argument("LinkBudget: noise_psd_bw must be positive");
}

AntennaArray place_antennas(const geometry::Point& center, double side, int psi,
                            std::uint64_t seed) {
    if (psi < 1)
        throw std::invalid_argument("place_antennas: psi must be >= 1");
    if (!(side > 0.0))
        throw std::invalid_argument("place_antennas: array side must be positive");

    AntennaArray arr;
    arr.center = center;
    arr.side = side;
    arr.elements.resize(static_cast<std::size_t>(psi));
    Rng rng = make_rng(seed);
    for (auto& e : arr.elements) {
        e.x = center.x + side * (uniform_unit(rng) - 0.5);
        e.y = center.y + side * (uniform_unit(rng) - 0.5);
    }
    return arr;
}

// Pathloss amplitude from the BS-center separation; bounded above by 1 so the
// gain never exceeds sqrt(mu).
static double amplitude(const LinkBudget& b, double center_distance) {
    const double ratio = center_distance / b.ref_distance;
    const double loss =
        ratio <= 1.0 ? 1.0 : std::pow(ratio, -0.5 * b.pathloss_exponent);
    return std::sqrt(b.mu_linear()) * loss;
}

std::complex<double> los_gain(double pair_distance, const LinkBudget& budget,
                              double center_distance) {
    if (!(pair_distance > 0.0))
        throw std::invalid_argument("los_gain: pair distance must be positive");
    if (!(center_distance > 0.0))
        throw std::invalid_argument("los_gain: center distance must be positive");

    // exp(-j 2 pi d/lambda) depends on d/lambda only through its fractional
    // part; reducing first keeps full precision at d >> lambda.
    const double cycles = pair_distance / budget.wavelength;
    const double frac = cycles - std::floor(cycles);
    const double theta = 2.0 * M_PI * frac;
    const double a = amplitude(budget, center_distance);
    return {a * std::cos(theta), -a * std::sin(theta)};
}

ChannelMatrix build_channel_matrix(const AntennaArray& tx, const AntennaArray& rx,
                                   const LinkBudget& budget) {
    budget.validate();
    const double d_center = geometry::distance(tx.center, rx.center);
    if (!(d_center > 0.0))
        throw std::invalid_argument(
            "build_channel_matrix: TX and RX array centers coincide");

    ChannelMatrix m;
    m.center_distance = d_center;
    m.arrays_overlap =
        std::abs(tx.center.x - rx.center.x) < 0.5 * (tx.side + rx.side) &&
        std::abs(tx.center.y - rx.center.y) < 0.5 * (tx.side + rx.side);
    m.h.set_size(rx.elements.size(), tx.elements.size());
    for (std::size_t a = 0; a < rx.elements.size(); ++a) {
        for (std::size_t b = 0; b < tx.elements.size(); ++b) {
            const double d_pair = geometry::distance(rx.elements[a], tx.elements[b]);
            if (!(d_pair > 0.0))
                throw std::invalid_argument(
                    "build_channel_matrix: coincident TX/RX antenna pair");
            m.h(a, b) = los_gain(d_pair, budget, d_center);
        }
    }
    return m;
}

double dof_formula(double psi, double area, double wavelength, double distance) {
    if (!(psi >= 1.0))
        throw std::invalid_argument("dof_formula: psi must be >= 1");
    if (!(area > 0.0) || !(wavelength > 0.0) || !(distance > 0.0))
        throw std::invalid_argument("dof_formula: arguments must be positive");

    const double near_edge = std::sqrt(area);
    const double far_edge = area / wavelength;
    if (distance <= near_edge) return std::min(psi, near_edge / wavelength);
    if (distance <= far_edge) return std::min(psi, area / (wavelength * distance));
    return 1.0;
}

bool dof_distance_in_domain(const LinkBudget& budget, double distance) {
    return distance >= budget.ref_distance / 100.0;
}

int empirical_dof(const arma::cx_mat& h, double threshold_fraction) {
    if (!(threshold_fraction > 0.0 && threshold_fraction < 1.0))
        throw std::invalid_argument("empirical_dof: threshold must be in (0, 1)");
    if (h.n_elem == 0) return 0;

    arma::vec s = arma::svd(h);
    const double top = s.max();
    if (!(top > 0.0)) return 0;
    int count = 0;
    for (double v : s)
        if (v >= threshold_fraction * top) ++count;
    return count;
}

void write_channel_csv(const arma::cx_mat& h, std::ostream& out) {
    out << "re,im\n";
    char buf[80];
    for (std::size_t a = 0; a < h.n_rows; ++a) {
        for (std::size_t b = 0; b < h.n_cols; ++b) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", h(a, b).real(),
                          h(a, b).imag());
            out << buf;
        }
    }
}

arma::cx_mat read_channel_csv(std::istream& in, std::size_t n_rows,
                              std::size_t n_cols) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("re,im", 0) != 0)
        throw std::invalid_argument("read_channel_csv: bad or missing header");

    arma::cx_mat h(n_rows, n_cols);
    for (std::size_t a = 0; a < n_rows; ++a) {
        for (std::size_t b = 0; b < n_cols; ++b) {
            if (!std::getline(in, line))
                throw std::invalid_argument("read_channel_csv: truncated table");
            std::istringstream ss(line);
            std::string re, im;
            std::getline(ss, re, ',');
            std::getline(ss, im, ',');
            h(a, b) = {std::stod(re), std::stod(im)};
        }
    }
    return h;
}

}  // namespace backhaul::channel
