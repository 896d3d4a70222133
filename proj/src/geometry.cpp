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

#include "backhaul/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace backhaul::geometry {

double distance(const Point& a, const Point& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

double distance_to_vertical_cut(const Box& box, const Point& p) {
    return std::abs(p.x - (box.x0 + 0.5 * box.side));
}

Realization sample_ppp(const Box& box, double density, std::uint64_t seed) {
    if (!(box.side > 0.0))
        throw std::invalid_argument("sample_ppp: box side must be positive");
    if (!(density > 0.0))
        throw std::invalid_argument("sample_ppp: density must be positive");

    Rng rng = make_rng(seed);
    std::poisson_distribution<std::size_t> count(density * box.side * box.side);
    const std::size_t n = count(rng);

    Realization r;
    r.box = box;
    r.density = density;
    r.seed = seed;
    r.points.resize(n);
    r.dest_index.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        r.points[i].x = box.x0 + box.side * uniform_unit(rng);
        r.points[i].y = box.y0 + box.side * uniform_unit(rng);
    }
    return r;
}

Realization sample_perturbed_lattice(int grid_dim, double spacing,
                                     std::uint64_t seed,
                                     double perturbation_amplitude) {
    if (grid_dim < 1)
        throw std::invalid_argument("sample_perturbed_lattice: grid_dim must be >= 1");
    if (!(spacing > 0.0))
        throw std::invalid_argument("sample_perturbed_lattice: spacing must be positive");
    if (!(perturbation_amplitude >= 0.0 && perturbation_amplitude <= 1.0))
        throw std::invalid_argument(
            "sample_perturbed_lattice: perturbation_amplitude must be in [0, 1]");

    Realization r;
    r.box = Box{0.0, 0.0, grid_dim * spacing};
    r.density = 1.0 / (spacing * spacing);
    r.seed = seed;
    const std::size_t n = static_cast<std::size_t>(grid_dim) * grid_dim;
    r.points.resize(n);
    r.dest_index.assign(n, -1);

    Rng rng = make_rng(seed);
    const double half = 0.5 * perturbation_amplitude * spacing;
    for (int i = 0; i < grid_dim; ++i) {
        for (int j = 0; j < grid_dim; ++j) {
            Point p{(i + 0.5) * spacing, (j + 0.5) * spacing};
            if (half > 0.0) {
                p.x += uniform_range(rng, -half, half);
                p.y += uniform_range(rng, -half, half);
            }
            r.points[static_cast<std::size_t>(i) * grid_dim + j] = p;
        }
    }
    return r;
}

void pair_sources_destinations(Realization& r, std::uint64_t seed) {
    const std::size_t n = r.points.size();
    if (n < 2)
        throw std::invalid_argument(
            "pair_sources_destinations: need at least 2 base stations");

    Rng rng = make_rng(seed);
    std::vector<int> perm(n);
    bool has_fixed_point = true;
    while (has_fixed_point) {
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = n - 1; i > 0; --i) {
            const std::size_t j = uniform_index(rng, i + 1);
            std::swap(perm[i], perm[j]);
        }
        has_fixed_point = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (perm[i] == static_cast<int>(i)) {
                has_fixed_point = true;
                break;
            }
        }
    }
    r.dest_index = std::move(perm);
}

StripDecomposition strip_decompose(double side) {
    const double e1 = std::exp(1.0);
    if (!(side >= 2.0 * e1))
        throw std::invalid_argument(
            "strip_decompose: side must be at least 2e for one strip to fit");

    const std::size_t num_strips =
        static_cast<std::size_t>(std::floor(std::log(side / 2.0))) + 1;
    StripDecomposition d;
    d.side = side;
    d.min_distance.resize(num_strips);
    for (std::size_t k = 0; k + 1 < num_strips; ++k)
        d.min_distance[k] = side / (2.0 * std::exp(static_cast<double>(k + 1)));
    d.min_distance[num_strips - 1] = 0.0; // last strip reaches the cut
    return d;
}

std::size_t strip_index(const StripDecomposition& d, double distance_to_cut) {
    if (!(distance_to_cut >= 0.0))
        throw std::invalid_argument("strip_index: distance must be non-negative");
    for (std::size_t k = 0; k < d.min_distance.size(); ++k)
        if (distance_to_cut >= d.min_distance[k]) return k;
    return d.min_distance.size() - 1; // unreachable: last strip has min 0
}

ConcentrationReport check_concentration(const std::vector<std::size_t>& counts,
                                        double area, double density) {
    if (counts.empty())
        throw std::invalid_argument("check_concentration: counts must be non-empty");
    if (!(area > 0.0) || !(density > 0.0))
        throw std::invalid_argument(
            "check_concentration: area and density must be positive");

    const double m = density * area; // expected count
    std::size_t upper = 0, lower = 0;
    double sum = 0.0;
    for (std::size_t c : counts) {
        const double x = static_cast<double>(c);
        if (x > 2.0 * m) ++upper;
        if (x < 0.5 * m) ++lower;
        sum += x;
    }
    ConcentrationReport rep;
    const double trials = static_cast<double>(counts.size());
    rep.upper_violation_freq = static_cast<double>(upper) / trials;
    rep.lower_violation_freq = static_cast<double>(lower) / trials;
    rep.chernoff_upper = std::pow(std::exp(1.0) / 4.0, m);
    rep.chernoff_lower = std::pow(2.0 / std::exp(1.0), 0.5 * m);
    rep.mean_count = sum / trials;
    return rep;
}

void write_realization_csv(const Realization& r, std::ostream& out) {
    out << "index,x,y,dest_index\n";
    char buf[128];
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        const int dest = i < r.dest_index.size() ? r.dest_index[i] : -1;
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%d\n", i, r.points[i].x,
                      r.points[i].y, dest);
        out << buf;
    }
}

Realization read_realization_csv(std::istream& in, const Box& box,
                                 double density, std::uint64_t seed) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("index,x,y,dest_index", 0) != 0)
        throw std::invalid_argument("read_realization_csv: bad or missing header");

    Realization r;
    r.box = box;
    r.density = density;
    r.seed = seed;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string field;
        std::size_t idx;
        Point p;
        int dest;
        std::getline(ss, field, ',');
        idx = std::stoul(field);
        std::getline(ss, field, ',');
        p.x = std::stod(field);
        std::getline(ss, field, ',');
        p.y = std::stod(field);
        std::getline(ss, field, ',');
        dest = std::stoi(field);
        if (idx != r.points.size())
            throw std::invalid_argument("read_realization_csv: rows out of order");
        r.points.push_back(p);
        r.dest_index.push_back(dest);
    }
    return r;
}

}  // namespace backhaul::geometry
