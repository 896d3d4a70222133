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

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "backhaul/rng.hpp"

namespace backhaul::geometry {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

// Axis-aligned square region. Coordinates are meters throughout; the network
// unit distance (mean nearest-lattice spacing) is density^{-1/2}.
struct Box {
    double x0 = 0.0;
    double y0 = 0.0;
    double side = 0.0;
};

double distance(const Point& a, const Point& b);

// Distance to the vertical line splitting the box into equal halves.
double distance_to_vertical_cut(const Box& box, const Point& p);

// A set of base station locations with an optional source->destination
// pairing. dest_index[i] == -1 means BS i has no assigned destination.
struct Realization {
    std::vector<Point> points;
    std::vector<int> dest_index;
    Box box;
    double density = 0.0;   // nominal intensity, BS per square meter
    std::uint64_t seed = 0; // seed used to sample the point set
};

// Homogeneous Poisson point process on `box` with the given intensity.
// The point count is Poisson(density * side^2); positions are iid uniform.
// Errors: std::invalid_argument for non-positive side or density.
Realization sample_ppp(const Box& box, double density, std::uint64_t seed);

// grid_dim x grid_dim lattice with cell side `spacing`; BS (i, j) is placed
// uniformly in the square of side perturbation_amplitude * spacing centered
// at its cell center ((i + 1/2) s, (j + 1/2) s). Index = i * grid_dim + j.
// perturbation_amplitude = 0 gives the exact lattice (no RNG draws),
// 1 lets each BS move anywhere inside its own cell.
// Errors: std::invalid_argument for grid_dim < 1, spacing <= 0, or
// perturbation_amplitude outside [0, 1].
Realization sample_perturbed_lattice(int grid_dim, double spacing,
                                     std::uint64_t seed,
                                     double perturbation_amplitude = 1.0);

// Assigns each BS a distinct destination BS via a uniformly random
// permutation, resampled until it has no fixed point (no BS is its own
// destination). Errors: std::invalid_argument if fewer than 2 BSs.
void pair_sources_destinations(Realization& r, std::uint64_t seed);

// Exponential strip decomposition of a square of side `side` (in network
// units) around its vertical center cut. Strip i (1-based, i < L) contains
// the BSs at distance >= side / (2 e^i) from the cut; the last strip L
// reaches down to distance 0. L = floor(ln(side / 2)) + 1.
// Errors: std::invalid_argument if side < 2e (no strip fits).
struct StripDecomposition {
    double side = 0.0;
    std::vector<double> min_distance; // min_distance[k] for strip k+1; last is 0
};

StripDecomposition strip_decompose(double side);

// 0-based index of the strip containing a BS at `distance_to_cut`
// (strip 1 of the decomposition is index 0).
std::size_t strip_index(const StripDecomposition& d, double distance_to_cut);

// Empirical check of the point-count concentration bounds. Each entry of
// `counts` is the number of points one trial produced in a region of the
// given area under the given intensity. A trial violates the upper bound if
// count > 2 * density * area, the lower bound if count < density * area / 2.
// chernoff_upper = (e/4)^(density*area) and chernoff_lower = (2/e)^(density*area/2)
// are the corresponding tail probabilities.
struct ConcentrationReport {
    double upper_violation_freq = 0.0;
    double lower_violation_freq = 0.0;
    double chernoff_upper = 0.0;
    double chernoff_lower = 0.0;
    double mean_count = 0.0;
};

ConcentrationReport check_concentration(const std::vector<std::size_t>& counts,
                                        double area, double density);

// CSV serialization: header `index,x,y,dest_index`, coordinates with 17
// significant digits so a written realization reloads bit-exactly.
void write_realization_csv(const Realization& r, std::ostream& out);

// Reads the table written by write_realization_csv. Box, density and seed are
// not part of the table and are left at the provided values.
Realization read_realization_csv(std::istream& in, const Box& box,
                                 double density, std::uint64_t seed);

}  // namespace backhaul::geometry
