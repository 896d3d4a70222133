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
#include <utility>
#include <vector>

#include "backhaul/geometry.hpp"

namespace backhaul::routing {

// Percolation highway system. The box is tiled into square cells; a cell is
// open when it contains at least one BS. Horizontal slabs of slab_rows cell
// rows each yield vertex-disjoint left-right crossings (max-flow on the open
// 4-adjacency graph); each crossing becomes a highway whose nodes are one
// representative BS per cell (nearest the cell center, lowest index on ties).
// The vertical construction mirrors this on columns.
struct HighwaySystem {
    std::vector<std::vector<int>> horizontal;  // BS paths, left to right
    std::vector<std::vector<int>> vertical;    // BS paths, top to bottom
    std::vector<int> h_slab;                   // slab id per horizontal highway
    std::vector<int> v_slab;                   // slab id per vertical highway
    // Per BS: (horizontal highway id, vertical highway id), -1 when the BS's
    // slab produced no crossing.
    std::vector<std::pair<int, int>> assignment;
    int slab_rows = 0;       // rows of cells per slab, max(1, ln(sqrt(n)))
    int num_h_slabs = 0;
    int num_v_slabs = 0;
    double cell_side = 0.0;  // actual tiled cell side
    int grid_cells = 0;      // cells per box side
    std::size_t failed_h_slabs = 0;  // slabs with no crossing
    std::size_t failed_v_slabs = 0;

    // Maximum hop length a highway may contain: adjacent-cell representatives
    // are at most cell_side * sqrt(5) apart.
    double hop_cap() const;
};

// Errors: std::invalid_argument for non-positive cell_side, a cell grid that
// does not fit the box, or a realization without box/density.
HighwaySystem build_highways(const geometry::Realization& r, double cell_side);

// Four-phase route per connection: entry hop to the source's horizontal
// highway, horizontal traversal to the crossing with the destination's
// vertical highway, vertical traversal to the node nearest the destination,
// exit hop. Phase paths include their endpoint nodes; consecutive phases
// share the boundary node.
struct RoutePlan {
    struct Connection {
        int source = -1;
        int dest = -1;
        bool routable = false;
        std::vector<int> entry_path;       // phase 1
        std::vector<int> horizontal_path;  // phase 2
        std::vector<int> vertical_path;    // phase 3
        std::vector<int> exit_path;        // phase 4
        int entry_bs = -1;
        int crossing_bs = -1;
        int exit_bs = -1;
    };
    std::vector<Connection> connections;
    std::vector<int> relay_load;      // per BS: connections touching it
    std::vector<int> h_highway_load;  // per horizontal highway
    std::vector<int> v_highway_load;  // per vertical highway
    std::vector<int> entry_share;     // per BS: connections entering there
    std::vector<int> exit_share;      // per BS: connections exiting there
    std::size_t unroutable = 0;
};

// Errors: std::invalid_argument when the realization has no pairing
// (dest_index unset) or sizes disagree with the highway system.
RoutePlan plan_routes(const geometry::Realization& r, const HighwaySystem& hs);

// Per-connection end-to-end rate: the minimum of the highway rate divided by
// the connection's bottleneck (most-loaded) highway BS, the entry rate split
// across sources sharing its entry BS, and the same at the exit BS.
// Unroutable connections get rate 0. Errors: std::invalid_argument for
// non-positive rates.
struct PerConnectionRates {
    std::vector<double> rate;
    std::vector<double> highway_component;
    std::vector<double> entry_component;
    std::vector<double> exit_component;
};

PerConnectionRates per_connection_rate(const RoutePlan& plan, double highway_rate,
                                       double entry_rate);

// Greedy long-hop routing: hop to the BS within reach d_c that most reduces
// the remaining distance (exact ties broken by the seeded RNG). Connections
// with no forward progress available are flagged stuck and abandoned.
// Relay load counts every transmission a BS makes (source and intermediate
// hops). Errors: std::invalid_argument for d_c <= 0 or missing pairing.
struct LongHopResult {
    std::vector<int> hop_counts;  // per connection; -1 when stuck
    std::vector<int> relay_load;  // per BS
    int max_relay_load = 0;
    std::size_t stuck = 0;
    double mean_hops = 0.0;  // over completed connections
};

LongHopResult long_hop_route(const geometry::Realization& r, double d_c,
                             std::uint64_t seed);

// CSV: `conn_id,phase,hop_index,bs_index`, every node of every phase path.
void write_route_csv(const RoutePlan& plan, std::ostream& out);

// CSV: `seed,n,horizontal,vertical,failed_slabs` per realization.
struct CensusRow {
    std::uint64_t seed = 0;
    long n = 0;
    std::size_t horizontal = 0;
    std::size_t vertical = 0;
    std::size_t failed_slabs = 0;
};

void write_census_csv(const std::vector<CensusRow>& rows, std::ostream& out);

}  // namespace backhaul::routing
