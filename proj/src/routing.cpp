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

#include "backhaul/routing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <queue>
#include <stdexcept>
#include <unordered_map>

#include "backhaul/rng.hpp"

namespace backhaul::routing {

double HighwaySystem::hop_cap() const { return cell_side * std::sqrt(5.0); }

namespace {

using geometry::Point;
using geometry::Realization;

// Unit-capacity max flow (augmenting BFS); graphs here are a few hundred
// nodes, so simplicity beats asymptotics.
struct FlowGraph {
    struct Edge {
        int to;
        int cap;
        int rev;
    };
    std::vector<std::vector<Edge>> adj;

    explicit FlowGraph(int n) : adj(n) {}

    void add_edge(int u, int v, int cap) {
        adj[u].push_back({v, cap, static_cast<int>(adj[v].size())});
        adj[v].push_back({u, 0, static_cast<int>(adj[u].size()) - 1});
    }

    int max_flow(int s, int t) {
        int total = 0;
        while (true) {
            std::vector<int> prev_node(adj.size(), -1), prev_edge(adj.size(), -1);
            std::queue<int> q;
            q.push(s);
            prev_node[s] = s;
            while (!q.empty() && prev_node[t] < 0) {
                const int u = q.front();
                q.pop();
                for (std::size_t k = 0; k < adj[u].size(); ++k) {
                    const Edge& e = adj[u][k];
                    if (e.cap > 0 && prev_node[e.to] < 0) {
                        prev_node[e.to] = u;
                        prev_edge[e.to] = static_cast<int>(k);
                        q.push(e.to);
                    }
                }
            }
            if (prev_node[t] < 0) return total;
            for (int v = t; v != s; v = prev_node[v]) {
                Edge& e = adj[prev_node[v]][prev_edge[v]];
                e.cap -= 1;
                adj[v][e.rev].cap += 1;
            }
            total += 1;
        }
    }
};

struct CellGrid {
    int m = 0;
    double cell = 0.0;
    geometry::Box box;
    std::vector<char> open;  // row-major [row * m + col]; row = y, col = x
    std::vector<int> rep;    // representative BS per cell, -1 if closed
};

CellGrid make_grid(const Realization& r, double cell_side) {
    if (!(cell_side > 0.0))
        throw std::invalid_argument("build_highways: cell_side must be positive");
    if (!(r.box.side > 0.0) || !(r.density > 0.0))
        throw std::invalid_argument("build_highways: realization lacks box/density");

    CellGrid g;
    g.m = static_cast<int>(std::llround(r.box.side / cell_side));
    if (g.m < 1)
        throw std::invalid_argument(
            "build_highways: cell_side larger than the box side");
    g.cell = r.box.side / g.m;  // exact tiling of the box
    g.box = r.box;
    g.open.assign(static_cast<std::size_t>(g.m) * g.m, 0);
    g.rep.assign(static_cast<std::size_t>(g.m) * g.m, -1);

    std::vector<double> best(static_cast<std::size_t>(g.m) * g.m,
                             std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        const Point& p = r.points[i];
        const int cx = std::clamp(
            static_cast<int>(std::floor((p.x - r.box.x0) / g.cell)), 0, g.m - 1);
        const int cy = std::clamp(
            static_cast<int>(std::floor((p.y - r.box.y0) / g.cell)), 0, g.m - 1);
        const std::size_t c = static_cast<std::size_t>(cy) * g.m + cx;
        g.open[c] = 1;
        const Point center{r.box.x0 + (cx + 0.5) * g.cell,
                           r.box.y0 + (cy + 0.5) * g.cell};
        const double d = geometry::distance(p, center);
        if (d < best[c] - 1e-15) {  // strict improvement; ties keep lowest index
            best[c] = d;
            g.rep[c] = static_cast<int>(i);
        }
    }
    return g;
}

// Vertex-disjoint left-right crossings of the slab rows [r0, r1) on the open
// cell grid, as cell paths ordered left to right. Node-split max flow gives
// Menger's count; each vertex carries at most one unit so path walks never
// branch.
std::vector<std::vector<int>> slab_crossings(const std::vector<char>& open, int m,
                                             int r0, int r1) {
    auto cell_id = [m](int row, int col) { return row * m + col; };
    // Node k -> flow nodes 2k (in) and 2k+1 (out); S and T appended.
    const int s_node = 2 * m * m, t_node = s_node + 1;
    FlowGraph fg(t_node + 1);
    for (int row = r0; row < r1; ++row) {
        for (int col = 0; col < m; ++col) {
            const int k = cell_id(row, col);
            if (!open[k]) continue;
            fg.add_edge(2 * k, 2 * k + 1, 1);
            if (col == 0) fg.add_edge(s_node, 2 * k, 1);
            if (col == m - 1) fg.add_edge(2 * k + 1, t_node, 1);
            if (col + 1 < m && open[cell_id(row, col + 1)]) {
                fg.add_edge(2 * k + 1, 2 * cell_id(row, col + 1), 1);
                fg.add_edge(2 * cell_id(row, col + 1) + 1, 2 * k, 1);
            }
            if (row + 1 < r1 && open[cell_id(row + 1, col)]) {
                fg.add_edge(2 * k + 1, 2 * cell_id(row + 1, col), 1);
                fg.add_edge(2 * cell_id(row + 1, col) + 1, 2 * k, 1);
            }
        }
    }
    fg.max_flow(s_node, t_node);

    // Follow saturated edges from each used leftmost cell to the sink.
    std::vector<std::vector<int>> paths;
    for (const auto& e : fg.adj[s_node]) {
        if (e.cap != 0) continue;  // unsaturated source edge
        std::vector<int> cells;
        int node = e.to;  // an in-node
        while (node != t_node) {
            const int k = node / 2;
            cells.push_back(k);
            // in -> out (unique by construction).
            int out = 2 * k + 1;
            int next = -1;
            for (const auto& oe : fg.adj[out]) {
                if (oe.cap == 0 && oe.to != 2 * k && (oe.to % 2 == 0 || oe.to == t_node)) {
                    next = oe.to;
                    break;
                }
            }
            if (next < 0) break;  // defensive: broken flow, drop path
            node = next;
        }
        if (!cells.empty() && cells.back() % m == m - 1) paths.push_back(cells);
    }
    return paths;
}

int nearest_node(const Realization& r, const std::vector<int>& path, int from) {
    int best_pos = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < path.size(); ++k) {
        const double d = geometry::distance(r.points[from], r.points[path[k]]);
        if (d < best_d - 1e-15) {
            best_d = d;
            best_pos = static_cast<int>(k);
        }
    }
    return best_pos;
}

}  // namespace

HighwaySystem build_highways(const geometry::Realization& r, double cell_side) {
    CellGrid g = make_grid(r, cell_side);

    HighwaySystem hs;
    hs.cell_side = g.cell;
    hs.grid_cells = g.m;
    const double side_n = r.box.side * std::sqrt(r.density);
    const long n = std::lround(side_n * side_n);
    hs.slab_rows = std::max(
        1, static_cast<int>(std::llround(0.5 * std::log(std::max(1.0, static_cast<double>(n))))));
    const int num_slabs = std::max(1, g.m / hs.slab_rows);
    hs.num_h_slabs = num_slabs;
    hs.num_v_slabs = num_slabs;

    // Horizontal slabs: rows [s*rows, next) with the remainder folded into
    // the last slab.
    auto slab_range = [&](int s) {
        const int r0 = s * hs.slab_rows;
        const int r1 = (s == num_slabs - 1) ? g.m : (s + 1) * hs.slab_rows;
        return std::pair<int, int>(r0, r1);
    };

    for (int s = 0; s < num_slabs; ++s) {
        auto [r0, r1] = slab_range(s);
        auto paths = slab_crossings(g.open, g.m, r0, r1);
        if (paths.empty()) hs.failed_h_slabs += 1;
        for (auto& cells : paths) {
            std::vector<int> bs;
            bs.reserve(cells.size());
            for (int c : cells) bs.push_back(g.rep[c]);
            hs.horizontal.push_back(std::move(bs));
            hs.h_slab.push_back(s);
        }
    }

    // Vertical: transpose the grid, reuse the crossing extraction, and map
    // transposed cells (row', col') back to (row = col', col = row').
    std::vector<char> open_t(g.open.size());
    std::vector<int> rep_t(g.rep.size());
    for (int row = 0; row < g.m; ++row)
        for (int col = 0; col < g.m; ++col) {
            open_t[static_cast<std::size_t>(col) * g.m + row] =
                g.open[static_cast<std::size_t>(row) * g.m + col];
            rep_t[static_cast<std::size_t>(col) * g.m + row] =
                g.rep[static_cast<std::size_t>(row) * g.m + col];
        }
    for (int s = 0; s < num_slabs; ++s) {
        auto [c0, c1] = slab_range(s);
        auto paths = slab_crossings(open_t, g.m, c0, c1);
        if (paths.empty()) hs.failed_v_slabs += 1;
        for (auto& cells : paths) {
            std::vector<int> bs;
            bs.reserve(cells.size());
            for (int c : cells) bs.push_back(rep_t[c]);
            hs.vertical.push_back(std::move(bs));
            hs.v_slab.push_back(s);
        }
    }

    // Assign every BS to the nearest highway (by nearest node) in its slab.
    hs.assignment.assign(r.points.size(), {-1, -1});
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        const Point& p = r.points[i];
        const int cx = std::clamp(
            static_cast<int>(std::floor((p.x - r.box.x0) / g.cell)), 0, g.m - 1);
        const int cy = std::clamp(
            static_cast<int>(std::floor((p.y - r.box.y0) / g.cell)), 0, g.m - 1);
        const int hs_id = std::min(cy / hs.slab_rows, num_slabs - 1);
        const int vs_id = std::min(cx / hs.slab_rows, num_slabs - 1);

        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t h = 0; h < hs.horizontal.size(); ++h) {
            if (hs.h_slab[h] != hs_id) continue;
            const int pos = nearest_node(r, hs.horizontal[h], static_cast<int>(i));
            const double d =
                geometry::distance(p, r.points[hs.horizontal[h][pos]]);
            if (d < best_d - 1e-15) {
                best_d = d;
                hs.assignment[i].first = static_cast<int>(h);
            }
        }
        best_d = std::numeric_limits<double>::infinity();
        for (std::size_t v = 0; v < hs.vertical.size(); ++v) {
            if (hs.v_slab[v] != vs_id) continue;
            const int pos = nearest_node(r, hs.vertical[v], static_cast<int>(i));
            const double d = geometry::distance(p, r.points[hs.vertical[v][pos]]);
            if (d < best_d - 1e-15) {
                best_d = d;
                hs.assignment[i].second = static_cast<int>(v);
            }
        }
    }
    return hs;
}

RoutePlan plan_routes(const geometry::Realization& r, const HighwaySystem& hs) {
    const std::size_t n = r.points.size();
    if (r.dest_index.size() != n)
        throw std::invalid_argument("plan_routes: realization has no pairing");
    if (hs.assignment.size() != n)
        throw std::invalid_argument("plan_routes: highway system size mismatch");

    RoutePlan plan;
    plan.connections.resize(n);
    plan.relay_load.assign(n, 0);
    plan.h_highway_load.assign(hs.horizontal.size(), 0);
    plan.v_highway_load.assign(hs.vertical.size(), 0);
    plan.entry_share.assign(n, 0);
    plan.exit_share.assign(n, 0);

    for (std::size_t i = 0; i < n; ++i) {
        auto& conn = plan.connections[i];
        conn.source = static_cast<int>(i);
        conn.dest = r.dest_index[i];
        if (conn.dest < 0 || conn.dest >= static_cast<int>(n))
            throw std::invalid_argument("plan_routes: invalid destination index");

        const int hh_id = hs.assignment[i].first;
        const int vv_id = hs.assignment[conn.dest].second;
        if (hh_id < 0 || vv_id < 0) {
            plan.unroutable += 1;
            continue;
        }
        const auto& hh = hs.horizontal[hh_id];
        const auto& vv = hs.vertical[vv_id];

        const int pos_e = nearest_node(r, hh, conn.source);
        conn.entry_bs = hh[pos_e];

        // Crossing: closest hh position to the entry that is shared with the
        // destination's vertical highway (toward-entry tie prefers the lower
        // position).
        std::unordered_map<int, int> vv_pos;
        for (std::size_t k = 0; k < vv.size(); ++k)
            vv_pos.emplace(vv[k], static_cast<int>(k));
        int px = -1;
        for (int off = 0; off < static_cast<int>(hh.size()); ++off) {
            const int lo = pos_e - off, hi = pos_e + off;
            if (lo >= 0 && vv_pos.count(hh[lo])) {
                px = lo;
                break;
            }
            if (hi < static_cast<int>(hh.size()) && vv_pos.count(hh[hi])) {
                px = hi;
                break;
            }
        }
        if (px < 0) {  // disjoint crossing sets: disconnected highway graph
            plan.unroutable += 1;
            continue;
        }
        conn.crossing_bs = hh[px];

        const int pf = nearest_node(r, vv, conn.dest);
        conn.exit_bs = vv[pf];
        const int qx = vv_pos[hh[px]];

        conn.entry_path = {conn.source};
        if (conn.entry_bs != conn.source) conn.entry_path.push_back(conn.entry_bs);
        const int step2 = px >= pos_e ? 1 : -1;
        for (int k = pos_e;; k += step2) {
            conn.horizontal_path.push_back(hh[k]);
            if (k == px) break;
        }
        const int step3 = pf >= qx ? 1 : -1;
        for (int k = qx;; k += step3) {
            conn.vertical_path.push_back(vv[k]);
            if (k == pf) break;
        }
        conn.exit_path = {conn.exit_bs};
        if (conn.dest != conn.exit_bs) conn.exit_path.push_back(conn.dest);
        conn.routable = true;

        // Loads: one unit per distinct BS touched by this connection.
        std::vector<int> touched;
        for (const auto* path : {&conn.entry_path, &conn.horizontal_path,
                                 &conn.vertical_path, &conn.exit_path})
            touched.insert(touched.end(), path->begin(), path->end());
        std::sort(touched.begin(), touched.end());
        touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
        for (int b : touched) plan.relay_load[b] += 1;

        plan.h_highway_load[hh_id] += 1;
        plan.v_highway_load[vv_id] += 1;
        plan.entry_share[conn.entry_bs] += 1;
        plan.exit_share[conn.exit_bs] += 1;
    }
    return plan;
}

PerConnectionRates per_connection_rate(const RoutePlan& plan, double highway_rate,
                                       double entry_rate) {
    if (!(highway_rate > 0.0) || !(entry_rate > 0.0))
        throw std::invalid_argument("per_connection_rate: rates must be positive");

    PerConnectionRates out;
    const std::size_t n = plan.connections.size();
    out.rate.assign(n, 0.0);
    out.highway_component.assign(n, 0.0);
    out.entry_component.assign(n, 0.0);
    out.exit_component.assign(n, 0.0);

    for (std::size_t i = 0; i < n; ++i) {
        const auto& conn = plan.connections[i];
        if (!conn.routable) continue;
        int bottleneck = 1;
        for (const auto* path : {&conn.horizontal_path, &conn.vertical_path})
            for (int b : *path) bottleneck = std::max(bottleneck, plan.relay_load[b]);
        out.highway_component[i] = highway_rate / bottleneck;
        out.entry_component[i] = entry_rate / plan.entry_share[conn.entry_bs];
        out.exit_component[i] = entry_rate / plan.exit_share[conn.exit_bs];
        out.rate[i] = std::min({out.highway_component[i], out.entry_component[i],
                                out.exit_component[i]});
    }
    return out;
}

LongHopResult long_hop_route(const geometry::Realization& r, double d_c,
                             std::uint64_t seed) {
    const std::size_t n = r.points.size();
    if (!(d_c > 0.0))
        throw std::invalid_argument("long_hop_route: d_c must be positive");
    if (r.dest_index.size() != n)
        throw std::invalid_argument("long_hop_route: realization has no pairing");

    LongHopResult out;
    out.hop_counts.assign(n, -1);
    out.relay_load.assign(n, 0);
    Rng rng = make_rng(seed);

    std::vector<int> transmitters;
    std::vector<int> ties;
    for (std::size_t i = 0; i < n; ++i) {
        const int dest = r.dest_index[i];
        if (dest < 0 || dest >= static_cast<int>(n))
            throw std::invalid_argument("long_hop_route: invalid destination index");

        transmitters.clear();
        int cur = static_cast<int>(i);
        bool stuck = false;
        int hops = 0;
        while (cur != dest) {
            const double remaining = geometry::distance(r.points[cur], r.points[dest]);
            double best = remaining;
            ties.clear();
            for (std::size_t b = 0; b < n; ++b) {
                if (static_cast<int>(b) == cur) continue;
                if (geometry::distance(r.points[cur], r.points[b]) > d_c) continue;
                const double left = geometry::distance(r.points[b], r.points[dest]);
                if (left >= remaining) continue;  // strict progress only
                if (left < best - 1e-9 * d_c) {
                    best = left;
                    ties.assign(1, static_cast<int>(b));
                } else if (std::abs(left - best) <= 1e-9 * d_c) {
                    ties.push_back(static_cast<int>(b));
                }
            }
            if (ties.empty()) {
                stuck = true;
                break;
            }
            const int next =
                ties.size() == 1
                    ? ties[0]
                    : ties[uniform_index(rng, ties.size())];
            transmitters.push_back(cur);
            cur = next;
            hops += 1;
        }
        if (stuck) {
            out.stuck += 1;
            continue;
        }
        out.hop_counts[i] = hops;
        for (int b : transmitters) out.relay_load[b] += 1;
    }

    double sum = 0.0;
    std::size_t done = 0;
    for (int h : out.hop_counts)
        if (h >= 0) {
            sum += h;
            ++done;
        }
    out.mean_hops = done ? sum / static_cast<double>(done) : 0.0;
    for (int l : out.relay_load) out.max_relay_load = std::max(out.max_relay_load, l);
    return out;
}

void write_route_csv(const RoutePlan& plan, std::ostream& out) {
    out << "conn_id,phase,hop_index,bs_index\n";
    char buf[80];
    for (std::size_t i = 0; i < plan.connections.size(); ++i) {
        const auto& conn = plan.connections[i];
        if (!conn.routable) continue;
        int phase = 1;
        for (const auto* path : {&conn.entry_path, &conn.horizontal_path,
                                 &conn.vertical_path, &conn.exit_path}) {
            for (std::size_t k = 0; k < path->size(); ++k) {
                std::snprintf(buf, sizeof buf, "%zu,%d,%zu,%d\n", i, phase, k,
                              (*path)[k]);
                out << buf;
            }
            ++phase;
        }
    }
}

void write_census_csv(const std::vector<CensusRow>& rows, std::ostream& out) {
    out << "seed,n,horizontal,vertical,failed_slabs\n";
    char buf[96];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof buf, "%llu,%ld,%zu,%zu,%zu\n",
                      static_cast<unsigned long long>(row.seed), row.n,
                      row.horizontal, row.vertical, row.failed_slabs);
        out << buf;
    }
}

}  // namespace backhaul::routing
