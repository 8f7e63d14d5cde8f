// Copyright 2026 Snakes Contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SNAKES_LATTICEWORK_H
#define SNAKES_LATTICEWORK_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace snakes {

enum class Topology { kSquare, kHexagonal, kRectangular };

const char *topology_name(Topology t);
Topology parse_topology(const std::string &name);

struct LatticeEdge {
    int a;
    int b;
    /// Dots on the interaction filament, l2 - l1.
    int dots;
};

/// Junction where interaction filaments meet a tile loop.
struct Junction {
    int tile;
    std::vector<int> edges;
    /// Two loop directions plus the attached filaments.
    int degree() const {
        return 2 + (int)edges.size();
    }
};

/// Logical connectivity graph of the latticework.  Tiles are the loops
/// that hold a snake; tile (r, c) has index r * width + c.
class LatticeGraph {
public:
    LatticeGraph(Topology topology, int width, int height, int l1, int l2);

    Topology topology() const {
        return topology_;
    }
    int width() const {
        return width_;
    }
    int height() const {
        return height_;
    }
    int num_tiles() const {
        return width_ * height_;
    }
    int l1() const {
        return l1_;
    }
    int l2() const {
        return l2_;
    }
    int l_int() const {
        return l2_ - l1_;
    }
    int tile(int row, int col) const;
    const std::vector<LatticeEdge> &edges() const {
        return edges_;
    }
    const std::vector<Junction> &junctions() const {
        return junctions_;
    }
    /// Incident edge indices of a tile.
    const std::vector<int> &incident(int tile) const;
    int other_end(int edge, int tile) const;
    /// Edge index between two tiles, or -1.
    int find_edge(int a, int b) const;

    bool edge_active(int e) const;
    bool tile_active(int t) const;
    void deactivate_edge(int e);
    void deactivate_link(int a, int b);
    void deactivate_tile(int t);
    void reset_status();

    nlohmann::json to_json() const;

private:
    void add_edge(int a, int b);

    Topology topology_;
    int width_, height_, l1_, l2_;
    std::vector<LatticeEdge> edges_;
    std::vector<std::vector<int>> incident_;
    std::vector<Junction> junctions_;
    std::vector<char> edge_active_;
    std::vector<char> tile_active_;
};

LatticeGraph build_lattice(Topology topology, int width, int height, int l1, int l2);

struct Route {
    std::vector<int> tiles;
    std::vector<int> edges;
    /// Dot-to-dot shuttle steps: each hop crosses an interaction filament
    /// and half of the next tile loop.
    long long increments = 0;
    double duration = 0;

    int hops() const {
        return (int)edges.size();
    }
};

struct TimingModel {
    /// Dot pitch (m).
    double l_dd = 100e-9;
    /// Shuttle speed (m/s).
    double speed = 10.0;
    /// Initialisation, gate and measurement budget per cycle (s).
    double fixed_budget = 2.4e-6;

    void validate() const;
    double shuttle_time(long long increments) const;
};

enum class CycleMode { kStabiliseInPlace, kForward };

/// Shuttle increments per stabiliser cycle: 2d in place, d moving forward.
long long cycle_increments(int d, CycleMode mode);
double cycle_shuttle_time(int d, CycleMode mode, const TimingModel &timing);
double cycle_time(int d, CycleMode mode, const TimingModel &timing);

long long hop_increments(const LatticeGraph &graph);

/// Breadth-first shortest route over active links and tiles; nullopt when
/// the destination cannot be reached.
std::optional<Route> route_snake(const LatticeGraph &graph, int from, int to,
                                 const TimingModel &timing = TimingModel{});

enum class PercolationModel { kBond, kSite };

const char *percolation_model_name(PercolationModel m);
PercolationModel parse_percolation_model(const std::string &name);

/// Per-trial occupied fraction at which a top-to-bottom active cluster first
/// appears (Newman-Ziff ordering, one permutation per trial).
std::vector<double> spanning_fractions(PercolationModel model, Topology topology, int size, int trials,
                                       uint64_t seed);

/// Fraction of trials that still span with the given fraction of links
/// (bond) or tiles (site) deactivated.
double percolation_estimate(PercolationModel model, Topology topology, double deactivation_fraction, int size,
                            int trials, uint64_t seed);

struct PercolationThreshold {
    /// Occupied (active) fraction at the median spanning point.
    double occupied = 0;
    /// 1 - occupied: the tolerable deactivated fraction.
    double deactivated = 0;
    /// Central 95% spread of the per-trial spanning points.
    double lo = 0;
    double hi = 0;
};

PercolationThreshold percolation_threshold(PercolationModel model, Topology topology, int size, int trials,
                                           uint64_t seed);

struct PercolationRow {
    PercolationModel model;
    Topology topology;
    int size;
    double deactivation_fraction;
    double connectivity;
    int trials;
};

std::vector<PercolationRow> percolation_curve(PercolationModel model, Topology topology,
                                              const std::vector<double> &fractions, int size, int trials,
                                              uint64_t seed);

void write_percolation_csv(const std::string &path, const std::vector<PercolationRow> &rows);

/// Scenario: {"topology", "width", "height", "l1", "l2",
/// "deactivated_links": [[a, b], ...], "deactivated_tiles": [t, ...],
/// "queries": [[from, to], ...], optional "timing": {...}}.
nlohmann::json run_scenario(const nlohmann::json &scenario);

}  // namespace snakes

#endif
