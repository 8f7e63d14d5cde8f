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

#include "snakes/latticework.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <queue>
#include <random>
#include <stdexcept>

namespace snakes {

namespace {

struct UnionFind {
    explicit UnionFind(int n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) {
        parent[find(a)] = find(b);
    }
    std::vector<int> parent;
};

void check_percolation_args(int size, int trials) {
    if (size < 32) {
        throw std::invalid_argument("Percolation lattices must be at least 32 tiles across.");
    }
    if (trials < 1000) {
        throw std::invalid_argument("Percolation estimates need at least 1000 trials.");
    }
}

}  // namespace

const char *topology_name(Topology t) {
    switch (t) {
        case Topology::kSquare:
            return "square";
        case Topology::kHexagonal:
            return "hexagonal";
        case Topology::kRectangular:
            return "rectangular";
    }
    return "?";
}

Topology parse_topology(const std::string &name) {
    if (name == "square") return Topology::kSquare;
    if (name == "hexagonal") return Topology::kHexagonal;
    if (name == "rectangular") return Topology::kRectangular;
    throw std::invalid_argument("Unknown topology '" + name + "'.");
}

LatticeGraph::LatticeGraph(Topology topology, int width, int height, int l1, int l2)
    : topology_(topology), width_(width), height_(height), l1_(l1), l2_(l2) {
    if (width < 2 || height < 2) {
        throw std::invalid_argument("Lattice dimensions must be at least 2.");
    }
    if (l1 < 4 || l2 <= l1) {
        throw std::invalid_argument("Loop sizes need l2 > l1 >= 4.");
    }
    incident_.resize(num_tiles());
    for (int r = 0; r < height; r++) {
        for (int c = 0; c < width; c++) {
            if (c + 1 < width) {
                add_edge(tile(r, c), tile(r, c + 1));
            }
            // Brick-wall honeycomb: vertical links alternate.
            bool down = topology != Topology::kHexagonal || (r + c) % 2 == 0;
            if (r + 1 < height && down) {
                add_edge(tile(r, c), tile(r + 1, c));
            }
        }
    }
    for (int t = 0; t < num_tiles(); t++) {
        if (topology == Topology::kRectangular) {
            // Four-way junctions: the right and down filaments share one
            // corner of the loop, left and up share the opposite corner.
            Junction fwd{t, {}}, back{t, {}};
            for (int e : incident_[t]) {
                (other_end(e, t) > t ? fwd : back).edges.push_back(e);
            }
            for (auto *j : {&fwd, &back}) {
                if (!j->edges.empty()) {
                    junctions_.push_back(*j);
                }
            }
        } else {
            for (int e : incident_[t]) {
                junctions_.push_back({t, {e}});
            }
        }
    }
    reset_status();
}

void LatticeGraph::add_edge(int a, int b) {
    incident_[a].push_back((int)edges_.size());
    incident_[b].push_back((int)edges_.size());
    edges_.push_back({a, b, l2_ - l1_});
}

int LatticeGraph::tile(int row, int col) const {
    if (row < 0 || row >= height_ || col < 0 || col >= width_) {
        throw std::invalid_argument("Tile coordinates out of range.");
    }
    return row * width_ + col;
}

const std::vector<int> &LatticeGraph::incident(int t) const {
    if (t < 0 || t >= num_tiles()) {
        throw std::invalid_argument("Tile index out of range.");
    }
    return incident_[t];
}

int LatticeGraph::other_end(int e, int t) const {
    const auto &edge = edges_.at(e);
    return edge.a == t ? edge.b : edge.a;
}

int LatticeGraph::find_edge(int a, int b) const {
    for (int e : incident(a)) {
        if (other_end(e, a) == b) {
            return e;
        }
    }
    return -1;
}

bool LatticeGraph::edge_active(int e) const {
    return edge_active_.at(e);
}

bool LatticeGraph::tile_active(int t) const {
    return tile_active_.at(t);
}

void LatticeGraph::deactivate_edge(int e) {
    edge_active_.at(e) = 0;
}

void LatticeGraph::deactivate_link(int a, int b) {
    int e = find_edge(a, b);
    if (e < 0) {
        throw std::invalid_argument("Tiles " + std::to_string(a) + " and " + std::to_string(b) +
                                    " are not linked.");
    }
    deactivate_edge(e);
}

void LatticeGraph::deactivate_tile(int t) {
    tile_active_.at(t) = 0;
}

void LatticeGraph::reset_status() {
    edge_active_.assign(edges_.size(), 1);
    tile_active_.assign(num_tiles(), 1);
}

nlohmann::json LatticeGraph::to_json() const {
    nlohmann::json j;
    j["topology"] = topology_name(topology_);
    j["width"] = width_;
    j["height"] = height_;
    j["l1"] = l1_;
    j["l2"] = l2_;
    j["l_int"] = l_int();
    j["num_tiles"] = num_tiles();
    j["num_edges"] = edges_.size();
    j["num_junctions"] = junctions_.size();
    auto off_links = nlohmann::json::array();
    for (size_t e = 0; e < edges_.size(); e++) {
        if (!edge_active_[e]) {
            off_links.push_back({edges_[e].a, edges_[e].b});
        }
    }
    auto off_tiles = nlohmann::json::array();
    for (int t = 0; t < num_tiles(); t++) {
        if (!tile_active_[t]) {
            off_tiles.push_back(t);
        }
    }
    j["deactivated_links"] = off_links;
    j["deactivated_tiles"] = off_tiles;
    return j;
}

LatticeGraph build_lattice(Topology topology, int width, int height, int l1, int l2) {
    return LatticeGraph(topology, width, height, l1, l2);
}

void TimingModel::validate() const {
    if (!(l_dd > 0 && speed > 0)) {
        throw std::invalid_argument("Dot pitch and shuttle speed must be positive.");
    }
    if (!(fixed_budget >= 0)) {
        throw std::invalid_argument("Fixed cycle budget must be non-negative.");
    }
}

double TimingModel::shuttle_time(long long increments) const {
    validate();
    return (double)increments * l_dd / speed;
}

long long cycle_increments(int d, CycleMode mode) {
    if (d < 1) {
        throw std::invalid_argument("Code distance must be positive.");
    }
    return mode == CycleMode::kStabiliseInPlace ? 2LL * d : d;
}

double cycle_shuttle_time(int d, CycleMode mode, const TimingModel &timing) {
    return timing.shuttle_time(cycle_increments(d, mode));
}

double cycle_time(int d, CycleMode mode, const TimingModel &timing) {
    return cycle_shuttle_time(d, mode, timing) + timing.fixed_budget;
}

long long hop_increments(const LatticeGraph &graph) {
    return graph.l_int() + graph.l1() / 2;
}

std::optional<Route> route_snake(const LatticeGraph &graph, int from, int to, const TimingModel &timing) {
    int n = graph.num_tiles();
    if (from < 0 || from >= n || to < 0 || to >= n) {
        throw std::invalid_argument("Route endpoints must be tiles of the lattice.");
    }
    if (!graph.tile_active(from) || !graph.tile_active(to)) {
        return std::nullopt;
    }
    std::vector<int> via(n, -2);
    via[from] = -1;
    std::queue<int> frontier;
    frontier.push(from);
    while (!frontier.empty() && via[to] == -2) {
        int t = frontier.front();
        frontier.pop();
        for (int e : graph.incident(t)) {
            int u = graph.other_end(e, t);
            if (via[u] != -2 || !graph.edge_active(e) || !graph.tile_active(u)) {
                continue;
            }
            via[u] = e;
            frontier.push(u);
        }
    }
    if (via[to] == -2) {
        return std::nullopt;
    }
    Route route;
    for (int t = to; t != from; t = graph.other_end(via[t], t)) {
        route.tiles.push_back(t);
        route.edges.push_back(via[t]);
    }
    route.tiles.push_back(from);
    std::reverse(route.tiles.begin(), route.tiles.end());
    std::reverse(route.edges.begin(), route.edges.end());
    route.increments = route.hops() * hop_increments(graph);
    route.duration = timing.shuttle_time(route.increments);
    return route;
}

const char *percolation_model_name(PercolationModel m) {
    return m == PercolationModel::kBond ? "bond" : "site";
}

PercolationModel parse_percolation_model(const std::string &name) {
    if (name == "bond") return PercolationModel::kBond;
    if (name == "site") return PercolationModel::kSite;
    throw std::invalid_argument("Unknown percolation model '" + name + "'.");
}

std::vector<double> spanning_fractions(PercolationModel model, Topology topology, int size, int trials,
                                       uint64_t seed) {
    check_percolation_args(size, trials);
    LatticeGraph graph(topology, size, size, 4, 5);
    int n = graph.num_tiles();
    int top = n, bottom = n + 1;
    int items = model == PercolationModel::kBond ? (int)graph.edges().size() : n;
    std::vector<int> order(items);
    std::vector<char> occupied(n);
    std::vector<double> out(trials);
    for (int trial = 0; trial < trials; trial++) {
        std::seed_seq seq{(uint32_t)seed, (uint32_t)(seed >> 32), (uint32_t)trial};
        std::mt19937_64 rng(seq);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        UnionFind uf(n + 2);
        auto attach_boundary = [&](int t) {
            if (t < size) uf.unite(t, top);
            if (t >= n - size) uf.unite(t, bottom);
        };
        if (model == PercolationModel::kBond) {
            for (int t = 0; t < n; t++) {
                attach_boundary(t);
            }
        } else {
            std::fill(occupied.begin(), occupied.end(), 0);
        }
        int k = 0;
        while (uf.find(top) != uf.find(bottom)) {
            int item = order[k++];
            if (model == PercolationModel::kBond) {
                uf.unite(graph.edges()[item].a, graph.edges()[item].b);
            } else {
                occupied[item] = 1;
                attach_boundary(item);
                for (int e : graph.incident(item)) {
                    int u = graph.other_end(e, item);
                    if (occupied[u]) {
                        uf.unite(item, u);
                    }
                }
            }
        }
        out[trial] = (double)k / items;
    }
    return out;
}

double percolation_estimate(PercolationModel model, Topology topology, double deactivation_fraction, int size,
                            int trials, uint64_t seed) {
    if (!(deactivation_fraction >= 0 && deactivation_fraction <= 1)) {
        throw std::invalid_argument("Deactivation fraction must lie in [0, 1].");
    }
    auto span = spanning_fractions(model, topology, size, trials, seed);
    LatticeGraph graph(topology, size, size, 4, 5);
    int items = model == PercolationModel::kBond ? (int)graph.edges().size() : graph.num_tiles();
    long long active = std::llround((1 - deactivation_fraction) * items);
    int hits = 0;
    for (double f : span) {
        if (std::llround(f * items) <= active) {
            hits++;
        }
    }
    return (double)hits / trials;
}

PercolationThreshold percolation_threshold(PercolationModel model, Topology topology, int size, int trials,
                                           uint64_t seed) {
    auto span = spanning_fractions(model, topology, size, trials, seed);
    std::sort(span.begin(), span.end());
    auto quantile = [&](double q) {
        double pos = q * (span.size() - 1);
        size_t i = (size_t)pos;
        double frac = pos - i;
        return i + 1 < span.size() ? span[i] * (1 - frac) + span[i + 1] * frac : span[i];
    };
    PercolationThreshold out;
    out.occupied = quantile(0.5);
    out.deactivated = 1 - out.occupied;
    out.lo = quantile(0.025);
    out.hi = quantile(0.975);
    return out;
}

std::vector<PercolationRow> percolation_curve(PercolationModel model, Topology topology,
                                              const std::vector<double> &fractions, int size, int trials,
                                              uint64_t seed) {
    std::vector<PercolationRow> rows;
    for (double f : fractions) {
        rows.push_back({model, topology, size, f, percolation_estimate(model, topology, f, size, trials, seed),
                        trials});
    }
    return rows;
}

void write_percolation_csv(const std::string &path, const std::vector<PercolationRow> &rows) {
    std::ofstream f(path);
    if (!f) {
        throw std::runtime_error("Cannot open " + path + " for writing.");
    }
    f.precision(12);
    f << "model,topology,size,deactivation_fraction,connectivity,trials\n";
    for (const auto &r : rows) {
        f << percolation_model_name(r.model) << ',' << topology_name(r.topology) << ',' << r.size << ','
          << r.deactivation_fraction << ',' << r.connectivity << ',' << r.trials << '\n';
    }
}

nlohmann::json run_scenario(const nlohmann::json &scenario) {
    LatticeGraph graph(parse_topology(scenario.value("topology", std::string("square"))),
                       scenario.at("width").get<int>(), scenario.at("height").get<int>(),
                       scenario.value("l1", 8), scenario.value("l2", 20));
    TimingModel timing;
    if (scenario.contains("timing")) {
        const auto &t = scenario["timing"];
        timing.l_dd = t.value("l_dd", timing.l_dd);
        timing.speed = t.value("speed", timing.speed);
        timing.fixed_budget = t.value("fixed_budget", timing.fixed_budget);
    }
    timing.validate();
    for (const auto &link : scenario.value("deactivated_links", nlohmann::json::array())) {
        graph.deactivate_link(link.at(0).get<int>(), link.at(1).get<int>());
    }
    for (const auto &t : scenario.value("deactivated_tiles", nlohmann::json::array())) {
        graph.deactivate_tile(t.get<int>());
    }
    nlohmann::json out;
    out["graph"] = graph.to_json();
    out["routes"] = nlohmann::json::array();
    for (const auto &q : scenario.value("queries", nlohmann::json::array())) {
        int from = q.at(0).get<int>(), to = q.at(1).get<int>();
        nlohmann::json r{{"from", from}, {"to", to}};
        auto route = route_snake(graph, from, to, timing);
        r["reachable"] = route.has_value();
        if (route) {
            r["tiles"] = route->tiles;
            r["hops"] = route->hops();
            r["increments"] = route->increments;
            r["duration"] = route->duration;
        }
        out["routes"].push_back(r);
    }
    return out;
}

}  // namespace snakes
