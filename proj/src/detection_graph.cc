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

#include "snakes/detection_graph.h"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

namespace snakes {

DetectionGraph::DetectionGraph(std::shared_ptr<const SyndromeCircuit> circuit)
    : circuit_(std::move(circuit)), num_detectors_(circuit_->num_detectors()) {
    std::map<std::pair<int, int>, int> index;
    const auto &sites = circuit_->sites();
    for (int s = 0; s < (int)sites.size(); s++) {
        const auto &sig = circuit_->signature(s);
        std::pair<int, int> key;
        if (sig.detectors.size() > 2) {
            throw std::logic_error("Fault site flips more than two detectors; the schedule is not graph-like.");
        }
        if (sig.detectors.size() == 2) {
            if (sig.observable) {
                throw std::logic_error("A bulk edge flips the logical observable.");
            }
            key = {sig.detectors[0], sig.detectors[1]};
        } else if (sig.detectors.size() == 1) {
            key = {sig.detectors[0], sig.observable ? kLeftBoundary : kRightBoundary};
        } else if (sig.observable) {
            key = {kLeftBoundary, kRightBoundary};
        } else {
            continue;
        }
        auto it = index.find(key);
        if (it == index.end()) {
            index[key] = (int)edges_.size();
            edges_.push_back({key.first, key.second, sig.observable, {s}});
        } else {
            edges_[it->second].sites.push_back(s);
        }
    }
    // Prefer a data-qubit fault as the representative of each edge.
    for (auto &e : edges_) {
        auto it = std::find_if(e.sites.begin(), e.sites.end(), [&](int s) { return is_data_site(sites[s].kind); });
        if (it != e.sites.end()) {
            std::iter_swap(e.sites.begin(), it);
        }
    }
    compute_distances();
}

int DetectionGraph::other_end(const GraphEdge &e, int node) const {
    auto to_node = [&](int v) { return v == kLeftBoundary ? num_detectors_ : v; };
    int a = to_node(e.u);
    int b = to_node(e.v);
    return a == node ? b : a;
}

void DetectionGraph::compute_distances() {
    int n = num_detectors_ + 1;
    adjacency_.assign(n, {});
    for (int k = 0; k < (int)edges_.size(); k++) {
        const auto &e = edges_[k];
        if (e.v == kRightBoundary) {
            continue;
        }
        int a = e.u == kLeftBoundary ? num_detectors_ : e.u;
        int b = e.v == kLeftBoundary ? num_detectors_ : e.v;
        adjacency_[a].push_back(k);
        adjacency_[b].push_back(k);
    }

    dist_.assign((size_t)n * n, kUnreachable);
    next_edge_.assign((size_t)n * n, -1);
    std::vector<int> queue;
    for (int src = 0; src < n; src++) {
        int *dist = &dist_[(size_t)src * n];
        dist[src] = 0;
        queue.assign(1, src);
        for (size_t h = 0; h < queue.size(); h++) {
            int x = queue[h];
            for (int k : adjacency_[x]) {
                int y = other_end(edges_[k], x);
                if (dist[y] == kUnreachable) {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
    }
    // next_edge_[u * n + v]: lowest-index edge leaving u on a shortest path to v.
    for (int u = 0; u < n; u++) {
        for (int v = 0; v < n; v++) {
            if (u == v || distance(u, v) >= kUnreachable) {
                continue;
            }
            int best = -1;
            for (int k : adjacency_[u]) {
                int w = other_end(edges_[k], u);
                if (distance(w, v) == distance(u, v) - 1 && (best == -1 || k < best)) {
                    best = k;
                }
            }
            next_edge_[(size_t)u * n + v] = best;
        }
    }

    dist_right_.assign(n, kUnreachable);
    next_edge_right_.assign(n, -1);
    for (int k = 0; k < (int)edges_.size(); k++) {
        const auto &e = edges_[k];
        if (e.v != kRightBoundary) {
            continue;
        }
        int a = e.u == kLeftBoundary ? num_detectors_ : e.u;
        for (int x = 0; x < n; x++) {
            int via = distance(x, a) + 1;
            if (via < dist_right_[x]) {
                dist_right_[x] = via;
            }
        }
    }
    for (int x = 0; x < n; x++) {
        int best = -1;
        for (int k = 0; k < (int)edges_.size(); k++) {
            const auto &e = edges_[k];
            if (e.v == kRightBoundary) {
                int a = e.u == kLeftBoundary ? num_detectors_ : e.u;
                if (a == x && dist_right_[x] == 1) {
                    best = k;
                    break;
                }
            }
        }
        if (best == -1 && dist_right_[x] < kUnreachable) {
            for (int k : adjacency_[x]) {
                int w = other_end(edges_[k], x);
                if (dist_right_[w] == dist_right_[x] - 1 && (best == -1 || k < best)) {
                    best = k;
                }
            }
        }
        next_edge_right_[x] = best;
    }
}

std::vector<int> DetectionGraph::path(int u, int v) const {
    int n = num_detectors_ + 1;
    if (distance(u, v) >= kUnreachable) {
        throw std::invalid_argument("No path between the requested nodes.");
    }
    std::vector<int> out;
    while (u != v) {
        int k = next_edge_[(size_t)u * n + v];
        out.push_back(k);
        u = other_end(edges_[k], u);
    }
    return out;
}

std::vector<int> DetectionGraph::path_to_right(int u) const {
    if (dist_right_[u] >= kUnreachable) {
        throw std::invalid_argument("Node cannot reach the right boundary.");
    }
    std::vector<int> out;
    while (true) {
        int k = next_edge_right_[u];
        out.push_back(k);
        if (edges_[k].v == kRightBoundary) {
            return out;
        }
        u = other_end(edges_[k], u);
    }
}

DetectionGraph build_detection_graph(const CodeLayout &layout, int rounds) {
    return DetectionGraph(std::make_shared<const SyndromeCircuit>(layout, rounds));
}

nlohmann::json graph_to_json(const DetectionGraph &graph) {
    nlohmann::json edges = nlohmann::json::array();
    for (const auto &e : graph.edges()) {
        auto name = [](int v) -> nlohmann::json {
            if (v == DetectionGraph::kLeftBoundary) {
                return "L";
            }
            if (v == DetectionGraph::kRightBoundary) {
                return "R";
            }
            return v;
        };
        edges.push_back({{"u", name(e.u)}, {"v", name(e.v)}, {"observable", e.observable}, {"faults", e.sites.size()}});
    }
    const auto &c = graph.circuit();
    return {{"distance", c.layout().distance},
            {"rounds", c.rounds()},
            {"num_checks", c.num_checks()},
            {"num_detectors", graph.num_detectors()},
            {"edges", edges}};
}

}  // namespace snakes
