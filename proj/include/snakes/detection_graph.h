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

#ifndef SNAKES_DETECTION_GRAPH_H
#define SNAKES_DETECTION_GRAPH_H

#include <cstdint>
#include <memory>
#include <vector>

#include "json.hpp"
#include "snakes/syndrome_circuit.h"

namespace snakes {

/// An edge of the detection graph.  v is kLeftBoundary or kRightBoundary
/// for boundary edges.  Only left-boundary edges flip the logical X
/// observable, so the number of left-boundary edges in a correction fixes
/// its logical class.
struct GraphEdge {
    int u;
    int v;
    bool observable;
    /// Fault sites producing this edge; sites[0] is the representative.
    std::vector<int> sites;
};

/// Space-time graph of X-check detection events with unit edge weights.
/// Node indices 0..num_detectors()-1 are detectors; the left boundary is
/// treated as an ordinary node with index num_detectors() when computing
/// distances, the right boundary is an absorbing sink.
class DetectionGraph {
   public:
    static constexpr int kLeftBoundary = -1;
    static constexpr int kRightBoundary = -2;
    static constexpr int kUnreachable = 1 << 20;

    explicit DetectionGraph(std::shared_ptr<const SyndromeCircuit> circuit);

    const SyndromeCircuit &circuit() const {
        return *circuit_;
    }
    int num_detectors() const {
        return num_detectors_;
    }
    /// Index used for the left boundary in distance queries.
    int left_node() const {
        return num_detectors_;
    }
    const std::vector<GraphEdge> &edges() const {
        return edges_;
    }
    /// Shortest path length avoiding the right boundary; u, v may be left_node().
    int distance(int u, int v) const {
        return dist_[(size_t)u * (num_detectors_ + 1) + v];
    }
    /// Shortest path length to the right boundary.
    int distance_to_right(int u) const {
        return dist_right_[u];
    }
    /// Edge indices of the canonical shortest path from u to v.
    std::vector<int> path(int u, int v) const;
    std::vector<int> path_to_right(int u) const;

   private:
    void compute_distances();
    int other_end(const GraphEdge &e, int node) const;

    std::shared_ptr<const SyndromeCircuit> circuit_;
    int num_detectors_;
    std::vector<GraphEdge> edges_;
    std::vector<std::vector<int>> adjacency_;
    std::vector<int> dist_;
    std::vector<int> next_edge_;
    std::vector<int> dist_right_;
    std::vector<int> next_edge_right_;
};

/// Graph for a memory experiment with rounds detector layers: rounds - 1
/// noisy rounds followed by a noiseless readout layer.
DetectionGraph build_detection_graph(const CodeLayout &layout, int rounds);

nlohmann::json graph_to_json(const DetectionGraph &graph);

}  // namespace snakes

#endif
