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

#ifndef SNAKES_DECODER_H
#define SNAKES_DECODER_H

#include <utility>
#include <vector>

#include "json.hpp"
#include "snakes/detection_graph.h"

namespace snakes {

struct MatchResult {
    /// Sorted indices of the graph edges used by the correction.
    std::vector<int> edges;
    /// (data index, round) of the data-qubit Z flips in the correction.
    std::vector<std::pair<int, int>> correction;
    bool logical_flip = false;
    int weight = 0;
};

struct GapResult {
    int gap = 0;
    int w_class0 = 0;
    int w_class1 = 0;
    /// Logical class picked by the decoder (ties broken on edge sequences).
    int chosen_class = 0;
};

/// Minimum-weight matching restricted to one logical class at a time.  A
/// class-1 solution must use an odd number of left-boundary edges, which
/// amounts to matching the syndrome together with a switched left-boundary
/// detector; the right boundary absorbs any number of chains.
class MatchingDecoder {
   public:
    explicit MatchingDecoder(const DetectionGraph &graph) : graph_(graph) {
    }

    /// Minimum weight of a correction in the given class.
    int class_weight(const std::vector<int> &syndrome, int logical_class) const;
    /// Sorted edges of a minimum-weight correction in the given class.
    std::vector<int> class_edges(const std::vector<int> &syndrome, int logical_class) const;

    MatchResult decode(const std::vector<int> &syndrome) const;
    GapResult gap(const std::vector<int> &syndrome) const;

   private:
    struct Solution {
        int weight;
        std::vector<int> terminals;
        std::vector<int> mate;
    };
    Solution solve(const std::vector<int> &syndrome, int logical_class) const;
    std::vector<int> edges_of(const Solution &solution) const;
    void check_syndrome(const std::vector<int> &syndrome) const;

    const DetectionGraph &graph_;
};

/// Throws std::invalid_argument for detector indices that are out of range,
/// unsorted or repeated.
MatchResult decode_mwpm(const DetectionGraph &graph, const std::vector<int> &syndrome);
GapResult complementary_gap(const DetectionGraph &graph, const std::vector<int> &syndrome);

nlohmann::json match_to_json(const MatchResult &result, const GapResult &gap);

}  // namespace snakes

#endif
