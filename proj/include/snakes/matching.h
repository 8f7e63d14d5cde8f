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

#ifndef SNAKES_MATCHING_H
#define SNAKES_MATCHING_H

#include <cstdint>
#include <vector>

namespace snakes {

struct WeightedEdge {
    int u;
    int v;
    int64_t weight;
};

/// Maximum-weight matching by Edmonds' blossom algorithm with dual
/// variables (O(n^3)).  With max_cardinality set, the result has maximum
/// weight among the maximum-cardinality matchings.  Returns mate[v] (-1
/// when unmatched).
std::vector<int> max_weight_matching(int num_nodes, const std::vector<WeightedEdge> &edges, bool max_cardinality);

/// Minimum-cost perfect matching of a complete graph given by a symmetric
/// row-major n x n cost matrix; n must be even.  Returns mate[v].
std::vector<int> min_cost_perfect_matching(int n, const std::vector<int64_t> &cost);

}  // namespace snakes

#endif
