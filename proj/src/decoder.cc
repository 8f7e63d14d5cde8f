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

#include "snakes/decoder.h"

#include <algorithm>
#include <stdexcept>

#include "snakes/matching.h"

namespace snakes {

void MatchingDecoder::check_syndrome(const std::vector<int> &syndrome) const {
    for (size_t k = 0; k < syndrome.size(); k++) {
        if (syndrome[k] < 0 || syndrome[k] >= graph_.num_detectors()) {
            throw std::invalid_argument("Detector index " + std::to_string(syndrome[k]) + " is out of range.");
        }
        if (k > 0 && syndrome[k] <= syndrome[k - 1]) {
            throw std::invalid_argument("Syndrome must be sorted without repeats.");
        }
    }
}

MatchingDecoder::Solution MatchingDecoder::solve(const std::vector<int> &syndrome, int logical_class) const {
    Solution sol;
    sol.terminals = syndrome;
    if (logical_class == 1) {
        sol.terminals.push_back(graph_.left_node());
    }
    int k = (int)sol.terminals.size();
    const auto &t = sol.terminals;
    constexpr int inf = DetectionGraph::kUnreachable;
    if (k == 0) {
        sol.weight = 0;
        return sol;
    }
    if (k == 1) {
        sol.weight = graph_.distance_to_right(t[0]);
        sol.mate = {-1};
        return sol;
    }
    if (k == 2) {
        int direct = graph_.distance(t[0], t[1]);
        int split = graph_.distance_to_right(t[0]) + graph_.distance_to_right(t[1]);
        if (direct <= split) {
            sol.weight = direct;
            sol.mate = {1, 0};
        } else {
            sol.weight = split;
            sol.mate = {-1, -1};
        }
        return sol;
    }

    // Terminal i pairs with terminal j or with its own boundary twin k + i.
    int n = 2 * k;
    std::vector<int64_t> cost((size_t)n * n, 0);
    int64_t forbid = 4 * (int64_t)inf;
    for (int i = 0; i < k; i++) {
        for (int j = 0; j < k; j++) {
            int64_t c = i == j ? 0 : graph_.distance(t[i], t[j]);
            cost[(size_t)i * n + j] = c;
            cost[(size_t)i * n + k + j] = i == j ? graph_.distance_to_right(t[i]) : forbid;
            cost[(size_t)(k + j) * n + i] = cost[(size_t)i * n + k + j];
        }
    }
    auto mate = min_cost_perfect_matching(n, cost);
    sol.weight = 0;
    sol.mate.assign(k, -1);
    for (int i = 0; i < k; i++) {
        if (mate[i] >= k) {
            sol.weight += graph_.distance_to_right(t[i]);
        } else {
            sol.mate[i] = mate[i];
            if (mate[i] > i) {
                sol.weight += graph_.distance(t[i], t[mate[i]]);
            }
        }
    }
    if (sol.weight >= inf) {
        sol.weight = inf;
    }
    return sol;
}

std::vector<int> MatchingDecoder::edges_of(const Solution &sol) const {
    std::vector<int> used;
    const auto &t = sol.terminals;
    for (size_t i = 0; i < t.size(); i++) {
        std::vector<int> p;
        if (sol.mate[i] < 0) {
            p = graph_.path_to_right(t[i]);
        } else if (sol.mate[i] > (int)i) {
            p = graph_.path(t[i], t[sol.mate[i]]);
        }
        used.insert(used.end(), p.begin(), p.end());
    }
    std::sort(used.begin(), used.end());
    std::vector<int> out;
    for (size_t i = 0; i < used.size();) {
        size_t j = i;
        while (j < used.size() && used[j] == used[i]) {
            j++;
        }
        if ((j - i) % 2 == 1) {
            out.push_back(used[i]);
        }
        i = j;
    }
    return out;
}

int MatchingDecoder::class_weight(const std::vector<int> &syndrome, int logical_class) const {
    check_syndrome(syndrome);
    return solve(syndrome, logical_class).weight;
}

std::vector<int> MatchingDecoder::class_edges(const std::vector<int> &syndrome, int logical_class) const {
    check_syndrome(syndrome);
    auto sol = solve(syndrome, logical_class);
    if (sol.weight >= DetectionGraph::kUnreachable) {
        throw std::invalid_argument("Syndrome admits no correction in the requested class.");
    }
    return edges_of(sol);
}

GapResult MatchingDecoder::gap(const std::vector<int> &syndrome) const {
    check_syndrome(syndrome);
    auto s0 = solve(syndrome, 0);
    auto s1 = solve(syndrome, 1);
    constexpr int inf = DetectionGraph::kUnreachable;
    if (s0.weight >= inf && s1.weight >= inf) {
        throw std::invalid_argument("Syndrome cannot be explained by the detection graph.");
    }
    GapResult out;
    out.w_class0 = s0.weight;
    out.w_class1 = s1.weight;
    out.gap = std::abs(s0.weight - s1.weight);
    if (s0.weight != s1.weight) {
        out.chosen_class = s1.weight < s0.weight ? 1 : 0;
    } else {
        out.chosen_class = edges_of(s1) < edges_of(s0) ? 1 : 0;
    }
    return out;
}

MatchResult MatchingDecoder::decode(const std::vector<int> &syndrome) const {
    GapResult g = gap(syndrome);
    MatchResult out;
    out.logical_flip = g.chosen_class == 1;
    out.weight = g.chosen_class == 1 ? g.w_class1 : g.w_class0;
    out.edges = edges_of(solve(syndrome, g.chosen_class));
    const auto &sites = graph_.circuit().sites();
    for (int k : out.edges) {
        const auto &site = sites[graph_.edges()[k].sites[0]];
        if (is_data_site(site.kind)) {
            out.correction.emplace_back(site.qubit, site.round);
        }
    }
    std::sort(out.correction.begin(), out.correction.end());
    return out;
}

MatchResult decode_mwpm(const DetectionGraph &graph, const std::vector<int> &syndrome) {
    return MatchingDecoder(graph).decode(syndrome);
}

GapResult complementary_gap(const DetectionGraph &graph, const std::vector<int> &syndrome) {
    return MatchingDecoder(graph).gap(syndrome);
}

nlohmann::json match_to_json(const MatchResult &result, const GapResult &gap) {
    return {{"edges", result.edges},
            {"correction", result.correction},
            {"logical_flip", result.logical_flip},
            {"weight", result.weight},
            {"gap", gap.gap},
            {"w_class0", gap.w_class0},
            {"w_class1", gap.w_class1}};
}

}  // namespace snakes
