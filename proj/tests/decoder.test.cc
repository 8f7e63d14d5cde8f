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

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <random>

#include "gtest/gtest.h"
#include "snakes/decoder.h"
#include "snakes/noise.h"

using namespace snakes;

namespace {

// Independent class-weight oracle.  Nodes 0..n-1 are detectors, n is the
// left boundary and n + 1 the right one.  Shortest paths never pass
// through a boundary node; each terminal is paired with another terminal,
// the left boundary or the right boundary, and the number of left
// endpoints fixes the logical class.
class ClassOracle {
   public:
    explicit ClassOracle(const DetectionGraph &graph) : n_(graph.num_detectors()) {
        adj_.assign(n_ + 2, {});
        for (const auto &e : graph.edges()) {
            int u = node(e.u);
            int v = node(e.v);
            adj_[u].push_back(v);
            adj_[v].push_back(u);
        }
        dist_.assign((size_t)(n_ + 2) * (n_ + 2), kInf);
        for (int s = 0; s < n_ + 2; s++) {
            bfs(s);
        }
    }

    int weight(const std::vector<int> &terminals, int cls) const {
        int k = (int)terminals.size();
        // best[mask][parity]
        std::vector<std::array<int, 2>> best(1 << k, {kInf, kInf});
        best[0][0] = 0;
        int left = n_;
        int right = n_ + 1;
        for (int mask = 0; mask < (1 << k); mask++) {
            for (int par = 0; par < 2; par++) {
                int cur = best[mask][par];
                if (cur >= kInf) {
                    continue;
                }
                int i = 0;
                while (i < k && (mask >> i & 1)) {
                    i++;
                }
                if (i == k) {
                    continue;
                }
                int ti = terminals[i];
                auto relax = [&](int m, int p, int w) {
                    if (w < kInf) {
                        best[m][p] = std::min(best[m][p], cur + w);
                    }
                };
                relax(mask | 1 << i, par ^ 1, d(ti, left));
                relax(mask | 1 << i, par, d(ti, right));
                for (int j = i + 1; j < k; j++) {
                    if (!(mask >> j & 1)) {
                        relax(mask | 1 << i | 1 << j, par, d(ti, terminals[j]));
                    }
                }
            }
        }
        int full = (1 << k) - 1;
        int out = best[full][cls];
        int lr = d(left, right);
        if (lr < kInf && best[full][cls ^ 1] < kInf) {
            out = std::min(out, best[full][cls ^ 1] + lr);
        }
        return out;
    }

    static constexpr int kInf = std::numeric_limits<int>::max() / 4;

   private:
    int node(int v) const {
        if (v == DetectionGraph::kLeftBoundary) {
            return n_;
        }
        if (v == DetectionGraph::kRightBoundary) {
            return n_ + 1;
        }
        return v;
    }
    int d(int u, int v) const {
        return dist_[(size_t)u * (n_ + 2) + v];
    }
    void bfs(int s) {
        int *row = &dist_[(size_t)s * (n_ + 2)];
        row[s] = 0;
        std::deque<int> queue{s};
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            if (u >= n_ && u != s) {
                continue;
            }
            for (int v : adj_[u]) {
                if (row[v] == kInf) {
                    row[v] = row[u] + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    int n_;
    std::vector<std::vector<int>> adj_;
    std::vector<int> dist_;
};

std::vector<int> boundary_of(const DetectionGraph &graph, const std::vector<int> &edges, int &left_parity) {
    std::vector<uint8_t> deg(graph.num_detectors(), 0);
    left_parity = 0;
    for (int e : edges) {
        for (int v : {graph.edges()[e].u, graph.edges()[e].v}) {
            if (v >= 0) {
                deg[v] ^= 1;
            } else if (v == DetectionGraph::kLeftBoundary) {
                left_parity ^= 1;
            }
        }
    }
    std::vector<int> out;
    for (int v = 0; v < graph.num_detectors(); v++) {
        if (deg[v]) {
            out.push_back(v);
        }
    }
    return out;
}

void check_against_oracle(int d, int rounds, double p, double omega, int shots, uint64_t seed) {
    auto circuit = std::make_shared<const SyndromeCircuit>(build_rotated_surface_code(d), rounds);
    DetectionGraph graph(circuit);
    ClassOracle oracle(graph);
    MatchingDecoder decoder(graph);
    NoiseSampler sampler(*circuit, p);
    SyndromeBuffer buffer(*circuit);
    std::mt19937_64 rng(seed);
    double q = std::pow(std::sin(omega / 2), 2);
    int checked = 0;
    for (int k = 0; k < shots; k++) {
        sampler.sample(rng, [&](int s) { buffer.add(s); });
        sampler.sample_defect(rng, q, (rounds - 2) / 2 < 0 ? 0 : (rounds - 2) / 2, [&](int s) { buffer.add(s); });
        Syndrome syn;
        buffer.take(syn);
        if (syn.detectors.size() > 10) {
            continue;
        }
        checked++;
        int w0 = oracle.weight(syn.detectors, 0);
        int w1 = oracle.weight(syn.detectors, 1);
        ASSERT_EQ(decoder.class_weight(syn.detectors, 0), w0);
        ASSERT_EQ(decoder.class_weight(syn.detectors, 1), w1);
        auto g = decoder.gap(syn.detectors);
        EXPECT_EQ(g.gap, std::abs(w0 - w1));
        EXPECT_EQ(g.w_class0, w0);
        EXPECT_EQ(g.w_class1, w1);
        if (w0 != w1) {
            EXPECT_EQ(g.chosen_class, w0 < w1 ? 0 : 1);
        }
        auto m = decoder.decode(syn.detectors);
        EXPECT_EQ(m.weight, std::min(w0, w1));
        EXPECT_EQ(m.logical_flip, g.chosen_class == 1);
        EXPECT_EQ((int)m.edges.size(), m.weight);
        int parity = 0;
        EXPECT_EQ(boundary_of(graph, m.edges, parity), syn.detectors);
        EXPECT_EQ(parity, g.chosen_class);
        for (int cls : {0, 1}) {
            auto edges = decoder.class_edges(syn.detectors, cls);
            EXPECT_EQ((int)edges.size(), cls ? w1 : w0);
            EXPECT_EQ(boundary_of(graph, edges, parity), syn.detectors);
            EXPECT_EQ(parity, cls);
        }
    }
    EXPECT_GT(checked, shots / 2);
}

}  // namespace

TEST(detection_graph, code_capacity_d3) {
    auto g = build_detection_graph(build_rotated_surface_code(3), 1);
    EXPECT_EQ(g.num_detectors(), 4);
    for (const auto &e : g.edges()) {
        EXPECT_GE(e.u, 0);
        EXPECT_FALSE(e.sites.empty());
    }
    // Z on the logical column is the only way to reach the left boundary.
    EXPECT_EQ(g.distance(g.left_node(), g.left_node()), 0);
    for (int v = 0; v < 4; v++) {
        EXPECT_LE(g.distance(v, g.left_node()), 2);
        EXPECT_LE(g.distance_to_right(v), 2);
    }
}

TEST(detection_graph, bulk_edges_do_not_flip_observable) {
    for (int d : {3, 5, 7}) {
        auto g = build_detection_graph(build_rotated_surface_code(d), d + 1);
        for (const auto &e : g.edges()) {
            if (e.v >= 0) {
                EXPECT_FALSE(e.observable);
            } else {
                EXPECT_EQ(e.observable, e.v == DetectionGraph::kLeftBoundary);
            }
        }
    }
}

TEST(detection_graph, paths_have_shortest_length) {
    auto g = build_detection_graph(build_rotated_surface_code(5), 4);
    int n = g.num_detectors();
    for (int u = 0; u <= n; u += 3) {
        for (int v = 0; v <= n; v += 5) {
            auto p = g.path(u, v);
            EXPECT_EQ((int)p.size(), g.distance(u, v));
        }
        if (u < n) {
            EXPECT_EQ((int)g.path_to_right(u).size(), g.distance_to_right(u));
        }
    }
}

TEST(decoder, empty_syndrome) {
    auto g = build_detection_graph(build_rotated_surface_code(3), 1);
    auto m = decode_mwpm(g, {});
    EXPECT_EQ(m.weight, 0);
    EXPECT_FALSE(m.logical_flip);
    EXPECT_TRUE(m.edges.empty());
    auto gap = complementary_gap(g, {});
    EXPECT_EQ(gap.gap, 3);
    EXPECT_EQ(gap.chosen_class, 0);
}

TEST(decoder, single_bulk_error_is_corrected) {
    auto layout = build_rotated_surface_code(3);
    auto circuit = std::make_shared<const SyndromeCircuit>(layout, 1);
    DetectionGraph g(circuit);
    int centre = layout.data_index(1, 1);
    auto syn = circuit->signature(circuit->defect_site(centre, 0));
    ASSERT_EQ(syn.detectors.size(), 2u);
    auto m = decode_mwpm(g, syn.detectors);
    EXPECT_EQ(m.weight, 1);
    EXPECT_EQ(m.logical_flip, syn.observable);
    ASSERT_EQ(m.correction.size(), 1u);
    EXPECT_EQ(m.correction[0], std::make_pair(centre, 0));
    EXPECT_EQ(complementary_gap(g, syn.detectors).gap, 1);
}

TEST(decoder, weight_two_error_is_miscorrected) {
    // Z on (0, 0) and (0, 1) leaves one top-boundary check lit, which a
    // single Z on (0, 2) explains in the other logical class.
    auto layout = build_rotated_surface_code(3);
    auto circuit = std::make_shared<const SyndromeCircuit>(layout, 1);
    DetectionGraph g(circuit);
    ErrorPattern e;
    e.toggle(circuit->defect_site(layout.data_index(0, 0), 0));
    e.toggle(circuit->defect_site(layout.data_index(0, 1), 0));
    auto syn = syndrome_of(*circuit, e);
    EXPECT_TRUE(syn.observable);
    ASSERT_EQ(syn.detectors.size(), 1u);
    auto m = decode_mwpm(g, syn.detectors);
    EXPECT_EQ(m.weight, 1);
    EXPECT_FALSE(m.logical_flip);
    auto gap = complementary_gap(g, syn.detectors);
    EXPECT_EQ(gap.w_class1, 2);
    EXPECT_EQ(gap.gap, 1);
}

TEST(decoder, central_single_event_gap) {
    // For odd d every check sits off-centre by half a column, so a lone
    // event at the most central check is one step closer to one boundary.
    for (int d : {3, 5, 7}) {
        auto layout = build_rotated_surface_code(d);
        auto g = build_detection_graph(layout, 1);
        int best = -1;
        double best_dist = 1e9;
        for (int k = 0; k < (int)layout.x_stabilisers.size(); k++) {
            const auto &s = layout.x_stabilisers[k];
            double dr = s.row + 0.5 - (d - 1) / 2.0;
            double dc = s.col + 0.5 - (d - 1) / 2.0;
            if (dr * dr + dc * dc < best_dist) {
                best_dist = dr * dr + dc * dc;
                best = k;
            }
        }
        auto gap = complementary_gap(g, {best});
        EXPECT_EQ(gap.gap, 1) << d;
        EXPECT_EQ(std::min(gap.w_class0, gap.w_class1), (d - 1) / 2) << d;
    }
}

TEST(decoder, circuit_level_gaps_reach_zero) {
    // Hook edges break the bipartite structure of the code-capacity graph,
    // so even gaps including 0 appear under circuit noise.
    auto circuit = std::make_shared<const SyndromeCircuit>(build_rotated_surface_code(3), 4);
    DetectionGraph g(circuit);
    MatchingDecoder decoder(g);
    NoiseSampler sampler(*circuit, 0.01);
    SyndromeBuffer buffer(*circuit);
    std::mt19937_64 rng(3);
    int zeros = 0;
    for (int k = 0; k < 2000; k++) {
        sampler.sample(rng, [&](int s) { buffer.add(s); });
        Syndrome syn;
        buffer.take(syn);
        auto gap = decoder.gap(syn.detectors);
        zeros += gap.gap == 0;
    }
    EXPECT_GT(zeros, 0);
}

TEST(decoder, stabiliser_equivalent_errors_share_syndrome) {
    auto layout = build_rotated_surface_code(5);
    auto circuit = std::make_shared<const SyndromeCircuit>(layout, 1);
    for (const auto &z : layout.z_stabilisers) {
        ErrorPattern e;
        for (int q : z.support) {
            e.toggle(circuit->defect_site(q, 0));
        }
        auto syn = syndrome_of(*circuit, e);
        EXPECT_TRUE(syn.detectors.empty());
        EXPECT_FALSE(syn.observable);
    }
}

TEST(decoder, code_capacity_d5_against_enumeration) {
    // Minimum error weight per (syndrome, class) over every Z error of
    // weight <= 5.  Weights found here are exact; anything absent is > 5.
    auto layout = build_rotated_surface_code(5);
    auto circuit = std::make_shared<const SyndromeCircuit>(layout, 1);
    DetectionGraph g(circuit);
    MatchingDecoder decoder(g);
    int n = 25;
    std::vector<uint32_t> check_mask(n, 0);
    std::vector<uint8_t> on_logical(n, 0);
    for (int k = 0; k < (int)layout.x_stabilisers.size(); k++) {
        for (int q : layout.x_stabilisers[k].support) {
            check_mask[q] |= 1u << k;
        }
    }
    for (int q : layout.logical_x) {
        on_logical[q] = 1;
    }
    std::map<std::pair<uint32_t, int>, int> best;
    std::vector<int> chosen;
    auto visit = [&](auto &&self, int start, uint32_t syn, int cls) -> void {
        auto key = std::make_pair(syn, cls);
        auto it = best.find(key);
        int w = (int)chosen.size();
        if (it == best.end() || it->second > w) {
            best[key] = w;
        }
        if (w == 5) {
            return;
        }
        for (int q = start; q < n; q++) {
            chosen.push_back(q);
            self(self, q + 1, syn ^ check_mask[q], cls ^ on_logical[q]);
            chosen.pop_back();
        }
    };
    visit(visit, 0, 0, 0);
    int compared = 0;
    for (const auto &[key, w] : best) {
        std::vector<int> syn;
        for (int k = 0; k < 12; k++) {
            if (key.first >> k & 1) {
                syn.push_back(k);
            }
        }
        int got = decoder.class_weight(syn, key.second);
        EXPECT_EQ(got, w) << "syndrome " << key.first << " class " << key.second;
        compared++;
        auto other = best.find({key.first, key.second ^ 1});
        if (other == best.end()) {
            EXPECT_GT(decoder.class_weight(syn, key.second ^ 1), 5);
        }
    }
    EXPECT_EQ(compared, (int)best.size());
}

TEST(decoder, circuit_level_matches_oracle_d3) {
    check_against_oracle(3, 4, 0.01, 0.0, 3000, 1);
    check_against_oracle(3, 4, 0.005, 1.0, 2000, 2);
}

TEST(decoder, circuit_level_matches_oracle_d5) {
    check_against_oracle(5, 6, 0.004, 0.0, 1500, 3);
    check_against_oracle(5, 6, 0.002, 0.6, 1500, 4);
}

TEST(decoder, distance_one) {
    auto circuit = std::make_shared<const SyndromeCircuit>(build_rotated_surface_code(1), 2);
    DetectionGraph g(circuit);
    EXPECT_EQ(g.num_detectors(), 0);
    auto gap = complementary_gap(g, {});
    EXPECT_EQ(gap.w_class0, 0);
    EXPECT_EQ(gap.w_class1, 1);
}

TEST(decoder, rejects_bad_syndrome) {
    auto g = build_detection_graph(build_rotated_surface_code(3), 2);
    EXPECT_THROW(decode_mwpm(g, {3, 1}), std::invalid_argument);
    EXPECT_THROW(decode_mwpm(g, {1, 1}), std::invalid_argument);
    EXPECT_THROW(decode_mwpm(g, {g.num_detectors()}), std::invalid_argument);
    EXPECT_THROW(decode_mwpm(g, {-1}), std::invalid_argument);
}

TEST(decoder, json) {
    auto g = build_detection_graph(build_rotated_surface_code(3), 1);
    auto j = match_to_json(decode_mwpm(g, {0}), complementary_gap(g, {0}));
    EXPECT_TRUE(j.contains("weight"));
    EXPECT_TRUE(j.contains("gap"));
    EXPECT_FALSE(graph_to_json(g).empty());
}
