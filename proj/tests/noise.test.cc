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

#include <cmath>
#include <numbers>
#include <set>

#include "gtest/gtest.h"
#include "snakes/noise.h"

using namespace snakes;

namespace {

SyndromeCircuit make_circuit(int d) {
    return SyndromeCircuit(build_rotated_surface_code(d), d + 1);
}

}  // namespace

TEST(syndrome_circuit, site_counts) {
    auto c = make_circuit(3);
    int n = 9;
    int anc = 8;
    int noisy = 3;
    // Data init and Hadamard once, then per round: idle on data, init on
    // each ancilla, Hadamard twice on each X ancilla.
    EXPECT_EQ((int)c.single_sites().size(), 2 * n + noisy * (n + anc + 2 * 4));
    EXPECT_EQ((int)c.gate_site_pairs().size(), noisy * 24);
    // Only X-ancilla readout flips are visible in the Z frame.
    EXPECT_EQ((int)c.measure_sites().size(), noisy * 4);
    EXPECT_EQ(c.num_detectors(), 4 * 4);
}

TEST(syndrome_circuit, z_ancilla_faults_are_silent) {
    auto c = make_circuit(5);
    for (int s = 0; s < (int)c.sites().size(); s++) {
        const auto &site = c.sites()[s];
        if (site.kind == SiteKind::kAncillaInit &&
            c.embedding().ancillas[site.qubit].type == PauliType::kZ) {
            EXPECT_TRUE(c.signature(s).detectors.empty());
            EXPECT_FALSE(c.signature(s).observable);
        }
    }
}

TEST(syndrome_circuit, x_measurement_flip_hits_consecutive_layers) {
    auto c = make_circuit(5);
    int checked = 0;
    for (int s : c.measure_sites()) {
        const auto &site = c.sites()[s];
        const auto &sig = c.signature(s);
        if (c.embedding().ancillas[site.qubit].type != PauliType::kX) {
            EXPECT_TRUE(sig.detectors.empty());
            continue;
        }
        ASSERT_EQ(sig.detectors.size(), 2u);
        EXPECT_EQ(c.detector_check(sig.detectors[0]), c.detector_check(sig.detectors[1]));
        EXPECT_EQ(c.detector_layer(sig.detectors[0]), site.round);
        EXPECT_EQ(c.detector_layer(sig.detectors[1]), site.round + 1);
        checked++;
    }
    EXPECT_EQ(checked, 12 * 5);
}

TEST(syndrome_circuit, defect_signature_matches_stabilisers) {
    // A Z before the gates of round r flips the X checks containing q in
    // layer r and nothing else.
    auto c = make_circuit(5);
    const auto &layout = c.layout();
    for (int q = 0; q < layout.num_data(); q++) {
        for (int r = 0; r < c.rounds(); r++) {
            std::set<int> expected;
            for (int k = 0; k < c.num_checks(); k++) {
                const auto &sup = layout.x_stabilisers[k].support;
                if (std::count(sup.begin(), sup.end(), q)) {
                    expected.insert(c.detector_index(k, r));
                }
            }
            const auto &sig = c.signature(c.defect_site(q, r));
            EXPECT_EQ(std::set<int>(sig.detectors.begin(), sig.detectors.end()), expected);
            bool on_logical = std::count(layout.logical_x.begin(), layout.logical_x.end(), q) > 0;
            EXPECT_EQ(sig.observable, on_logical);
        }
    }
}

TEST(syndrome_circuit, signatures_are_graphlike) {
    for (int d : {1, 3, 5, 7}) {
        auto c = make_circuit(d);
        for (int s = 0; s < (int)c.sites().size(); s++) {
            EXPECT_LE(c.signature(s).detectors.size(), 2u);
        }
    }
}

TEST(noise, zero_p_gives_empty_pattern) {
    auto c = make_circuit(3);
    NoiseParams params{0.0, 0.0, c.rounds()};
    for (uint64_t seed = 0; seed < 20; seed++) {
        EXPECT_TRUE(sample_circuit_noise(c, params, seed).empty());
    }
}

TEST(noise, deterministic_for_seed) {
    auto c = make_circuit(5);
    NoiseParams params{0.02, 0.0, c.rounds()};
    EXPECT_EQ(sample_circuit_noise(c, params, 7), sample_circuit_noise(c, params, 7));
    EXPECT_NE(sample_circuit_noise(c, params, 7), sample_circuit_noise(c, params, 8));
}

TEST(noise, measurement_flip_frequency) {
    auto c = make_circuit(3);
    NoiseSampler sampler(c, 1e-3);
    std::mt19937_64 rng(11);
    std::set<int> meas(c.measure_sites().begin(), c.measure_sites().end());
    int64_t flips = 0;
    const int64_t shots = 1000000 / (int64_t)meas.size() + 1;
    int64_t trials = shots * (int64_t)meas.size();
    for (int64_t k = 0; k < shots; k++) {
        sampler.sample(rng, [&](int s) { flips += meas.count(s); });
    }
    double mean = 1e-3 * trials;
    double sigma = std::sqrt(trials * 1e-3 * (1 - 1e-3));
    EXPECT_LT(std::abs(flips - mean), 3 * sigma);
}

TEST(noise, single_and_pair_frequencies) {
    auto c = make_circuit(3);
    double p = 0.01;
    NoiseSampler sampler(c, p);
    std::mt19937_64 rng(5);
    int first_single = c.single_sites()[0];
    auto [ga, gd] = c.gate_site_pairs()[0];
    int64_t single = 0, anc = 0, dat = 0, both = 0;
    const int64_t shots = 200000;
    for (int64_t k = 0; k < shots; k++) {
        bool a = false, b = false;
        sampler.sample(rng, [&](int s) {
            single += s == first_single;
            a |= s == ga;
            b |= s == gd;
        });
        anc += a && !b;
        dat += b && !a;
        both += a && b;
    }
    auto within = [&](int64_t count, double prob) {
        double sigma = std::sqrt(shots * prob * (1 - prob));
        return std::abs(count - shots * prob) < 4 * sigma;
    };
    EXPECT_TRUE(within(single, 2 * p / 3));
    EXPECT_TRUE(within(anc, 4 * p / 15));
    EXPECT_TRUE(within(dat, 4 * p / 15));
    EXPECT_TRUE(within(both, 4 * p / 15));
}

TEST(noise, defect_probability) {
    NoiseParams params;
    params.omega = 0;
    EXPECT_EQ(params.q(), 0);
    params.omega = std::numbers::pi;
    EXPECT_NEAR(params.q(), 1, 1e-15);
    params.omega = 0.62;
    EXPECT_NEAR(params.q(), 0.0931, 1e-4);
    params.omega = -0.62;
    EXPECT_NEAR(params.q(), 0.0931, 1e-4);
}

TEST(noise, defect_round_extremes) {
    auto c = make_circuit(3);
    ErrorPattern empty;
    EXPECT_TRUE(apply_defect_round(empty, c, 0.0, 1, 3).empty());
    auto all = apply_defect_round(empty, c, std::numbers::pi, 1, 3);
    EXPECT_EQ(all.sites.size(), 9u);
    auto flips = all.z_flips(c);
    for (auto [q, r] : flips) {
        EXPECT_EQ(r, 1);
    }
    // Applying the same full defect twice cancels.
    EXPECT_TRUE(apply_defect_round(all, c, std::numbers::pi, 1, 4).empty());
}

TEST(noise, defect_frequency) {
    auto c = make_circuit(5);
    double omega = 0.62;
    double q = std::pow(std::sin(omega / 2), 2);
    int64_t hits = 0;
    const int trials = 20000;
    for (int k = 0; k < trials; k++) {
        hits += (int64_t)apply_defect_round({}, c, omega, 2, k).sites.size();
    }
    double n = 25.0 * trials;
    EXPECT_NEAR(hits / n, q, 4 * std::sqrt(q * (1 - q) / n));
}

TEST(noise, validation) {
    auto c = make_circuit(3);
    EXPECT_THROW(apply_defect_round({}, c, 4.0, 1, 0), std::invalid_argument);
    EXPECT_THROW(apply_defect_round({}, c, 0.1, c.rounds(), 0), std::invalid_argument);
    EXPECT_THROW(apply_defect_round({}, c, 0.1, -1, 0), std::invalid_argument);
    NoiseParams bad{-0.1, 0.0, 3};
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    NoiseParams bad_angle{0.1, 3.5, 3};
    EXPECT_THROW(bad_angle.validate(), std::invalid_argument);
}

TEST(noise, toggle_is_involution) {
    ErrorPattern e;
    e.toggle(5);
    e.toggle(2);
    EXPECT_EQ(e.sites, (std::vector<int>{2, 5}));
    EXPECT_TRUE(e.contains(5));
    e.toggle(5);
    EXPECT_EQ(e.sites, (std::vector<int>{2}));
}

TEST(noise, syndrome_is_linear) {
    auto c = make_circuit(5);
    NoiseParams params{0.01, 0.0, c.rounds()};
    auto a = sample_circuit_noise(c, params, 1);
    auto b = sample_circuit_noise(c, params, 2);
    ErrorPattern sum = a;
    for (int s : b.sites) {
        sum.toggle(s);
    }
    auto sa = syndrome_of(c, a);
    auto sb = syndrome_of(c, b);
    auto ss = syndrome_of(c, sum);
    std::vector<int> expected;
    std::set_symmetric_difference(sa.detectors.begin(), sa.detectors.end(), sb.detectors.begin(),
                                  sb.detectors.end(), std::back_inserter(expected));
    EXPECT_EQ(ss.detectors, expected);
    EXPECT_EQ(ss.observable, sa.observable != sb.observable);
}

TEST(noise, buffer_matches_syndrome_of) {
    auto c = make_circuit(3);
    NoiseSampler sampler(c, 0.05);
    SyndromeBuffer buffer(c);
    std::mt19937_64 rng(3);
    for (int k = 0; k < 200; k++) {
        ErrorPattern e;
        sampler.sample(rng, [&](int s) {
            buffer.add(s);
            e.toggle(s);
        });
        Syndrome got;
        buffer.take(got);
        auto want = syndrome_of(c, e);
        EXPECT_EQ(got.detectors, want.detectors);
        EXPECT_EQ(got.observable, want.observable);
    }
}
