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

#ifndef SNAKES_NOISE_H
#define SNAKES_NOISE_H

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "snakes/syndrome_circuit.h"

namespace snakes {

struct NoiseParams {
    /// Circuit-level depolarising strength.
    double p = 0.0;
    /// Defect rotation angle in [-pi, pi].
    double omega = 0.0;
    /// Detector layers of the memory experiment (noisy rounds + readout).
    int rounds = 1;

    double q() const {
        double s = std::sin(omega / 2);
        return s * s;
    }
    void validate() const;
};

/// Set of fired fault sites of a SyndromeCircuit.  Sites compose by XOR.
struct ErrorPattern {
    std::vector<int> sites;

    void toggle(int site);
    bool contains(int site) const;
    bool empty() const {
        return sites.empty();
    }
    /// (data index, round) of every fired data-qubit site.
    std::vector<std::pair<int, int>> z_flips(const SyndromeCircuit &circuit) const;
    /// (ancilla index, round) of every flipped measurement.
    std::vector<std::pair<int, int>> meas_flips(const SyndromeCircuit &circuit) const;
    bool operator==(const ErrorPattern &other) const = default;
};

struct Syndrome {
    std::vector<int> detectors;
    bool observable = false;
};

/// Draws circuit-level Z faults by geometric skipping over channels of
/// equal probability.  Single-qubit depolarising leaves a Z component with
/// probability 2p/3; a two-qubit depolarising channel fires with
/// probability 12p/15 and then picks Z_a, Z_b or Z_a Z_b uniformly.
class NoiseSampler {
   public:
    NoiseSampler(const SyndromeCircuit &circuit, double p);

    template <typename F>
    void sample(std::mt19937_64 &rng, F &&on_site) const;
    /// Dephases every data qubit with probability q before the given round.
    template <typename F>
    void sample_defect(std::mt19937_64 &rng, double q, int round, F &&on_site) const;

   private:
    template <typename F>
    static void skip_sample(std::mt19937_64 &rng, double prob, size_t n, F &&on_index);

    const SyndromeCircuit &circuit_;
    double p_;
};

/// XOR accumulator turning fired sites into a sorted detector list.
class SyndromeBuffer {
   public:
    explicit SyndromeBuffer(const SyndromeCircuit &circuit)
        : circuit_(circuit), flips_(circuit.num_detectors(), 0), seen_(circuit.num_detectors(), 0) {
    }
    void add(int site);
    /// Writes the syndrome into out and resets the buffer.
    void take(Syndrome &out);

   private:
    const SyndromeCircuit &circuit_;
    std::vector<uint8_t> flips_;
    std::vector<uint8_t> seen_;
    std::vector<int> touched_;
    bool observable_ = false;
};

ErrorPattern sample_circuit_noise(const SyndromeCircuit &circuit, const NoiseParams &params, uint64_t seed);

/// Composes an extra round of dephasing with probability sin^2(omega/2).
/// Throws std::invalid_argument if omega lies outside [-pi, pi] or the
/// round is outside the schedule.
ErrorPattern apply_defect_round(
    const ErrorPattern &pattern, const SyndromeCircuit &circuit, double omega, int round_index, uint64_t seed);

Syndrome syndrome_of(const SyndromeCircuit &circuit, const ErrorPattern &pattern);

template <typename F>
void NoiseSampler::skip_sample(std::mt19937_64 &rng, double prob, size_t n, F &&on_index) {
    if (prob <= 0 || n == 0) {
        return;
    }
    if (prob >= 1) {
        for (size_t k = 0; k < n; k++) {
            on_index(k);
        }
        return;
    }
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double log_miss = std::log1p(-prob);
    size_t k = 0;
    while (true) {
        double u = 1.0 - unif(rng);
        double skip = std::floor(std::log(u) / log_miss);
        if (skip >= (double)(n - k)) {
            return;
        }
        k += (size_t)skip;
        on_index(k);
        k++;
        if (k >= n) {
            return;
        }
    }
}

template <typename F>
void NoiseSampler::sample(std::mt19937_64 &rng, F &&on_site) const {
    const auto &singles = circuit_.single_sites();
    skip_sample(rng, 2 * p_ / 3, singles.size(), [&](size_t k) { on_site(singles[k]); });
    const auto &pairs = circuit_.gate_site_pairs();
    skip_sample(rng, 12 * p_ / 15, pairs.size(), [&](size_t k) {
        int which = (int)(rng() % 3);
        if (which != 1) {
            on_site(pairs[k].first);
        }
        if (which != 0) {
            on_site(pairs[k].second);
        }
    });
    const auto &meas = circuit_.measure_sites();
    skip_sample(rng, p_, meas.size(), [&](size_t k) { on_site(meas[k]); });
}

template <typename F>
void NoiseSampler::sample_defect(std::mt19937_64 &rng, double q, int round, F &&on_site) const {
    int n = circuit_.layout().num_data();
    skip_sample(rng, q, (size_t)n, [&](size_t k) { on_site(circuit_.defect_site((int)k, round)); });
}

}  // namespace snakes

#endif
