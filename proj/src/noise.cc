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

#include "snakes/noise.h"

#include <algorithm>
#include <numbers>
#include <stdexcept>

namespace snakes {

void NoiseParams::validate() const {
    if (!(p >= 0 && p <= 1)) {
        throw std::invalid_argument("Physical error rate p must lie in [0, 1].");
    }
    if (!(std::abs(omega) <= std::numbers::pi)) {
        throw std::invalid_argument("Defect angle omega must lie in [-pi, pi].");
    }
    if (rounds < 1) {
        throw std::invalid_argument("rounds must be at least 1.");
    }
}

void ErrorPattern::toggle(int site) {
    auto it = std::lower_bound(sites.begin(), sites.end(), site);
    if (it != sites.end() && *it == site) {
        sites.erase(it);
    } else {
        sites.insert(it, site);
    }
}

bool ErrorPattern::contains(int site) const {
    return std::binary_search(sites.begin(), sites.end(), site);
}

std::vector<std::pair<int, int>> ErrorPattern::z_flips(const SyndromeCircuit &circuit) const {
    std::vector<std::pair<int, int>> out;
    for (int s : sites) {
        const auto &site = circuit.sites()[s];
        if (is_data_site(site.kind)) {
            out.emplace_back(site.qubit, site.round);
        }
    }
    return out;
}

std::vector<std::pair<int, int>> ErrorPattern::meas_flips(const SyndromeCircuit &circuit) const {
    std::vector<std::pair<int, int>> out;
    for (int s : sites) {
        const auto &site = circuit.sites()[s];
        if (site.kind == SiteKind::kMeasureFlip) {
            out.emplace_back(site.qubit, site.round);
        }
    }
    return out;
}

NoiseSampler::NoiseSampler(const SyndromeCircuit &circuit, double p) : circuit_(circuit), p_(p) {
    if (!(p >= 0 && p <= 1)) {
        throw std::invalid_argument("Physical error rate p must lie in [0, 1].");
    }
}

ErrorPattern sample_circuit_noise(const SyndromeCircuit &circuit, const NoiseParams &params, uint64_t seed) {
    params.validate();
    if (params.rounds != circuit.rounds()) {
        throw std::invalid_argument("NoiseParams.rounds does not match the circuit.");
    }
    std::mt19937_64 rng(seed);
    ErrorPattern pattern;
    NoiseSampler(circuit, params.p).sample(rng, [&](int site) { pattern.toggle(site); });
    return pattern;
}

ErrorPattern apply_defect_round(
    const ErrorPattern &pattern, const SyndromeCircuit &circuit, double omega, int round_index, uint64_t seed) {
    if (!(std::abs(omega) <= std::numbers::pi)) {
        throw std::invalid_argument("Defect angle omega must lie in [-pi, pi].");
    }
    if (round_index < 0 || round_index >= circuit.rounds()) {
        throw std::invalid_argument("Defect round is outside the schedule.");
    }
    double s = std::sin(omega / 2);
    std::mt19937_64 rng(seed);
    ErrorPattern out = pattern;
    NoiseSampler(circuit, 0.0).sample_defect(rng, s * s, round_index, [&](int site) { out.toggle(site); });
    return out;
}

void SyndromeBuffer::add(int site) {
    const auto &sig = circuit_.signature(site);
    observable_ ^= sig.observable;
    for (int k : sig.detectors) {
        flips_[k] ^= 1;
        if (!seen_[k]) {
            seen_[k] = 1;
            touched_.push_back(k);
        }
    }
}

void SyndromeBuffer::take(Syndrome &out) {
    out.detectors.clear();
    for (int k : touched_) {
        if (flips_[k]) {
            out.detectors.push_back(k);
        }
        flips_[k] = 0;
        seen_[k] = 0;
    }
    touched_.clear();
    std::sort(out.detectors.begin(), out.detectors.end());
    out.observable = observable_;
    observable_ = false;
}

Syndrome syndrome_of(const SyndromeCircuit &circuit, const ErrorPattern &pattern) {
    SyndromeBuffer buffer(circuit);
    for (int s : pattern.sites) {
        buffer.add(s);
    }
    Syndrome out;
    buffer.take(out);
    return out;
}

}  // namespace snakes
