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

#include "snakes/syndrome_circuit.h"

#include <algorithm>
#include <stdexcept>

namespace snakes {

int SyndromeCircuit::add_site(SiteKind kind, int qubit, int round, int step) {
    sites_.push_back({kind, qubit, round, step});
    return (int)sites_.size() - 1;
}

SyndromeCircuit::SyndromeCircuit(const CodeLayout &layout, int rounds)
    : layout_(layout), embedding_(embed_snake(layout)), rounds_(rounds) {
    if (rounds < 1) {
        throw std::invalid_argument("A syndrome circuit needs at least one round.");
    }
    interactions_ = replay_cycle(embedding_, layout_);
    int n = layout_.num_data();
    int num_anc = embedding_.num_ancillas();
    int nx = num_checks();

    for (int q = 0; q < n; q++) {
        single_sites_.push_back(add_site(SiteKind::kDataInit, q, 0, -1));
        single_sites_.push_back(add_site(SiteKind::kDataHadamard, q, 0, -1));
    }
    defect_sites_.assign((size_t)rounds_ * n, -1);
    for (int r = 0; r < rounds_; r++) {
        for (int q = 0; q < n; q++) {
            defect_sites_[(size_t)r * n + q] = add_site(SiteKind::kDefect, q, r, -1);
        }
        if (r == rounds_ - 1) {
            break;
        }
        for (int q = 0; q < n; q++) {
            single_sites_.push_back(add_site(SiteKind::kDataIdle, q, r, -1));
        }
        for (int a = 0; a < num_anc; a++) {
            single_sites_.push_back(add_site(SiteKind::kAncillaInit, a, r, -1));
        }
        for (int a = 0; a < nx; a++) {
            single_sites_.push_back(add_site(SiteKind::kAncillaHadamard, a, r, -1));
        }
        for (int s = 0; s < (int)interactions_.size(); s++) {
            for (const auto &it : interactions_[s]) {
                int sa = add_site(SiteKind::kGateAncilla, it.ancilla, r, s);
                int sd = add_site(SiteKind::kGateData, it.data, r, s);
                gate_pairs_.emplace_back(sa, sd);
            }
        }
        for (int a = 0; a < nx; a++) {
            single_sites_.push_back(add_site(SiteKind::kReadoutHadamard, a, r, -1));
        }
        for (int a = 0; a < nx; a++) {
            measure_sites_.push_back(add_site(SiteKind::kMeasureFlip, a, r, -1));
        }
    }

    signatures_.reserve(sites_.size());
    for (const auto &site : sites_) {
        signatures_.push_back(propagate(site));
    }
}

int SyndromeCircuit::defect_site(int q, int round) const {
    if (round < 0 || round >= rounds_) {
        throw std::invalid_argument("Defect round " + std::to_string(round) + " is outside the schedule.");
    }
    if (q < 0 || q >= layout_.num_data()) {
        throw std::invalid_argument("Data index out of range.");
    }
    return defect_sites_[(size_t)round * layout_.num_data() + q];
}

Signature SyndromeCircuit::propagate(const FaultSite &site) const {
    int n = layout_.num_data();
    int nx = num_checks();
    std::vector<uint8_t> frame(n + embedding_.num_ancillas(), 0);
    std::vector<uint8_t> flipped_measurement(nx, 0);

    bool on_ancilla = site.kind == SiteKind::kAncillaInit || site.kind == SiteKind::kAncillaHadamard ||
                      site.kind == SiteKind::kGateAncilla;
    bool in_readout = site.round == rounds_ - 1;
    if (site.kind == SiteKind::kMeasureFlip || site.kind == SiteKind::kReadoutHadamard) {
        flipped_measurement[site.qubit] = 1;
    } else {
        frame[on_ancilla ? n + site.qubit : site.qubit] = 1;
        if (!in_readout) {
            int first_step = site.step >= 0 ? site.step + 1 : 0;
            for (int s = first_step; s < (int)interactions_.size(); s++) {
                for (const auto &it : interactions_[s]) {
                    int a = n + it.ancilla;
                    if (embedding_.ancillas[it.ancilla].type == PauliType::kX) {
                        // CNOT ancilla -> data: a Z on the data target moves onto the ancilla.
                        frame[a] ^= frame[it.data];
                    } else {
                        frame[it.data] ^= frame[a];
                    }
                }
            }
            for (int a = 0; a < nx; a++) {
                flipped_measurement[a] = frame[n + a];
            }
        }
    }

    std::vector<uint8_t> flips(num_detectors(), 0);
    for (int a = 0; a < nx; a++) {
        uint8_t residual = 0;
        for (int q : layout_.x_stabilisers[a].support) {
            residual ^= frame[q];
        }
        if (in_readout) {
            flips[detector_index(a, site.round)] ^= residual;
        } else {
            flips[detector_index(a, site.round)] ^= flipped_measurement[a];
            flips[detector_index(a, site.round + 1)] ^= flipped_measurement[a] ^ residual;
        }
    }
    Signature sig;
    for (int k = 0; k < num_detectors(); k++) {
        if (flips[k]) {
            sig.detectors.push_back(k);
        }
    }
    for (int q : layout_.logical_x) {
        sig.observable ^= frame[q] != 0;
    }
    return sig;
}

}  // namespace snakes
