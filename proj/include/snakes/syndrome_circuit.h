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

#ifndef SNAKES_SYNDROME_CIRCUIT_H
#define SNAKES_SYNDROME_CIRCUIT_H

#include <cstdint>
#include <vector>

#include "snakes/code_layout.h"
#include "snakes/snake_embedding.h"

namespace snakes {

/// Where a Z fault can occur.  Within a round the positions are ordered
/// kDefect, kDataIdle, kAncillaInit, kAncillaHadamard, kGateAncilla and
/// kGateData (after each of the four interaction steps), kReadoutHadamard
/// and kMeasureFlip.  kDataInit and kDataHadamard precede the first round.
/// X-basis preparation and measurement are compiled as Z-basis reset or
/// measurement plus a Hadamard, and every Hadamard is a noise location.
enum class SiteKind : uint8_t {
    kDataInit,
    kDataHadamard,
    kDefect,
    kDataIdle,
    kAncillaInit,
    kAncillaHadamard,
    kGateAncilla,
    kGateData,
    kReadoutHadamard,
    kMeasureFlip,
};

inline bool is_data_site(SiteKind kind) {
    return kind == SiteKind::kDataInit || kind == SiteKind::kDataHadamard || kind == SiteKind::kDefect ||
           kind == SiteKind::kDataIdle || kind == SiteKind::kGateData;
}

struct FaultSite {
    SiteKind kind;
    /// Data index for data sites, ancilla index for ancilla sites.
    int qubit;
    int round;
    /// Interaction step (0-3) for gate sites, -1 otherwise.
    int step;
};

/// Detection events and observable flip caused by a single fault site.
struct Signature {
    std::vector<int> detectors;
    bool observable = false;
};

/// X-check memory experiment on a snake: rounds - 1 noisy rounds of
/// syndrome extraction following the snake schedule, then a noiseless
/// transversal X readout that forms the last detector layer.  Only Z
/// faults are tracked.  Detector (check, layer) compares X-check outcomes
/// of consecutive layers.
class SyndromeCircuit {
   public:
    SyndromeCircuit(const CodeLayout &layout, int rounds);

    const CodeLayout &layout() const {
        return layout_;
    }
    const SnakeEmbedding &embedding() const {
        return embedding_;
    }
    int rounds() const {
        return rounds_;
    }
    int noisy_rounds() const {
        return rounds_ - 1;
    }
    int num_checks() const {
        return (int)layout_.x_stabilisers.size();
    }
    int num_detectors() const {
        return num_checks() * rounds_;
    }
    int detector_index(int check, int layer) const {
        return layer * num_checks() + check;
    }
    int detector_check(int detector) const {
        return detector % num_checks();
    }
    int detector_layer(int detector) const {
        return detector / num_checks();
    }

    const std::vector<FaultSite> &sites() const {
        return sites_;
    }
    const Signature &signature(int site) const {
        return signatures_[site];
    }
    /// Site injecting a Z on data qubit q before the entangling gates of
    /// the given round (round == rounds() - 1 targets the readout).
    int defect_site(int q, int round) const;

    /// Single-qubit channels (initialisation, Hadamards, idle).
    const std::vector<int> &single_sites() const {
        return single_sites_;
    }
    /// Two-qubit channels after each CNOT: (ancilla site, data site).
    const std::vector<std::pair<int, int>> &gate_site_pairs() const {
        return gate_pairs_;
    }
    const std::vector<int> &measure_sites() const {
        return measure_sites_;
    }

    /// Per-step interactions of one round.
    const std::vector<std::vector<Interaction>> &interactions() const {
        return interactions_;
    }

   private:
    int add_site(SiteKind kind, int qubit, int round, int step);
    Signature propagate(const FaultSite &site) const;

    CodeLayout layout_;
    SnakeEmbedding embedding_;
    int rounds_;
    std::vector<std::vector<Interaction>> interactions_;
    std::vector<FaultSite> sites_;
    std::vector<Signature> signatures_;
    std::vector<int> defect_sites_;
    std::vector<int> single_sites_;
    std::vector<std::pair<int, int>> gate_pairs_;
    std::vector<int> measure_sites_;
};

}  // namespace snakes

#endif
