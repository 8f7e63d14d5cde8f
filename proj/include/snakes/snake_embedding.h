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

#ifndef SNAKES_SNAKE_EMBEDDING_H
#define SNAKES_SNAKE_EMBEDDING_H

#include <vector>

#include "json.hpp"
#include "snakes/code_layout.h"

namespace snakes {

enum class PhaseKind { kInteract, kShuttle, kMeasure };

struct SchedulePhase {
    PhaseKind kind;
    /// Rail displacement in dot increments (shuttle phases only).
    int displacement = 0;
};

/// A static ancilla parked next to the mobile data rail.
///
/// Two ancillas may share a rail position; they then sit in different
/// lanes on opposite sides of the rail.
struct AncillaSlot {
    PauliType type;
    int stabiliser;
    int position;
    int lane;
};

struct Interaction {
    int ancilla;
    int data;
};

/// A distance-d code unrolled onto a one-dimensional shuttling rail.
///
/// Data qubit q sits at rail position q + s when the rail has been
/// displaced by s dots.  Ancillas are indexed X stabilisers first, then
/// Z stabilisers, in layout order.
struct SnakeEmbedding {
    int distance = 0;
    std::vector<int> data_order;
    std::vector<AncillaSlot> ancillas;
    std::vector<SchedulePhase> schedule;

    int num_ancillas() const {
        return (int)ancillas.size();
    }
    int total_displacement() const;
    /// Cumulative rail displacement at each interaction phase.
    std::vector<int> interaction_shifts() const;
};

/// Maps the layout onto a rail.  The rail is shifted by 0, 1, d and d + 1
/// dots in turn, so every ancilla meets its SE, NE, SW and NW corners in
/// that order; the closing shuttle returns the rail to its origin.
SnakeEmbedding embed_snake(const CodeLayout &layout);

/// Replays one cycle: one list of ancilla-data interactions per
/// interaction phase.
std::vector<std::vector<Interaction>> replay_cycle(const SnakeEmbedding &embedding, const CodeLayout &layout);

nlohmann::json embedding_to_json(const SnakeEmbedding &embedding);

}  // namespace snakes

#endif
