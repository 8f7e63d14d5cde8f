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

#include "snakes/snake_embedding.h"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace snakes {

int SnakeEmbedding::total_displacement() const {
    int total = 0;
    for (const auto &phase : schedule) {
        if (phase.kind == PhaseKind::kShuttle) {
            total += std::abs(phase.displacement);
        }
    }
    return total;
}

std::vector<int> SnakeEmbedding::interaction_shifts() const {
    std::vector<int> shifts;
    int shift = 0;
    for (const auto &phase : schedule) {
        if (phase.kind == PhaseKind::kShuttle) {
            shift += phase.displacement;
        } else if (phase.kind == PhaseKind::kInteract) {
            shifts.push_back(shift);
        }
    }
    return shifts;
}

SnakeEmbedding embed_snake(const CodeLayout &layout) {
    int d = layout.distance;
    if (d < 1 || (int)layout.data_qubits.size() != d * d) {
        throw std::invalid_argument("Layout is not a valid rotated surface code.");
    }
    SnakeEmbedding emb;
    emb.distance = d;
    emb.data_order.resize(d * d);
    for (int q = 0; q < d * d; q++) {
        emb.data_order[q] = q;
    }

    std::map<int, int> lanes_used;
    auto place = [&](PauliType type, const std::vector<Stabiliser> &stabs) {
        for (int k = 0; k < (int)stabs.size(); k++) {
            const auto &s = stabs[k];
            // Position of the (possibly virtual) NW corner plus d + 1.
            int position = s.col * d + s.row + d + 1;
            int lane = lanes_used[position]++;
            emb.ancillas.push_back({type, k, position, lane});
        }
    };
    place(PauliType::kX, layout.x_stabilisers);
    place(PauliType::kZ, layout.z_stabilisers);
    for (const auto &[position, count] : lanes_used) {
        if (count > 2) {
            throw std::logic_error("More than two ancillas share a rail position.");
        }
    }

    emb.schedule = {
        {PhaseKind::kInteract, 0},
        {PhaseKind::kShuttle, 1},
        {PhaseKind::kInteract, 0},
        {PhaseKind::kShuttle, d - 1},
        {PhaseKind::kInteract, 0},
        {PhaseKind::kShuttle, 1},
        {PhaseKind::kInteract, 0},
        {PhaseKind::kMeasure, 0},
        {PhaseKind::kShuttle, -(d + 1)},
    };
    return emb;
}

std::vector<std::vector<Interaction>> replay_cycle(const SnakeEmbedding &embedding, const CodeLayout &layout) {
    int n = embedding.distance * embedding.distance;
    std::vector<std::vector<Interaction>> steps;
    for (int shift : embedding.interaction_shifts()) {
        std::vector<Interaction> step;
        for (int a = 0; a < embedding.num_ancillas(); a++) {
            const auto &slot = embedding.ancillas[a];
            int q = slot.position - shift;
            if (q < 0 || q >= n) {
                continue;
            }
            const auto &support = layout.stabilisers(slot.type)[slot.stabiliser].support;
            if (std::binary_search(support.begin(), support.end(), embedding.data_order[q])) {
                step.push_back({a, embedding.data_order[q]});
            }
        }
        steps.push_back(std::move(step));
    }
    return steps;
}

nlohmann::json embedding_to_json(const SnakeEmbedding &embedding) {
    nlohmann::json ancillas = nlohmann::json::array();
    for (const auto &a : embedding.ancillas) {
        ancillas.push_back({{"type", pauli_name(a.type)},
                            {"stabiliser", a.stabiliser},
                            {"position", a.position},
                            {"lane", a.lane}});
    }
    nlohmann::json schedule = nlohmann::json::array();
    for (const auto &p : embedding.schedule) {
        const char *kind = p.kind == PhaseKind::kInteract ? "interact" : p.kind == PhaseKind::kShuttle ? "shuttle" : "measure";
        schedule.push_back({{"kind", kind}, {"displacement", p.displacement}});
    }
    return {{"distance", embedding.distance},
            {"data_order", embedding.data_order},
            {"ancillas", ancillas},
            {"schedule", schedule}};
}

}  // namespace snakes
