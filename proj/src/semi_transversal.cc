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

#include "snakes/semi_transversal.h"

#include <algorithm>
#include <stdexcept>

namespace snakes {

static bool partially_overlaps(const std::vector<int> &support, const std::vector<bool> &applied) {
    size_t hits = 0;
    for (int q : support) {
        hits += applied[q];
    }
    return hits != 0 && hits != support.size();
}

MeasurableSets measurable_stabilisers(
    const CodeLayout &layout_control, const CodeLayout &layout_target, const BatchState &batch) {
    if (layout_control.distance != layout_target.distance) {
        throw std::invalid_argument("Control and target snakes must have the same code distance.");
    }
    int n = layout_control.num_data();
    std::vector<bool> applied(n, false);
    for (int q : batch.applied_pairs) {
        if (q < 0 || q >= n) {
            throw std::invalid_argument("Applied pair index " + std::to_string(q) + " is out of range.");
        }
        applied[q] = true;
    }

    MeasurableSets out;
    for (int k = 0; k < (int)layout_control.x_stabilisers.size(); k++) {
        if (!partially_overlaps(layout_control.x_stabilisers[k].support, applied)) {
            out.control_x.push_back(k);
        }
    }
    for (int k = 0; k < (int)layout_control.z_stabilisers.size(); k++) {
        out.control_z.push_back(k);
    }
    for (int k = 0; k < (int)layout_target.x_stabilisers.size(); k++) {
        out.target_x.push_back(k);
    }
    for (int k = 0; k < (int)layout_target.z_stabilisers.size(); k++) {
        if (!partially_overlaps(layout_target.z_stabilisers[k].support, applied)) {
            out.target_z.push_back(k);
        }
    }
    return out;
}

std::vector<std::vector<int>> batch_plan(const CodeLayout &layout, int batch_size) {
    int d = layout.distance;
    if (batch_size == 0) {
        batch_size = d;
    }
    if (batch_size < 0) {
        throw std::invalid_argument("Batch size must be positive.");
    }
    std::vector<int> order;
    for (int r = 0; r < d; r++) {
        for (int c = 0; c < d; c++) {
            order.push_back(layout.data_index(r, c));
        }
    }
    std::vector<std::vector<int>> plan;
    for (size_t k = 0; k < order.size(); k += batch_size) {
        size_t end = std::min(order.size(), k + batch_size);
        plan.emplace_back(order.begin() + k, order.begin() + end);
    }
    return plan;
}

}  // namespace snakes
