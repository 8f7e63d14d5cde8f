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

#ifndef SNAKES_SEMI_TRANSVERSAL_H
#define SNAKES_SEMI_TRANSVERSAL_H

#include <vector>

#include "snakes/code_layout.h"

namespace snakes {

enum class SnakeRole { kControl, kTarget };

/// Progress of a transversal CNOT applied in batches.  applied_pairs holds
/// the data indices q for which CNOT(control q -> target q) has acted.
struct BatchState {
    std::vector<int> applied_pairs;
    SnakeRole role = SnakeRole::kControl;
};

/// Indices into the layouts' stabiliser lists.
struct MeasurableSets {
    std::vector<int> control_x;
    std::vector<int> control_z;
    std::vector<int> target_x;
    std::vector<int> target_z;
};

/// Stabilisers that can still be measured without disturbing the
/// partially entangled pair.  An X stabiliser of the control (Z stabiliser
/// of the target) is excluded when its support partially overlaps the
/// applied pairs.  Throws std::invalid_argument on mismatched distances or
/// out-of-range data indices.
MeasurableSets measurable_stabilisers(
    const CodeLayout &layout_control, const CodeLayout &layout_target, const BatchState &batch);

/// Row-by-row order of the transversal CNOTs, chunked into batches of
/// batch_size pairs (default: one row of d pairs).
std::vector<std::vector<int>> batch_plan(const CodeLayout &layout, int batch_size = 0);

}  // namespace snakes

#endif
