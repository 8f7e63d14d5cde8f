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

#ifndef SNAKES_CODE_LAYOUT_H
#define SNAKES_CODE_LAYOUT_H

#include <array>
#include <string>
#include <vector>

#include "json.hpp"

namespace snakes {

enum class PauliType { kX, kZ };

struct Coord {
    int row;
    int col;
    bool operator==(const Coord &other) const = default;
};

/// A plaquette of the rotated surface code.
///
/// The plaquette with top-left corner (row, col) touches the data qubits
/// (row, col), (row, col + 1), (row + 1, col) and (row + 1, col + 1).
/// Boundary plaquettes have row or col equal to -1 or d - 1 and only two
/// of their corners exist; missing corners are stored as -1.
struct Stabiliser {
    PauliType type;
    int row;
    int col;
    /// Corner data indices in the order NW, NE, SW, SE (-1 if absent).
    std::array<int, 4> corners;
    /// Present corners, sorted ascending.
    std::vector<int> support;
};

/// Rotated surface code of odd distance d.
///
/// Data qubits are indexed column-major: index = col * d + row.  The
/// logical Z operator runs along row 0 and the logical X operator along
/// column 0.  X-type plaquettes close the top and bottom boundaries and
/// Z-type plaquettes close the left and right boundaries.
struct CodeLayout {
    int distance = 0;
    std::vector<Coord> data_qubits;
    std::vector<Stabiliser> x_stabilisers;
    std::vector<Stabiliser> z_stabilisers;
    std::vector<int> logical_x;
    std::vector<int> logical_z;

    int num_data() const {
        return (int)data_qubits.size();
    }
    int data_index(int row, int col) const {
        return col * distance + row;
    }
    const std::vector<Stabiliser> &stabilisers(PauliType type) const {
        return type == PauliType::kX ? x_stabilisers : z_stabilisers;
    }
};

/// Builds the rotated surface code layout.  Throws std::invalid_argument
/// unless d is odd and positive.
CodeLayout build_rotated_surface_code(int d);

nlohmann::json layout_to_json(const CodeLayout &layout);
CodeLayout layout_from_json(const nlohmann::json &j);

const char *pauli_name(PauliType type);

}  // namespace snakes

#endif
