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

#include "snakes/code_layout.h"

#include <algorithm>
#include <stdexcept>

namespace snakes {

const char *pauli_name(PauliType type) {
    return type == PauliType::kX ? "X" : "Z";
}

CodeLayout build_rotated_surface_code(int d) {
    if (d < 1 || d % 2 == 0) {
        throw std::invalid_argument("Code distance must be a positive odd integer, got " + std::to_string(d) + ".");
    }
    CodeLayout layout;
    layout.distance = d;
    layout.data_qubits.resize(d * d);
    for (int c = 0; c < d; c++) {
        for (int r = 0; r < d; r++) {
            layout.data_qubits[layout.data_index(r, c)] = {r, c};
        }
    }

    auto index_or_missing = [&](int r, int c) {
        if (r < 0 || r >= d || c < 0 || c >= d) {
            return -1;
        }
        return layout.data_index(r, c);
    };
    for (int i = -1; i < d; i++) {
        for (int j = -1; j < d; j++) {
            PauliType type = ((i + j) % 2 + 2) % 2 == 0 ? PauliType::kX : PauliType::kZ;
            bool top_or_bottom = i == -1 || i == d - 1;
            bool left_or_right = j == -1 || j == d - 1;
            if (top_or_bottom && left_or_right) {
                continue;
            }
            if (top_or_bottom && type != PauliType::kX) {
                continue;
            }
            if (left_or_right && type != PauliType::kZ) {
                continue;
            }
            Stabiliser s{type, i, j, {}, {}};
            s.corners = {
                index_or_missing(i, j),
                index_or_missing(i, j + 1),
                index_or_missing(i + 1, j),
                index_or_missing(i + 1, j + 1),
            };
            for (int q : s.corners) {
                if (q >= 0) {
                    s.support.push_back(q);
                }
            }
            std::sort(s.support.begin(), s.support.end());
            if (type == PauliType::kX) {
                layout.x_stabilisers.push_back(std::move(s));
            } else {
                layout.z_stabilisers.push_back(std::move(s));
            }
        }
    }

    for (int c = 0; c < d; c++) {
        layout.logical_z.push_back(layout.data_index(0, c));
    }
    for (int r = 0; r < d; r++) {
        layout.logical_x.push_back(layout.data_index(r, 0));
    }
    return layout;
}

static nlohmann::json stabilisers_to_json(const std::vector<Stabiliser> &stabs) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto &s : stabs) {
        out.push_back({{"row", s.row}, {"col", s.col}, {"corners", s.corners}, {"support", s.support}});
    }
    return out;
}

nlohmann::json layout_to_json(const CodeLayout &layout) {
    nlohmann::json data = nlohmann::json::array();
    for (const auto &q : layout.data_qubits) {
        data.push_back({q.row, q.col});
    }
    return {
        {"distance", layout.distance},
        {"data_qubits", data},
        {"x_stabilisers", stabilisers_to_json(layout.x_stabilisers)},
        {"z_stabilisers", stabilisers_to_json(layout.z_stabilisers)},
        {"logical_x", layout.logical_x},
        {"logical_z", layout.logical_z},
    };
}

static std::vector<Stabiliser> stabilisers_from_json(const nlohmann::json &j, PauliType type) {
    std::vector<Stabiliser> out;
    for (const auto &e : j) {
        Stabiliser s{type, e.at("row").get<int>(), e.at("col").get<int>(), {}, {}};
        s.corners = e.at("corners").get<std::array<int, 4>>();
        s.support = e.at("support").get<std::vector<int>>();
        out.push_back(std::move(s));
    }
    return out;
}

CodeLayout layout_from_json(const nlohmann::json &j) {
    CodeLayout layout;
    layout.distance = j.at("distance").get<int>();
    for (const auto &q : j.at("data_qubits")) {
        layout.data_qubits.push_back({q.at(0).get<int>(), q.at(1).get<int>()});
    }
    layout.x_stabilisers = stabilisers_from_json(j.at("x_stabilisers"), PauliType::kX);
    layout.z_stabilisers = stabilisers_from_json(j.at("z_stabilisers"), PauliType::kZ);
    layout.logical_x = j.at("logical_x").get<std::vector<int>>();
    layout.logical_z = j.at("logical_z").get<std::vector<int>>();
    return layout;
}

}  // namespace snakes
