// Copyright 2026 The MCCD Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <vector>

#include "util.hpp"

namespace mccd {

enum class StabBasis : uint8_t { Z = 0, X = 1 };

/// One stabilizer generator of the rotated surface code. Plaquette centers sit
/// at half-integer coordinates; `cell` is the integer index pair (i, j) of the
/// center (i - 0.5, j - 0.5), with 0 <= i, j <= d.
struct Stabilizer {
    StabBasis basis;
    int cell_row, cell_col;
    // Data-qubit index coupled in interaction sub-step k, or -1 when the
    // plaquette has no qubit at that corner (weight-2 boundary stabilizers).
    std::array<int, 4> substep;
    std::vector<int> support;  // the non-negative entries of substep, in order
};

/// Rotated surface code layout for odd distance d.
///
/// Data qubits live on the integer grid (row, col), 0 <= row, col < d, indexed
/// row-major. Stabilizers are indexed canonically: all Z-type first, then all
/// X-type, each group ordered row-major by plaquette cell. This order fixes
/// the meaning of every detector-vector position downstream.
struct CodeLayout {
    int distance = 0;
    std::vector<std::pair<int, int>> data_coords;  // index -> (row, col)
    std::vector<Stabilizer> stabilizers;           // Z block then X block
    int num_z = 0;                                 // = (d*d - 1) / 2
    std::vector<int> logical_z_support;            // column 0
    std::vector<int> logical_x_support;            // row 0
    // Data-qubit permutation realizing the virtual 90-degree relabel after a
    // transversal H: the state at (r, c) moves to (c, d-1-r).
    std::vector<int> h_rotation_perm;
    // Detector flow across an H layer: stabilizer s measured in the round
    // after the H is paired with h_flow_partner[s] from the previous round.
    std::vector<int> h_flow_partner;

    int num_data() const { return distance * distance; }
    int num_stabilizers() const { return int(stabilizers.size()); }
    int data_index(int r, int c) const { return r * distance + c; }
};

/// Builds the canonical layout for odd d >= 3. Deterministic; throws
/// Error(invalid_argument) for even or too-small d.
CodeLayout build_layout(int distance);

/// True iff all layout invariants hold: qubit/stabilizer counts, even overlap
/// between every X and Z stabilizer pair, logical operators commuting with
/// all stabilizers and anticommuting with each other.
bool check_commutation(const CodeLayout &layout);

}  // namespace mccd
