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

#include "geometry.hpp"

#include <algorithm>
#include <map>

namespace mccd {

namespace {

// Corner order per basis, chosen so that no data qubit is touched twice in
// the same sub-step (Z plaquettes zigzag N,W,E,S; X plaquettes N,E,W,S).
// Corners of cell (i, j): NW=(i-1,j-1) NE=(i-1,j) SW=(i,j-1) SE=(i,j).
constexpr int kOrderZ[4][2] = {{-1, -1}, {0, -1}, {-1, 0}, {0, 0}};   // NW SW NE SE
constexpr int kOrderX[4][2] = {{-1, -1}, {-1, 0}, {0, -1}, {0, 0}};   // NW NE SW SE

bool in_grid(int d, int r, int c) { return r >= 0 && r < d && c >= 0 && c < d; }

}  // namespace

CodeLayout build_layout(int distance) {
    require(distance >= 3 && distance % 2 == 1, ErrorCode::invalid_argument,
            "code distance must be an odd integer >= 3, got " + std::to_string(distance));
    const int d = distance;
    CodeLayout lay;
    lay.distance = d;
    lay.data_coords.reserve(size_t(d) * d);
    for (int r = 0; r < d; r++)
        for (int c = 0; c < d; c++) lay.data_coords.emplace_back(r, c);

    // Walk all candidate plaquette cells; keep interior cells plus the
    // boundary cells whose basis matches the edge rule (X stabilizers on the
    // left/right edges, Z on top/bottom).
    std::vector<Stabilizer> zs, xs;
    for (int i = 0; i <= d; i++) {
        for (int j = 0; j <= d; j++) {
            StabBasis basis = ((i + j) % 2 == 0) ? StabBasis::Z : StabBasis::X;
            const int(*order)[2] = (basis == StabBasis::Z) ? kOrderZ : kOrderX;
            Stabilizer s;
            s.basis = basis;
            s.cell_row = i;
            s.cell_col = j;
            int weight = 0;
            for (int k = 0; k < 4; k++) {
                int r = i + order[k][0], c = j + order[k][1];
                if (in_grid(d, r, c)) {
                    s.substep[k] = lay.data_index(r, c);
                    weight++;
                } else {
                    s.substep[k] = -1;
                }
            }
            if (weight == 4) {
                // interior plaquette
            } else if (weight == 2) {
                bool lr_edge = (j == 0 || j == d);
                bool keep = (basis == StabBasis::X) ? lr_edge : !lr_edge;
                if (!keep) continue;
            } else {
                continue;  // corner cells
            }
            for (int k = 0; k < 4; k++)
                if (s.substep[k] >= 0) s.support.push_back(s.substep[k]);
            (basis == StabBasis::Z ? zs : xs).push_back(std::move(s));
        }
    }
    lay.num_z = int(zs.size());
    lay.stabilizers = std::move(zs);
    lay.stabilizers.insert(lay.stabilizers.end(), xs.begin(), xs.end());

    for (int r = 0; r < d; r++) lay.logical_z_support.push_back(lay.data_index(r, 0));
    for (int c = 0; c < d; c++) lay.logical_x_support.push_back(lay.data_index(0, c));

    lay.h_rotation_perm.resize(size_t(d) * d);
    for (int r = 0; r < d; r++)
        for (int c = 0; c < d; c++)
            lay.h_rotation_perm[lay.data_index(r, c)] = lay.data_index(c, d - 1 - r);

    // Partner across an H layer: the cell map of the rotation is
    // (i, j) -> (j, d - i); a stabilizer measured after the H flows from the
    // opposite-basis stabilizer at the preimage cell (d - j, i).
    std::map<std::tuple<int, int, int>, int> by_cell;
    for (int s = 0; s < lay.num_stabilizers(); s++) {
        const auto &st = lay.stabilizers[s];
        by_cell[{int(st.basis), st.cell_row, st.cell_col}] = s;
    }
    lay.h_flow_partner.resize(lay.stabilizers.size());
    for (int s = 0; s < lay.num_stabilizers(); s++) {
        const auto &st = lay.stabilizers[s];
        int pb = 1 - int(st.basis);
        auto it = by_cell.find({pb, d - st.cell_col, st.cell_row});
        require(it != by_cell.end(), ErrorCode::internal, "H flow partner missing");
        lay.h_flow_partner[s] = it->second;
    }
    return lay;
}

bool check_commutation(const CodeLayout &lay) {
    const int d = lay.distance;
    if (d < 3 || d % 2 == 0) return false;
    if (int(lay.data_coords.size()) != d * d) return false;
    if (lay.num_stabilizers() != d * d - 1) return false;
    int nz = 0, nx = 0;
    for (const auto &s : lay.stabilizers) {
        if (s.support.size() != 2 && s.support.size() != 4) return false;
        for (int q : s.support)
            if (q < 0 || q >= d * d) return false;
        (s.basis == StabBasis::Z ? nz : nx)++;
    }
    if (nz != (d * d - 1) / 2 || nx != nz) return false;

    auto overlap = [](const std::vector<int> &a, const std::vector<int> &b) {
        int n = 0;
        for (int q : a)
            for (int p : b)
                if (q == p) n++;
        return n;
    };
    // Anticommutation can only arise between operators of opposite basis.
    for (const auto &sz : lay.stabilizers) {
        if (sz.basis != StabBasis::Z) continue;
        for (const auto &sx : lay.stabilizers) {
            if (sx.basis != StabBasis::X) continue;
            if (overlap(sz.support, sx.support) % 2 != 0) return false;
        }
    }
    if (int(lay.logical_z_support.size()) != d) return false;
    if (int(lay.logical_x_support.size()) != d) return false;
    for (const auto &s : lay.stabilizers) {
        const auto &lsup =
            (s.basis == StabBasis::X) ? lay.logical_z_support : lay.logical_x_support;
        if (overlap(s.support, lsup) % 2 != 0) return false;
    }
    if (overlap(lay.logical_z_support, lay.logical_x_support) % 2 != 1) return false;
    return true;
}

}  // namespace mccd
