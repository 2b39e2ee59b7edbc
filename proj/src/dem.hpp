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

#include "compiler.hpp"
#include "dataset.hpp"
#include "frame_sim.hpp"
#include "tableau_sim.hpp"

namespace mccd {

/// One independent fault mechanism: with probability p it fires and flips the
/// detector set `dets` and the logical-observable set `obs`. Correlated
/// faults (e.g. through a transversal CNOT) make this a hypergraph.
struct Fault {
    double p;
    BitVec dets;
    BitVec obs;
};

struct DetectorErrorModel {
    int num_detectors = 0;
    int num_observables = 0;
    std::vector<Fault> faults;
};

/// Walks every annotated noise site, injects each nonzero Pauli component
/// into a fresh frame, propagates it to the circuit end, and reads off the
/// flipped detectors/observables. Duplicate (dets, obs) signatures merge with
/// p = pa(1-pb) + pb(1-pa); trivial faults (nothing flipped) are dropped.
DetectorErrorModel extract_dem(const PhysicalCircuit &circuit, const DetectorMap &dmap);

/// Canonical text dump, one fault per line: `p D:{i,...} L:{j,...}`.
std::string dem_to_text(const DetectorErrorModel &dem);

struct MleResult {
    BitVec observable_flips;
    bool found = false;       // false: no subset matched; prediction is no-flip
    double log_probability;   // of the chosen fault configuration
};

/// Brute-force most-likely-error decoding: finds the highest-probability
/// subset of at most `max_weight` faults whose detector XOR reproduces the
/// observation. Guarded: C(faults, max_weight) must not exceed 10^7.
MleResult mle_decode(const DetectorErrorModel &dem, const BitVec &detectors, int max_weight);

/// Samples faults independently; returns their XORed (detectors, observables).
void dem_sample(const DetectorErrorModel &dem, Rng &rng, BitVec *dets, BitVec *obs);

/// Detector bit vector of a trajectory in the DEM's index linearization.
BitVec trajectory_detectors(const SyndromeTrajectory &t);

}  // namespace mccd
