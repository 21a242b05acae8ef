/*
 * Copyright 2026 The qedcc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef QEDCC_ORACLE_H2_HPP
#define QEDCC_ORACLE_H2_HPP

#include "qedcc/model.hpp"

namespace qedcc::oracle_h2 {

// Parameters of the two-spatial-orbital closed-shell unit: orbital energies
// eps1 < eps2, direct/exchange Coulomb integrals, and their transverse
// (Breit-channel) analogues.
struct H2UnitParams {
  double eps1 = 0.0;
  double eps2 = 0.0;
  double j11 = 0.0;
  double j22 = 0.0;
  double j12 = 0.0;
  double k12 = 0.0;
  double jb11 = 0.0;
  double jb22 = 0.0;
  double kb12 = 0.0;
};

// Half of the reference -> doubly-excited diagonal gap in the Coulomb-only
// unit: (eps2 - eps1) + (j11 + j22)/2 - 2 j12 + k12. Must be positive.
double delta_dc(const H2UnitParams& params);

// Same gap with the transverse channel folded in: delta_dc + (jb22 - jb11)/2.
double delta_dcb(const H2UnitParams& params);

struct PairState {
  double energy = 0.0;       // ground-state shift below the reference
  double coefficient = 0.0;  // doubles coefficient of the ground state
};

// Exact 2x2 ground-state correlation energy per unit, Coulomb only:
//   delta - sqrt(delta^2 + k12^2), coefficient energy / k12.
PairState correl_dc(const H2UnitParams& params);

// Same with the transverse channel: gap delta_dcb, coupling k12 + kb12.
PairState correl_dcb(const H2UnitParams& params);

// Leading-order expansion of correl_dcb.energy - correl_dc.energy in the
// small transverse integrals:
//   -[kb(2k + kb) - k^2 (jb22 - jb11)/(2 delta)]
//     * [1 - (jb22 - jb11)/(2 delta)] / (2 delta).
double breit_correction_leading(const H2UnitParams& params);

// Per-unit ground shift of the doubles-CI matrix over n_units replicas:
//   n^-1 [delta - sqrt(delta^2 + n k12^2)]. Not size-extensive by design.
double dci_per_unit(const H2UnitParams& params, std::size_t n_units);

// Second-order per-unit correlation energy: -k12^2 / (2 (eps2 - eps1)).
double mp2_per_unit(const H2UnitParams& params);

struct BuildUnitOptions {
  bool include_negative = false;
  double eta_one_pair = 1e-3;  // pair-creation integral scale <a p'||i j>
  double eta_two_pair = 1e-3;  // pair-creation integral scale <p' q'||i j>
  PhysicalConstants constants;
};

// Materializes the unit as a ModelSystem: four positive spin levels (two
// occupied), optionally four negative-sector levels at
// -2mc^2 - (eps1 + eps2)/2, with spin-resolved antisymmetrized tensors built
// from the spatial integral table. The one-body diagonal is chosen so the
// Fock diagonal reproduces the level energies exactly.
ModelSystem build_unit(const H2UnitParams& params, const BuildUnitOptions& options = {});

}  // namespace qedcc::oracle_h2

#endif
