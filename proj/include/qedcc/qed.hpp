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

#ifndef QEDCC_QED_HPP
#define QEDCC_QED_HPP

#include <vector>

#include "qedcc/model.hpp"

namespace qedcc::qed {

// Radiative level-shift estimate from weighted sum-over-states data:
//   (2 alpha / 3 pi c^2) sum_t w_t dE_t ln(mc^2 / |dE_t|).
// Terms with |dE| < 1e-10 contribute zero; |dE| >= mc^2 is outside the
// formula's domain.
double lamb_shift(const std::vector<LambTerm>& terms,
                  const PhysicalConstants& constants);

enum class PairDenominator {
  exact,  // occupied-minus-virtual orbital-energy differences
  limit   // 2mc^2 (one-pair) and 4mc^2 (two-pair) static denominators
};

struct PairEnergyOptions {
  PairDenominator denominator = PairDenominator::exact;
  double degeneracy_floor = 1e-8;  // exact-mode |D| below this is an error
};

struct PairEnergyReport {
  double one_pair = 0.0;
  double two_pair = 0.0;
  double total() const { return one_pair + two_pair; }
};

// Second-order pair-creation corrections from the negative-sector entries of
// the Coulomb tensor:
//   one_pair = sum_{i<j} sum_{a,p'} f_i f_j |<a p'||i j>|^2 / D
//   two_pair = sum_{i<j} sum_{p'<q'} f_i f_j |<p' q'||i j>|^2 / D
// with positive denominators (negative-sector virtuals sit below -2mc^2).
// Systems without a negative sector report zeros.
PairEnergyReport pair_energy_mbpt2(const ModelSystem& system,
                                   const PairEnergyOptions& options = {});

// Materializes the channel sum into a plain system: hyperfine and per-level
// radiative shifts fold into the one-body matrix, the positive-sector
// projection of the Breit tensor folds into the two-body tensor, and the
// consumed optional channels are cleared. The scalar lamb_terms data is kept
// for reporting when the lamb channel is enabled.
ModelSystem assemble_channels(const ModelSystem& system, const ChannelSet& channels);

}  // namespace qedcc::qed

#endif
