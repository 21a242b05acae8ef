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

#include "qedcc/qed.hpp"

#include <cmath>

namespace qedcc::qed {

double lamb_shift(const std::vector<LambTerm>& terms,
                  const PhysicalConstants& constants) {
  const double mc2 = constants.mc2();
  double shift = 0.0;
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const auto& term = terms[t];
    if (term.weight < 0.0)
      throw Error(ErrorKind::domain,
                  "lamb term " + std::to_string(t) + " has negative weight");
    const double de = term.delta_e;
    if (std::abs(de) < 1e-10) continue;
    if (std::abs(de) >= mc2)
      throw Error(ErrorKind::domain,
                  "lamb term " + std::to_string(t) +
                      " has |delta_e| >= mc^2, outside the logarithm's domain");
    shift += term.weight * de * std::log(mc2 / std::abs(de));
  }
  return 2.0 * constants.alpha / (3.0 * M_PI * constants.c * constants.c) * shift;
}

PairEnergyReport pair_energy_mbpt2(const ModelSystem& system,
                                   const PairEnergyOptions& options) {
  PairEnergyReport report;
  const auto neg = system.negative_indices();
  if (neg.empty()) return report;

  if (system.integrals.v_coulomb.dim() != system.n_levels())
    throw Error(ErrorKind::structural, "v_coulomb is absent or ill-shaped");

  const auto occ = system.occupied_indices();
  const auto virt = system.positive_virtual_indices();
  const auto& v = system.integrals.v_coulomb;
  const double mc2 = system.constants.mc2();

  auto exact_denominator = [&](std::size_t i, std::size_t j, std::size_t A,
                               std::size_t B) {
    const double d = system.levels[i].energy + system.levels[j].energy -
                     system.levels[A].energy - system.levels[B].energy;
    if (std::abs(d) < options.degeneracy_floor)
      throw Error(ErrorKind::degenerate,
                  "degenerate pair denominator for (i,j,A,B) = (" +
                      std::to_string(i) + "," + std::to_string(j) + "," +
                      std::to_string(A) + "," + std::to_string(B) + ")");
    return d;
  };

  for (std::size_t ii = 0; ii < occ.size(); ++ii)
    for (std::size_t jj = ii + 1; jj < occ.size(); ++jj) {
      const std::size_t i = occ[ii], j = occ[jj];
      const double ff = system.levels[i].occupancy * system.levels[j].occupancy;
      for (auto a : virt)
        for (auto p : neg) {
          const double num = std::norm(v(a, p, i, j));
          if (num == 0.0) continue;
          const double d = options.denominator == PairDenominator::exact
                               ? exact_denominator(i, j, a, p)
                               : 2.0 * mc2;
          report.one_pair += ff * num / d;
        }
      for (std::size_t pp = 0; pp < neg.size(); ++pp)
        for (std::size_t qq = pp + 1; qq < neg.size(); ++qq) {
          const std::size_t p = neg[pp], q = neg[qq];
          const double num = std::norm(v(p, q, i, j));
          if (num == 0.0) continue;
          const double d = options.denominator == PairDenominator::exact
                               ? exact_denominator(i, j, p, q)
                               : 4.0 * mc2;
          report.two_pair += ff * num / d;
        }
    }
  return report;
}

ModelSystem assemble_channels(const ModelSystem& system, const ChannelSet& channels) {
  // Constructor validates presence of every enabled channel.
  const WorkingHamiltonian h(system, channels);
  const std::size_t n = system.n_levels();

  ModelSystem out;
  out.constants = system.constants;
  out.levels = system.levels;
  out.n_electrons = system.n_electrons;

  out.integrals.h_ext = Matrix(n, n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      out.integrals.h_ext(p, q) = h.one_body(p, q);

  out.integrals.v_coulomb = Tensor4(n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s)
          out.integrals.v_coulomb(p, q, r, s) = h.two_body(p, q, r, s);

  // Per-level shifts were folded into the diagonal above; clear them so the
  // assembled system cannot double-count.
  for (auto& level : out.levels) level.lamb_shift = 0.0;
  if (channels.lamb) out.integrals.lamb_terms = system.integrals.lamb_terms;

  return out;
}

}  // namespace qedcc::qed
