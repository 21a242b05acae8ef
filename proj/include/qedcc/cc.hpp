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

#ifndef QEDCC_CC_HPP
#define QEDCC_CC_HPP

#include <string>

#include "qedcc/amplitudes.hpp"
#include "qedcc/model.hpp"
#include "qedcc/qed.hpp"

namespace qedcc::cc {

// How the negative-sector (pair) channels enter the solve.
//   none      - ignore negative levels entirely.
//   decoupled - solve in the positive sector, then add first-order pair
//               amplitudes and their second-order energies.
//   coupled   - extend the doubles target space by the negative levels and
//               relax everything self-consistently.
enum class PairMode { none, decoupled, coupled };

std::string to_string(PairMode mode);
PairMode pair_mode_from_string(const std::string& name);

struct SolverOptions {
  int max_iterations = 500;
  double damping = 0.5;              // in [0,1): fraction of the old iterate kept
  double residual_tolerance = 1e-10; // max-norm over all residual entries
  double energy_tolerance = 1e-12;   // |energy change| between sweeps
  double level_shift = 0.0;          // added to |denominator|, sign-preserving
  PairMode pair_mode = PairMode::decoupled;
  qed::PairDenominator pair_denominator = qed::PairDenominator::exact;
};

struct CorrelationReport {
  std::string method;  // "mp2", "dci", "ccd" or "ccsd"
  ChannelSet channels;
  bool converged = false;
  int iterations = 0;
  double residual_norm = 0.0;
  double e_reference = 0.0;  // Coulomb-only reference energy
  double e_breit0 = 0.0;     // first-order transverse channel
  double e_hf0 = 0.0;        // first-order hyperfine channel
  double e_lamb0 = 0.0;      // radiative level shifts folded at first order
  double e_correl = 0.0;     // positive-sector correlation energy
  double e_1pair = 0.0;      // single pair-creation channel
  double e_2pair = 0.0;      // double pair-creation channel
  // Imaginary residue of the converged correlation energy. Exactly 0 for
  // real integrals and for two-electron (exact-limit) solves; a genuine
  // truncation effect of order |t|^3 for complex Hermitian integrals.
  double e_correl_imag = 0.0;
  Amplitudes amplitudes;

  double e_total() const {
    return e_reference + e_breit0 + e_hf0 + e_lamb0 + e_correl + e_1pair + e_2pair;
  }
};

// Closed-shell doubles-only solve. Requires unit occupancies on the occupied
// levels, at least one occupied and one positive virtual level.
CorrelationReport ccd_solve(const ModelSystem& system, const ChannelSet& channels,
                            const SolverOptions& options = {});

// Closed-shell singles-and-doubles solve via singles-dressed integrals; the
// doubles equations act on the dressed operator so the energy functional is
// exact in the amplitudes.
CorrelationReport ccsd_solve(const ModelSystem& system, const ChannelSet& channels,
                             const SolverOptions& options = {});

// Second-order pair energy over positive-sector doubles with bare level
// denominators. Degenerate denominators are rejected.
double mp2_energy(const ModelSystem& system, const ChannelSet& channels);

// Ground shift of the doubles-CI matrix (reference plus all doubles) below
// the reference expectation value.
double dci_energy(const ModelSystem& system, const ChannelSet& channels,
                  std::size_t determinant_cap = 200000);

namespace detail {

// Solver residuals and energy functional evaluated at fixed amplitudes.
// Exposed so the contraction kernels can be verified term by term against
// brute-force determinant algebra.
struct ResidualProbe {
  Eigen::MatrixXcd r1;  // occupied x virtual singles residual (zero if disabled)
  Eigen::MatrixXcd r2;  // (i*nv+a, j*nv+b) doubles residual over the full grid
  std::vector<std::size_t> occupied;  // row/column level maps
  std::vector<std::size_t> virtuals;
  double e_corr = 0.0;
};

ResidualProbe probe_residuals(const ModelSystem& system, const ChannelSet& channels,
                              const Amplitudes& amplitudes, bool with_singles,
                              PairMode pair_mode);

}  // namespace detail

}  // namespace qedcc::cc

#endif
