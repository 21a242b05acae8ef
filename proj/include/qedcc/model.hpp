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

#ifndef QEDCC_MODEL_HPP
#define QEDCC_MODEL_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "qedcc/types.hpp"

namespace qedcc {

// One failed invariant found by validate().
struct Violation {
  std::string invariant;  // short name of the broken rule
  std::string detail;     // human-readable location / worst offender
  double magnitude = 0.0; // size of the deviation where meaningful
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

struct ValidateOptions {
  double hermiticity_tolerance = 1e-10;
  double antisymmetry_tolerance = 1e-10;
  // A negative-sector level must sit at or below -2mc^2 + gap_tolerance.
  // Negative values mean "use 0.1 * mc^2".
  double gap_tolerance = -1.0;
};

// Report-only structural and numeric invariant checks; never throws on a
// merely invalid system.
ValidationReport validate(const ModelSystem& system,
                          const ValidateOptions& options = {});

// Independent-particle reference energy of the Coulomb channel:
//   sum_i f_i h_ext[i][i] + 1/2 sum_ij f_i f_j <ij||ij>
// over occupied levels. Throws if occupied levels or required integrals are
// missing or ill-shaped.
double reference_energy(const ModelSystem& system);

// Reference expectation value of a single optional channel (breit or
// hyperfine). Enabling a channel whose integrals are absent is a
// configuration error.
enum class ReferenceChannel { breit, hyperfine };
double channel_reference_energy(const ModelSystem& system, ReferenceChannel channel);

// Block-diagonal direct sum of n_units non-interacting copies of unit.
// Level indices of copy k are offset by k * unit.n_levels(); no cross-copy
// integrals are created.
ModelSystem replicate(const ModelSystem& unit, std::size_t n_units);

// On-the-fly channel-summed view of a system's Hamiltonian. The Breit channel
// is projected onto all-positive index quadruples; per-level radiative shifts
// enter the one-body diagonal when the lamb channel is enabled.
class WorkingHamiltonian {
 public:
  WorkingHamiltonian(const ModelSystem& system, const ChannelSet& channels);

  std::size_t dim() const { return system_->n_levels(); }
  const ModelSystem& system() const { return *system_; }
  const ChannelSet& channels() const { return channels_; }

  Complex one_body(std::size_t p, std::size_t q) const;
  Complex two_body(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const;

  // Fock matrix of the channel sum: f_pq = h_pq + sum_k f_k <pk||qk>.
  Matrix fock_matrix() const;

 private:
  const ModelSystem* system_;
  ChannelSet channels_;
  std::vector<bool> positive_;  // sector mask for the Breit projection
};

}  // namespace qedcc

#endif
