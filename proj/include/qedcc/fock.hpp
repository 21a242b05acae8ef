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

#ifndef QEDCC_FOCK_HPP
#define QEDCC_FOCK_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "qedcc/amplitudes.hpp"
#include "qedcc/model.hpp"

namespace qedcc::fock {

// Occupation bitstring over at most 256 levels with the ascending-fill phase
// convention: |d> = a+_{p1} a+_{p2} ... |vac> with p1 < p2 < ..., and each
// creation/annihilation picks up (-1)^(number of occupied levels below it).
class Determinant {
 public:
  static constexpr std::size_t kMaxLevels = 256;

  Determinant() : words_{} {}
  static Determinant from_indices(const std::vector<std::size_t>& levels);

  bool occupied(std::size_t p) const {
    return (words_[p >> 6] >> (p & 63)) & 1u;
  }
  std::size_t count() const;
  std::vector<std::size_t> occupied_indices() const;

  // Applies a+_p / a_p in place; returns the phase (+1/-1) or 0 when the
  // action annihilates the state (Pauli blocking / empty level).
  int create(std::size_t p);
  int annihilate(std::size_t p);

  bool operator==(const Determinant& o) const { return words_ == o.words_; }
  bool operator<(const Determinant& o) const;

  std::string to_string(std::size_t n_levels) const;

 private:
  std::array<std::uint64_t, 4> words_;
  int parity_below(std::size_t p) const;
  friend struct DeterminantHash;
};

struct DeterminantHash {
  std::size_t operator()(const Determinant& d) const;
};

enum class GenerationRule { full, doubles_only, doubles_plus_pair, custom };

// Ordered determinant basis. Enumerated spaces are sorted by excitation rank
// from the reference, then lexicographically; custom spaces keep caller
// order (after a duplicate check).
struct CISpace {
  std::vector<Determinant> determinants;
  GenerationRule rule = GenerationRule::custom;

  std::size_t size() const { return determinants.size(); }
  // Index of a determinant, or nullopt.
  std::optional<std::size_t> find(const Determinant& d) const;
};

inline constexpr std::size_t kDefaultDeterminantCap = 200000;

// Builds the determinant space for a system. doubles_only keeps the
// reference plus all double replacements into positive-sector virtuals;
// doubles_plus_pair additionally keeps double replacements with one or two
// negative-sector targets that couple to the reference through the two-body
// tensors (zero-coupled pair rows carry no first-order amplitude and are
// omitted). Spaces larger than `cap` are capacity errors.
CISpace enumerate(const ModelSystem& system, GenerationRule rule,
                  std::size_t cap = kDefaultDeterminantCap);

// Reference determinant: all occupied_in_reference levels filled ascending.
Determinant reference_determinant(const ModelSystem& system);

// Slater-Condon matrix element <d1|H|d2> of the channel-summed Hamiltonian.
Complex matrix_element(const Determinant& d1, const Determinant& d2,
                       const ModelSystem& system, const ChannelSet& channels);

// Dense Hamiltonian over a space.
Matrix build_matrix(const CISpace& space, const ModelSystem& system,
                    const ChannelSet& channels);

struct EigenSolution {
  std::vector<double> eigenvalues;  // ascending
  Matrix eigenvectors;              // columns, orthonormal
};

// Dense Hermitian diagonalization of the channel Hamiltonian over `space`.
// Rejects matrices that are non-Hermitian beyond `hermiticity_tolerance`.
EigenSolution diagonalize(const CISpace& space, const ModelSystem& system,
                          const ChannelSet& channels,
                          double hermiticity_tolerance = 1e-10);

// Coefficient vector of exp(T)|reference> truncated at `order_cap` powers of
// the cluster operator, together with the space it spans.
struct ClusterExpansion {
  CISpace space;
  Vector coefficients;
};

ClusterExpansion apply_cluster(const Amplitudes& amplitudes,
                               const Determinant& reference,
                               std::size_t order_cap,
                               std::size_t n_levels,
                               std::size_t cap = kDefaultDeterminantCap);

// Matrix of the cluster operator over an explicit space (strictly exciting,
// hence nilpotent on any finite space closed under T).
Matrix cluster_matrix(const Amplitudes& amplitudes, const CISpace& space);

// exp(M) for a nilpotent matrix via its terminating power series.
Matrix nilpotent_exp(const Matrix& m);

struct TransformedHamiltonian {
  CISpace space;       // full determinant space of the system
  Matrix matrix;       // exp(-T) H exp(T)
};

// Exact similarity transform of the channel Hamiltonian over the full
// determinant space. Spectrum-preserving by construction.
TransformedHamiltonian similarity_transform(const Amplitudes& amplitudes,
                                            const ModelSystem& system,
                                            const ChannelSet& channels,
                                            std::size_t cap = kDefaultDeterminantCap);

}  // namespace qedcc::fock

#endif
