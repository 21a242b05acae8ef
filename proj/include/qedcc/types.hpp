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

#ifndef QEDCC_TYPES_HPP
#define QEDCC_TYPES_HPP

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qedcc/errors.hpp"

namespace qedcc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Atomic units throughout (hbar = 1, |e| = 1, m_e = 1 unless overridden).
struct PhysicalConstants {
  double alpha = 7.2973525693e-3;   // fine-structure constant
  double c = 1.0 / 7.2973525693e-3; // speed of light, must satisfy c*alpha == 1
  double m = 1.0;                   // particle mass
  double z_scale = 1.0;             // nuclear charge scaling for model potentials

  double mc2() const { return m * c * c; }
};

enum class Sector { positive, negative };

const char* to_string(Sector s);

// One spinor basis level of a model system.
struct SpinorLevel {
  std::size_t index = 0;            // position in the basis ordering
  double energy = 0.0;              // orbital energy, hartree
  Sector sector = Sector::positive;
  bool occupied_in_reference = false;
  double occupancy = 1.0;           // fractional occupancy f in [0, 1]
  double lamb_shift = 0.0;          // optional per-level radiative level shift
};

// Dense rank-4 complex tensor over one basis dimension n; index order matches
// antisymmetrized two-body matrix elements <pq||rs> -> (p, q, r, s).
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(std::size_t n) : n_(n), data_(n * n * n * n, Complex(0, 0)) {}

  std::size_t dim() const { return n_; }
  bool empty() const { return n_ == 0; }

  Complex& operator()(std::size_t p, std::size_t q, std::size_t r, std::size_t s) {
    return data_[((p * n_ + q) * n_ + r) * n_ + s];
  }
  const Complex& operator()(std::size_t p, std::size_t q, std::size_t r,
                            std::size_t s) const {
    return data_[((p * n_ + q) * n_ + r) * n_ + s];
  }

  const std::vector<Complex>& data() const { return data_; }
  std::vector<Complex>& data() { return data_; }

 private:
  std::size_t n_ = 0;
  std::vector<Complex> data_;
};

// Weighted excitation line for radiative level-shift sums: weight w >= 0 and a
// transition energy delta_e (hartree).
struct LambTerm {
  double weight = 0.0;
  double delta_e = 0.0;
};

// Channel-resolved integrals. An empty matrix/tensor means the channel is
// absent from the model (distinct from present-but-zero).
struct IntegralSet {
  Matrix h_ext;                  // one-body external-field matrix, required
  Matrix h_hf;                   // one-body hyperfine matrix, optional
  Tensor4 v_coulomb;             // antisymmetrized <pq||rs>, required
  Tensor4 v_breit;               // antisymmetrized <pq||rs>_B, optional
  std::vector<LambTerm> lamb_terms;  // optional radiative sum-over-states data

  bool has_hyperfine() const { return h_hf.size() > 0; }
  bool has_breit() const { return !v_breit.empty(); }
  bool has_lamb() const { return !lamb_terms.empty(); }
};

struct ModelSystem {
  PhysicalConstants constants;
  std::vector<SpinorLevel> levels;
  IntegralSet integrals;
  double n_electrons = 0.0;

  std::size_t n_levels() const { return levels.size(); }

  // Occupied / positive-virtual / negative-sector index lists, ascending.
  std::vector<std::size_t> occupied_indices() const;
  std::vector<std::size_t> positive_virtual_indices() const;
  std::vector<std::size_t> negative_indices() const;
  bool has_negative_sector() const;

  // Electron count as an integer; throws ErrorKind::structural when the
  // stored count is not integral within 1e-9.
  std::size_t integer_electron_count() const;
};

// Hamiltonian channel toggles. The external one-body field is always active;
// coulomb is on by default.
struct ChannelSet {
  bool coulomb = true;
  bool breit = false;
  bool hyperfine = false;
  bool lamb = false;

  static ChannelSet coulomb_only() { return ChannelSet{}; }
  static ChannelSet all() { return ChannelSet{true, true, true, true}; }

  // Parses a comma-separated list such as "coulomb,breit"; unknown names are
  // argument errors.
  static ChannelSet parse(const std::string& csv);
  std::string to_string() const;

  bool operator==(const ChannelSet&) const = default;
};

}  // namespace qedcc

#endif
