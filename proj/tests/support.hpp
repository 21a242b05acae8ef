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

#ifndef QEDCC_TESTS_SUPPORT_HPP
#define QEDCC_TESTS_SUPPORT_HPP

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qedcc/fock.hpp"
#include "qedcc/model.hpp"
#include "qedcc/oracle_h2.hpp"

namespace qedcc::testing {

inline std::string fixture_path(const std::string& name) {
#ifdef QEDCC_FIXTURE_DIR
  return std::string(QEDCC_FIXTURE_DIR) + "/" + name;
#else
  return "fixtures/" + name;
#endif
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Random valid closed-level system: n positive-sector levels, the lowest
// n_electrons occupied, complex (or real) Hermitian one-body matrix and a
// two-body tensor with full antisymmetrized-integral symmetry. Level energies
// are spread ~0.7 hartree apart so denominators stay well away from zero.
inline ModelSystem random_system(std::mt19937_64& rng, std::size_t n,
                                 bool complex_valued, std::size_t n_electrons = 2) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  auto draw = [&](double scale) {
    return Complex(scale * unit(rng), complex_valued ? scale * unit(rng) : 0.0);
  };
  ModelSystem sys;
  sys.n_electrons = static_cast<double>(n_electrons);
  for (std::size_t p = 0; p < n; ++p) {
    SpinorLevel level;
    level.index = p;
    level.energy = -1.0 + 0.7 * static_cast<double>(p) + 0.05 * unit(rng);
    level.sector = Sector::positive;
    level.occupied_in_reference = p < n_electrons;
    sys.levels.push_back(level);
  }

  // Fill <pq|rs> one symmetry orbit at a time (pair swap + hermiticity);
  // entries whose hermitian image aliases themselves or their pair-swap image
  // must be real.
  Tensor4& v = sys.integrals.v_coulomb;
  v = Tensor4(n);
  std::vector<bool> seen(n * n * n * n, false);
  std::vector<Complex> g(n * n * n * n, Complex(0, 0));
  auto gi = [&](std::size_t p, std::size_t q, std::size_t r, std::size_t s) {
    return ((p * n + q) * n + r) * n + s;
  };
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) {
          if (seen[gi(p, q, r, s)]) continue;
          Complex z = draw(0.08);
          if ((r == p && s == q) || (q == r && p == s)) z = Complex(z.real(), 0.0);
          g[gi(p, q, r, s)] = z;
          g[gi(q, p, s, r)] = z;
          g[gi(r, s, p, q)] = std::conj(z);
          g[gi(s, r, q, p)] = std::conj(z);
          seen[gi(p, q, r, s)] = seen[gi(q, p, s, r)] = true;
          seen[gi(r, s, p, q)] = seen[gi(s, r, q, p)] = true;
        }
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s)
          v(p, q, r, s) = g[gi(p, q, r, s)] - g[gi(p, q, s, r)];

  Matrix& h = sys.integrals.h_ext;
  h = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p; q < n; ++q) {
      Complex z = p == q ? Complex(sys.levels[p].energy, 0.0) : draw(0.05);
      h(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) = z;
      h(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(p)) = std::conj(z);
    }
  return sys;
}

// Ground-state shift of the full CI problem below the reference energy.
inline double fci_ground_shift(const ModelSystem& sys, const ChannelSet& channels) {
  const auto space = fock::enumerate(sys, fock::GenerationRule::full);
  const auto eig = fock::diagonalize(space, sys, channels);
  return eig.eigenvalues.front() - reference_energy(sys);
}

// FCI eigenvalue of the root whose eigenvector is dominated by the reference
// determinant (the coupled-cluster-comparable root when low-lying sectors
// exist below the reference).
inline double fci_reference_dominant_energy(const ModelSystem& sys,
                                            const ChannelSet& channels) {
  const auto space = fock::enumerate(sys, fock::GenerationRule::full);
  const auto eig = fock::diagonalize(space, sys, channels);
  const auto at = space.find(fock::reference_determinant(sys));
  if (!at) throw std::runtime_error("reference determinant missing from space");
  const Eigen::Index row = static_cast<Eigen::Index>(*at);
  Eigen::Index best = 0;
  double best_w = -1.0;
  for (Eigen::Index k = 0; k < eig.eigenvectors.cols(); ++k) {
    const double w = std::abs(eig.eigenvectors(row, k));
    if (w > best_w) {
      best_w = w;
      best = k;
    }
  }
  return eig.eigenvalues[static_cast<std::size_t>(best)];
}

inline oracle_h2::H2UnitParams mid_params() {
  oracle_h2::H2UnitParams p;
  p.eps1 = -0.6;
  p.eps2 = 0.3;
  p.j11 = 0.65;
  p.j22 = 0.62;
  p.j12 = 0.6;
  p.k12 = 0.15;
  p.jb11 = 0.004;
  p.jb22 = 0.0052;
  p.kb12 = 0.0021;
  return p;
}

struct NamedParams {
  std::string name;
  oracle_h2::H2UnitParams params;
};

// The shipped two-orbital fixtures; coupling-to-gap ratios k12/delta_dc span
// [1e-3, 0.5]. Values mirror fixtures/h2_unit_<name>.json.
inline std::vector<NamedParams> fixture_params() {
  auto make = [](double j11, double j22, double j12, double k12, double jb11,
                 double jb22, double kb12) {
    oracle_h2::H2UnitParams p;
    p.eps1 = -0.6;
    p.eps2 = 0.3;
    p.j11 = j11;
    p.j22 = j22;
    p.j12 = j12;
    p.k12 = k12;
    p.jb11 = jb11;
    p.jb22 = jb22;
    p.kb12 = kb12;
    return p;
  };
  return {
      {"tiny_k", make(0.7, 0.699, 0.55, 0.0005, 0.003, 0.0034, 0.0012)},
      {"low", make(0.63, 0.57, 0.55, 0.01, 0.005, 0.0056, 0.0018)},
      {"fifth", make(0.63, 0.57, 0.55, 0.1, 0.0045, 0.005, 0.002)},
      {"mid", mid_params()},
      {"half", make(0.61, 0.59, 0.65, 0.2, 0.006, 0.0066, 0.0025)},
  };
}

}  // namespace qedcc::testing

#endif
