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

#include "qedcc/oracle_h2.hpp"

#include <cmath>
#include <vector>

#include "qedcc/errors.hpp"

namespace qedcc::oracle_h2 {
namespace {

void check_params(const H2UnitParams& params) {
  if (!(params.eps2 > params.eps1)) {
    throw Error(ErrorKind::domain, "h2 unit requires eps2 > eps1");
  }
  if (!(delta_dc(params) > 0.0)) {
    throw Error(ErrorKind::domain, "h2 unit requires a positive pair gap delta");
  }
}

PairState two_by_two(double delta, double coupling) {
  PairState state;
  state.energy = delta - std::sqrt(delta * delta + coupling * coupling);
  state.coefficient = coupling == 0.0 ? 0.0 : state.energy / coupling;
  return state;
}

// Dense chemist-notation spatial integral table with the eightfold symmetry
// of real orbitals baked in at assignment time.
class ChemTable {
 public:
  explicit ChemTable(std::size_t n) : n_(n), data_(n * n * n * n, 0.0) {}

  double operator()(std::size_t p, std::size_t q, std::size_t r, std::size_t s) const {
    return data_[((p * n_ + q) * n_ + r) * n_ + s];
  }

  void set(std::size_t p, std::size_t q, std::size_t r, std::size_t s, double value) {
    at(p, q, r, s) = value;
    at(q, p, r, s) = value;
    at(p, q, s, r) = value;
    at(q, p, s, r) = value;
    at(r, s, p, q) = value;
    at(s, r, p, q) = value;
    at(r, s, q, p) = value;
    at(s, r, q, p) = value;
  }

 private:
  double& at(std::size_t p, std::size_t q, std::size_t r, std::size_t s) {
    return data_[((p * n_ + q) * n_ + r) * n_ + s];
  }

  std::size_t n_;
  std::vector<double> data_;
};

// Antisymmetrized spin-orbital tensor from a spatial table. Spin orbital
// p = 2 * spatial + spin; <pq||rs> = (pr|qs) d(sp,sr) d(sq,ss)
//                                  - (ps|qr) d(sp,ss) d(sq,sr).
Tensor4 spin_tensor(const ChemTable& chem, std::size_t n_spatial) {
  const std::size_t n = 2 * n_spatial;
  Tensor4 v(n);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t s = 0; s < n; ++s) {
          double value = 0.0;
          if (p % 2 == r % 2 && q % 2 == s % 2) {
            value += chem(p / 2, r / 2, q / 2, s / 2);
          }
          if (p % 2 == s % 2 && q % 2 == r % 2) {
            value -= chem(p / 2, s / 2, q / 2, r / 2);
          }
          v(p, q, r, s) = Complex(value, 0.0);
        }
      }
    }
  }
  return v;
}

}  // namespace

double delta_dc(const H2UnitParams& params) {
  return (params.eps2 - params.eps1) + 0.5 * (params.j11 + params.j22) - 2.0 * params.j12 +
         params.k12;
}

double delta_dcb(const H2UnitParams& params) {
  return delta_dc(params) + 0.5 * (params.jb22 - params.jb11);
}

PairState correl_dc(const H2UnitParams& params) {
  check_params(params);
  return two_by_two(delta_dc(params), params.k12);
}

PairState correl_dcb(const H2UnitParams& params) {
  check_params(params);
  return two_by_two(delta_dcb(params), params.k12 + params.kb12);
}

double breit_correction_leading(const H2UnitParams& params) {
  check_params(params);
  const double delta = delta_dc(params);
  const double k = params.k12;
  const double kb = params.kb12;
  const double dj = 0.5 * (params.jb22 - params.jb11) / delta;
  return -(kb * (2.0 * k + kb) - k * k * dj) * (1.0 - dj) / (2.0 * delta);
}

double dci_per_unit(const H2UnitParams& params, std::size_t n_units) {
  check_params(params);
  if (n_units == 0) {
    throw Error(ErrorKind::argument, "dci_per_unit requires at least one unit");
  }
  const double delta = delta_dc(params);
  const double n = static_cast<double>(n_units);
  return (delta - std::sqrt(delta * delta + n * params.k12 * params.k12)) / n;
}

double mp2_per_unit(const H2UnitParams& params) {
  check_params(params);
  return -params.k12 * params.k12 / (2.0 * (params.eps2 - params.eps1));
}

ModelSystem build_unit(const H2UnitParams& params, const BuildUnitOptions& options) {
  check_params(params);
  ModelSystem system;
  system.constants = options.constants;

  // Spatial orbitals: 0 -> occupied, 1 -> positive virtual, 2,3 -> negative.
  const std::size_t n_spatial = options.include_negative ? 4 : 2;
  const std::size_t n = 2 * n_spatial;
  const double eps_negative = -2.0 * system.constants.mc2() - 0.5 * (params.eps1 + params.eps2);

  for (std::size_t p = 0; p < n; ++p) {
    SpinorLevel level;
    level.index = p;
    const std::size_t spatial = p / 2;
    level.energy = spatial == 0 ? params.eps1 : (spatial == 1 ? params.eps2 : eps_negative);
    level.sector = spatial < 2 ? Sector::positive : Sector::negative;
    level.occupied_in_reference = spatial == 0;
    system.levels.push_back(level);
  }

  ChemTable chem(n_spatial);
  chem.set(0, 0, 0, 0, params.j11);
  chem.set(1, 1, 1, 1, params.j22);
  chem.set(0, 0, 1, 1, params.j12);
  chem.set(0, 1, 0, 1, params.k12);
  if (options.include_negative) {
    // Pair-creation couplings <a p'||i j> and <p' q'||i j> from chemist
    // patterns (1 0|P' 0) and (P' 0|Q' 0).
    chem.set(1, 0, 2, 0, options.eta_one_pair);
    chem.set(1, 0, 3, 0, options.eta_one_pair);
    chem.set(2, 0, 2, 0, options.eta_two_pair);
    chem.set(2, 0, 3, 0, options.eta_two_pair);
    chem.set(3, 0, 3, 0, options.eta_two_pair);
  }
  system.integrals.v_coulomb = spin_tensor(chem, n_spatial);

  ChemTable chem_b(n_spatial);
  chem_b.set(0, 0, 0, 0, params.jb11);
  chem_b.set(1, 1, 1, 1, params.jb22);
  chem_b.set(0, 1, 0, 1, params.kb12);
  const bool has_breit = params.jb11 != 0.0 || params.jb22 != 0.0 || params.kb12 != 0.0;
  if (has_breit) {
    system.integrals.v_breit = spin_tensor(chem_b, n_spatial);
  }

  // One-body diagonal chosen so f(p,p) = h(p,p) + sum_k <pk||qk> equals the
  // level energy exactly; replicas then stay canonical for every level.
  system.integrals.h_ext = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t p = 0; p < n; ++p) {
    Complex mean_field(0.0, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      if (!system.levels[k].occupied_in_reference) continue;
      mean_field += system.integrals.v_coulomb(p, k, p, k);
    }
    system.integrals.h_ext(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p)) =
        Complex(system.levels[p].energy, 0.0) - mean_field;
  }

  system.n_electrons = 2.0;
  return system;
}

}  // namespace qedcc::oracle_h2
