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

#ifndef QEDCC_MRCC_HPP
#define QEDCC_MRCC_HPP

#include <string>
#include <vector>

#include "qedcc/fock.hpp"
#include "qedcc/model.hpp"
#include "qedcc/photon.hpp"

namespace qedcc::mrcc {

// Model space for state-universal solves: a small set of reference
// determinants, each carrying its own cluster operator.
struct ModelSpace {
  std::vector<fock::Determinant> references;
};

// Form of the inter-reference coupling in the residual for reference mu.
// With H_eff(mu,nu) = <phi_mu|H e^{T_nu}|phi_nu>, the residual column is the
// external projection of e^{-T_mu} applied to
//   bloch            H e^{T_mu}|phi_mu> c_mu - sum_nu e^{T_nu}|phi_nu> H_eff(nu,mu) c_mu
//   row_bare         H e^{T_mu}|phi_mu> c_mu + sum_nu e^{T_nu}|phi_nu> H_eff(mu,nu) c_nu
//   row_transformed  as row_bare, but weighted by <phi_mu|e^{-T_nu}He^{T_nu}|phi_nu> c_nu
// bloch couples through the mu-column of the effective matrix (the
// wave-operator equation); on complete manifolds its fixed points are exact
// eigenstates. The row forms couple through the mu-row; their fixed points
// carry a coupling-weighted defect (e^{T_mu}-e^{T_nu})-shaped off the exact
// spectrum even when nothing is truncated. Kept for comparison studies.
enum class CouplingVariant { bloch, row_bare, row_transformed };

std::string to_string(CouplingVariant variant);
CouplingVariant coupling_variant_from_string(const std::string& name);

struct MrccOptions {
  int max_iterations = 300;
  double damping = 0.5;
  double residual_tolerance = 1e-9;
  double energy_tolerance = 1e-11;
  std::size_t target_root = 0;  // roots ordered by ascending real part
  CouplingVariant coupling = CouplingVariant::bloch;
  double degeneracy_warning_gap = 1e-6;  // eigenvalue gaps below this warn
  double weight_floor = 1e-8;            // reference weight |c_mu| lower bound
};

// Effective Hamiltonian H_eff(mu,nu) = <phi_mu|H exp(T_nu)|phi_nu> over the
// model space. Enforces intermediate normalization
// <phi_mu|exp(T_nu)|phi_nu> = delta(mu,nu) within 1e-10.
Matrix build_heff(const std::vector<Amplitudes>& cluster, const ModelSpace& space,
                  const ModelSystem& system, const ChannelSet& channels);

struct HeffEigen {
  std::vector<Complex> eigenvalues;  // ascending real part
  Matrix right_vectors;              // columns match eigenvalue order
  std::vector<std::string> warnings;
};

// Dense non-Hermitian diagonalization of an effective matrix; near-degenerate
// roots are reported as warnings, not errors.
HeffEigen diagonalize_heff(const Matrix& heff, double degeneracy_warning_gap = 1e-6);

struct MrccReport {
  Matrix heff;
  std::vector<Complex> eigenvalues;
  std::size_t target_root = 0;
  double energy = 0.0;           // real part of the target eigenvalue
  Vector model_coefficients;     // normalized right eigenvector of the target
  std::vector<Amplitudes> cluster;
  bool converged = false;
  int iterations = 0;
  double residual_norm = 0.0;
  std::vector<std::string> warnings;
};

// State-universal residual solve: one singles-and-doubles cluster operator
// per reference (model-space determinants excluded from each manifold),
// coupled through the shared effective eigenpair.
MrccReport mrcc_residual_solve(const ModelSystem& system, const ModelSpace& space,
                               const ChannelSet& channels, const MrccOptions& options = {});

struct StaticCorrelation {
  double shift_exact = 0.0;         // (e2-e1)/2 - sqrt(((e2-e1)/2)^2 + |v|^2)
  double shift_perturbative = 0.0;  // -|v|^2 / (e2 - e1)
  double weight_lower = 0.0;        // |c| of the lower diagonal in the ground root
  double weight_upper = 0.0;        // |c| of the upper diagonal
};

// Ground-state shift of the 2x2 configuration mixing problem
// [[e1, v], [conj(v), e2]] below e1, with its perturbative limit.
StaticCorrelation static_correlation_shift(double e1, double e2, Complex v);

// Thermal-photon-mediated coupling between two open-shell configurations,
// from their transition current densities. Thin bridge over the radiative
// coupling of the photon module so effective 2x2 problems can be fed
// directly from field data.
Complex diradical_coupling(const photon::ThermalState& state,
                           const std::vector<photon::CVector3>& currents,
                           const PhysicalConstants& constants);

}  // namespace qedcc::mrcc

#endif
