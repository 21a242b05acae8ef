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

#include <cmath>
#include <random>

#include "doctest.h"
#include "qedcc/cc.hpp"
#include "qedcc/fock.hpp"
#include "qedcc/mrcc.hpp"
#include "qedcc/oracle_h2.hpp"
#include "support.hpp"

using namespace qedcc;
using testing::mid_params;
using testing::random_system;

namespace {

// The three deterministic systems used below share one generator stream so
// each case sees a distinct, reproducible draw.
ModelSystem draw_single_ref_system() {
  std::mt19937_64 rng(99);
  return random_system(rng, 6, false);
}

ModelSystem draw_complete_space_system() {
  std::mt19937_64 rng(99);
  (void)random_system(rng, 6, false);
  return random_system(rng, 4, false);
}

// 6-level toy with a quasi-degenerate pair of occupiable levels, the regime
// a single reference cannot describe well.
ModelSystem draw_two_reference_system() {
  std::mt19937_64 rng(99);
  (void)random_system(rng, 6, false);
  (void)random_system(rng, 4, false);
  ModelSystem sys = random_system(rng, 6, false);
  sys.levels[1].energy = -0.31;
  sys.levels[2].energy = -0.29;
  sys.integrals.h_ext(1, 1) = Complex(-0.31, 0.0);
  sys.integrals.h_ext(2, 2) = Complex(-0.29, 0.0);
  return sys;
}

mrcc::ModelSpace two_reference_space() {
  mrcc::ModelSpace space;
  space.references = {fock::Determinant::from_indices({0, 1}),
                      fock::Determinant::from_indices({0, 2})};
  return space;
}

mrcc::MrccOptions toy_options() {
  mrcc::MrccOptions opt;
  opt.max_iterations = 6000;
  opt.residual_tolerance = 1e-10;
  opt.energy_tolerance = 1e-12;
  return opt;
}

}  // namespace

TEST_SUITE("mrcc") {

TEST_CASE("single-reference solve collapses onto the single-reference machinery") {
  const ChannelSet ch = ChannelSet::coulomb_only();
  const ModelSystem sys = draw_single_ref_system();

  cc::SolverOptions co;
  co.max_iterations = 4000;
  co.damping = 0.4;
  co.residual_tolerance = 1e-11;
  co.energy_tolerance = 1e-13;
  const auto cc_rep = cc::ccsd_solve(sys, ch, co);
  const double cc_total = reference_energy(sys) + cc_rep.e_correl;

  mrcc::ModelSpace space;
  space.references = {fock::reference_determinant(sys)};

  // the effective matrix over the converged single-reference amplitudes is
  // exactly the energy functional
  const Matrix heff = mrcc::build_heff({cc_rep.amplitudes}, space, sys, ch);
  REQUIRE(heff.rows() == 1);
  CHECK(std::abs(heff(0, 0) - Complex(cc_total, cc_rep.e_correl_imag)) <= 1e-9);

  mrcc::MrccOptions mo;
  mo.max_iterations = 4000;
  mo.damping = 0.4;
  mo.residual_tolerance = 1e-11;
  mo.energy_tolerance = 1e-13;
  const auto rep = mrcc::mrcc_residual_solve(sys, space, ch, mo);
  CHECK(rep.converged);
  CHECK(std::abs(rep.energy - cc_total) <= 1e-9);
  CHECK(rep.model_coefficients.size() == 1);
  CHECK(std::abs(rep.model_coefficients.norm() - 1.0) <= 1e-12);
}

TEST_CASE("complete model space reproduces every exact root at T = 0") {
  const ChannelSet ch = ChannelSet::coulomb_only();
  const ModelSystem sys = draw_complete_space_system();
  const auto full = fock::enumerate(sys, fock::GenerationRule::full);
  const auto eig = fock::diagonalize(full, sys, ch);

  mrcc::ModelSpace space;
  space.references = full.determinants;

  // nothing lies outside the model space, so T = 0 and the effective matrix
  // is the bare Hamiltonian
  const std::vector<Amplitudes> empty_cluster(space.references.size());
  const Matrix heff = mrcc::build_heff(empty_cluster, space, sys, ch);
  const Matrix bare = fock::build_matrix(full, sys, ch);
  CHECK((heff - bare).cwiseAbs().maxCoeff() <= 1e-14);

  const auto rep = mrcc::mrcc_residual_solve(sys, space, ch);
  CHECK(rep.converged);
  REQUIRE(rep.eigenvalues.size() == eig.eigenvalues.size());
  double worst = 0.0;
  for (std::size_t k = 0; k < eig.eigenvalues.size(); ++k)
    worst = std::max(worst,
                     std::abs(rep.eigenvalues[k].real() - eig.eigenvalues[k]));
  CHECK(worst <= 1e-10);
  CHECK(rep.target_root == 0);
  CHECK(rep.energy == rep.eigenvalues.front().real());
  for (const auto& amps : rep.cluster) CHECK(amps.empty());
}

TEST_CASE("two quasi-degenerate references land on the full-CI ground state") {
  const ChannelSet ch = ChannelSet::coulomb_only();
  const ModelSystem sys = draw_two_reference_system();
  REQUIRE(validate(sys).ok());

  const auto full = fock::enumerate(sys, fock::GenerationRule::full);
  const auto eig = fock::diagonalize(full, sys, ch);

  const auto rep = mrcc::mrcc_residual_solve(sys, two_reference_space(), ch,
                                             toy_options());
  CHECK(rep.converged);
  CHECK(std::abs(rep.energy - eig.eigenvalues.front()) <= 1e-8);
  REQUIRE(rep.heff.rows() == 2);
  CHECK(std::abs(rep.model_coefficients.norm() - 1.0) <= 1e-12);
  // both references genuinely participate
  CHECK(std::abs(rep.model_coefficients(0)) > 0.1);
  CHECK(std::abs(rep.model_coefficients(1)) > 0.1);
}

TEST_CASE("reference order does not change the answer") {
  const ChannelSet ch = ChannelSet::coulomb_only();
  const ModelSystem sys = draw_two_reference_system();

  const auto forward = mrcc::mrcc_residual_solve(sys, two_reference_space(), ch,
                                                 toy_options());
  mrcc::ModelSpace reversed;
  reversed.references = {fock::Determinant::from_indices({0, 2}),
                         fock::Determinant::from_indices({0, 1})};
  const auto backward = mrcc::mrcc_residual_solve(sys, reversed, ch, toy_options());
  CHECK(std::abs(forward.energy - backward.energy) <= 1e-9);
}

TEST_CASE("row couplings keep their documented fixed-point defect") {
  // The row-coupled residuals converge, but their fixed point is not an
  // eigenstate: the defect is proportional to the inter-reference coupling.
  // Both row dressings coincide on a two-electron two-reference space, where
  // exp(-T_nu) cannot reach the other reference.
  const ChannelSet ch = ChannelSet::coulomb_only();
  const ModelSystem sys = draw_two_reference_system();
  const auto full = fock::enumerate(sys, fock::GenerationRule::full);
  const auto eig = fock::diagonalize(full, sys, ch);

  auto opt = toy_options();
  opt.coupling = mrcc::CouplingVariant::row_bare;
  const auto bare = mrcc::mrcc_residual_solve(sys, two_reference_space(), ch, opt);
  CHECK(bare.converged);
  double nearest = std::numeric_limits<double>::infinity();
  for (const double ev : eig.eigenvalues)
    nearest = std::min(nearest, std::abs(bare.energy - ev));
  CHECK(nearest > 1e-6);

  opt.coupling = mrcc::CouplingVariant::row_transformed;
  const auto dressed = mrcc::mrcc_residual_solve(sys, two_reference_space(), ch, opt);
  CHECK(std::abs(dressed.energy - bare.energy) <= 1e-10);
}

TEST_CASE("coupling variant names round-trip") {
  for (const auto variant :
       {mrcc::CouplingVariant::bloch, mrcc::CouplingVariant::row_bare,
        mrcc::CouplingVariant::row_transformed}) {
    CHECK(mrcc::coupling_variant_from_string(mrcc::to_string(variant)) == variant);
  }
  CHECK_THROWS_AS((void)mrcc::coupling_variant_from_string("anything"), Error);
}

TEST_CASE("build_heff enforces intermediate normalization") {
  const ChannelSet ch = ChannelSet::coulomb_only();
  const ModelSystem unit = oracle_h2::build_unit(mid_params());
  mrcc::ModelSpace space;
  space.references = {fock::Determinant::from_indices({0, 1}),
                      fock::Determinant::from_indices({2, 3})};

  std::vector<Amplitudes> cluster(2);
  cluster[0].set_t2(0, 1, 2, 3, Complex(0.2, 0.0));  // maps phi_0 onto phi_1
  try {
    (void)mrcc::build_heff(cluster, space, unit, ch);
    FAIL("internal amplitude accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::contract);
  }

  CHECK_THROWS_AS((void)mrcc::build_heff({Amplitudes{}}, space, unit, ch), Error);
}

TEST_CASE("effective-matrix eigensolver") {
  Matrix heff(2, 2);
  heff << Complex(1.0, 0.0), Complex(0.5, 0.0), Complex(0.2, 0.0), Complex(3.0, 0.0);
  const auto eig = mrcc::diagonalize_heff(heff);
  REQUIRE(eig.eigenvalues.size() == 2);
  const double root = std::sqrt(1.1);
  CHECK(std::abs(eig.eigenvalues[0] - Complex(2.0 - root, 0.0)) <= 1e-12);
  CHECK(std::abs(eig.eigenvalues[1] - Complex(2.0 + root, 0.0)) <= 1e-12);
  for (Eigen::Index k = 0; k < 2; ++k) {
    const Vector v = eig.right_vectors.col(k);
    CHECK((heff * v - eig.eigenvalues[static_cast<std::size_t>(k)] * v).norm() <=
          1e-12);
  }
  CHECK(eig.warnings.empty());

  Matrix tight(2, 2);
  tight << Complex(1.0, 0.0), Complex(1e-9, 0.0), Complex(1e-9, 0.0),
      Complex(1.0 + 1e-9, 0.0);
  CHECK_FALSE(mrcc::diagonalize_heff(tight).warnings.empty());

  CHECK_THROWS_AS((void)mrcc::diagonalize_heff(Matrix()), Error);
}

TEST_CASE("static correlation closed forms") {
  const auto mixed = mrcc::static_correlation_shift(0.0, 1.0, Complex(0.5, 0.0));
  CHECK(std::abs(mixed.shift_exact - 0.5 * (1.0 - std::sqrt(2.0))) <= 1e-14);
  CHECK(mixed.shift_perturbative == -0.25);
  CHECK(std::abs(mixed.weight_lower * mixed.weight_lower +
                 mixed.weight_upper * mixed.weight_upper - 1.0) <= 1e-14);
  CHECK(mixed.weight_lower > mixed.weight_upper);
  CHECK(mixed.weight_upper > 0.0);

  // phase of the coupling is immaterial
  const auto rotated =
      mrcc::static_correlation_shift(0.0, 1.0, Complex(0.5, 0.0) *
                                                   std::polar(1.0, 0.8));
  CHECK(rotated.shift_exact == mixed.shift_exact);
  CHECK(rotated.weight_lower == mixed.weight_lower);

  // perturbative limit: relative error is (|v|/gap)^2
  const auto weak = mrcc::static_correlation_shift(0.2, 1.2, Complex(0.0, 1e-3));
  CHECK(std::abs(weak.shift_exact - weak.shift_perturbative) <=
        1e-6 * std::abs(weak.shift_perturbative));

  const auto off = mrcc::static_correlation_shift(0.0, 1.0, Complex(0.0, 0.0));
  CHECK(off.shift_exact == 0.0);
  CHECK(off.weight_lower == 1.0);
  CHECK(off.weight_upper == 0.0);

  try {
    (void)mrcc::static_correlation_shift(1.0, 1.0, Complex(0.1, 0.0));
    FAIL("degenerate diagonal accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::domain);
  }
}

TEST_CASE("thermal coupling chains into the two-configuration shift") {
  const PhysicalConstants constants;
  photon::ThermalState state;
  state.tau = 1.0;
  state.volume = 1.0;
  const double kz = 0.0051;
  auto mode = [&](double px, double py) {
    photon::PhotonMode m;
    m.k = photon::Vector3(0.0, 0.0, kz);
    m.polarization = photon::CVector3(Complex(px, 0.0), Complex(py, 0.0),
                                      Complex(0.0, 0.0));
    m.weight = 0.25;
    return m;
  };

  SUBCASE("polarization-inversion grid gives a null coupling and zero shift") {
    state.modes = {mode(1.0, 0.0), mode(-1.0, 0.0), mode(0.0, 1.0), mode(0.0, -1.0)};
    const photon::CVector3 j(Complex(1.0, 0.0), Complex(1.0, 0.0), Complex(0.0, 0.3));
    const std::vector<photon::CVector3> currents(4, j);
    const Complex v = mrcc::diradical_coupling(state, currents, constants);
    CHECK(std::abs(v) <= 1e-14);
    const auto shift = mrcc::static_correlation_shift(-0.2, 0.4, v);
    CHECK(shift.shift_exact == 0.0);
    CHECK(shift.weight_upper == 0.0);
  }

  SUBCASE("single beam couples and lowers the ground configuration") {
    photon::PhotonMode beam = mode(1.0, 0.0);
    beam.weight = 1.0;
    state.modes = {beam};
    const std::vector<photon::CVector3> currents = {
        photon::CVector3(Complex(0.02, 0.0), Complex(0.0, 0.0), Complex(0.0, 0.0))};
    const Complex v = mrcc::diradical_coupling(state, currents, constants);
    CHECK(std::abs(v) > 0.0);
    CHECK(v == photon::radiative_coupling(currents, state, constants));
    const auto shift = mrcc::static_correlation_shift(-0.2, 0.4, v);
    CHECK(shift.shift_exact < 0.0);
    CHECK(std::abs(shift.shift_perturbative + std::norm(v) / (0.4 - (-0.2))) <=
          1e-15 * std::abs(shift.shift_perturbative));
  }
}

TEST_CASE("solver guard rails") {
  const ChannelSet ch = ChannelSet::coulomb_only();
  const ModelSystem unit = oracle_h2::build_unit(mid_params());

  auto solve_with = [&](const mrcc::ModelSpace& space) {
    return mrcc::mrcc_residual_solve(unit, space, ch);
  };

  CHECK_THROWS_AS((void)solve_with(mrcc::ModelSpace{}), Error);

  mrcc::ModelSpace dup;
  dup.references = {fock::Determinant::from_indices({0, 1}),
                    fock::Determinant::from_indices({0, 1})};
  CHECK_THROWS_AS((void)solve_with(dup), Error);

  mrcc::ModelSpace mixed;
  mixed.references = {fock::Determinant::from_indices({0, 1}),
                      fock::Determinant::from_indices({0, 1, 2})};
  CHECK_THROWS_AS((void)solve_with(mixed), Error);

  mrcc::ModelSpace outside;
  outside.references = {fock::Determinant::from_indices({0, 9})};
  CHECK_THROWS_AS((void)solve_with(outside), Error);

  mrcc::ModelSpace ok;
  ok.references = {fock::Determinant::from_indices({0, 1})};
  mrcc::MrccOptions bad_root;
  bad_root.target_root = 5;
  CHECK_THROWS_AS((void)mrcc::mrcc_residual_solve(unit, ok, ch, bad_root), Error);

  mrcc::MrccOptions bad_damping;
  bad_damping.damping = 1.0;
  CHECK_THROWS_AS((void)mrcc::mrcc_residual_solve(unit, ok, ch, bad_damping), Error);

  auto starved = toy_options();
  starved.max_iterations = 1;
  const ModelSystem toy = draw_two_reference_system();
  CHECK_THROWS_AS(
      (void)mrcc::mrcc_residual_solve(toy, two_reference_space(), ch, starved),
      DivergenceError);
}

}  // TEST_SUITE
