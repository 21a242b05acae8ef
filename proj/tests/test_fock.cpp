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

#include <algorithm>
#include <random>

#include "doctest.h"
#include "qedcc/fock.hpp"
#include "qedcc/oracle_h2.hpp"
#include "support.hpp"

using namespace qedcc;
using testing::mid_params;
using testing::random_system;

namespace {

fock::Determinant random_determinant(std::mt19937_64& rng, std::size_t n_levels) {
  std::vector<std::size_t> filled;
  std::bernoulli_distribution coin(0.4);
  for (std::size_t p = 0; p < n_levels; ++p)
    if (coin(rng)) filled.push_back(p);
  return fock::Determinant::from_indices(filled);
}

}  // namespace

TEST_SUITE("fock") {

TEST_CASE("creation and annihilation anticommute on every level pair") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 25; ++trial) {
    const fock::Determinant d = random_determinant(rng, 12);
    for (std::size_t p = 0; p < 12; ++p) {
      for (std::size_t q = 0; q < 12; ++q) {
        if (p == q) continue;
        fock::Determinant pq = d, qp = d;
        const int s_pq = [&] {
          int s = pq.create(q);
          return s == 0 ? 0 : s * pq.create(p);
        }();
        const int s_qp = [&] {
          int s = qp.create(p);
          return s == 0 ? 0 : s * qp.create(q);
        }();
        if (s_pq == 0 || s_qp == 0) {
          CHECK(s_pq == s_qp);  // Pauli blocking is order-independent
          continue;
        }
        CHECK(pq == qp);
        CHECK(s_pq == -s_qp);

        fock::Determinant apq = d, aqp = d;
        const int a_pq = [&] {
          int s = apq.annihilate(q);
          return s == 0 ? 0 : s * apq.annihilate(p);
        }();
        const int a_qp = [&] {
          int s = aqp.annihilate(p);
          return s == 0 ? 0 : s * aqp.annihilate(q);
        }();
        if (a_pq == 0 || a_qp == 0) {
          CHECK(a_pq == a_qp);
          continue;
        }
        CHECK(apq == aqp);
        CHECK(a_pq == -a_qp);
      }
      // a+_p a+_p = 0 and a_p a_p = 0
      fock::Determinant twice = d;
      if (twice.create(p) != 0) CHECK(twice.create(p) == 0);
      fock::Determinant gone = d;
      if (gone.annihilate(p) != 0) CHECK(gone.annihilate(p) == 0);
    }
  }
}

TEST_CASE("number operator identity a+_p a_p on occupied levels") {
  const auto d = fock::Determinant::from_indices({0, 2, 5});
  for (std::size_t p : {0u, 2u, 5u}) {
    fock::Determinant w = d;
    const int s1 = w.annihilate(p);
    REQUIRE(s1 != 0);
    const int s2 = w.create(p);
    REQUIRE(s2 != 0);
    CHECK(w == d);
    CHECK(s1 * s2 == 1);
  }
}

TEST_CASE("diagonal matrix elements reproduce the reference energy") {
  const ModelSystem sys = oracle_h2::build_unit(mid_params());
  const auto ref = fock::reference_determinant(sys);
  const Complex diag =
      fock::matrix_element(ref, ref, sys, ChannelSet::coulomb_only());
  CHECK(diag.real() == doctest::Approx(reference_energy(sys)).epsilon(1e-13));
  CHECK(diag.imag() == 0.0);
}

TEST_CASE("hamiltonian matrices are hermitian and eigenpairs tight") {
  std::mt19937_64 rng(103);
  for (std::size_t n : {4u, 6u}) {
    const ModelSystem sys = random_system(rng, n, true);
    const auto space = fock::enumerate(sys, fock::GenerationRule::full);
    const Matrix h = fock::build_matrix(space, sys, ChannelSet::coulomb_only());
    CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

    const auto eig = fock::diagonalize(space, sys, ChannelSet::coulomb_only());
    const double scale = h.cwiseAbs().maxCoeff();
    for (std::size_t k = 0; k < eig.eigenvalues.size(); ++k) {
      const Vector v = eig.eigenvectors.col(static_cast<Eigen::Index>(k));
      const double resid = (h * v - eig.eigenvalues[k] * v).norm();
      CHECK(resid <= 1e-9 * scale);
    }
    CHECK(std::is_sorted(eig.eigenvalues.begin(), eig.eigenvalues.end()));
    CHECK((eig.eigenvectors.adjoint() * eig.eigenvectors -
           Matrix::Identity(static_cast<Eigen::Index>(space.size()),
                            static_cast<Eigen::Index>(space.size())))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
  }
}

TEST_CASE("diagonalize rejects non-hermitian input") {
  ModelSystem sys = oracle_h2::build_unit(mid_params());
  sys.integrals.h_ext(0, 1) = Complex(0.2, 0.0);  // no conjugate partner
  const auto space = fock::enumerate(sys, fock::GenerationRule::full);
  CHECK_THROWS_AS((void)fock::diagonalize(space, sys, ChannelSet::coulomb_only()),
                  Error);
}

TEST_CASE("enumerate: doubles spaces and pair filtering") {
  const ModelSystem plain = oracle_h2::build_unit(mid_params());
  CHECK(fock::enumerate(plain, fock::GenerationRule::doubles_only).size() == 2);
  CHECK(fock::enumerate(plain, fock::GenerationRule::full).size() == 6);

  oracle_h2::BuildUnitOptions opt;
  opt.include_negative = true;
  const ModelSystem paired = oracle_h2::build_unit(mid_params(), opt);
  const auto space = fock::enumerate(paired, fock::GenerationRule::doubles_plus_pair);
  // reference + positive doubles + coupled one-pair + coupled two-pair rows
  std::size_t one_pair = 0, two_pair = 0;
  const auto negatives = paired.negative_indices();
  for (const auto& d : space.determinants) {
    std::size_t neg = 0;
    for (auto p : negatives)
      if (d.occupied(p)) ++neg;
    one_pair += neg == 1;
    two_pair += neg == 2;
  }
  CHECK(one_pair == 4);
  CHECK(two_pair == 4);
  for (const auto& d : space.determinants) {
    if (d == fock::reference_determinant(paired)) continue;
    const Complex coupling = fock::matrix_element(
        fock::reference_determinant(paired), d, paired, ChannelSet::coulomb_only());
    CHECK(std::abs(coupling) > 0.0);  // zero-coupled rows are filtered out
  }
}

TEST_CASE("cluster application carries the amplitude and the canonical phase") {
  const ModelSystem sys = oracle_h2::build_unit(mid_params());
  Amplitudes t;
  t.set_t2(0, 1, 2, 3, Complex(0.3, -0.1));
  const auto expansion =
      fock::apply_cluster(t, fock::reference_determinant(sys), 2, sys.n_levels());
  const auto at = expansion.space.find(fock::Determinant::from_indices({2, 3}));
  REQUIRE(at);
  CHECK(expansion.coefficients(static_cast<Eigen::Index>(*at)) == Complex(0.3, -0.1));
  const auto ref_at = expansion.space.find(fock::reference_determinant(sys));
  REQUIRE(ref_at);
  CHECK(expansion.coefficients(static_cast<Eigen::Index>(*ref_at)) == Complex(1, 0));

  // antisymmetry of the accessors: swapping one index pair flips the sign
  CHECK(t.get_t2(1, 0, 2, 3) == -t.get_t2(0, 1, 2, 3));
  CHECK(t.get_t2(0, 1, 3, 2) == -t.get_t2(0, 1, 2, 3));
  CHECK(t.get_t2(1, 0, 3, 2) == t.get_t2(0, 1, 2, 3));
  CHECK(t.get_t2(0, 0, 2, 3) == Complex(0, 0));
}

TEST_CASE("apply_cluster equals the matrix exponential on the reference column") {
  std::mt19937_64 rng(107);
  const ModelSystem sys = random_system(rng, 6, true, 4);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  Amplitudes t;
  for (std::size_t i : {0u, 1u, 2u, 3u})
    for (std::size_t a : {4u, 5u}) t.t1[{i, a}] = Complex(u(rng), u(rng));
  t.set_t2(0, 1, 4, 5, Complex(u(rng), u(rng)));
  t.set_t2(2, 3, 4, 5, Complex(u(rng), u(rng)));
  t.set_t2(0, 2, 4, 5, Complex(u(rng), u(rng)));

  const auto full = fock::enumerate(sys, fock::GenerationRule::full);
  const Matrix tm = fock::cluster_matrix(t, full);
  const Matrix expT = fock::nilpotent_exp(tm);
  const auto ref_at = full.find(fock::reference_determinant(sys));
  REQUIRE(ref_at);

  const auto expansion =
      fock::apply_cluster(t, fock::reference_determinant(sys), 4, sys.n_levels());
  for (std::size_t d = 0; d < full.size(); ++d) {
    const auto at = expansion.space.find(full.determinants[d]);
    const Complex direct =
        at ? expansion.coefficients(static_cast<Eigen::Index>(*at)) : Complex(0, 0);
    const Complex via_exp = expT(static_cast<Eigen::Index>(d),
                                 static_cast<Eigen::Index>(*ref_at));
    CHECK(std::abs(direct - via_exp) < 1e-12);
  }
}

TEST_CASE("cluster matrices of exciting amplitudes are nilpotent") {
  std::mt19937_64 rng(109);
  const ModelSystem sys = random_system(rng, 6, false, 2);
  Amplitudes t;
  t.t1[{0, 3}] = 5.0;  // magnitude must not matter, only structure
  t.t1[{1, 4}] = -2.0;
  t.set_t2(0, 1, 2, 5, 7.0);
  const auto full = fock::enumerate(sys, fock::GenerationRule::full);
  const Matrix tm = fock::cluster_matrix(t, full);
  const Matrix t3 = tm * tm * tm;
  CHECK(t3.cwiseAbs().maxCoeff() == 0.0);
  CHECK_NOTHROW((void)fock::nilpotent_exp(tm));
}

TEST_CASE("similarity transform preserves the spectrum") {
  std::mt19937_64 rng(113);
  for (std::size_t n_elec : {2u, 3u}) {
    const ModelSystem sys = random_system(rng, 6, true, n_elec);
    std::uniform_real_distribution<double> u(-0.08, 0.08);
    Amplitudes t;
    for (std::size_t i = 0; i < n_elec; ++i)
      for (std::size_t a = n_elec; a < 6; ++a) t.t1[{i, a}] = Complex(u(rng), u(rng));
    t.set_t2(0, 1, n_elec, n_elec + 1, Complex(u(rng), u(rng)));
    t.set_t2(0, 1, n_elec + 1, n_elec + 2, Complex(u(rng), u(rng)));

    const auto plain = fock::enumerate(sys, fock::GenerationRule::full);
    const Matrix h = fock::build_matrix(plain, sys, ChannelSet::coulomb_only());
    const auto transformed =
        fock::similarity_transform(t, sys, ChannelSet::coulomb_only());

    Eigen::ComplexEigenSolver<Matrix> original(h), dressed(transformed.matrix);
    std::vector<double> ev_o, ev_d;
    for (Eigen::Index k = 0; k < h.rows(); ++k) {
      ev_o.push_back(original.eigenvalues()(k).real());
      ev_d.push_back(dressed.eigenvalues()(k).real());
      CHECK(std::abs(original.eigenvalues()(k).imag()) < 1e-9);
      CHECK(std::abs(dressed.eigenvalues()(k).imag()) < 1e-9);
    }
    std::sort(ev_o.begin(), ev_o.end());
    std::sort(ev_d.begin(), ev_d.end());
    for (std::size_t k = 0; k < ev_o.size(); ++k)
      CHECK(std::abs(ev_o[k] - ev_d[k]) < 1e-9);
  }
}

TEST_CASE("enumerate caps capacity with a capacity error") {
  std::mt19937_64 rng(127);
  const ModelSystem sys = random_system(rng, 8, false, 4);
  CHECK_THROWS_AS((void)fock::enumerate(sys, fock::GenerationRule::full, 10), Error);
}

}  // TEST_SUITE
