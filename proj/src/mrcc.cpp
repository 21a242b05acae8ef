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

#include "qedcc/mrcc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "qedcc/errors.hpp"

namespace qedcc::mrcc {
namespace {

constexpr double kNormalizationTolerance = 1e-10;
constexpr double kIntruderWarningGap = 1e-6;

void check_space(const ModelSpace& space, const ModelSystem& system) {
  if (space.references.empty()) {
    throw Error(ErrorKind::argument, "model space must contain at least one reference");
  }
  const std::size_t n_elec = space.references.front().count();
  for (std::size_t mu = 0; mu < space.references.size(); ++mu) {
    const fock::Determinant& ref = space.references[mu];
    if (ref.count() != n_elec) {
      throw Error(ErrorKind::argument, "model-space references differ in electron count");
    }
    for (std::size_t p : ref.occupied_indices()) {
      if (p >= system.n_levels()) {
        throw Error(ErrorKind::argument, "model-space reference occupies an unknown level");
      }
    }
    for (std::size_t nu = mu + 1; nu < space.references.size(); ++nu) {
      if (ref == space.references[nu]) {
        throw Error(ErrorKind::argument, "model-space references must be distinct");
      }
    }
  }
}

// One excitation out of a reference: the target determinant, its amplitude
// key, the phase linking amplitude to determinant coefficient, and the bare
// orbital-energy denominator.
struct ManifoldEntry {
  fock::Determinant determinant;
  bool is_single = false;
  std::array<std::size_t, 4> key{};  // (i, a, -, -) or (i, j, a, b)
  int phase = 1;
  double denom = 0.0;
};

std::vector<ManifoldEntry> build_manifold(const ModelSystem& system, const ModelSpace& space,
                                          std::size_t mu, std::vector<std::string>& warnings) {
  const fock::Determinant& ref = space.references[mu];
  std::vector<std::size_t> holes = ref.occupied_indices();
  std::vector<std::size_t> particles;
  for (std::size_t p : system.positive_virtual_indices()) {
    if (!ref.occupied(p)) particles.push_back(p);
  }
  for (std::size_t p : system.occupied_indices()) {
    if (!ref.occupied(p)) particles.push_back(p);
  }
  std::sort(particles.begin(), particles.end());

  const auto in_model_space = [&](const fock::Determinant& d) {
    return std::find(space.references.begin(), space.references.end(), d) !=
           space.references.end();
  };
  const auto level_energy = [&](std::size_t p) { return system.levels[p].energy; };
  const auto warn_intruder = [&](double denom, const std::string& what) {
    if (std::abs(denom) < kIntruderWarningGap) {
      std::ostringstream msg;
      msg << "near-singular denominator " << denom << " for " << what << " of reference "
          << mu;
      warnings.push_back(msg.str());
    }
  };

  std::vector<ManifoldEntry> manifold;
  for (std::size_t i : holes) {
    for (std::size_t a : particles) {
      fock::Determinant d = ref;
      int phase = d.annihilate(i);
      phase *= d.create(a);
      if (phase == 0 || in_model_space(d)) continue;
      ManifoldEntry entry;
      entry.determinant = d;
      entry.is_single = true;
      entry.key = {i, a, 0, 0};
      entry.phase = phase;
      entry.denom = level_energy(i) - level_energy(a);
      warn_intruder(entry.denom, "single replacement");
      manifold.push_back(entry);
    }
  }
  for (std::size_t x = 0; x < holes.size(); ++x) {
    for (std::size_t y = x + 1; y < holes.size(); ++y) {
      for (std::size_t u = 0; u < particles.size(); ++u) {
        for (std::size_t w = u + 1; w < particles.size(); ++w) {
          const std::size_t i = holes[x], j = holes[y];
          const std::size_t a = particles[u], b = particles[w];
          fock::Determinant d = ref;
          int phase = d.annihilate(i);
          phase *= d.annihilate(j);
          phase *= d.create(b);
          phase *= d.create(a);
          if (phase == 0 || in_model_space(d)) continue;
          ManifoldEntry entry;
          entry.determinant = d;
          entry.is_single = false;
          entry.key = {i, j, a, b};
          entry.phase = phase;
          entry.denom = level_energy(i) + level_energy(j) - level_energy(a) - level_energy(b);
          warn_intruder(entry.denom, "double replacement");
          manifold.push_back(entry);
        }
      }
    }
  }
  return manifold;
}

Complex amplitude_of(const Amplitudes& amps, const ManifoldEntry& entry) {
  if (entry.is_single) {
    auto it = amps.t1.find({entry.key[0], entry.key[1]});
    return it == amps.t1.end() ? Complex(0.0, 0.0) : it->second;
  }
  return amps.get_t2(entry.key[0], entry.key[1], entry.key[2], entry.key[3]);
}

void add_amplitude(Amplitudes& amps, const ManifoldEntry& entry, Complex delta) {
  if (entry.is_single) {
    amps.t1[{entry.key[0], entry.key[1]}] += delta;
    return;
  }
  const Complex current = amps.get_t2(entry.key[0], entry.key[1], entry.key[2], entry.key[3]);
  amps.set_t2(entry.key[0], entry.key[1], entry.key[2], entry.key[3], current + delta);
}

}  // namespace

std::string to_string(CouplingVariant variant) {
  switch (variant) {
    case CouplingVariant::bloch: return "bloch";
    case CouplingVariant::row_bare: return "row_bare";
    case CouplingVariant::row_transformed: return "row_transformed";
  }
  throw Error(ErrorKind::argument, "unmapped coupling variant");
}

CouplingVariant coupling_variant_from_string(const std::string& name) {
  if (name == "bloch") return CouplingVariant::bloch;
  if (name == "row_bare") return CouplingVariant::row_bare;
  if (name == "row_transformed") return CouplingVariant::row_transformed;
  throw Error(ErrorKind::argument, "unknown coupling variant '" + name + "'");
}

Matrix build_heff(const std::vector<Amplitudes>& cluster, const ModelSpace& space,
                  const ModelSystem& system, const ChannelSet& channels) {
  check_space(space, system);
  const std::size_t m = space.references.size();
  if (cluster.size() != m) {
    throw Error(ErrorKind::argument, "one cluster operator per reference is required");
  }
  const std::size_t n_elec = space.references.front().count();

  Matrix heff = Matrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t nu = 0; nu < m; ++nu) {
    const fock::ClusterExpansion expansion =
        fock::apply_cluster(cluster[nu], space.references[nu], n_elec, system.n_levels());
    for (std::size_t mu = 0; mu < m; ++mu) {
      const auto at = expansion.space.find(space.references[mu]);
      const Complex overlap =
          at ? expansion.coefficients(static_cast<Eigen::Index>(*at)) : Complex(0.0, 0.0);
      const Complex expected = mu == nu ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
      if (std::abs(overlap - expected) > kNormalizationTolerance) {
        std::ostringstream msg;
        msg << "cluster operator " << nu << " breaks intermediate normalization against "
            << "reference " << mu << " (overlap " << overlap.real();
        msg << (overlap.imag() < 0 ? "" : "+") << overlap.imag() << "i)";
        throw Error(ErrorKind::contract, msg.str());
      }
    }
    for (std::size_t mu = 0; mu < m; ++mu) {
      Complex acc(0.0, 0.0);
      for (std::size_t d = 0; d < expansion.space.size(); ++d) {
        const Complex coeff = expansion.coefficients(static_cast<Eigen::Index>(d));
        if (coeff == Complex(0.0, 0.0)) continue;
        acc += coeff * fock::matrix_element(space.references[mu],
                                            expansion.space.determinants[d], system, channels);
      }
      heff(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(nu)) = acc;
    }
  }
  return heff;
}

HeffEigen diagonalize_heff(const Matrix& heff, double degeneracy_warning_gap) {
  if (heff.rows() == 0 || heff.rows() != heff.cols()) {
    throw Error(ErrorKind::argument, "effective matrix must be square and non-empty");
  }
  Eigen::ComplexEigenSolver<Matrix> solver(heff);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::numerical, "effective-matrix eigensolve failed");
  }

  const Eigen::Index m = heff.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    const Complex ex = solver.eigenvalues()(x);
    const Complex ey = solver.eigenvalues()(y);
    if (ex.real() != ey.real()) return ex.real() < ey.real();
    return ex.imag() < ey.imag();
  });

  HeffEigen out;
  out.right_vectors = Matrix::Zero(m, m);
  for (Eigen::Index col = 0; col < m; ++col) {
    out.eigenvalues.push_back(solver.eigenvalues()(order[static_cast<std::size_t>(col)]));
    out.right_vectors.col(col) = solver.eigenvectors().col(order[static_cast<std::size_t>(col)]);
  }
  for (std::size_t k = 0; k + 1 < out.eigenvalues.size(); ++k) {
    if (std::abs(out.eigenvalues[k + 1] - out.eigenvalues[k]) < degeneracy_warning_gap) {
      std::ostringstream msg;
      msg << "effective roots " << k << " and " << k + 1 << " are nearly degenerate (gap "
          << std::abs(out.eigenvalues[k + 1] - out.eigenvalues[k]) << ")";
      out.warnings.push_back(msg.str());
    }
  }
  return out;
}

MrccReport mrcc_residual_solve(const ModelSystem& system, const ModelSpace& space,
                               const ChannelSet& channels, const MrccOptions& options) {
  {
    ValidationReport validation = validate(system);
    if (!validation.ok()) {
      throw Error(ErrorKind::structural, "system failed validation: " + validation.to_string());
    }
  }
  check_space(space, system);
  if (options.max_iterations < 1) {
    throw Error(ErrorKind::argument, "max_iterations must be at least 1");
  }
  if (!(options.damping >= 0.0) || options.damping >= 1.0) {
    throw Error(ErrorKind::argument, "damping must lie in [0, 1)");
  }
  const std::size_t m = space.references.size();
  if (options.target_root >= m) {
    throw Error(ErrorKind::argument, "target_root is outside the model space");
  }

  MrccReport report;
  const fock::CISpace full = fock::enumerate(system, fock::GenerationRule::full);
  const Matrix hamiltonian = fock::build_matrix(full, system, channels);
  const Eigen::Index dim = static_cast<Eigen::Index>(full.size());

  std::vector<Eigen::Index> ref_index(m);
  for (std::size_t mu = 0; mu < m; ++mu) {
    const auto at = full.find(space.references[mu]);
    if (!at) {
      throw Error(ErrorKind::argument, "model-space reference is outside the system space");
    }
    ref_index[mu] = static_cast<Eigen::Index>(*at);
  }

  std::vector<std::vector<ManifoldEntry>> manifolds(m);
  for (std::size_t mu = 0; mu < m; ++mu) {
    manifolds[mu] = build_manifold(system, space, mu, report.warnings);
    for (const ManifoldEntry& entry : manifolds[mu]) {
      if (std::abs(entry.denom) < 1e-10) {
        throw Error(ErrorKind::degenerate,
                    "exactly degenerate replacement denominator in the excitation manifold");
      }
    }
  }

  report.cluster.assign(m, Amplitudes{});
  const double step = 1.0 - options.damping;
  double e_prev = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> history;

  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    report.iterations = iter;

    // exp(T) / exp(-T) over the full space, per reference
    std::vector<Matrix> forward(m), backward(m);
    for (std::size_t nu = 0; nu < m; ++nu) {
      const Matrix t = fock::cluster_matrix(report.cluster[nu], full);
      forward[nu] = fock::nilpotent_exp(t);
      backward[nu] = fock::nilpotent_exp(Matrix(-t));
    }

    report.heff = Matrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    std::vector<Vector> h_on_ref(m);  // H exp(T_nu) |phi_nu>
    for (std::size_t nu = 0; nu < m; ++nu) {
      h_on_ref[nu] = hamiltonian * forward[nu].col(ref_index[nu]);
      for (std::size_t mu = 0; mu < m; ++mu) {
        report.heff(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(nu)) =
            h_on_ref[nu](ref_index[mu]);
      }
    }

    HeffEigen eig = diagonalize_heff(report.heff, options.degeneracy_warning_gap);
    report.eigenvalues = eig.eigenvalues;
    report.target_root = options.target_root;
    const Complex lambda = eig.eigenvalues[options.target_root];
    Vector c = eig.right_vectors.col(static_cast<Eigen::Index>(options.target_root));
    // deterministic normalization: dominant coefficient real and positive
    Eigen::Index dominant = 0;
    c.cwiseAbs().maxCoeff(&dominant);
    const Complex pivot = c(dominant);
    if (std::abs(pivot) == 0.0) {
      throw Error(ErrorKind::numerical, "target eigenvector collapsed to zero");
    }
    c *= std::abs(pivot) / pivot;
    c /= c.norm();
    report.model_coefficients = c;
    report.energy = lambda.real();

    for (std::size_t mu = 0; mu < m; ++mu) {
      if (std::abs(c(static_cast<Eigen::Index>(mu))) < options.weight_floor) {
        throw Error(ErrorKind::numerical,
                    "target root carries a vanishing weight on a model-space reference");
      }
    }

    double resnorm = 0.0;
    std::vector<std::vector<Complex>> residuals(m);
    for (std::size_t mu = 0; mu < m; ++mu) {
      const Complex c_mu = c(static_cast<Eigen::Index>(mu));
      // <.|exp(-T_mu) H exp(T_mu)|phi_mu> c_mu
      Vector column = backward[mu] * h_on_ref[mu] * c_mu;
      for (std::size_t nu = 0; nu < m; ++nu) {
        if (nu == mu) continue;
        const Complex c_nu = c(static_cast<Eigen::Index>(nu));
        Complex scale;
        switch (options.coupling) {
          case CouplingVariant::bloch:
            scale = -report.heff(static_cast<Eigen::Index>(nu), static_cast<Eigen::Index>(mu)) *
                    c_mu;
            break;
          case CouplingVariant::row_bare:
            scale = report.heff(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(nu)) *
                    c_nu;
            break;
          case CouplingVariant::row_transformed: {
            const Vector hbar_nu = backward[nu] * h_on_ref[nu];
            scale = hbar_nu(ref_index[mu]) * c_nu;
            break;
          }
        }
        column += (backward[mu] * forward[nu].col(ref_index[nu])) * scale;
      }
      residuals[mu].resize(manifolds[mu].size());
      for (std::size_t q = 0; q < manifolds[mu].size(); ++q) {
        const auto at = full.find(manifolds[mu][q].determinant);
        residuals[mu][q] = column(static_cast<Eigen::Index>(*at));
        resnorm = std::max(resnorm, std::abs(residuals[mu][q]));
      }
    }
    report.residual_norm = resnorm;
    history.push_back(report.energy);
    if (!std::isfinite(report.energy) || !std::isfinite(resnorm)) {
      throw Error(ErrorKind::numerical, "state-universal iteration produced non-finite values");
    }
    if (resnorm <= options.residual_tolerance && iter > 1 &&
        std::abs(report.energy - e_prev) <= options.energy_tolerance) {
      report.converged = true;
      for (const std::string& warning : eig.warnings) report.warnings.push_back(warning);
      break;
    }
    e_prev = report.energy;

    for (std::size_t mu = 0; mu < m; ++mu) {
      const Complex c_mu = c(static_cast<Eigen::Index>(mu));
      for (std::size_t q = 0; q < manifolds[mu].size(); ++q) {
        const ManifoldEntry& entry = manifolds[mu][q];
        const Complex delta = step * static_cast<double>(entry.phase) * residuals[mu][q] /
                              (entry.denom * c_mu);
        add_amplitude(report.cluster[mu], entry, delta);
      }
    }
  }

  if (!report.converged) {
    throw DivergenceError("state-universal iteration did not converge within " +
                              std::to_string(options.max_iterations) + " sweeps",
                          history);
  }
  for (std::size_t mu = 0; mu < m; ++mu) {
    report.cluster[mu].iterations = report.iterations;
    report.cluster[mu].residual_norm = report.residual_norm;
  }
  (void)dim;
  return report;
}

StaticCorrelation static_correlation_shift(double e1, double e2, Complex v) {
  if (!(e2 > e1)) {
    throw Error(ErrorKind::domain, "static correlation shift requires e2 > e1");
  }
  StaticCorrelation out;
  const double half = 0.5 * (e2 - e1);
  const double v2 = std::norm(v);
  // stable root form of half - sqrt(half^2 + v2): no cancellation when
  // |v| << gap, where the perturbative comparison needs every digit
  out.shift_exact = -v2 / (half + std::sqrt(half * half + v2));
  out.shift_perturbative = -v2 / (e2 - e1);
  if (v2 == 0.0) {
    out.weight_lower = 1.0;
    out.weight_upper = 0.0;
    return out;
  }
  // ground vector of [[e1, v], [conj(v), e2]]: x proportional to
  // (v, lambda0 - e1) with lambda0 - e1 = shift_exact
  const double x1 = std::abs(v);
  const double x2 = std::abs(out.shift_exact);
  const double norm = std::hypot(x1, x2);
  out.weight_lower = x1 / norm;
  out.weight_upper = x2 / norm;
  return out;
}

Complex diradical_coupling(const photon::ThermalState& state,
                           const std::vector<photon::CVector3>& currents,
                           const PhysicalConstants& constants) {
  return photon::radiative_coupling(currents, state, constants);
}

}  // namespace qedcc::mrcc
