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

#include "qedcc/photon.hpp"

#include <cmath>

namespace qedcc::photon {

namespace {

void check_mode(const PhotonMode& mode) {
  const double knorm = mode.k.norm();
  if (!(knorm > 0.0))
    throw Error(ErrorKind::domain, "photon mode has zero wave vector");
  const double pol_norm = mode.polarization.norm();
  if (std::abs(pol_norm - 1.0) > 1e-12)
    throw Error(ErrorKind::structural,
                "photon polarization is not unit-norm (|lambda| = " +
                    std::to_string(pol_norm) + ")");
  const double transversality =
      std::abs(mode.k.cast<Complex>().dot(mode.polarization)) / knorm;
  if (transversality > 1e-12)
    throw Error(ErrorKind::structural,
                "photon polarization is not transverse (|k.lambda|/|k| = " +
                    std::to_string(transversality) + ")");
  if (mode.weight < 0.0)
    throw Error(ErrorKind::structural, "photon mode weight is negative");
}

double thermal_x(const PhotonMode& mode, const ThermalState& state,
                 const PhysicalConstants& constants) {
  if (!(state.tau > 0.0))
    throw Error(ErrorKind::domain, "photon temperature must be positive");
  check_mode(mode);
  return mode_frequency(mode, constants) / state.tau;
}

}  // namespace

double mode_frequency(const PhotonMode& mode, const PhysicalConstants& constants) {
  return constants.c * mode.k.norm();
}

double planck_g(std::size_t n, const PhotonMode& mode, const ThermalState& state,
                const PhysicalConstants& constants) {
  const double x = thermal_x(mode, state, constants);
  return std::sqrt(1.0 - std::exp(-x)) *
         std::exp(-0.5 * x * static_cast<double>(n));
}

double mean_occupation(const PhotonMode& mode, const ThermalState& state,
                       const PhysicalConstants& constants) {
  const double x = thermal_x(mode, state, constants);
  return 1.0 / std::expm1(x);
}

double radiation_energy_density(const ThermalState& state,
                                const PhysicalConstants& constants) {
  if (!(state.volume > 0.0))
    throw Error(ErrorKind::domain, "quantization volume must be positive");
  double density = 0.0;
  for (const auto& mode : state.modes)
    density += mode.weight * mean_occupation(mode, state, constants) *
               mode_frequency(mode, constants);
  return density / state.volume;
}

LadderSums thermal_ladder_sums(const PhotonMode& mode, const ThermalState& state,
                               const PhysicalConstants& constants) {
  const double x = thermal_x(mode, state, constants);
  const double q = std::exp(-x);
  const double norm = 1.0 - q;  // (1 - e^-x) from g_n g_{n+1}
  const double step = std::exp(-0.5 * x);

  // raising = (1-q) e^{-x/2} sum_n sqrt(n+1) q^n; lowering shifts the index.
  double series = 0.0;
  double qn = 1.0;
  for (std::size_t n = 0;; ++n) {
    const double term = std::sqrt(static_cast<double>(n + 1)) * qn;
    series += term;
    qn *= q;
    // Tail bound: sum_{m>n} sqrt(m+1) q^m <= sqrt(n+2) q^{n+1} / (1-q)^(3/2).
    const double tail = std::sqrt(static_cast<double>(n + 2)) * qn /
                        std::pow(norm, 1.5);
    if (tail < 1e-16 * (series + 1.0)) break;
  }
  LadderSums sums;
  sums.raising = norm * step * series;
  sums.lowering = sums.raising;  // index shift maps one sum onto the other
  return sums;
}

CVector3 vector_potential_average(const ThermalState& state, const Vector3& position,
                                  double time, const PhysicalConstants& constants) {
  CVector3 total = CVector3::Zero();
  for (const auto& mode : state.modes) {
    const double k = mode.k.norm();
    const double omega = mode_frequency(mode, constants);
    const LadderSums sums = thermal_ladder_sums(mode, state, constants);
    const double amplitude = mode.weight / std::sqrt(state.volume) *
                             std::sqrt(2.0 * M_PI * constants.c / k);
    const Complex phase =
        std::exp(Complex(0.0, mode.k.dot(position) - omega * time));
    total += amplitude * (sums.raising * phase * mode.polarization +
                          sums.lowering * std::conj(phase) *
                              mode.polarization.conjugate());
  }
  if (!(state.volume > 0.0))
    throw Error(ErrorKind::domain, "quantization volume must be positive");
  return total;
}

Complex radiative_coupling(const std::vector<CVector3>& currents,
                           const ThermalState& state,
                           const PhysicalConstants& constants) {
  if (currents.size() != state.modes.size())
    throw Error(ErrorKind::argument,
                "need one transition current per photon mode (" +
                    std::to_string(currents.size()) + " currents for " +
                    std::to_string(state.modes.size()) + " modes)");
  if (!(state.volume > 0.0))
    throw Error(ErrorKind::domain, "quantization volume must be positive");

  Complex total = 0.0;
  for (std::size_t m = 0; m < state.modes.size(); ++m) {
    const auto& mode = state.modes[m];
    const double k = mode.k.norm();
    const LadderSums sums = thermal_ladder_sums(mode, state, constants);
    const double amplitude =
        mode.weight * std::sqrt(2.0 * M_PI * constants.c / k);
    // Unconjugated 3-vector contraction: the conjugate branch carries
    // lambda* explicitly.
    const Complex j_dot_pol = currents[m].transpose() * mode.polarization;
    const Complex j_dot_pol_conj =
        currents[m].transpose() * mode.polarization.conjugate();
    total += amplitude *
             (sums.raising * j_dot_pol + sums.lowering * j_dot_pol_conj);
  }
  return -total / std::sqrt(state.volume);
}

}  // namespace qedcc::photon
