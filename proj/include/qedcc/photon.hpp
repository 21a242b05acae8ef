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

#ifndef QEDCC_PHOTON_HPP
#define QEDCC_PHOTON_HPP

#include <vector>

#include "qedcc/types.hpp"

namespace qedcc::photon {

using Vector3 = Eigen::Vector3d;
using CVector3 = Eigen::Vector3cd;

// One transverse radiation mode on a quadrature grid. The weight carries the
// continuum-limit measure for grid sums; the polarization must be unit-norm
// and orthogonal to k.
struct PhotonMode {
  Vector3 k = Vector3::Zero();
  CVector3 polarization = CVector3::Zero();
  double weight = 1.0;
};

// Thermal photon field: temperature tau (hartree), quantization volume, and
// the mode grid.
struct ThermalState {
  double tau = 0.0;
  double volume = 1.0;
  std::vector<PhotonMode> modes;
};

// Angular frequency of a mode (hbar = 1): omega = c |k|.
double mode_frequency(const PhotonMode& mode, const PhysicalConstants& constants);

// Thermal amplitude g_n = (1 - e^-x)^(1/2) e^(-n x / 2) with x = omega / tau.
// The amplitudes square-sum to 1 over n >= 0.
double planck_g(std::size_t n, const PhotonMode& mode, const ThermalState& state,
                const PhysicalConstants& constants);

// Mean occupation 1 / (e^x - 1).
double mean_occupation(const PhotonMode& mode, const ThermalState& state,
                       const PhysicalConstants& constants);

// volume^-1 sum_m weight_m * N-bar_m * omega_m.
double radiation_energy_density(const ThermalState& state,
                                const PhysicalConstants& constants);

// Neighbour-level ladder sums of the thermal amplitudes:
//   raising = sum_n sqrt(n+1) g_n g_{n+1},  lowering = sum_n sqrt(n) g_n g_{n-1}.
// Equal analytically; both are evaluated with a bounded geometric tail.
struct LadderSums {
  double raising = 0.0;
  double lowering = 0.0;
};
LadderSums thermal_ladder_sums(const PhotonMode& mode, const ThermalState& state,
                               const PhysicalConstants& constants);

// Thermal average of the transverse vector potential at (position, time):
//   volume^-1/2 sum_m w_m (2 pi c / k)^1/2
//     [lambda e^{i(k.r - w t)} S_+ + lambda* e^{-i(k.r - w t)} S_-].
CVector3 vector_potential_average(const ThermalState& state, const Vector3& position,
                                  double time, const PhysicalConstants& constants);

// Thermally averaged radiative coupling of per-mode transition currents:
//   -(1/sqrt(volume)) sum_m w_m (2 pi c / k)^1/2 [S_+ J.lambda + S_- J.lambda*].
// currents must carry one complex 3-vector per mode.
Complex radiative_coupling(const std::vector<CVector3>& currents,
                           const ThermalState& state,
                           const PhysicalConstants& constants);

}  // namespace qedcc::photon

#endif
