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

#include "qedcc/model.hpp"

#include <cmath>
#include <sstream>

namespace qedcc {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::structural: return "structural";
    case ErrorKind::argument: return "argument";
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::capacity: return "capacity";
    case ErrorKind::domain: return "domain";
    case ErrorKind::contract: return "contract";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::numerical: return "numerical";
  }
  return "unknown";
}

bool is_input_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::structural:
    case ErrorKind::argument:
    case ErrorKind::configuration:
    case ErrorKind::capacity:
    case ErrorKind::domain:
      return true;
    default:
      return false;
  }
}

const char* to_string(Sector s) {
  return s == Sector::positive ? "positive" : "negative";
}

std::vector<std::size_t> ModelSystem::occupied_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (levels[i].occupied_in_reference) out.push_back(i);
  return out;
}

std::vector<std::size_t> ModelSystem::positive_virtual_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (!levels[i].occupied_in_reference && levels[i].sector == Sector::positive)
      out.push_back(i);
  return out;
}

std::vector<std::size_t> ModelSystem::negative_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (levels[i].sector == Sector::negative) out.push_back(i);
  return out;
}

bool ModelSystem::has_negative_sector() const {
  for (const auto& l : levels)
    if (l.sector == Sector::negative) return true;
  return false;
}

std::size_t ModelSystem::integer_electron_count() const {
  double rounded = std::round(n_electrons);
  if (std::abs(n_electrons - rounded) > 1e-9 || rounded < 0)
    throw Error(ErrorKind::structural,
                "electron count " + std::to_string(n_electrons) +
                    " is not a nonnegative integer");
  return static_cast<std::size_t>(rounded);
}

ChannelSet ChannelSet::parse(const std::string& csv) {
  ChannelSet set;
  set.coulomb = false;
  std::stringstream ss(csv);
  std::string item;
  bool any = false;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    any = true;
    if (item == "coulomb") set.coulomb = true;
    else if (item == "breit") set.breit = true;
    else if (item == "hyperfine") set.hyperfine = true;
    else if (item == "lamb") set.lamb = true;
    else
      throw Error(ErrorKind::argument, "unknown channel name '" + item + "'");
  }
  if (!any)
    throw Error(ErrorKind::argument, "empty channel list");
  return set;
}

std::string ChannelSet::to_string() const {
  std::string out;
  auto append = [&out](const char* name) {
    if (!out.empty()) out += ',';
    out += name;
  };
  if (coulomb) append("coulomb");
  if (breit) append("breit");
  if (hyperfine) append("hyperfine");
  if (lamb) append("lamb");
  return out.empty() ? "none" : out;
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& v : violations)
    os << v.invariant << ": " << v.detail << " (deviation " << v.magnitude << ")\n";
  return os.str();
}

namespace {

void check_one_body(const Matrix& m, std::size_t n, const char* name,
                    double tol, ValidationReport& report) {
  if (m.size() == 0) return;
  if (m.rows() != static_cast<Eigen::Index>(n) ||
      m.cols() != static_cast<Eigen::Index>(n)) {
    report.violations.push_back(
        {"tensor-shape", std::string(name) + " is not n_levels x n_levels",
         static_cast<double>(m.size())});
    return;
  }
  double worst = 0.0;
  std::size_t wp = 0, wq = 0;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      double dev = std::abs(m(p, q) - std::conj(m(q, p)));
      if (dev > worst) { worst = dev; wp = p; wq = q; }
    }
  if (worst > tol)
    report.violations.push_back(
        {"hermiticity", std::string(name) + " entry (" + std::to_string(wp) +
                            "," + std::to_string(wq) + ")", worst});
}

void check_two_body(const Tensor4& v, std::size_t n, const char* name,
                    double asym_tol, double herm_tol, ValidationReport& report) {
  if (v.empty()) return;
  if (v.dim() != n) {
    report.violations.push_back(
        {"tensor-shape", std::string(name) + " dimension != n_levels",
         static_cast<double>(v.dim())});
    return;
  }
  double worst_asym = 0.0, worst_herm = 0.0;
  std::string asym_at, herm_at;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) {
          const Complex x = v(p, q, r, s);
          double d1 = std::abs(x + v(q, p, r, s));
          double d2 = std::abs(x + v(p, q, s, r));
          double dh = std::abs(x - std::conj(v(r, s, p, q)));
          if (d1 > worst_asym || d2 > worst_asym) {
            worst_asym = std::max(d1, d2);
            asym_at = "(" + std::to_string(p) + "," + std::to_string(q) + "," +
                      std::to_string(r) + "," + std::to_string(s) + ")";
          }
          if (dh > worst_herm) {
            worst_herm = dh;
            herm_at = "(" + std::to_string(p) + "," + std::to_string(q) + "," +
                      std::to_string(r) + "," + std::to_string(s) + ")";
          }
        }
  if (worst_asym > asym_tol)
    report.violations.push_back(
        {"antisymmetry", std::string(name) + " entry " + asym_at, worst_asym});
  if (worst_herm > herm_tol)
    report.violations.push_back(
        {"hermiticity", std::string(name) + " entry " + herm_at, worst_herm});
}

}  // namespace

ValidationReport validate(const ModelSystem& system, const ValidateOptions& options) {
  ValidationReport report;
  const auto& c = system.constants;
  const std::size_t n = system.n_levels();

  if (c.alpha <= 0 || c.c <= 0 || c.m <= 0)
    report.violations.push_back(
        {"constants-positive", "alpha, c, m must all be positive", 0.0});
  if (std::abs(c.c * c.alpha - 1.0) > 1e-12)
    report.violations.push_back(
        {"constants-consistent", "c * alpha != 1", std::abs(c.c * c.alpha - 1.0)});

  for (std::size_t i = 0; i < n; ++i) {
    const auto& l = system.levels[i];
    if (l.index != i)
      report.violations.push_back(
          {"level-index", "level " + std::to_string(i) + " carries index " +
                              std::to_string(l.index), 0.0});
    if (l.occupancy < 0.0 || l.occupancy > 1.0)
      report.violations.push_back(
          {"occupancy-range", "level " + std::to_string(i), l.occupancy});
    if (l.occupied_in_reference && l.sector == Sector::negative)
      report.violations.push_back(
          {"negative-occupied", "level " + std::to_string(i) +
                                    " is negative-sector yet occupied", 0.0});
  }

  if (c.alpha > 0 && c.c > 0 && c.m > 0) {
    const double gap_tol =
        options.gap_tolerance >= 0 ? options.gap_tolerance : 0.1 * c.mc2();
    const double ceiling = -2.0 * c.mc2() + gap_tol;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& l = system.levels[i];
      if (l.sector == Sector::negative && l.energy > ceiling)
        report.violations.push_back(
            {"negative-sector-energy",
             "level " + std::to_string(i) + " sits above -2mc^2 + tolerance",
             l.energy - ceiling});
    }
  }

  double occ_sum = 0.0;
  for (const auto& l : system.levels)
    if (l.occupied_in_reference) occ_sum += l.occupancy;
  if (std::abs(occ_sum - system.n_electrons) > 1e-9)
    report.violations.push_back(
        {"electron-count", "n_electrons != sum of occupied occupancies",
         std::abs(occ_sum - system.n_electrons)});

  if (system.integrals.h_ext.size() == 0)
    report.violations.push_back({"missing-channel", "h_ext is absent", 0.0});
  if (system.integrals.v_coulomb.empty())
    report.violations.push_back({"missing-channel", "v_coulomb is absent", 0.0});

  check_one_body(system.integrals.h_ext, n, "h_ext",
                 options.hermiticity_tolerance, report);
  check_one_body(system.integrals.h_hf, n, "h_hf",
                 options.hermiticity_tolerance, report);
  check_two_body(system.integrals.v_coulomb, n, "v_coulomb",
                 options.antisymmetry_tolerance, options.hermiticity_tolerance,
                 report);
  check_two_body(system.integrals.v_breit, n, "v_breit",
                 options.antisymmetry_tolerance, options.hermiticity_tolerance,
                 report);

  for (std::size_t t = 0; t < system.integrals.lamb_terms.size(); ++t)
    if (system.integrals.lamb_terms[t].weight < 0.0)
      report.violations.push_back(
          {"lamb-weight", "term " + std::to_string(t) + " has negative weight",
           system.integrals.lamb_terms[t].weight});

  return report;
}

namespace {

void require_present(const ModelSystem& system) {
  const std::size_t n = system.n_levels();
  if (system.integrals.h_ext.rows() != static_cast<Eigen::Index>(n) ||
      system.integrals.h_ext.cols() != static_cast<Eigen::Index>(n))
    throw Error(ErrorKind::structural, "h_ext is absent or ill-shaped");
  if (system.integrals.v_coulomb.dim() != n)
    throw Error(ErrorKind::structural, "v_coulomb is absent or ill-shaped");
}

}  // namespace

double reference_energy(const ModelSystem& system) {
  require_present(system);
  const auto occ = system.occupied_indices();
  if (occ.empty())
    throw Error(ErrorKind::configuration, "no occupied levels in reference");

  Complex e = 0.0;
  for (auto i : occ) e += system.levels[i].occupancy * system.integrals.h_ext(i, i);
  for (auto i : occ)
    for (auto j : occ)
      e += 0.5 * system.levels[i].occupancy * system.levels[j].occupancy *
           system.integrals.v_coulomb(i, j, i, j);
  return e.real();
}

double channel_reference_energy(const ModelSystem& system, ReferenceChannel channel) {
  const auto occ = system.occupied_indices();
  if (occ.empty())
    throw Error(ErrorKind::configuration, "no occupied levels in reference");

  Complex e = 0.0;
  if (channel == ReferenceChannel::breit) {
    if (!system.integrals.has_breit())
      throw Error(ErrorKind::configuration, "breit channel enabled but absent");
    if (system.integrals.v_breit.dim() != system.n_levels())
      throw Error(ErrorKind::structural, "v_breit is ill-shaped");
    for (auto i : occ)
      for (auto j : occ)
        e += 0.5 * system.levels[i].occupancy * system.levels[j].occupancy *
             system.integrals.v_breit(i, j, i, j);
  } else {
    if (!system.integrals.has_hyperfine())
      throw Error(ErrorKind::configuration, "hyperfine channel enabled but absent");
    if (system.integrals.h_hf.rows() != static_cast<Eigen::Index>(system.n_levels()))
      throw Error(ErrorKind::structural, "h_hf is ill-shaped");
    for (auto i : occ)
      e += system.levels[i].occupancy * system.integrals.h_hf(i, i);
  }
  return e.real();
}

ModelSystem replicate(const ModelSystem& unit, std::size_t n_units) {
  if (n_units == 0)
    throw Error(ErrorKind::argument, "replicate requires at least one unit");
  require_present(unit);
  const std::size_t nu = unit.n_levels();
  const std::size_t n = nu * n_units;
  if (n > 256)
    throw Error(ErrorKind::capacity,
                "replicated basis of " + std::to_string(n) +
                    " levels exceeds the 256-level index space");

  ModelSystem out;
  out.constants = unit.constants;
  out.n_electrons = unit.n_electrons * static_cast<double>(n_units);
  out.levels.reserve(n);
  for (std::size_t u = 0; u < n_units; ++u)
    for (std::size_t i = 0; i < nu; ++i) {
      SpinorLevel l = unit.levels[i];
      l.index = u * nu + i;
      out.levels.push_back(l);
    }

  out.integrals.h_ext = Matrix::Zero(n, n);
  for (std::size_t u = 0; u < n_units; ++u)
    out.integrals.h_ext.block(u * nu, u * nu, nu, nu) = unit.integrals.h_ext;

  if (unit.integrals.has_hyperfine()) {
    out.integrals.h_hf = Matrix::Zero(n, n);
    for (std::size_t u = 0; u < n_units; ++u)
      out.integrals.h_hf.block(u * nu, u * nu, nu, nu) = unit.integrals.h_hf;
  }

  auto replicate_two_body = [&](const Tensor4& src) {
    Tensor4 dst(n);
    for (std::size_t u = 0; u < n_units; ++u) {
      const std::size_t off = u * nu;
      for (std::size_t p = 0; p < nu; ++p)
        for (std::size_t q = 0; q < nu; ++q)
          for (std::size_t r = 0; r < nu; ++r)
            for (std::size_t s = 0; s < nu; ++s)
              dst(off + p, off + q, off + r, off + s) = src(p, q, r, s);
    }
    return dst;
  };
  out.integrals.v_coulomb = replicate_two_body(unit.integrals.v_coulomb);
  if (unit.integrals.has_breit())
    out.integrals.v_breit = replicate_two_body(unit.integrals.v_breit);

  out.integrals.lamb_terms.reserve(unit.integrals.lamb_terms.size() * n_units);
  for (std::size_t u = 0; u < n_units; ++u)
    for (const auto& t : unit.integrals.lamb_terms)
      out.integrals.lamb_terms.push_back(t);

  return out;
}

WorkingHamiltonian::WorkingHamiltonian(const ModelSystem& system,
                                       const ChannelSet& channels)
    : system_(&system), channels_(channels) {
  const std::size_t n = system.n_levels();
  if (system.integrals.h_ext.rows() != static_cast<Eigen::Index>(n))
    throw Error(ErrorKind::structural, "h_ext is absent or ill-shaped");
  if (channels.coulomb && system.integrals.v_coulomb.dim() != n)
    throw Error(ErrorKind::configuration, "coulomb channel enabled but absent");
  if (channels.breit && !system.integrals.has_breit())
    throw Error(ErrorKind::configuration, "breit channel enabled but absent");
  if (channels.breit && system.integrals.v_breit.dim() != n)
    throw Error(ErrorKind::structural, "v_breit is ill-shaped");
  if (channels.hyperfine && !system.integrals.has_hyperfine())
    throw Error(ErrorKind::configuration, "hyperfine channel enabled but absent");
  if (channels.hyperfine &&
      system.integrals.h_hf.rows() != static_cast<Eigen::Index>(n))
    throw Error(ErrorKind::structural, "h_hf is ill-shaped");
  positive_.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    positive_[i] = system.levels[i].sector == Sector::positive;
}

Complex WorkingHamiltonian::one_body(std::size_t p, std::size_t q) const {
  Complex x = system_->integrals.h_ext(p, q);
  if (channels_.hyperfine) x += system_->integrals.h_hf(p, q);
  if (channels_.lamb && p == q) x += system_->levels[p].lamb_shift;
  return x;
}

Complex WorkingHamiltonian::two_body(std::size_t p, std::size_t q, std::size_t r,
                                     std::size_t s) const {
  Complex x = 0.0;
  if (channels_.coulomb) x = system_->integrals.v_coulomb(p, q, r, s);
  if (channels_.breit && positive_[p] && positive_[q] && positive_[r] && positive_[s])
    x += system_->integrals.v_breit(p, q, r, s);
  return x;
}

Matrix WorkingHamiltonian::fock_matrix() const {
  const std::size_t n = dim();
  const auto occ = system_->occupied_indices();
  Matrix f(n, n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) {
      Complex x = one_body(p, q);
      for (auto k : occ)
        x += system_->levels[k].occupancy * two_body(p, k, q, k);
      f(p, q) = x;
    }
  return f;
}

}  // namespace qedcc
