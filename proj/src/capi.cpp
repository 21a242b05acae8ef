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

#include "qedcc.h"

#include <cstring>
#include <exception>
#include <new>
#include <string>

#include <json.hpp>

#include "qedcc/cc.hpp"
#include "qedcc/errors.hpp"
#include "qedcc/json_io.hpp"
#include "qedcc/model.hpp"
#include "qedcc/mrcc.hpp"
#include "qedcc/oracle_h2.hpp"
#include "qedcc/photon.hpp"
#include "qedcc/qed.hpp"

using json = nlohmann::ordered_json;

struct qedcc_system {
  qedcc::ModelSystem model;
};

namespace {

constexpr const char* kVersion = "1.0.0";

// hartree -> MHz and hartree -> cm^-1 (2 R_inf c and R_inf scalings,
// CODATA-2018 values)
constexpr double kMHzPerHartree = 6.579683920502e9;
constexpr double kInverseCmPerHartree = 219474.6313632;

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

qedcc_status status_of(const qedcc::Error& error) {
  return qedcc::is_input_error(error.kind()) ? QEDCC_ERR_INPUT : QEDCC_ERR_NUMERICAL;
}

template <typename Fn>
qedcc_status guarded(Fn&& fn) {
  try {
    fn();
    return QEDCC_OK;
  } catch (const qedcc::Error& error) {
    set_error(std::string(qedcc::to_string(error.kind())) + ": " + error.what());
    return status_of(error);
  } catch (const nlohmann::json::exception& error) {
    set_error(std::string("structural: ") + error.what());
    return QEDCC_ERR_INPUT;
  } catch (const std::exception& error) {
    set_error(std::string("internal: ") + error.what());
    return QEDCC_ERR_NUMERICAL;
  }
}

char* copy_string(const std::string& text) {
  char* out = new (std::nothrow) char[text.size() + 1];
  if (out == nullptr) return nullptr;
  std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

json parse_object(const char* text, const std::string& what) {
  if (text == nullptr) {
    throw qedcc::Error(qedcc::ErrorKind::argument, what + " must not be null");
  }
  json parsed = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    throw qedcc::Error(qedcc::ErrorKind::structural, what + " must be a JSON object");
  }
  return parsed;
}

void reject_unknown_keys(const json& object, std::initializer_list<const char*> known,
                         const std::string& what) {
  for (const auto& item : object.items()) {
    bool found = false;
    for (const char* key : known) {
      if (item.key() == key) {
        found = true;
        break;
      }
    }
    if (!found) {
      throw qedcc::Error(qedcc::ErrorKind::structural,
                         "unknown key '" + item.key() + "' in " + what);
    }
  }
}

double number_or(const json& object, const char* key, double fallback) {
  if (!object.contains(key)) return fallback;
  if (!object.at(key).is_number()) {
    throw qedcc::Error(qedcc::ErrorKind::structural,
                       std::string("key '") + key + "' must be a number");
  }
  return object.at(key).get<double>();
}

json complex_to_json(const qedcc::Complex& z) { return json::array({z.real(), z.imag()}); }

json energy_block(const qedcc::cc::CorrelationReport& report) {
  json energies;
  energies["e_reference"] = report.e_reference;
  energies["e_breit0"] = report.e_breit0;
  energies["e_hf0"] = report.e_hf0;
  energies["e_lamb0"] = report.e_lamb0;
  energies["e_correl"] = report.e_correl;
  energies["e_correl_imag"] = report.e_correl_imag;
  energies["e_1pair"] = report.e_1pair;
  energies["e_2pair"] = report.e_2pair;
  energies["e_total"] = report.e_total();
  return energies;
}

json conversion_block(double e_correl, double e_total) {
  json conversions;
  conversions["e_correl_mhz"] = e_correl * kMHzPerHartree;
  conversions["e_correl_inverse_cm"] = e_correl * kInverseCmPerHartree;
  conversions["e_total_mhz"] = e_total * kMHzPerHartree;
  conversions["e_total_inverse_cm"] = e_total * kInverseCmPerHartree;
  return conversions;
}

struct RunOptions {
  std::string method = "ccsd";
  qedcc::ChannelSet channels = qedcc::ChannelSet::coulomb_only();
  qedcc::cc::SolverOptions solver;
};

RunOptions parse_run_options(const char* options_json) {
  RunOptions options;
  if (options_json == nullptr || std::string(options_json).empty()) return options;
  const json parsed = parse_object(options_json, "run options");
  reject_unknown_keys(parsed,
                      {"method", "channels", "max_iterations", "damping",
                       "residual_tolerance", "energy_tolerance", "level_shift", "pair_mode",
                       "pair_denominator"},
                      "run options");
  if (parsed.contains("method")) options.method = parsed.at("method").get<std::string>();
  if (options.method != "mp2" && options.method != "dci" && options.method != "ccd" &&
      options.method != "ccsd") {
    throw qedcc::Error(qedcc::ErrorKind::argument,
                       "unknown method '" + options.method + "'");
  }
  if (parsed.contains("channels")) {
    options.channels = qedcc::ChannelSet::parse(parsed.at("channels").get<std::string>());
  }
  options.solver.max_iterations =
      static_cast<int>(number_or(parsed, "max_iterations", options.solver.max_iterations));
  options.solver.damping = number_or(parsed, "damping", options.solver.damping);
  options.solver.residual_tolerance =
      number_or(parsed, "residual_tolerance", options.solver.residual_tolerance);
  options.solver.energy_tolerance =
      number_or(parsed, "energy_tolerance", options.solver.energy_tolerance);
  options.solver.level_shift = number_or(parsed, "level_shift", options.solver.level_shift);
  if (parsed.contains("pair_mode")) {
    options.solver.pair_mode =
        qedcc::cc::pair_mode_from_string(parsed.at("pair_mode").get<std::string>());
  }
  if (parsed.contains("pair_denominator")) {
    const std::string name = parsed.at("pair_denominator").get<std::string>();
    if (name == "exact") {
      options.solver.pair_denominator = qedcc::qed::PairDenominator::exact;
    } else if (name == "limit") {
      options.solver.pair_denominator = qedcc::qed::PairDenominator::limit;
    } else {
      throw qedcc::Error(qedcc::ErrorKind::argument,
                         "unknown pair denominator '" + name + "'");
    }
  }
  return options;
}

qedcc::cc::CorrelationReport run_method(const qedcc::ModelSystem& system,
                                        const RunOptions& options) {
  using qedcc::cc::CorrelationReport;
  if (options.method == "ccd") {
    return qedcc::cc::ccd_solve(system, options.channels, options.solver);
  }
  if (options.method == "ccsd") {
    return qedcc::cc::ccsd_solve(system, options.channels, options.solver);
  }

  CorrelationReport report;
  report.method = options.method;
  report.channels = options.channels;
  report.converged = true;
  report.e_reference = qedcc::reference_energy(system);
  if (options.channels.breit) {
    report.e_breit0 =
        qedcc::channel_reference_energy(system, qedcc::ReferenceChannel::breit);
  }
  if (options.channels.hyperfine) {
    report.e_hf0 =
        qedcc::channel_reference_energy(system, qedcc::ReferenceChannel::hyperfine);
  }
  if (options.channels.lamb) {
    double shift = 0.0;
    if (!system.integrals.lamb_terms.empty()) {
      shift += qedcc::qed::lamb_shift(system.integrals.lamb_terms, system.constants);
    }
    for (std::size_t k : system.occupied_indices()) {
      shift += system.levels[k].occupancy * system.levels[k].lamb_shift;
    }
    report.e_lamb0 = shift;
  }
  if (options.method == "mp2") {
    report.e_correl = qedcc::cc::mp2_energy(system, options.channels);
    if (options.solver.pair_mode != qedcc::cc::PairMode::none &&
        system.has_negative_sector()) {
      qedcc::qed::PairEnergyOptions pair_options;
      pair_options.denominator = options.solver.pair_denominator;
      const auto pair = qedcc::qed::pair_energy_mbpt2(system, pair_options);
      report.e_1pair = pair.one_pair;
      report.e_2pair = pair.two_pair;
    }
  } else {
    report.e_correl = qedcc::cc::dci_energy(system, options.channels);
  }
  return report;
}

json run_report_json(const qedcc::cc::CorrelationReport& report) {
  json out;
  out["schema_version"] = qedcc::kSchemaVersion;
  out["method"] = report.method;
  out["channels"] = report.channels.to_string();
  out["converged"] = report.converged;
  out["iterations"] = report.iterations;
  out["residual_norm"] = report.residual_norm;
  out["energies"] = energy_block(report);
  out["conversions"] = conversion_block(report.e_correl, report.e_total());
  json amplitude_counts;
  amplitude_counts["t1"] = report.amplitudes.t1.size();
  amplitude_counts["t2"] = report.amplitudes.t2.size();
  amplitude_counts["t2_one_pair"] = report.amplitudes.t2_one_pair.size();
  amplitude_counts["t2_two_pair"] = report.amplitudes.t2_two_pair.size();
  out["amplitude_counts"] = amplitude_counts;
  return out;
}

qedcc::oracle_h2::H2UnitParams parse_h2_params(const json& parsed) {
  for (const char* key : {"eps1", "eps2", "j11", "j22", "j12", "k12"}) {
    if (!parsed.contains(key)) {
      throw qedcc::Error(qedcc::ErrorKind::structural,
                         std::string("missing key '") + key + "' in unit params");
    }
  }
  qedcc::oracle_h2::H2UnitParams params;
  params.eps1 = number_or(parsed, "eps1", 0.0);
  params.eps2 = number_or(parsed, "eps2", 0.0);
  params.j11 = number_or(parsed, "j11", 0.0);
  params.j22 = number_or(parsed, "j22", 0.0);
  params.j12 = number_or(parsed, "j12", 0.0);
  params.k12 = number_or(parsed, "k12", 0.0);
  params.jb11 = number_or(parsed, "jb11", 0.0);
  params.jb22 = number_or(parsed, "jb22", 0.0);
  params.kb12 = number_or(parsed, "kb12", 0.0);
  return params;
}

qedcc::photon::ThermalState parse_thermal_state(const json& parsed) {
  qedcc::photon::ThermalState state;
  if (!parsed.contains("tau")) {
    throw qedcc::Error(qedcc::ErrorKind::structural, "photon state requires 'tau'");
  }
  state.tau = number_or(parsed, "tau", 0.0);
  state.volume = number_or(parsed, "volume", 1.0);
  if (parsed.contains("modes")) {
    if (!parsed.at("modes").is_array()) {
      throw qedcc::Error(qedcc::ErrorKind::structural, "'modes' must be an array");
    }
    for (const json& mode_json : parsed.at("modes")) {
      if (!mode_json.is_object()) {
        throw qedcc::Error(qedcc::ErrorKind::structural, "each mode must be an object");
      }
      reject_unknown_keys(mode_json, {"k", "polarization", "weight"}, "photon mode");
      qedcc::photon::PhotonMode mode;
      const json& k = mode_json.at("k");
      const json& pol = mode_json.at("polarization");
      if (!k.is_array() || k.size() != 3 || !pol.is_array() || pol.size() != 3) {
        throw qedcc::Error(qedcc::ErrorKind::structural,
                           "mode 'k' and 'polarization' must be 3-vectors");
      }
      for (int axis = 0; axis < 3; ++axis) {
        mode.k(axis) = k.at(axis).get<double>();
        const json& component = pol.at(axis);
        if (component.is_number()) {
          mode.polarization(axis) = qedcc::Complex(component.get<double>(), 0.0);
        } else if (component.is_array() && component.size() == 2) {
          mode.polarization(axis) =
              qedcc::Complex(component.at(0).get<double>(), component.at(1).get<double>());
        } else {
          throw qedcc::Error(qedcc::ErrorKind::structural,
                             "polarization components must be numbers or [re, im] pairs");
        }
      }
      mode.weight = number_or(mode_json, "weight", 1.0);
      state.modes.push_back(mode);
    }
  }
  return state;
}

}  // namespace

extern "C" {

const char* qedcc_version(void) { return kVersion; }

const char* qedcc_last_error(void) { return g_last_error.c_str(); }

void qedcc_string_free(char* text) { delete[] text; }

qedcc_system* qedcc_system_from_json(const char* text) {
  qedcc_system* out = nullptr;
  const qedcc_status status = guarded([&] {
    if (text == nullptr) {
      throw qedcc::Error(qedcc::ErrorKind::argument, "system JSON must not be null");
    }
    out = new qedcc_system{qedcc::model_from_json_text(text)};
  });
  return status == QEDCC_OK ? out : nullptr;
}

char* qedcc_system_to_json(const qedcc_system* system) {
  char* out = nullptr;
  const qedcc_status status = guarded([&] {
    if (system == nullptr) {
      throw qedcc::Error(qedcc::ErrorKind::argument, "system handle must not be null");
    }
    out = copy_string(qedcc::model_to_json_text(system->model));
  });
  return status == QEDCC_OK ? out : nullptr;
}

void qedcc_system_free(qedcc_system* system) { delete system; }

qedcc_status qedcc_validate_json(const qedcc_system* system, char** report) {
  return guarded([&] {
    if (system == nullptr || report == nullptr) {
      throw qedcc::Error(qedcc::ErrorKind::argument, "null argument to validate");
    }
    const qedcc::ValidationReport validation = qedcc::validate(system->model);
    json out;
    out["schema_version"] = qedcc::kSchemaVersion;
    out["ok"] = validation.ok();
    json violations = json::array();
    for (const qedcc::Violation& violation : validation.violations) {
      json entry;
      entry["invariant"] = violation.invariant;
      entry["detail"] = violation.detail;
      entry["magnitude"] = violation.magnitude;
      violations.push_back(entry);
    }
    out["violations"] = violations;
    *report = copy_string(out.dump(2));
  });
}

qedcc_system* qedcc_replicate(const qedcc_system* system, size_t n_units) {
  qedcc_system* out = nullptr;
  const qedcc_status status = guarded([&] {
    if (system == nullptr) {
      throw qedcc::Error(qedcc::ErrorKind::argument, "system handle must not be null");
    }
    out = new qedcc_system{qedcc::replicate(system->model, n_units)};
  });
  return status == QEDCC_OK ? out : nullptr;
}

qedcc_status qedcc_run_json(const qedcc_system* system, const char* options_json,
                            char** report) {
  return guarded([&] {
    if (system == nullptr || report == nullptr) {
      throw qedcc::Error(qedcc::ErrorKind::argument, "null argument to run");
    }
    const RunOptions options = parse_run_options(options_json);
    const qedcc::cc::CorrelationReport result = run_method(system->model, options);
    *report = copy_string(run_report_json(result).dump(2));
  });
}

qedcc_status qedcc_oracle_h2_json(const char* params_json, char** report) {
  return guarded([&] {
    if (report == nullptr) {
      throw qedcc::Error(qedcc::ErrorKind::argument, "null report pointer");
    }
    const json parsed = parse_object(params_json, "unit params");
    reject_unknown_keys(parsed,
                        {"eps1", "eps2", "j11", "j22", "j12", "k12", "jb11", "jb22", "kb12",
                         "units"},
                        "unit params");
    const qedcc::oracle_h2::H2UnitParams params = parse_h2_params(parsed);

    std::vector<std::size_t> units = {1, 2, 4, 8};
    if (parsed.contains("units")) {
      if (!parsed.at("units").is_array() || parsed.at("units").empty()) {
        throw qedcc::Error(qedcc::ErrorKind::structural,
                           "'units' must be a non-empty array of replica counts");
      }
      units.clear();
      for (const json& item : parsed.at("units")) {
        if (!item.is_number_unsigned() || item.get<std::size_t>() == 0) {
          throw qedcc::Error(qedcc::ErrorKind::structural,
                             "replica counts must be positive integers");
        }
        units.push_back(item.get<std::size_t>());
      }
    }

    const auto dc = qedcc::oracle_h2::correl_dc(params);
    const auto dcb = qedcc::oracle_h2::correl_dcb(params);
    json out;
    out["schema_version"] = qedcc::kSchemaVersion;
    out["delta_dc"] = qedcc::oracle_h2::delta_dc(params);
    out["delta_dcb"] = qedcc::oracle_h2::delta_dcb(params);
    out["correl_dc"] = {{"energy", dc.energy}, {"coefficient", dc.coefficient}};
    out["correl_dcb"] = {{"energy", dcb.energy}, {"coefficient", dcb.coefficient}};
    out["breit_correction_leading"] = qedcc::oracle_h2::breit_correction_leading(params);
    out["mp2_per_unit"] = qedcc::oracle_h2::mp2_per_unit(params);
    json dci;
    for (std::size_t n : units) {
      dci[std::to_string(n)] = qedcc::oracle_h2::dci_per_unit(params, n);
    }
    out["dci_per_unit"] = dci;
    json conversions;
    conversions["correl_dc_mhz"] = dc.energy * kMHzPerHartree;
    conversions["correl_dc_inverse_cm"] = dc.energy * kInverseCmPerHartree;
    out["conversions"] = conversions;
    *report = copy_string(out.dump(2));
  });
}

qedcc_system* qedcc_build_h2_unit(const char* params_json) {
  qedcc_system* out = nullptr;
  const qedcc_status status = guarded([&] {
    const json parsed = parse_object(params_json, "unit params");
    reject_unknown_keys(parsed,
                        {"eps1", "eps2", "j11", "j22", "j12", "k12", "jb11", "jb22", "kb12",
                         "include_negative", "eta_one_pair", "eta_two_pair"},
                        "unit params");
    const qedcc::oracle_h2::H2UnitParams params = parse_h2_params(parsed);
    qedcc::oracle_h2::BuildUnitOptions options;
    if (parsed.contains("include_negative")) {
      options.include_negative = parsed.at("include_negative").get<bool>();
    }
    options.eta_one_pair = number_or(parsed, "eta_one_pair", options.eta_one_pair);
    options.eta_two_pair = number_or(parsed, "eta_two_pair", options.eta_two_pair);
    out = new qedcc_system{qedcc::oracle_h2::build_unit(params, options)};
  });
  return status == QEDCC_OK ? out : nullptr;
}

qedcc_status qedcc_photon_report_json(const char* state_json, char** report) {
  return guarded([&] {
    if (report == nullptr) {
      throw qedcc::Error(qedcc::ErrorKind::argument, "null report pointer");
    }
    const json parsed = parse_object(state_json, "photon state");
    reject_unknown_keys(parsed, {"tau", "volume", "modes", "position", "time"},
                        "photon state");
    const qedcc::photon::ThermalState state = parse_thermal_state(parsed);
    const qedcc::PhysicalConstants constants;

    json out;
    out["schema_version"] = qedcc::kSchemaVersion;
    out["tau"] = state.tau;
    out["volume"] = state.volume;
    json modes = json::array();
    for (const qedcc::photon::PhotonMode& mode : state.modes) {
      const double omega = qedcc::photon::mode_frequency(mode, constants);
      const auto sums = qedcc::photon::thermal_ladder_sums(mode, state, constants);
      json entry;
      entry["frequency"] = omega;
      entry["x"] = omega / state.tau;
      entry["weight"] = mode.weight;
      entry["mean_occupation"] = qedcc::photon::mean_occupation(mode, state, constants);
      entry["thermal_raising_sum"] = sums.raising;
      entry["thermal_lowering_sum"] = sums.lowering;
      modes.push_back(entry);
    }
    out["modes"] = modes;
    out["energy_density"] = qedcc::photon::radiation_energy_density(state, constants);
    if (parsed.contains("position") || parsed.contains("time")) {
      if (!parsed.contains("position") || !parsed.contains("time")) {
        throw qedcc::Error(qedcc::ErrorKind::structural,
                           "'position' and 'time' must be given together");
      }
      const json& position_json = parsed.at("position");
      if (!position_json.is_array() || position_json.size() != 3) {
        throw qedcc::Error(qedcc::ErrorKind::structural, "'position' must be a 3-vector");
      }
      qedcc::photon::Vector3 position;
      for (int axis = 0; axis < 3; ++axis) position(axis) = position_json.at(axis).get<double>();
      const double time = number_or(parsed, "time", 0.0);
      const qedcc::photon::CVector3 potential =
          qedcc::photon::vector_potential_average(state, position, time, constants);
      out["vector_potential"] = json::array({complex_to_json(potential(0)),
                                             complex_to_json(potential(1)),
                                             complex_to_json(potential(2))});
    }
    *report = copy_string(out.dump(2));
  });
}

qedcc_status qedcc_mrcc_run_json(const qedcc_system* system, const char* options_json,
                                 char** report) {
  return guarded([&] {
    if (system == nullptr || report == nullptr) {
      throw qedcc::Error(qedcc::ErrorKind::argument, "null argument to mrcc run");
    }
    const json parsed = parse_object(options_json, "mrcc options");
    reject_unknown_keys(parsed,
                        {"references", "channels", "max_iterations", "damping",
                         "residual_tolerance", "energy_tolerance", "target_root", "coupling"},
                        "mrcc options");
    if (!parsed.contains("references") || !parsed.at("references").is_array() ||
        parsed.at("references").empty()) {
      throw qedcc::Error(qedcc::ErrorKind::structural,
                         "mrcc options require a non-empty 'references' array");
    }
    qedcc::mrcc::ModelSpace space;
    for (const json& ref_json : parsed.at("references")) {
      if (!ref_json.is_array()) {
        throw qedcc::Error(qedcc::ErrorKind::structural,
                           "each reference must be an array of level indices");
      }
      std::vector<std::size_t> levels;
      for (const json& level : ref_json) {
        if (!level.is_number_unsigned()) {
          throw qedcc::Error(qedcc::ErrorKind::structural,
                             "reference level indices must be non-negative integers");
        }
        levels.push_back(level.get<std::size_t>());
      }
      space.references.push_back(qedcc::fock::Determinant::from_indices(levels));
    }

    qedcc::ChannelSet channels = qedcc::ChannelSet::coulomb_only();
    if (parsed.contains("channels")) {
      channels = qedcc::ChannelSet::parse(parsed.at("channels").get<std::string>());
    }
    qedcc::mrcc::MrccOptions options;
    options.max_iterations =
        static_cast<int>(number_or(parsed, "max_iterations", options.max_iterations));
    options.damping = number_or(parsed, "damping", options.damping);
    options.residual_tolerance =
        number_or(parsed, "residual_tolerance", options.residual_tolerance);
    options.energy_tolerance =
        number_or(parsed, "energy_tolerance", options.energy_tolerance);
    options.target_root =
        static_cast<std::size_t>(number_or(parsed, "target_root", 0.0));
    if (parsed.contains("coupling")) {
      options.coupling =
          qedcc::mrcc::coupling_variant_from_string(parsed.at("coupling").get<std::string>());
    }

    const qedcc::mrcc::MrccReport result =
        qedcc::mrcc::mrcc_residual_solve(system->model, space, channels, options);

    json out;
    out["schema_version"] = qedcc::kSchemaVersion;
    out["method"] = "mrcc";
    out["channels"] = channels.to_string();
    out["coupling"] = qedcc::mrcc::to_string(options.coupling);
    out["converged"] = result.converged;
    out["iterations"] = result.iterations;
    out["residual_norm"] = result.residual_norm;
    out["target_root"] = result.target_root;
    out["energy"] = result.energy;
    json conversions;
    conversions["energy_mhz"] = result.energy * kMHzPerHartree;
    conversions["energy_inverse_cm"] = result.energy * kInverseCmPerHartree;
    out["conversions"] = conversions;
    json eigenvalues = json::array();
    for (const qedcc::Complex& value : result.eigenvalues) {
      eigenvalues.push_back(complex_to_json(value));
    }
    out["eigenvalues"] = eigenvalues;
    json heff = json::array();
    for (Eigen::Index row = 0; row < result.heff.rows(); ++row) {
      json heff_row = json::array();
      for (Eigen::Index col = 0; col < result.heff.cols(); ++col) {
        heff_row.push_back(complex_to_json(result.heff(row, col)));
      }
      heff.push_back(heff_row);
    }
    out["heff"] = heff;
    json coefficients = json::array();
    for (Eigen::Index k = 0; k < result.model_coefficients.size(); ++k) {
      coefficients.push_back(complex_to_json(result.model_coefficients(k)));
    }
    out["model_coefficients"] = coefficients;
    out["warnings"] = result.warnings;
    *report = copy_string(out.dump(2));
  });
}

}  // extern "C"
