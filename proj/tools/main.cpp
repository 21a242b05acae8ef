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

// Command-line front door. Links against the C API only; all numerics live
// behind libqedcc. Exit codes: 0 success, 1 numerical failure, 2 input error.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qedcc.h"

using json = nlohmann::ordered_json;

namespace {

// hartree -> MHz, hartree -> cm^-1 (documented to >= 10 significant digits;
// the same values are baked into the library's JSON reports).
constexpr double kMHzPerHartree = 6.579683920502e9;
constexpr double kInverseCmPerHartree = 219474.6313632;

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitInput = 2;

struct CliError {
  int code;
  std::string message;  // single line, "category: detail"
};

[[noreturn]] void fail(int code, const std::string& message) {
  std::string line = message;
  for (char& c : line) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  throw CliError{code, line};
}

[[noreturn]] void fail_capi(qedcc_status status) {
  fail(status == QEDCC_ERR_INPUT ? kExitInput : kExitNumerical, qedcc_last_error());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(kExitInput, "argument: cannot open input file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

json parse_json_file(const std::string& path) {
  json parsed = json::parse(read_file(path), nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded()) {
    fail(kExitInput, "structural: '" + path + "' is not valid JSON");
  }
  return parsed;
}

// RAII wrappers for the C API handles.
struct SystemDeleter {
  void operator()(qedcc_system* p) const { qedcc_system_free(p); }
};
using SystemHandle = std::unique_ptr<qedcc_system, SystemDeleter>;

std::string take_string(char* text) {
  std::string out = text == nullptr ? std::string() : std::string(text);
  qedcc_string_free(text);
  return out;
}

SystemHandle load_system(const std::string& path) {
  SystemHandle system(qedcc_system_from_json(read_file(path).c_str()));
  if (!system) fail_capi(QEDCC_ERR_INPUT);
  return system;
}

// ---------------------------------------------------------------------------
// Formatting

std::string fmt_num(double value) {
  std::ostringstream os;
  os << std::setprecision(12) << value;
  return os.str();
}

std::string fmt_complex(const json& pair) {
  return "(" + fmt_num(pair.at(0).get<double>()) + ", " +
         fmt_num(pair.at(1).get<double>()) + ")";
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string render_table(const Table& table) {
  std::vector<std::size_t> widths(table.header.size(), 0);
  auto widen = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size() && c < widths.size(); ++c) {
      widths[c] = std::max(widths[c], row[c].size());
    }
  };
  widen(table.header);
  for (const auto& row : table.rows) widen(row);

  std::ostringstream os;
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < widths.size(); ++c) {
      const std::string& cell = c < row.size() ? row[c] : std::string();
      if (c == 0) {
        os << std::left << std::setw(static_cast<int>(widths[c])) << cell;
      } else {
        os << "  " << std::right << std::setw(static_cast<int>(widths[c])) << cell;
      }
    }
    os << '\n';
  };
  emit(table.header);
  for (const auto& row : table.rows) emit(row);
  return os.str();
}

void energy_row(Table& table, const std::string& name, double hartree) {
  table.rows.push_back({name, fmt_num(hartree), fmt_num(hartree * kMHzPerHartree),
                        fmt_num(hartree * kInverseCmPerHartree)});
}

// ---------------------------------------------------------------------------
// Subcommand payloads (JSON output is the library report verbatim, byte-stable;
// tables are rendered here)

std::string run_report_table(const json& report) {
  std::ostringstream os;
  os << "method         " << report.at("method").get<std::string>() << '\n'
     << "channels       " << report.at("channels").get<std::string>() << '\n'
     << "converged      " << (report.at("converged").get<bool>() ? "yes" : "no") << '\n'
     << "iterations     " << report.at("iterations").get<int>() << '\n'
     << "residual_norm  " << fmt_num(report.at("residual_norm").get<double>()) << '\n'
     << '\n';
  Table table;
  table.header = {"quantity", "hartree", "MHz", "cm^-1"};
  const json& energies = report.at("energies");
  for (const auto& item : energies.items()) {
    energy_row(table, item.key(), item.value().get<double>());
  }
  os << render_table(table);
  return os.str();
}

std::string validate_report_table(const json& report) {
  std::ostringstream os;
  os << "ok  " << (report.at("ok").get<bool>() ? "yes" : "no") << '\n';
  if (!report.at("violations").empty()) {
    os << '\n';
    Table table;
    table.header = {"invariant", "magnitude", "detail"};
    for (const json& violation : report.at("violations")) {
      table.rows.push_back({violation.at("invariant").get<std::string>(),
                            fmt_num(violation.at("magnitude").get<double>()),
                            violation.at("detail").get<std::string>()});
    }
    os << render_table(table);
  }
  return os.str();
}

std::string oracle_report_table(const json& report) {
  Table table;
  table.header = {"quantity", "hartree", "MHz", "cm^-1"};
  energy_row(table, "delta_dc", report.at("delta_dc").get<double>());
  energy_row(table, "delta_dcb", report.at("delta_dcb").get<double>());
  energy_row(table, "correl_dc", report.at("correl_dc").at("energy").get<double>());
  energy_row(table, "correl_dcb", report.at("correl_dcb").at("energy").get<double>());
  energy_row(table, "breit_correction_leading",
             report.at("breit_correction_leading").get<double>());
  energy_row(table, "mp2_per_unit", report.at("mp2_per_unit").get<double>());
  for (const auto& item : report.at("dci_per_unit").items()) {
    energy_row(table, "dci_per_unit[" + item.key() + "]", item.value().get<double>());
  }
  std::ostringstream os;
  os << render_table(table) << '\n'
     << "coefficient_dc   " << fmt_num(report.at("correl_dc").at("coefficient").get<double>())
     << '\n'
     << "coefficient_dcb  "
     << fmt_num(report.at("correl_dcb").at("coefficient").get<double>()) << '\n';
  return os.str();
}

std::string extensivity_report_table(const json& report) {
  Table table;
  table.header = {"units", "ccd_per_unit", "ccd_drift", "dci_per_unit", "dci_drift"};
  for (const json& row : report.at("rows")) {
    table.rows.push_back({std::to_string(row.at("units").get<std::size_t>()),
                          fmt_num(row.at("ccd_per_unit").get<double>()),
                          fmt_num(row.at("ccd_drift").get<double>()),
                          fmt_num(row.at("dci_per_unit").get<double>()),
                          fmt_num(row.at("dci_drift").get<double>())});
  }
  std::ostringstream os;
  os << render_table(table) << '\n'
     << "ccd_closed_form  " << fmt_num(report.at("ccd_closed_form").get<double>()) << '\n';
  return os.str();
}

std::string photon_report_table(const json& report) {
  std::ostringstream os;
  os << "tau             " << fmt_num(report.at("tau").get<double>()) << '\n'
     << "volume          " << fmt_num(report.at("volume").get<double>()) << '\n'
     << "energy_density  " << fmt_num(report.at("energy_density").get<double>()) << '\n';
  if (!report.at("modes").empty()) {
    os << '\n';
    Table table;
    table.header = {"mode", "frequency", "x", "weight", "mean_occupation",
                    "raising_sum", "lowering_sum"};
    std::size_t index = 0;
    for (const json& mode : report.at("modes")) {
      table.rows.push_back({std::to_string(index++),
                            fmt_num(mode.at("frequency").get<double>()),
                            fmt_num(mode.at("x").get<double>()),
                            fmt_num(mode.at("weight").get<double>()),
                            fmt_num(mode.at("mean_occupation").get<double>()),
                            fmt_num(mode.at("thermal_raising_sum").get<double>()),
                            fmt_num(mode.at("thermal_lowering_sum").get<double>())});
    }
    os << render_table(table);
  }
  if (report.contains("vector_potential")) {
    os << '\n';
    const json& potential = report.at("vector_potential");
    const char* axes[3] = {"x", "y", "z"};
    for (int axis = 0; axis < 3; ++axis) {
      os << "vector_potential_" << axes[axis] << "  " << fmt_complex(potential.at(axis))
         << '\n';
    }
  }
  return os.str();
}

std::string mrcc_report_table(const json& report) {
  std::ostringstream os;
  os << "channels       " << report.at("channels").get<std::string>() << '\n'
     << "coupling       " << report.at("coupling").get<std::string>() << '\n'
     << "converged      " << (report.at("converged").get<bool>() ? "yes" : "no") << '\n'
     << "iterations     " << report.at("iterations").get<int>() << '\n'
     << "residual_norm  " << fmt_num(report.at("residual_norm").get<double>()) << '\n'
     << "target_root    " << report.at("target_root").get<std::size_t>() << '\n'
     << '\n';
  Table energy;
  energy.header = {"quantity", "hartree", "MHz", "cm^-1"};
  energy_row(energy, "energy", report.at("energy").get<double>());
  os << render_table(energy) << '\n';

  Table roots;
  roots.header = {"root", "eigenvalue_re", "eigenvalue_im"};
  std::size_t index = 0;
  for (const json& value : report.at("eigenvalues")) {
    roots.rows.push_back({std::to_string(index++), fmt_num(value.at(0).get<double>()),
                          fmt_num(value.at(1).get<double>())});
  }
  os << render_table(roots) << '\n';

  Table coefficients;
  coefficients.header = {"reference", "coefficient"};
  index = 0;
  for (const json& value : report.at("model_coefficients")) {
    coefficients.rows.push_back({std::to_string(index++), fmt_complex(value)});
  }
  os << render_table(coefficients);
  for (const json& warning : report.at("warnings")) {
    os << "warning: " << warning.get<std::string>() << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Subcommands

struct CommonFlags {
  std::string format = "table";
  std::string output;

  void attach(CLI::App* cmd) {
    cmd->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"table", "json"}));
    cmd->add_option("--output", output, "write the report to this file");
  }

  void write(const std::string& json_text,
             const std::string& table_text) const {
    std::string payload = format == "json" ? json_text : table_text;
    if (payload.empty() || payload.back() != '\n') payload += '\n';
    if (output.empty()) {
      std::cout << payload;
      return;
    }
    std::ofstream out(output, std::ios::binary);
    if (!out) fail(kExitInput, "argument: cannot write output file '" + output + "'");
    out << payload;
  }
};

json run_options_to_json(const CLI::App* cmd, const std::string& method,
                         const std::string& channels, int max_iterations, double damping,
                         double residual_tolerance, double energy_tolerance,
                         double level_shift, const std::string& pair_mode,
                         const std::string& pair_denominator) {
  json options = json::object();
  options["method"] = method;
  options["channels"] = channels;
  if (cmd->count("--max-iterations") > 0) options["max_iterations"] = max_iterations;
  if (cmd->count("--damping") > 0) options["damping"] = damping;
  if (cmd->count("--residual-tolerance") > 0) {
    options["residual_tolerance"] = residual_tolerance;
  }
  if (cmd->count("--energy-tolerance") > 0) options["energy_tolerance"] = energy_tolerance;
  if (cmd->count("--level-shift") > 0) options["level_shift"] = level_shift;
  if (cmd->count("--pair-mode") > 0) options["pair_mode"] = pair_mode;
  if (cmd->count("--pair-denominator") > 0) options["pair_denominator"] = pair_denominator;
  return options;
}

std::string capi_run(const qedcc_system* system, const json& options) {
  char* report = nullptr;
  const qedcc_status status = qedcc_run_json(system, options.dump().c_str(), &report);
  const std::string text = take_string(report);
  if (status != QEDCC_OK) fail_capi(status);
  return text;
}

int command_run(const std::string& input, const json& options, const CommonFlags& io) {
  const SystemHandle system = load_system(input);
  const std::string text = capi_run(system.get(), options);
  io.write(text, run_report_table(json::parse(text)));
  return kExitOk;
}

int command_validate(const std::string& input, const CommonFlags& io) {
  const SystemHandle system = load_system(input);
  char* report = nullptr;
  const qedcc_status status = qedcc_validate_json(system.get(), &report);
  const std::string text = take_string(report);
  if (status != QEDCC_OK) fail_capi(status);
  const json parsed = json::parse(text);
  io.write(text, validate_report_table(parsed));
  if (!parsed.at("ok").get<bool>()) {
    fail(kExitInput, "structural: model failed " +
                         std::to_string(parsed.at("violations").size()) + " invariant(s)");
  }
  return kExitOk;
}

std::string oracle_report_text(const std::string& fixture_path,
                               const std::vector<std::size_t>& units) {
  json params = parse_json_file(fixture_path);
  if (!params.is_object()) {
    fail(kExitInput, "structural: fixture must be a JSON object");
  }
  params["units"] = units;
  char* report = nullptr;
  const qedcc_status status = qedcc_oracle_h2_json(params.dump().c_str(), &report);
  const std::string text = take_string(report);
  if (status != QEDCC_OK) fail_capi(status);
  return text;
}

int command_oracle(const std::string& input, const std::vector<std::size_t>& units,
                   const CommonFlags& io) {
  const std::string text = oracle_report_text(input, units);
  io.write(text, oracle_report_table(json::parse(text)));
  return kExitOk;
}

int command_extensivity(const std::string& input, const std::vector<std::size_t>& units,
                        const CommonFlags& io) {
  if (units.empty()) fail(kExitInput, "argument: --units must not be empty");
  const json params = parse_json_file(input);
  if (!params.is_object()) {
    fail(kExitInput, "structural: fixture must be a JSON object");
  }
  SystemHandle unit(qedcc_build_h2_unit(params.dump().c_str()));
  if (!unit) fail_capi(QEDCC_ERR_INPUT);

  // Closed forms: the CCD column must hold flat at the analytic pair energy;
  // the doubles-CI column drifts by the replicated-unit closed form (the
  // brute-force cross-check at small unit counts lives in the test suite).
  const json oracle = json::parse(oracle_report_text(input, units));
  const double ccd_closed = oracle.at("correl_dc").at("energy").get<double>();

  json options = json::object();
  options["method"] = "ccd";
  options["channels"] = "coulomb";

  json rows = json::array();
  double ccd_first = 0.0;
  double dci_first = 0.0;
  bool first = true;
  for (std::size_t n : units) {
    SystemHandle replica(qedcc_replicate(unit.get(), n));
    if (!replica) fail_capi(QEDCC_ERR_INPUT);
    const json run = json::parse(capi_run(replica.get(), options));
    const double ccd_per_unit =
        run.at("energies").at("e_correl").get<double>() / static_cast<double>(n);
    const double dci_per_unit =
        oracle.at("dci_per_unit").at(std::to_string(n)).get<double>();
    if (first) {
      ccd_first = ccd_per_unit;
      dci_first = dci_per_unit;
      first = false;
    }
    json row;
    row["units"] = n;
    row["ccd_per_unit"] = ccd_per_unit;
    row["ccd_drift"] = ccd_per_unit - ccd_first;
    row["dci_per_unit"] = dci_per_unit;
    row["dci_drift"] = dci_per_unit - dci_first;
    rows.push_back(row);
  }
  json report;
  report["schema_version"] = 1;
  report["ccd_closed_form"] = ccd_closed;
  report["rows"] = rows;
  const std::string text = report.dump(2);
  io.write(text, extensivity_report_table(report));
  return kExitOk;
}

int command_photon(const std::string& input, const CommonFlags& io) {
  const std::string state = read_file(input);
  char* report = nullptr;
  const qedcc_status status = qedcc_photon_report_json(state.c_str(), &report);
  const std::string text = take_string(report);
  if (status != QEDCC_OK) fail_capi(status);
  io.write(text, photon_report_table(json::parse(text)));
  return kExitOk;
}

int command_mrcc(const std::string& input, const std::string& space_path,
                 const CLI::App* cmd, const std::string& channels,
                 const std::string& coupling, std::size_t target_root, int max_iterations,
                 double damping, double residual_tolerance, double energy_tolerance,
                 const CommonFlags& io) {
  const SystemHandle system = load_system(input);
  json options = parse_json_file(space_path);
  if (!options.is_object()) {
    fail(kExitInput, "structural: model-space file must be a JSON object");
  }
  if (cmd->count("--channels") > 0) options["channels"] = channels;
  if (cmd->count("--coupling") > 0) options["coupling"] = coupling;
  if (cmd->count("--target-root") > 0) options["target_root"] = target_root;
  if (cmd->count("--max-iterations") > 0) options["max_iterations"] = max_iterations;
  if (cmd->count("--damping") > 0) options["damping"] = damping;
  if (cmd->count("--residual-tolerance") > 0) {
    options["residual_tolerance"] = residual_tolerance;
  }
  if (cmd->count("--energy-tolerance") > 0) options["energy_tolerance"] = energy_tolerance;

  char* report = nullptr;
  const qedcc_status status =
      qedcc_mrcc_run_json(system.get(), options.dump().c_str(), &report);
  const std::string text = take_string(report);
  if (status != QEDCC_OK) fail_capi(status);
  io.write(text, mrcc_report_table(json::parse(text)));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Desk-scale coupled-cluster engine with pair, radiative and "
               "multireference channels"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qedcc_version()));

  std::string input;
  std::string space_path;
  std::vector<std::size_t> units = {1, 2, 4, 8};
  std::string method = "ccsd";
  std::string channels = "coulomb";
  std::string coupling = "bloch";
  std::string pair_mode = "decoupled";
  std::string pair_denominator = "exact";
  int max_iterations = 500;
  double damping = 0.5;
  double residual_tolerance = 1e-10;
  double energy_tolerance = 1e-12;
  double level_shift = 0.0;
  std::size_t target_root = 0;
  CommonFlags io;

  CLI::App* cmd_run = app.add_subcommand("run", "solve one model file");
  cmd_run->add_option("input", input, "model JSON file")->required();
  cmd_run->add_option("--method", method, "mp2 | dci | ccd | ccsd")
      ->check(CLI::IsMember({"mp2", "dci", "ccd", "ccsd"}));
  cmd_run->add_option("--channels", channels, "comma list: coulomb,breit,hyperfine,lamb");
  cmd_run->add_option("--max-iterations", max_iterations, "amplitude sweep cap");
  cmd_run->add_option("--damping", damping, "fraction of the old iterate kept");
  cmd_run->add_option("--residual-tolerance", residual_tolerance, "residual max-norm");
  cmd_run->add_option("--energy-tolerance", energy_tolerance, "energy change tolerance");
  cmd_run->add_option("--level-shift", level_shift, "denominator regularizer");
  cmd_run->add_option("--pair-mode", pair_mode, "none | decoupled | coupled")
      ->check(CLI::IsMember({"none", "decoupled", "coupled"}));
  cmd_run->add_option("--pair-denominator", pair_denominator, "exact | limit")
      ->check(CLI::IsMember({"exact", "limit"}));
  io.attach(cmd_run);

  CLI::App* cmd_validate = app.add_subcommand("validate", "check model invariants");
  cmd_validate->add_option("input", input, "model JSON file")->required();
  io.attach(cmd_validate);

  CLI::App* cmd_oracle =
      app.add_subcommand("oracle-h2", "closed-form two-level pair answers");
  cmd_oracle->add_option("input", input, "unit-parameter JSON file")->required();
  cmd_oracle->add_option("--units", units, "replica counts")->delimiter(',');
  io.attach(cmd_oracle);

  CLI::App* cmd_ext = app.add_subcommand(
      "extensivity", "per-unit energies of replicated units: flat CCD vs drifting DCI");
  cmd_ext->add_option("input", input, "unit-parameter JSON file")->required();
  cmd_ext->add_option("--units", units, "replica counts")->delimiter(',');
  io.attach(cmd_ext);

  CLI::App* cmd_photon = app.add_subcommand("photon", "thermal photon-mode report");
  cmd_photon->add_option("input", input, "thermal-state JSON file")->required();
  io.attach(cmd_photon);

  CLI::App* cmd_mrcc =
      app.add_subcommand("mrcc", "multireference effective-Hamiltonian solve");
  cmd_mrcc->add_option("input", input, "model JSON file")->required();
  cmd_mrcc->add_option("--space", space_path, "model-space JSON file")->required();
  cmd_mrcc->add_option("--channels", channels, "comma list: coulomb,breit,hyperfine,lamb");
  cmd_mrcc->add_option("--coupling", coupling, "bloch | row_bare | row_transformed")
      ->check(CLI::IsMember({"bloch", "row_bare", "row_transformed"}));
  cmd_mrcc->add_option("--target-root", target_root, "root index after sorting");
  cmd_mrcc->add_option("--max-iterations", max_iterations, "macro-iteration cap");
  cmd_mrcc->add_option("--damping", damping, "fraction of the old iterate kept");
  cmd_mrcc->add_option("--residual-tolerance", residual_tolerance, "residual max-norm");
  cmd_mrcc->add_option("--energy-tolerance", energy_tolerance, "energy change tolerance");
  io.attach(cmd_mrcc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string line = e.what();
    for (char& c : line) {
      if (c == '\n' || c == '\r') c = ' ';
    }
    std::cerr << "error: argument: " << line << '\n';
    return kExitInput;
  }

  try {
    if (cmd_run->parsed()) {
      const json options = run_options_to_json(
          cmd_run, method, channels, max_iterations, damping, residual_tolerance,
          energy_tolerance, level_shift, pair_mode, pair_denominator);
      return command_run(input, options, io);
    }
    if (cmd_validate->parsed()) return command_validate(input, io);
    if (cmd_oracle->parsed()) return command_oracle(input, units, io);
    if (cmd_ext->parsed()) return command_extensivity(input, units, io);
    if (cmd_photon->parsed()) return command_photon(input, io);
    if (cmd_mrcc->parsed()) {
      return command_mrcc(input, space_path, cmd_mrcc, channels, coupling, target_root,
                          max_iterations, damping, residual_tolerance, energy_tolerance,
                          io);
    }
    std::cerr << "error: argument: no command selected\n";
    return kExitInput;
  } catch (const CliError& error) {
    std::cerr << "error: " << error.message << '\n';
    return error.code;
  } catch (const std::exception& error) {
    std::string line = error.what();
    for (char& c : line) {
      if (c == '\n' || c == '\r') c = ' ';
    }
    std::cerr << "error: internal: " << line << '\n';
    return kExitNumerical;
  }
}
