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
#include <memory>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "qedcc.h"
#include "qedcc/fock.hpp"
#include "qedcc/json_io.hpp"
#include "qedcc/mrcc.hpp"
#include "qedcc/oracle_h2.hpp"
#include "support.hpp"

using json = nlohmann::json;
using namespace qedcc;
using testing::fixture_path;
using testing::mid_params;
using testing::read_file;

namespace {

using SystemPtr = std::unique_ptr<qedcc_system, decltype(&qedcc_system_free)>;

SystemPtr own(qedcc_system* raw) { return SystemPtr(raw, &qedcc_system_free); }

// Copies then frees a string returned through the boundary.
std::string take(char* text) {
  std::string out = text == nullptr ? std::string() : std::string(text);
  qedcc_string_free(text);
  return out;
}

std::string last_error() { return qedcc_last_error(); }

SystemPtr mid_unit() {
  const std::string params = read_file(fixture_path("h2_unit_mid.json"));
  return own(qedcc_build_h2_unit(params.c_str()));
}

std::string run(const qedcc_system* system, const std::string& options) {
  char* report = nullptr;
  REQUIRE(qedcc_run_json(system, options.c_str(), &report) == QEDCC_OK);
  return take(report);
}

}  // namespace

TEST_SUITE("capi") {

TEST_CASE("metadata and string lifecycle") {
  CHECK(std::string(qedcc_version()) == "1.0.0");
  CHECK(qedcc_last_error() != nullptr);
  qedcc_string_free(nullptr);
  qedcc_system_free(nullptr);
}

TEST_CASE("system JSON round trip is canonical") {
  const std::string text = read_file(fixture_path("h2_unit_model.json"));
  const auto sys = own(qedcc_system_from_json(text.c_str()));
  REQUIRE(sys != nullptr);

  const std::string first = take(qedcc_system_to_json(sys.get()));
  REQUIRE_FALSE(first.empty());
  const auto reparsed = own(qedcc_system_from_json(first.c_str()));
  REQUIRE(reparsed != nullptr);
  const std::string second = take(qedcc_system_to_json(reparsed.get()));
  CHECK(first == second);
  CHECK(json::parse(first) == json::parse(text));

  CHECK(qedcc_system_from_json("not json") == nullptr);
  CHECK(last_error().rfind("structural", 0) == 0);
  CHECK(qedcc_system_from_json(nullptr) == nullptr);
  CHECK_FALSE(last_error().empty());
}

TEST_CASE("structural validation crosses the boundary") {
  const auto good = own(
      qedcc_system_from_json(read_file(fixture_path("h2_unit_model.json")).c_str()));
  REQUIRE(good != nullptr);
  char* raw = nullptr;
  REQUIRE(qedcc_validate_json(good.get(), &raw) == QEDCC_OK);
  const json clean = json::parse(take(raw));
  CHECK(clean.at("schema_version") == 1);
  CHECK(clean.at("ok") == true);
  CHECK(clean.at("violations").empty());

  const auto bad = own(
      qedcc_system_from_json(read_file(fixture_path("bad_model.json")).c_str()));
  REQUIRE(bad != nullptr);  // parseable, just inconsistent
  raw = nullptr;
  REQUIRE(qedcc_validate_json(bad.get(), &raw) == QEDCC_OK);
  const json dirty = json::parse(take(raw));
  CHECK(dirty.at("ok") == false);
  REQUIRE_FALSE(dirty.at("violations").empty());
  for (const json& violation : dirty.at("violations")) {
    CHECK_FALSE(violation.at("invariant").get<std::string>().empty());
    CHECK_FALSE(violation.at("detail").get<std::string>().empty());
  }

  CHECK(qedcc_validate_json(nullptr, &raw) == QEDCC_ERR_INPUT);
}

TEST_CASE("replication is additive through the boundary") {
  const auto unit = mid_unit();
  REQUIRE(unit != nullptr);
  CHECK(json::parse(take(qedcc_system_to_json(unit.get()))).at("levels").size() == 4);

  const auto triple = own(qedcc_replicate(unit.get(), 3));
  REQUIRE(triple != nullptr);
  CHECK(json::parse(take(qedcc_system_to_json(triple.get()))).at("levels").size() == 12);

  const double one =
      json::parse(run(unit.get(), R"({"method": "mp2"})"))["energies"]["e_correl"];
  const double three =
      json::parse(run(triple.get(), R"({"method": "mp2"})"))["energies"]["e_correl"];
  CHECK(std::abs(three - 3.0 * one) <= 1e-12);

  CHECK(qedcc_replicate(unit.get(), 0) == nullptr);
  CHECK(last_error().rfind("argument", 0) == 0);
}

TEST_CASE("runs are deterministic and match the closed forms") {
  const auto unit = mid_unit();
  REQUIRE(unit != nullptr);
  const std::string options =
      R"({"method": "ccd", "max_iterations": 3000, "residual_tolerance": 1e-12, "energy_tolerance": 1e-14})";
  const std::string first = run(unit.get(), options);
  const std::string second = run(unit.get(), options);
  CHECK(first == second);

  const json report = json::parse(first);
  CHECK(report.at("schema_version") == 1);
  CHECK(report.at("method") == "ccd");
  CHECK(report.at("channels") == "coulomb");
  CHECK(report.at("converged") == true);
  const json& energies = report.at("energies");
  const auto params = mid_params();
  const double e_ref = energies.at("e_reference").get<double>();
  const double e_correl = energies.at("e_correl").get<double>();
  CHECK(std::abs(e_ref - (2.0 * params.eps1 - params.j11)) <= 1e-12);
  CHECK(std::abs(e_correl - oracle_h2::correl_dc(params).energy) <= 1e-10);
  CHECK(std::abs(energies.at("e_total").get<double>() - (e_ref + e_correl)) <= 1e-12);
  CHECK(report.at("conversions").at("e_correl_mhz").get<double>() ==
        e_correl * 6.579683920502e9);
  CHECK(report.at("amplitude_counts").at("t2") == 1);
  CHECK(report.at("amplitude_counts").at("t1") == 0);
}

TEST_CASE("invalid input maps to status 2") {
  const auto unit = mid_unit();
  REQUIRE(unit != nullptr);
  char* report = nullptr;

  CHECK(qedcc_run_json(unit.get(), R"({"metod": "ccd"})", &report) == QEDCC_ERR_INPUT);
  CHECK(last_error().find("unknown key") != std::string::npos);
  CHECK(qedcc_run_json(unit.get(), R"({"method": "cepa"})", &report) == QEDCC_ERR_INPUT);
  CHECK(qedcc_run_json(unit.get(), R"({"pair_denominator": "sometimes"})", &report) ==
        QEDCC_ERR_INPUT);
  CHECK(qedcc_run_json(unit.get(), "[1, 2]", &report) == QEDCC_ERR_INPUT);
  CHECK(qedcc_run_json(nullptr, "{}", &report) == QEDCC_ERR_INPUT);
}

TEST_CASE("numerical failures map to status 1") {
  const auto unit = mid_unit();
  REQUIRE(unit != nullptr);
  char* report = nullptr;
  CHECK(qedcc_run_json(unit.get(), R"({"method": "ccd", "max_iterations": 1})",
                       &report) == QEDCC_ERR_NUMERICAL);
  CHECK(last_error().rfind("divergence", 0) == 0);
}

TEST_CASE("closed-form table bytes match the golden file") {
  const std::string params = read_file(fixture_path("h2_unit_mid.json"));
  char* raw = nullptr;
  REQUIRE(qedcc_oracle_h2_json(params.c_str(), &raw) == QEDCC_OK);
  const std::string report = take(raw);
  CHECK(report + "\n" == read_file(fixture_path("golden/oracle_h2_mid.json")));

  json custom = json::parse(params);
  custom["units"] = json::array({3});
  raw = nullptr;
  REQUIRE(qedcc_oracle_h2_json(custom.dump().c_str(), &raw) == QEDCC_OK);
  const json table = json::parse(take(raw));
  REQUIRE(table.at("dci_per_unit").size() == 1);
  CHECK(table.at("dci_per_unit").at("3").get<double>() ==
        oracle_h2::dci_per_unit(mid_params(), 3));

  custom["units"] = json::array({0});
  CHECK(qedcc_oracle_h2_json(custom.dump().c_str(), &raw) == QEDCC_ERR_INPUT);
  json missing = json::parse(params);
  missing.erase("k12");
  CHECK(qedcc_oracle_h2_json(missing.dump().c_str(), &raw) == QEDCC_ERR_INPUT);
  CHECK(last_error().find("k12") != std::string::npos);
}

TEST_CASE("unit builder bridges to the native builder") {
  json params = json::parse(read_file(fixture_path("h2_unit_mid.json")));
  params["include_negative"] = true;
  params["eta_one_pair"] = 2e-3;
  params["eta_two_pair"] = 3e-3;
  const auto sys = own(qedcc_build_h2_unit(params.dump().c_str()));
  REQUIRE(sys != nullptr);

  oracle_h2::BuildUnitOptions options;
  options.include_negative = true;
  options.eta_one_pair = 2e-3;
  options.eta_two_pair = 3e-3;
  const ModelSystem native = oracle_h2::build_unit(mid_params(), options);
  CHECK(take(qedcc_system_to_json(sys.get())) == qedcc::model_to_json_text(native));

  params["eps2"] = -1.0;  // below eps1
  CHECK(qedcc_build_h2_unit(params.dump().c_str()) == nullptr);
  CHECK(last_error().rfind("domain", 0) == 0);
}

TEST_CASE("photon report crosses the boundary") {
  const double c = 137.0359990836958;
  json state;
  state["tau"] = 1.0;
  state["volume"] = 2.0;
  json mode;
  mode["k"] = json::array({0.0, 0.0, std::log(2.0) / c});
  mode["polarization"] = json::array({1.0, 0.0, 0.0});
  mode["weight"] = 1.0;
  state["modes"] = json::array({mode});

  char* raw = nullptr;
  REQUIRE(qedcc_photon_report_json(state.dump().c_str(), &raw) == QEDCC_OK);
  const json report = json::parse(take(raw));
  CHECK(report.at("schema_version") == 1);
  REQUIRE(report.at("modes").size() == 1);
  const json& entry = report.at("modes").at(0);
  const double x = entry.at("x").get<double>();
  CHECK(std::abs(x - std::log(2.0)) <= 1e-15);
  // mean occupation at x = ln 2 is exactly one photon
  CHECK(std::abs(entry.at("mean_occupation").get<double>() - 1.0) <= 1e-12);
  const double omega = entry.at("frequency").get<double>();
  CHECK(std::abs(report.at("energy_density").get<double>() -
                 entry.at("mean_occupation").get<double>() * omega / 2.0) <=
        1e-15);

  state["position"] = json::array({0.0, 0.0, 0.0});
  state["time"] = 0.0;
  raw = nullptr;
  REQUIRE(qedcc_photon_report_json(state.dump().c_str(), &raw) == QEDCC_OK);
  CHECK(json::parse(take(raw)).at("vector_potential").size() == 3);

  state.erase("time");
  CHECK(qedcc_photon_report_json(state.dump().c_str(), &raw) == QEDCC_ERR_INPUT);
  state.erase("position");
  state.erase("tau");
  CHECK(qedcc_photon_report_json(state.dump().c_str(), &raw) == QEDCC_ERR_INPUT);
  CHECK(qedcc_photon_report_json(R"({"tau": 1.0, "hue": 3})", &raw) ==
        QEDCC_ERR_INPUT);
}

TEST_CASE("multireference bridge equals the native solve") {
  const std::string text = read_file(fixture_path("h2_unit_model.json"));
  const auto sys = own(qedcc_system_from_json(text.c_str()));
  REQUIRE(sys != nullptr);

  json options = json::parse(read_file(fixture_path("mrcc_space.json")));
  options["max_iterations"] = 2000;
  options["residual_tolerance"] = 1e-10;
  options["energy_tolerance"] = 1e-12;

  char* raw = nullptr;
  REQUIRE(qedcc_mrcc_run_json(sys.get(), options.dump().c_str(), &raw) == QEDCC_OK);
  const std::string first = take(raw);
  raw = nullptr;
  REQUIRE(qedcc_mrcc_run_json(sys.get(), options.dump().c_str(), &raw) == QEDCC_OK);
  CHECK(first == take(raw));

  const json report = json::parse(first);
  CHECK(report.at("schema_version") == 1);
  CHECK(report.at("method") == "mrcc");
  CHECK(report.at("coupling") == "bloch");
  CHECK(report.at("converged") == true);
  REQUIRE(report.at("heff").size() == 2);
  REQUIRE(report.at("heff").at(0).size() == 2);
  CHECK(report.at("eigenvalues").size() == 2);
  CHECK(report.at("model_coefficients").size() == 2);

  const ModelSystem native = qedcc::model_from_json_text(text);
  mrcc::ModelSpace space;
  space.references = {fock::Determinant::from_indices({0, 1}),
                      fock::Determinant::from_indices({2, 3})};
  mrcc::MrccOptions native_options;
  native_options.max_iterations = 2000;
  native_options.residual_tolerance = 1e-10;
  native_options.energy_tolerance = 1e-12;
  const auto solved = mrcc::mrcc_residual_solve(native, space,
                                                ChannelSet::coulomb_only(),
                                                native_options);
  CHECK(std::abs(report.at("energy").get<double>() - solved.energy) <= 1e-13);

  // the singles decouple in this unit, so the model-space solve is exact
  const auto full = fock::enumerate(native, fock::GenerationRule::full);
  const auto eig = fock::diagonalize(full, native, ChannelSet::coulomb_only());
  CHECK(std::abs(report.at("energy").get<double>() - eig.eigenvalues.front()) <= 1e-8);

  CHECK(qedcc_mrcc_run_json(sys.get(), R"({"references": [[0, 1], [0, 1]]})", &raw) ==
        QEDCC_ERR_INPUT);
  CHECK(qedcc_mrcc_run_json(sys.get(), "{}", &raw) == QEDCC_ERR_INPUT);
  CHECK(qedcc_mrcc_run_json(sys.get(),
                            R"({"references": [[0, 1]], "coupling": "diag"})",
                            &raw) == QEDCC_ERR_INPUT);
  CHECK(qedcc_mrcc_run_json(sys.get(), R"({"references": [[0, 1], [0, 1, 2]]})",
                            &raw) == QEDCC_ERR_INPUT);
}

}  // TEST_SUITE
