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

#include "qedcc/json_io.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

namespace qedcc {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& message) {
  throw Error(ErrorKind::structural, message);
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      fail("unknown key '" + it.key() + "' in " + where);
}

double require_number(const json& obj, const std::string& key,
                      const std::string& where) {
  if (!obj.contains(key)) fail("missing key '" + key + "' in " + where);
  if (!obj[key].is_number()) fail("key '" + key + "' in " + where + " is not a number");
  return obj[key].get<double>();
}

Complex parse_complex(const json& value, const std::string& where) {
  if (!value.is_array() || value.size() != 2 || !value[0].is_number() ||
      !value[1].is_number())
    fail("complex value in " + where + " must be a [re, im] number pair");
  return Complex(value[0].get<double>(), value[1].get<double>());
}

json dump_complex(const Complex& z) {
  return json::array({z.real(), z.imag()});
}

Matrix parse_matrix(const json& value, std::size_t n, const std::string& where) {
  if (!value.is_array() || value.size() != n)
    fail(where + " must be an array of " + std::to_string(n) + " rows");
  Matrix m(n, n);
  for (std::size_t p = 0; p < n; ++p) {
    const json& row = value[p];
    if (!row.is_array() || row.size() != n)
      fail(where + " row " + std::to_string(p) + " must have " +
           std::to_string(n) + " entries");
    for (std::size_t q = 0; q < n; ++q)
      m(p, q) = parse_complex(row[q], where);
  }
  return m;
}

json dump_matrix(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index p = 0; p < m.rows(); ++p) {
    json row = json::array();
    for (Eigen::Index q = 0; q < m.cols(); ++q) row.push_back(dump_complex(m(p, q)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Tensor4 parse_tensor(const json& value, std::size_t n, const std::string& where) {
  if (!value.is_array() || value.size() != n)
    fail(where + " must be an array of " + std::to_string(n) + " blocks");
  Tensor4 t(n);
  for (std::size_t p = 0; p < n; ++p) {
    const json& a = value[p];
    if (!a.is_array() || a.size() != n) fail(where + " has a misshapen block");
    for (std::size_t q = 0; q < n; ++q) {
      const json& b = a[q];
      if (!b.is_array() || b.size() != n) fail(where + " has a misshapen block");
      for (std::size_t r = 0; r < n; ++r) {
        const json& c = b[r];
        if (!c.is_array() || c.size() != n) fail(where + " has a misshapen block");
        for (std::size_t s = 0; s < n; ++s)
          t(p, q, r, s) = parse_complex(c[s], where);
      }
    }
  }
  return t;
}

json dump_tensor(const Tensor4& t) {
  const std::size_t n = t.dim();
  json out = json::array();
  for (std::size_t p = 0; p < n; ++p) {
    json a = json::array();
    for (std::size_t q = 0; q < n; ++q) {
      json b = json::array();
      for (std::size_t r = 0; r < n; ++r) {
        json c = json::array();
        for (std::size_t s = 0; s < n; ++s) c.push_back(dump_complex(t(p, q, r, s)));
        b.push_back(std::move(c));
      }
      a.push_back(std::move(b));
    }
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace

ModelSystem model_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(std::string("model file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("model file root must be an object");
  reject_unknown_keys(
      doc, {"schema_version", "constants", "levels", "integrals", "n_electrons"},
      "model root");

  if (!doc.contains("schema_version") || !doc["schema_version"].is_number_integer())
    fail("missing integer 'schema_version'");
  if (doc["schema_version"].get<int>() != kSchemaVersion)
    fail("unsupported schema_version " + doc["schema_version"].dump());

  ModelSystem sys;

  if (!doc.contains("constants") || !doc["constants"].is_object())
    fail("missing 'constants' object");
  const json& cst = doc["constants"];
  reject_unknown_keys(cst, {"alpha", "c", "m", "z_scale"}, "constants");
  sys.constants.alpha = require_number(cst, "alpha", "constants");
  sys.constants.c = require_number(cst, "c", "constants");
  sys.constants.m = require_number(cst, "m", "constants");
  sys.constants.z_scale = require_number(cst, "z_scale", "constants");

  sys.n_electrons = require_number(doc, "n_electrons", "model root");

  if (!doc.contains("levels") || !doc["levels"].is_array())
    fail("missing 'levels' array");
  const json& levels = doc["levels"];
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const json& lv = levels[i];
    const std::string where = "levels[" + std::to_string(i) + "]";
    if (!lv.is_object()) fail(where + " must be an object");
    reject_unknown_keys(lv,
                        {"index", "energy", "sector", "occupied_in_reference",
                         "occupancy", "lamb_shift"},
                        where);
    SpinorLevel l;
    l.index = static_cast<std::size_t>(require_number(lv, "index", where));
    l.energy = require_number(lv, "energy", where);
    if (!lv.contains("sector") || !lv["sector"].is_string())
      fail(where + " needs a string 'sector'");
    const std::string sector = lv["sector"].get<std::string>();
    if (sector == "positive") l.sector = Sector::positive;
    else if (sector == "negative") l.sector = Sector::negative;
    else fail(where + " sector must be 'positive' or 'negative'");
    if (!lv.contains("occupied_in_reference") ||
        !lv["occupied_in_reference"].is_boolean())
      fail(where + " needs a boolean 'occupied_in_reference'");
    l.occupied_in_reference = lv["occupied_in_reference"].get<bool>();
    l.occupancy = lv.contains("occupancy") ? require_number(lv, "occupancy", where) : 1.0;
    l.lamb_shift =
        lv.contains("lamb_shift") ? require_number(lv, "lamb_shift", where) : 0.0;
    sys.levels.push_back(l);
  }
  const std::size_t n = sys.levels.size();

  if (!doc.contains("integrals") || !doc["integrals"].is_object())
    fail("missing 'integrals' object");
  const json& ints = doc["integrals"];
  reject_unknown_keys(ints, {"h_ext", "h_hf", "v_coulomb", "v_breit", "lamb_terms"},
                      "integrals");
  if (!ints.contains("h_ext")) fail("integrals.h_ext is required");
  sys.integrals.h_ext = parse_matrix(ints["h_ext"], n, "integrals.h_ext");
  if (ints.contains("h_hf"))
    sys.integrals.h_hf = parse_matrix(ints["h_hf"], n, "integrals.h_hf");
  if (!ints.contains("v_coulomb")) fail("integrals.v_coulomb is required");
  sys.integrals.v_coulomb = parse_tensor(ints["v_coulomb"], n, "integrals.v_coulomb");
  if (ints.contains("v_breit"))
    sys.integrals.v_breit = parse_tensor(ints["v_breit"], n, "integrals.v_breit");
  if (ints.contains("lamb_terms")) {
    const json& terms = ints["lamb_terms"];
    if (!terms.is_array()) fail("integrals.lamb_terms must be an array");
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const std::string where = "lamb_terms[" + std::to_string(t) + "]";
      if (!terms[t].is_object()) fail(where + " must be an object");
      reject_unknown_keys(terms[t], {"weight", "delta_e"}, where);
      sys.integrals.lamb_terms.push_back(
          {require_number(terms[t], "weight", where),
           require_number(terms[t], "delta_e", where)});
    }
  }

  return sys;
}

std::string model_to_json_text(const ModelSystem& system) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["constants"] = {{"alpha", system.constants.alpha},
                      {"c", system.constants.c},
                      {"m", system.constants.m},
                      {"z_scale", system.constants.z_scale}};
  doc["n_electrons"] = system.n_electrons;
  json levels = json::array();
  for (const auto& l : system.levels) {
    json lv = {{"index", l.index},
               {"energy", l.energy},
               {"sector", l.sector == Sector::positive ? "positive" : "negative"},
               {"occupied_in_reference", l.occupied_in_reference},
               {"occupancy", l.occupancy}};
    if (l.lamb_shift != 0.0) lv["lamb_shift"] = l.lamb_shift;
    levels.push_back(std::move(lv));
  }
  doc["levels"] = std::move(levels);
  json ints;
  ints["h_ext"] = dump_matrix(system.integrals.h_ext);
  if (system.integrals.has_hyperfine()) ints["h_hf"] = dump_matrix(system.integrals.h_hf);
  ints["v_coulomb"] = dump_tensor(system.integrals.v_coulomb);
  if (system.integrals.has_breit()) ints["v_breit"] = dump_tensor(system.integrals.v_breit);
  if (system.integrals.has_lamb()) {
    json terms = json::array();
    for (const auto& t : system.integrals.lamb_terms)
      terms.push_back({{"weight", t.weight}, {"delta_e", t.delta_e}});
    ints["lamb_terms"] = std::move(terms);
  }
  doc["integrals"] = std::move(ints);
  return doc.dump(2) + "\n";
}

ModelSystem model_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open model file '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return model_from_json_text(text);
}

void model_to_json_file(const ModelSystem& system, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail("cannot write model file '" + path + "'");
  out << model_to_json_text(system);
}

}  // namespace qedcc
