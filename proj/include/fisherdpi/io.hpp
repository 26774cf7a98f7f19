// Copyright 2026 The fisherdpi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * JSON documents for models, measurements and reports.
 *
 * Complex numbers are always two-element `[re, im]` arrays; matrices are
 * arrays of rows. A model document looks like
 *
 *     {"dim": 2, "kind": "unitary",
 *      "generator": [[[1,0],[0,0]], [[0,0],[-1,0]]],
 *      "initial_state": [[0.7071067811865476,0], [0.7071067811865476,0]],
 *      "passes": 1,
 *      "compose": [{"kraus": [<matrix>, ...], "placement": "post"}]}
 *
 * and a measurement document either lists `effects` (matrices) or gives a
 * unitary `basis` whose columns are the measurement vectors, with optional
 * integer `labels`. Schema errors name the offending JSON pointer.
 */

#pragma once

#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fisherdpi/dpi.hpp"
#include "fisherdpi/error.hpp"
#include "fisherdpi/linalg.hpp"
#include "fisherdpi/model.hpp"
#include "fisherdpi/quantum.hpp"

namespace fisherdpi::io {

using Json = nlohmann::json;

namespace detail {

[[noreturn]] inline void schema_error(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ParseError, "at " + (where.empty() ? std::string("/") : where) + ": " + what);
}

inline const Json& require_key(const Json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object()) schema_error(where, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) schema_error(where, "missing key '" + key + "'");
  return *it;
}

inline double number(const Json& j, const std::string& where) {
  if (!j.is_number()) schema_error(where, "expected a number");
  return j.get<double>();
}

inline std::size_t positive_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 1) schema_error(where, "expected a positive integer");
  return static_cast<std::size_t>(j.get<long long>());
}

}  // namespace detail

inline Complex parse_complex(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) detail::schema_error(where, "expected [re, im] pair");
  return {detail::number(j[0], where + "/0"), detail::number(j[1], where + "/1")};
}

inline ComplexVector parse_vector(const Json& j, std::size_t dim, const std::string& where) {
  if (!j.is_array() || j.size() != dim) {
    detail::schema_error(where, "expected an array of " + std::to_string(dim) + " complex entries");
  }
  ComplexVector v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = parse_complex(j[i], where + "/" + std::to_string(i));
  return v;
}

inline ComplexMatrix parse_matrix(const Json& j, std::size_t dim, const std::string& where) {
  if (!j.is_array() || j.size() != dim) {
    detail::schema_error(where, "expected " + std::to_string(dim) + " rows");
  }
  ComplexMatrix m(dim);
  for (std::size_t r = 0; r < dim; ++r) {
    const auto row = parse_vector(j[r], dim, where + "/" + std::to_string(r));
    for (std::size_t c = 0; c < dim; ++c) m(r, c) = row[c];
  }
  return m;
}

inline Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Json to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.dim(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.dim(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Json to_json(const Povm& povm) {
  Json effects = Json::array();
  for (const auto& e : povm.effects()) effects.push_back(to_json(e));
  return {{"dim", povm.dim()}, {"labels", povm.labels()}, {"effects", std::move(effects)}};
}

inline Json to_json(const DensityMatrix& rho) { return to_json(rho.matrix()); }

/// Reads and parses a JSON file; syntax errors carry nlohmann's line/column.
inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

inline KrausChannel parse_channel(const Json& j, std::size_t dim, const std::string& where) {
  if (!j.is_array() || j.empty()) detail::schema_error(where, "expected a non-empty list of Kraus matrices");
  std::vector<ComplexMatrix> kraus;
  for (std::size_t k = 0; k < j.size(); ++k) kraus.push_back(parse_matrix(j[k], dim, where + "/" + std::to_string(k)));
  return KrausChannel(std::move(kraus));
}

inline ParameterizedModel parse_model(const Json& doc) {
  const std::size_t dim = detail::positive_int(detail::require_key(doc, "dim", ""), "/dim");
  if (dim > kMaxDim) detail::schema_error("/dim", "dimension above 64");
  const auto& kind = detail::require_key(doc, "kind", "");
  if (kind != "unitary") detail::schema_error("/kind", "only \"unitary\" models can be loaded");
  const auto generator = parse_matrix(detail::require_key(doc, "generator", ""), dim, "/generator");
  const auto amps = parse_vector(detail::require_key(doc, "initial_state", ""), dim, "/initial_state");
  int passes = 1;
  if (doc.contains("passes")) passes = static_cast<int>(detail::positive_int(doc["passes"], "/passes"));

  auto model = make_unitary_family(generator, pure_state(amps), passes);
  if (doc.contains("compose")) {
    const auto& list = doc["compose"];
    if (!list.is_array()) detail::schema_error("/compose", "expected a list");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string where = "/compose/" + std::to_string(i);
      const auto channel = parse_channel(detail::require_key(list[i], "kraus", where), dim, where + "/kraus");
      const auto& placement = detail::require_key(list[i], "placement", where);
      if (placement == "pre") {
        model = compose(model, channel, Placement::Pre);
      } else if (placement == "post") {
        model = compose(model, channel, Placement::Post);
      } else {
        detail::schema_error(where + "/placement", "expected \"pre\" or \"post\"");
      }
    }
  }
  return model;
}

inline Povm parse_povm(const Json& doc) {
  const std::size_t dim = detail::positive_int(detail::require_key(doc, "dim", ""), "/dim");
  if (dim > kMaxDim) detail::schema_error("/dim", "dimension above 64");
  std::vector<int> labels;
  if (doc.contains("labels")) {
    const auto& l = doc["labels"];
    if (!l.is_array()) detail::schema_error("/labels", "expected a list of integers");
    for (std::size_t i = 0; i < l.size(); ++i) {
      if (!l[i].is_number_integer()) detail::schema_error("/labels/" + std::to_string(i), "expected an integer");
      labels.push_back(l[i].get<int>());
    }
  }
  if (doc.contains("basis")) {
    auto povm = projective_povm(parse_matrix(doc["basis"], dim, "/basis"));
    return labels.empty() ? povm : Povm(povm.effects(), labels);
  }
  const auto& effects = detail::require_key(doc, "effects", "");
  if (!effects.is_array() || effects.empty()) detail::schema_error("/effects", "expected a non-empty list");
  std::vector<ComplexMatrix> mats;
  for (std::size_t k = 0; k < effects.size(); ++k) {
    mats.push_back(parse_matrix(effects[k], dim, "/effects/" + std::to_string(k)));
  }
  return Povm(std::move(mats), labels);
}

inline Json to_json(const DpiTrialReport& r) {
  Json j = {{"index", r.index}, {"seed", r.seed},       {"kind", r.kind},
            {"i_before", r.i_before}, {"i_after", r.i_after}, {"gap", r.gap},
            {"violated", r.violated}, {"detail", r.detail}};
  if (r.j_before) j["j_before"] = *r.j_before;
  if (r.j_after) j["j_after"] = *r.j_after;
  if (r.sld_before) j["sld_before"] = *r.sld_before;
  if (r.sld_after) j["sld_after"] = *r.sld_after;
  if (r.dual_identity_error) j["dual_identity_error"] = *r.dual_identity_error;
  return j;
}

}  // namespace fisherdpi::io
