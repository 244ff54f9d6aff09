// Copyright 2026 The ctgme Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>

#include "json.hpp"

#include "ctgme/error.hpp"
#include "ctgme/tensor_core.hpp"

namespace ctgme {

using Json = nlohmann::json;
using LoadedState = std::variant<PureState, DensityMatrix>;

/// A parsed state file.
///
/// Layout (JSON):
///   {"dims": [2,2,2], "kind": "pure",  "data": [[re,im], ...]}
///   {"dims": [2,2],   "kind": "mixed", "data": [[[re,im], ...], ...]}
/// Optional keys: "tolerance" (declared precision of the entries) and "meta"
/// (free-form object; "meta.checksum" with "entry_sum" and "weighted_sum" is
/// verified when present).
struct StateDocument {
  LoadedState state;
  std::optional<double> declared_tolerance;
  double validation_tolerance = kDefaultTol;
  Json meta = Json::object();
  std::string digest;  // FNV-1a 64 of the source text

  bool is_pure() const { return std::holds_alternative<PureState>(state); }
  const Dims& dims() const {
    return std::visit([](const auto& s) -> const Dims& { return s.dims(); }, state);
  }
};

inline std::string fnv1a_digest(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace detail {

[[noreturn]] inline void field_error(const std::string& field, const std::string& what) {
  fail(ErrorKind::parse, "field '" + field + "': " + what);
}

inline Complex parse_complex(const Json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    field_error(field, "expected [re, im] pair of numbers");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

struct Checksum {
  double entry_sum = 0.0;
  double weighted_sum = 0.0;
};

/// Sum of re+im, and sum of (k+1)(re+im) over the flat row-major entry index k.
template <typename Entries>
Checksum checksum_of(const Entries& flat) {
  Checksum c;
  for (std::size_t k = 0; k < flat.size(); ++k) {
    const double v = flat[k].real() + flat[k].imag();
    c.entry_sum += v;
    c.weighted_sum += static_cast<double>(k + 1) * v;
  }
  return c;
}

}  // namespace detail

inline Json checksum_json(const CMatrix& m) {
  std::vector<Complex> flat;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) flat.push_back(m(i, j));
  const auto c = detail::checksum_of(flat);
  return Json{{"entry_sum", c.entry_sum}, {"weighted_sum", c.weighted_sum}};
}

inline StateDocument parse_state_text(std::string_view text, std::optional<double> tol = std::nullopt) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::parse, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorKind::parse, "document must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "dims" && key != "kind" && key != "data" && key != "tolerance" && key != "meta") {
      detail::field_error(key, "unknown field");
    }
  }

  if (!doc.contains("dims") || !doc["dims"].is_array() || doc["dims"].empty()) {
    detail::field_error("dims", "expected a non-empty list of integers");
  }
  Dims dims;
  for (std::size_t k = 0; k < doc["dims"].size(); ++k) {
    const Json& d = doc["dims"][k];
    if (!d.is_number_integer()) detail::field_error("dims[" + std::to_string(k) + "]", "expected an integer");
    dims.push_back(d.get<int>());
  }
  if (!doc.contains("kind") || !doc["kind"].is_string()) detail::field_error("kind", "expected \"pure\" or \"mixed\"");
  const std::string kind = doc["kind"].get<std::string>();
  if (kind != "pure" && kind != "mixed") detail::field_error("kind", "expected \"pure\" or \"mixed\", got \"" + kind + "\"");
  if (!doc.contains("data") || !doc["data"].is_array()) detail::field_error("data", "expected a list");

  StateDocument out{PureState::basis({2}, {0}), std::nullopt, kDefaultTol, Json::object(), fnv1a_digest(text)};
  if (doc.contains("tolerance")) {
    if (!doc["tolerance"].is_number() || doc["tolerance"].get<double>() <= 0.0) {
      detail::field_error("tolerance", "expected a positive number");
    }
    out.declared_tolerance = doc["tolerance"].get<double>();
  }
  if (doc.contains("meta")) {
    if (!doc["meta"].is_object()) detail::field_error("meta", "expected an object");
    out.meta = doc["meta"];
  }
  out.validation_tolerance = tol.value_or(out.declared_tolerance.value_or(kDefaultTol));

  std::size_t total = 1;
  for (int d : dims) {
    if (d < 2) detail::field_error("dims", "local dimensions must be >= 2");
    total *= static_cast<std::size_t>(d);
    if (total > kMaxDimension) detail::field_error("dims", "total dimension too large");
  }

  const Json& data = doc["data"];
  std::vector<Complex> flat;
  if (kind == "pure") {
    if (data.size() != total) {
      detail::field_error("data", "expected " + std::to_string(total) + " amplitudes, got " + std::to_string(data.size()));
    }
    for (std::size_t i = 0; i < total; ++i) flat.push_back(detail::parse_complex(data[i], "data[" + std::to_string(i) + "]"));
  } else {
    if (data.size() != total) {
      detail::field_error("data", "expected " + std::to_string(total) + " rows, got " + std::to_string(data.size()));
    }
    for (std::size_t i = 0; i < total; ++i) {
      const std::string row = "data[" + std::to_string(i) + "]";
      if (!data[i].is_array() || data[i].size() != total) {
        detail::field_error(row, "expected a row of " + std::to_string(total) + " [re, im] pairs");
      }
      for (std::size_t j = 0; j < total; ++j) flat.push_back(detail::parse_complex(data[i][j], row + "[" + std::to_string(j) + "]"));
    }
  }

  if (out.meta.contains("checksum")) {
    const Json& cs = out.meta["checksum"];
    if (!cs.is_object() || !cs.contains("entry_sum") || !cs.contains("weighted_sum") || !cs["entry_sum"].is_number() ||
        !cs["weighted_sum"].is_number()) {
      detail::field_error("meta.checksum", "expected numbers entry_sum and weighted_sum");
    }
    const auto got = detail::checksum_of(flat);
    const double want_e = cs["entry_sum"].get<double>();
    const double want_w = cs["weighted_sum"].get<double>();
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); };
    if (!close(got.entry_sum, want_e) || !close(got.weighted_sum, want_w)) {
      fail(ErrorKind::validation, "transcription checksum mismatch: entry_sum " + detail::fmt_double(got.entry_sum) +
                                      " vs " + detail::fmt_double(want_e) + ", weighted_sum " +
                                      detail::fmt_double(got.weighted_sum) + " vs " + detail::fmt_double(want_w));
    }
  }

  if (kind == "pure") {
    CVector amps(static_cast<Eigen::Index>(total));
    for (std::size_t i = 0; i < total; ++i) amps(static_cast<Eigen::Index>(i)) = flat[i];
    out.state = PureState(dims, std::move(amps), out.validation_tolerance);
  } else {
    CMatrix m(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(total));
    for (std::size_t i = 0; i < total; ++i)
      for (std::size_t j = 0; j < total; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = flat[i * total + j];
    out.state = DensityMatrix(dims, std::move(m), out.validation_tolerance);
  }
  return out;
}

inline StateDocument parse_state_file(const std::filesystem::path& path, std::optional<double> tol = std::nullopt) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::parse, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_state_text(buf.str(), tol);
}

inline Json state_to_json(const PureState& psi, const Json& meta = Json::object()) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < psi.dimension(); ++i) data.push_back(detail::complex_to_json(psi.amplitudes()(i)));
  Json doc{{"dims", psi.dims()}, {"kind", "pure"}, {"data", std::move(data)}};
  if (!meta.empty()) doc["meta"] = meta;
  return doc;
}

inline Json state_to_json(const DensityMatrix& rho, const Json& meta = Json::object()) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < rho.dimension(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < rho.dimension(); ++j) row.push_back(detail::complex_to_json(rho.matrix()(i, j)));
    data.push_back(std::move(row));
  }
  Json doc{{"dims", rho.dims()}, {"kind", "mixed"}, {"data", std::move(data)}};
  if (!meta.empty()) doc["meta"] = meta;
  return doc;
}

/// Doubles are written in shortest round-trip form, so parsing the output
/// reproduces every amplitude bit for bit.
template <typename State>
std::string emit_state_document(const State& s, const Json& meta = Json::object()) {
  const Json doc = state_to_json(s, meta);
  std::string out = "{\n \"dims\": " + doc["dims"].dump() + ",\n \"kind\": " + doc["kind"].dump() + ",\n";
  if (doc.contains("meta")) out += " \"meta\": " + doc["meta"].dump() + ",\n";
  out += " \"data\": [\n";
  const Json& data = doc["data"];
  for (std::size_t i = 0; i < data.size(); ++i) {
    out += "  " + data[i].dump() + (i + 1 < data.size() ? ",\n" : "\n");
  }
  return out + " ]\n}\n";
}

}  // namespace ctgme
