// Copyright 2026 The qfnn Authors.
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

// Instance file format (JSON, version 1):
//
//   {
//     "format": "qfnn-instance",
//     "version": 1,
//     "class": "maxcut" | "mwis" | "random" | "tsp" | "custom",
//     "seed": <uint64>,
//     "n": <int>,
//     "rng": "<Rng::kName>",
//     "Q": [ n*n doubles, row-major ],
//     "metadata": { "<key>": <double>, ... },
//     "warnings": [ "<text>", ... ]
//   }
//
// Doubles are written in shortest round-trip form, so Q survives a save/load
// cycle bit for bit.

#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "qfnn/error.hpp"
#include "qfnn/qubo.hpp"
#include "qfnn/rng.hpp"

namespace qfnn {

inline constexpr int kInstanceFormatVersion = 1;

namespace detail {

// Line and column (1-based) of a byte offset.
inline std::string describe_offset(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col) +
         " (byte " + std::to_string(byte) + ")";
}

inline nlohmann::json parse_json_document(const std::string& text, const std::string& origin) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::kParse, origin + ": malformed JSON at " +
                                       describe_offset(text, e.byte == 0 ? 0 : e.byte - 1) +
                                       ": " + e.what());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path.string());
}

}  // namespace detail

inline nlohmann::json instance_to_json(const QuboInstance& inst) {
  nlohmann::json j;
  j["format"] = "qfnn-instance";
  j["version"] = kInstanceFormatVersion;
  j["class"] = std::string(to_string(inst.class_tag));
  j["seed"] = inst.seed;
  j["n"] = inst.n();
  j["rng"] = std::string(Rng::kName);
  auto& q = j["Q"] = nlohmann::json::array();
  for (int r = 0; r < inst.n(); ++r)
    for (int c = 0; c < inst.n(); ++c) q.push_back(inst.Q(r, c));
  j["metadata"] = nlohmann::json::object();
  for (const auto& [k, v] : inst.extra) j["metadata"][k] = v;
  j["warnings"] = inst.warnings;
  return j;
}

/// Builds an instance from a parsed document; nothing is returned unless the
/// whole document validates. An asymmetric Q is symmetrized and the fact is
/// appended to warnings.
inline QuboInstance instance_from_json(const nlohmann::json& j, const std::string& origin = "instance") {
  auto fail = [&](const std::string& what) -> Error {
    return Error(ErrorKind::kParse, origin + ": " + what);
  };
  if (!j.is_object()) throw fail("top level must be an object");
  if (j.value("format", std::string()) != "qfnn-instance") throw fail("missing format tag \"qfnn-instance\"");
  if (!j.contains("version") || !j["version"].is_number_integer()) throw fail("missing integer version");
  if (j["version"].get<int>() != kInstanceFormatVersion)
    throw fail("unsupported version " + j["version"].dump());
  if (!j.contains("n") || !j["n"].is_number_integer()) throw fail("missing integer n");
  const int n = j["n"].get<int>();
  if (n < 1) throw fail("n must be >= 1");
  if (!j.contains("Q") || !j["Q"].is_array()) throw fail("missing array Q");
  const auto& qa = j["Q"];
  if (qa.size() != static_cast<std::size_t>(n) * n)
    throw fail("Q has " + std::to_string(qa.size()) + " entries, expected n*n = " +
               std::to_string(static_cast<long long>(n) * n));
  Matrix q(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const auto& v = qa[static_cast<std::size_t>(r) * n + c];
      if (!v.is_number()) throw fail("Q entry " + std::to_string(r * n + c) + " is not a number");
      q(r, c) = v.get<double>();
    }
  }
  ProblemClass tag = ProblemClass::kCustom;
  if (j.contains("class")) {
    if (!j["class"].is_string()) throw fail("class must be a string");
    auto parsed = parse_problem_class(j["class"].get<std::string>());
    if (!parsed) throw fail("unknown class " + j["class"].dump());
    tag = *parsed;
  }
  std::uint64_t seed = 0;
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) throw fail("seed must be an integer");
    seed = j["seed"].get<std::uint64_t>();
  }
  std::vector<std::string> warnings;
  if (j.contains("warnings")) {
    if (!j["warnings"].is_array()) throw fail("warnings must be an array");
    for (const auto& w : j["warnings"]) {
      if (!w.is_string()) throw fail("warnings entries must be strings");
      warnings.push_back(w.get<std::string>());
    }
  }
  std::map<std::string, double> extra;
  if (j.contains("metadata")) {
    if (!j["metadata"].is_object()) throw fail("metadata must be an object");
    for (const auto& [k, v] : j["metadata"].items()) {
      if (!v.is_number()) throw fail("metadata value for " + k + " is not a number");
      extra[k] = v.get<double>();
    }
  }
  auto inst = QuboInstance::make(std::move(q), tag, seed);
  // make() records its own symmetrization warning; keep earlier ones first.
  warnings.insert(warnings.end(), inst.warnings.begin(), inst.warnings.end());
  inst.warnings = std::move(warnings);
  inst.extra = std::move(extra);
  return inst;
}

inline std::string serialize_instance(const QuboInstance& inst) {
  return instance_to_json(inst).dump(1) + "\n";
}

inline QuboInstance parse_instance(const std::string& text, const std::string& origin = "instance") {
  return instance_from_json(detail::parse_json_document(text, origin), origin);
}

inline void save_instance(const QuboInstance& inst, const std::filesystem::path& path) {
  detail::write_file(path, serialize_instance(inst));
}

inline QuboInstance load_instance(const std::filesystem::path& path) {
  return parse_instance(detail::read_file(path), path.string());
}

}  // namespace qfnn
