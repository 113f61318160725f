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

// Model checkpoints: {"format": "qfnn-fnn", "version": 1, "input": [...],
// "output_map": "unit_interval", "layers": [{"activation", "fan_in",
// "fan_out", "W" (row-major), "b"}]}.

#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>

#include "qfnn/fnn.hpp"
#include "qfnn/instance_io.hpp"

namespace qfnn {

inline constexpr int kCheckpointVersion = 1;

inline nlohmann::json mlp_to_json(const Mlp& net) {
  nlohmann::json j;
  j["output_map"] = net.output_map == OutputMap::kUnitInterval ? "unit_interval" : "none";
  auto& layers = j["layers"] = nlohmann::json::array();
  for (const auto& layer : net.layers) {
    nlohmann::json lj;
    lj["activation"] = std::string(to_string(layer.activation));
    lj["fan_in"] = layer.fan_in();
    lj["fan_out"] = layer.fan_out();
    auto& w = lj["W"] = nlohmann::json::array();
    for (Eigen::Index r = 0; r < layer.W.rows(); ++r)
      for (Eigen::Index c = 0; c < layer.W.cols(); ++c) w.push_back(layer.W(r, c));
    lj["b"] = std::vector<double>(layer.b.data(), layer.b.data() + layer.b.size());
    layers.push_back(std::move(lj));
  }
  return j;
}

inline Mlp mlp_from_json(const nlohmann::json& j) {
  auto fail = [](const std::string& what) { return Error(ErrorKind::kParse, "checkpoint: " + what); };
  if (!j.contains("layers") || !j["layers"].is_array()) throw fail("missing layers");
  Mlp net;
  const std::string map = j.value("output_map", std::string("none"));
  if (map == "unit_interval") net.output_map = OutputMap::kUnitInterval;
  else if (map != "none") throw fail("unknown output_map " + map);
  for (const auto& lj : j["layers"]) {
    auto act = parse_activation(lj.value("activation", std::string()));
    if (!act) throw fail("unknown activation");
    const int fi = lj.value("fan_in", -1), fo = lj.value("fan_out", -1);
    if (fi < 1 || fo < 1) throw fail("bad layer shape");
    const auto w = lj.at("W").get<std::vector<double>>();
    const auto b = lj.at("b").get<std::vector<double>>();
    if (w.size() != static_cast<std::size_t>(fi) * fo || b.size() != static_cast<std::size_t>(fo))
      throw fail("layer parameter count does not match its shape");
    DenseLayer layer(fi, fo, *act);
    for (int r = 0; r < fi; ++r)
      for (int c = 0; c < fo; ++c) layer.W(r, c) = w[static_cast<std::size_t>(r) * fo + c];
    for (int c = 0; c < fo; ++c) layer.b[c] = b[c];
    if (!net.layers.empty() && net.layers.back().fan_out() != fi)
      throw fail("layer widths do not chain");
    net.layers.push_back(std::move(layer));
  }
  return net;
}

inline nlohmann::json fnn_to_json(const FnnModel& m) {
  nlohmann::json j = mlp_to_json(m.net);
  j["format"] = "qfnn-fnn";
  j["version"] = kCheckpointVersion;
  j["input"] = std::vector<double>(m.input.data(), m.input.data() + m.input.size());
  return j;
}

inline FnnModel fnn_from_json(const nlohmann::json& j) {
  if (j.value("format", std::string()) != "qfnn-fnn" || j.value("version", 0) != kCheckpointVersion)
    throw Error(ErrorKind::kParse, "checkpoint: not a version 1 qfnn-fnn document");
  FnnModel m;
  try {
    m.net = mlp_from_json(j);
    const auto in = j.at("input").get<std::vector<double>>();
    m.input = Eigen::Map<const Vector>(in.data(), static_cast<Eigen::Index>(in.size()));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("checkpoint: ") + e.what());
  }
  if (m.net.layers.empty() || m.input.size() != m.net.input_width())
    throw Error(ErrorKind::kParse, "checkpoint: input width does not match first layer");
  return m;
}

inline void save_checkpoint(const FnnModel& m, const std::filesystem::path& path) {
  detail::write_file(path, fnn_to_json(m).dump() + "\n");
}

inline FnnModel load_checkpoint(const std::filesystem::path& path) {
  const std::string text = detail::read_file(path);
  return fnn_from_json(detail::parse_json_document(text, path.string()));
}

}  // namespace qfnn
