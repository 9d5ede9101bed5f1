// Copyright 2026 The dpform Authors
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

#ifndef DPFORM_CONFIG_HPP
#define DPFORM_CONFIG_HPP

#include <cstdint>
#include <string>

#include <json.hpp>

#include "dpform/engine.hpp"
#include "dpform/schedule.hpp"

namespace dpform {

// Fully validated experiment description. See README for the JSON schema.
struct SimConfig {
  Scenario scenario;
  Schedule delta_schedule;
  int horizon = 100;
  std::uint64_t seed = 0;
  int runs = 1;
  std::string out_dir = "out";
  bool zero_noise = false;
  bool realized_audit = false;
  bool global_rho = false;
};

// Throws ParseError on malformed JSON and ValidationError (with the field
// path) on any cross-check failure.
SimConfig load_config(const std::string& path);
SimConfig parse_config(const nlohmann::json& doc);

// Canonical JSON form; parse_config(config_to_json(cfg)) is semantically
// the identity.
nlohmann::json config_to_json(const SimConfig& config);

}  // namespace dpform

#endif  // DPFORM_CONFIG_HPP
