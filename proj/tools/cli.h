// Copyright 2026 The rhtag Authors
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


// Command-line front end. Exposed as a library so tests can drive commands
// in-process.

#ifndef RHTAG_TOOLS_CLI_H_
#define RHTAG_TOOLS_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rhtag/error.h"

namespace rhtag::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitData = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitBackend = 3;
inline constexpr int kExitPrecondition = 4;

int exit_code_for(ErrorCode code);

struct RunConfig {
  std::string schema = "subtask1";
  std::string corpus;
  double validation_fraction = 0.2;
  std::optional<std::string> gazetteer;  // built-in lexicon when unset
  bool augment = false;
  std::string backend = "perceptron";
  std::optional<std::string> adapter;
  std::vector<std::string> adapter_args;
  nlohmann::json hyper = nlohmann::json::object();  // overrides
  std::size_t bootstrap_resamples = 10000;
  std::string bootstrap_metric = "micro_f1";
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::string out = ".";

  // Every field, with hyper-parameters fully materialized for the schema.
  nlohmann::ordered_json resolved_json() const;
  // Accepts a bare config object or a run manifest holding one under
  // "config". Unknown keys are rejected with kInvalidArgument.
  static RunConfig from_json(const nlohmann::json& j);
};

// Entry point; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rhtag::cli

#endif  // RHTAG_TOOLS_CLI_H_
