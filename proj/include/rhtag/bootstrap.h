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

// Paired bootstrap significance test between two systems.
//
// With delta = metric(A) - metric(B) on the full set, each resample draws
// |units| sentences with replacement and recomputes delta_i. The p-value is
// (1 + #{delta_i >= 2 * delta}) / (resamples + 1). Resample i draws from a
// generator seeded by (seed, i), so the result does not depend on the
// thread count.

#ifndef RHTAG_BOOTSTRAP_H_
#define RHTAG_BOOTSTRAP_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "json.hpp"
#include "rhtag/corpus.h"
#include "rhtag/text.h"

namespace rhtag {

struct EvaluationUnit {
  BioSequence gold;
  BioSequence pred_a;
  BioSequence pred_b;
};

enum class BootstrapMetric { kMicroF1, kMacroF1 };

std::string_view metric_name(BootstrapMetric metric);
// "micro_f1" / "macro_f1"; kInvalidArgument otherwise.
BootstrapMetric parse_metric(std::string_view name);

struct BootstrapOptions {
  std::size_t resamples = 10000;
  std::uint64_t seed = 0;
  BootstrapMetric metric = BootstrapMetric::kMicroF1;
  std::size_t threads = 1;
};

struct BootstrapResult {
  double metric_a = 0.0;
  double metric_b = 0.0;
  double observed_delta = 0.0;
  std::size_t resamples = 0;
  std::size_t at_least_double = 0;  // resamples with delta_i >= 2 * delta
  double p_value = 1.0;
  std::uint64_t seed = 0;
  BootstrapMetric metric = BootstrapMetric::kMicroF1;

  nlohmann::ordered_json to_json() const;
};

// kInvalidArgument for empty units, zero resamples, or sentences whose
// three sequences differ in length.
BootstrapResult paired_bootstrap(std::span<const EvaluationUnit> units,
                                 const LabelSchema& schema, const BootstrapOptions& options);

}  // namespace rhtag

#endif  // RHTAG_BOOTSTRAP_H_
