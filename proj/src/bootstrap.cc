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

#include "rhtag/bootstrap.h"

#include <algorithm>
#include <random>
#include <thread>
#include <vector>

#include "rhtag/error.h"
#include "rhtag/evaluation.h"
#include "rhtag/random.h"

namespace rhtag {
namespace {

// Per-label (true positive, predicted, gold) counts of one system, flattened.
using Counts = std::vector<std::uint64_t>;

Counts unit_counts(const BioSequence& gold, const BioSequence& pred, const LabelSchema& schema) {
  const std::size_t k = schema.size();
  Counts c(3 * k, 0);
  for (std::size_t t = 0; t < gold.size(); ++t) {
    const auto g = gold[t].is_outside() ? k : *schema.index_of(gold[t].entity);
    const auto p = pred[t].is_outside() ? k : *schema.index_of(pred[t].entity);
    if (g < k && g == p) ++c[3 * g];
    if (p < k) ++c[3 * p + 1];
    if (g < k) ++c[3 * g + 2];
  }
  return c;
}

double metric_of(const Counts& c, BootstrapMetric metric) {
  const std::size_t k = c.size() / 3;
  if (metric == BootstrapMetric::kMicroF1) {
    std::uint64_t tp = 0, pred = 0, gold = 0;
    for (std::size_t l = 0; l < k; ++l) {
      tp += c[3 * l];
      pred += c[3 * l + 1];
      gold += c[3 * l + 2];
    }
    return Prf::from_counts(tp, pred, gold).f1;
  }
  double sum = 0.0;
  for (std::size_t l = 0; l < k; ++l) sum += Prf::from_counts(c[3 * l], c[3 * l + 1], c[3 * l + 2]).f1;
  return k == 0 ? 0.0 : sum / static_cast<double>(k);
}

void accumulate(Counts& into, const Counts& from) {
  for (std::size_t i = 0; i < into.size(); ++i) into[i] += from[i];
}

}  // namespace

std::string_view metric_name(BootstrapMetric metric) {
  return metric == BootstrapMetric::kMicroF1 ? "micro_f1" : "macro_f1";
}

BootstrapMetric parse_metric(std::string_view name) {
  if (name == "micro_f1") return BootstrapMetric::kMicroF1;
  if (name == "macro_f1") return BootstrapMetric::kMacroF1;
  throw Error(ErrorCode::kInvalidArgument, "unknown metric '" + std::string(name) + "'");
}

nlohmann::ordered_json BootstrapResult::to_json() const {
  nlohmann::ordered_json j;
  j["metric"] = metric_name(metric);
  j["metric_a"] = metric_a;
  j["metric_b"] = metric_b;
  j["observed_delta"] = observed_delta;
  j["resamples"] = resamples;
  j["at_least_double"] = at_least_double;
  j["p_value"] = p_value;
  j["seed"] = seed;
  return j;
}

BootstrapResult paired_bootstrap(std::span<const EvaluationUnit> units,
                                 const LabelSchema& schema, const BootstrapOptions& options) {
  if (units.empty()) throw Error(ErrorCode::kInvalidArgument, "bootstrap needs at least one unit");
  if (options.resamples == 0) {
    throw Error(ErrorCode::kInvalidArgument, "bootstrap needs at least one resample");
  }
  const std::size_t k = schema.size();
  std::vector<Counts> a(units.size());
  std::vector<Counts> b(units.size());
  Counts total_a(3 * k, 0);
  Counts total_b(3 * k, 0);
  for (std::size_t u = 0; u < units.size(); ++u) {
    const auto& unit = units[u];
    if (unit.pred_a.size() != unit.gold.size() || unit.pred_b.size() != unit.gold.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "unit " + std::to_string(u) + ": label sequences differ in length");
    }
    for (const auto* seq : {&unit.gold, &unit.pred_a, &unit.pred_b}) {
      for (const auto& l : *seq) {
        if (!l.is_outside() && !schema.contains(l.entity)) {
          throw Error(ErrorCode::kUnknownLabel, "label '" + l.entity + "' is not in the schema");
        }
      }
    }
    a[u] = unit_counts(unit.gold, unit.pred_a, schema);
    b[u] = unit_counts(unit.gold, unit.pred_b, schema);
    accumulate(total_a, a[u]);
    accumulate(total_b, b[u]);
  }

  BootstrapResult result;
  result.metric = options.metric;
  result.seed = options.seed;
  result.resamples = options.resamples;
  result.metric_a = metric_of(total_a, options.metric);
  result.metric_b = metric_of(total_b, options.metric);
  result.observed_delta = result.metric_a - result.metric_b;
  const double threshold = 2.0 * result.observed_delta;

  const std::size_t threads =
      std::clamp<std::size_t>(options.threads, 1, std::max<std::size_t>(options.resamples, 1));
  std::vector<std::size_t> hits(threads, 0);
  auto work = [&](std::size_t worker) {
    Counts ra(3 * k);
    Counts rb(3 * k);
    for (std::size_t i = worker; i < options.resamples; i += threads) {
      std::fill(ra.begin(), ra.end(), 0);
      std::fill(rb.begin(), rb.end(), 0);
      std::mt19937_64 rng(derive_seed(options.seed, i));
      for (std::size_t d = 0; d < units.size(); ++d) {
        const std::size_t u = uniform_index(rng, units.size());
        accumulate(ra, a[u]);
        accumulate(rb, b[u]);
      }
      if (metric_of(ra, options.metric) - metric_of(rb, options.metric) >= threshold) {
        ++hits[worker];
      }
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (auto h : hits) result.at_least_double += h;
  result.p_value = static_cast<double>(1 + result.at_least_double) /
                   static_cast<double>(options.resamples + 1);
  return result;
}

}  // namespace rhtag
