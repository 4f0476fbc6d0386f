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

#include "rhtag/backend.h"

#include <set>

#include "rhtag/error.h"
#include "rhtag/external_backend.h"
#include "rhtag/hashing.h"
#include "rhtag/log.h"
#include "rhtag/perceptron.h"

namespace rhtag {

HyperParams HyperParams::defaults_for(const LabelSchema& schema) {
  HyperParams h;
  h.epochs = schema.name() == "subtask2" ? 20 : 10;
  return h;
}

void HyperParams::validate() const {
  if (train_batch_size == 0 || eval_batch_size == 0 || max_sequence_length_tokens == 0 ||
      epochs == 0) {
    throw Error(ErrorCode::kInvalidArgument, "batch sizes, max length and epochs must be >= 1");
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "dropout must lie in [0, 1)");
  }
  if (!(learning_rate > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "learning rate must be positive");
  }
}

nlohmann::ordered_json HyperParams::to_json() const {
  nlohmann::ordered_json j;
  j["train_batch_size"] = train_batch_size;
  j["eval_batch_size"] = eval_batch_size;
  j["max_sequence_length_tokens"] = max_sequence_length_tokens;
  j["dropout"] = dropout;
  j["learning_rate"] = learning_rate;
  j["epochs"] = epochs;
  j["seed"] = seed;
  return j;
}

HyperParams HyperParams::from_json(const nlohmann::json& j, const HyperParams& base) {
  if (!j.is_object()) throw Error(ErrorCode::kInvalidArgument, "hyperparameters must be an object");
  static const std::set<std::string> kKeys = {
      "train_batch_size", "eval_batch_size", "max_sequence_length_tokens", "dropout",
      "learning_rate",    "epochs",          "seed"};
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.contains(key)) {
      throw Error(ErrorCode::kInvalidArgument, "unknown hyperparameter '" + key + "'");
    }
  }
  HyperParams h = base;
  try {
    h.train_batch_size = j.value("train_batch_size", h.train_batch_size);
    h.eval_batch_size = j.value("eval_batch_size", h.eval_batch_size);
    h.max_sequence_length_tokens = j.value("max_sequence_length_tokens", h.max_sequence_length_tokens);
    h.dropout = j.value("dropout", h.dropout);
    h.learning_rate = j.value("learning_rate", h.learning_rate);
    h.epochs = j.value("epochs", h.epochs);
    h.seed = j.value("seed", h.seed);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("bad hyperparameter value: ") + e.what());
  }
  return h;
}

std::string training_fingerprint(std::span<const TrainingSentence> sentences) {
  std::string buf;
  for (const auto& s : sentences) {
    for (std::size_t t = 0; t < s.tokens.size(); ++t) {
      buf += s.tokens[t];
      buf += '\t';
      buf += t < s.labels.size() ? s.labels[t].str() : "";
      buf += '\n';
    }
    buf += '\n';
  }
  return sha256_hex(buf);
}

ModelHandle TaggerBackend::train(const LabelSchema& schema,
                                 std::span<const TrainingSentence> train,
                                 std::span<const TrainingSentence> dev,
                                 const HyperParams& hyper) {
  hyper.validate();
  if (train.empty()) throw Error(ErrorCode::kEmptyTrainingSet, "empty training set");

  const TagSet tags(schema);
  auto prepare = [&](std::span<const TrainingSentence> data, const char* what) {
    std::vector<TrainingSentence> out;
    out.reserve(data.size());
    std::size_t truncated = 0;
    for (const auto& s : data) {
      if (s.tokens.size() != s.labels.size()) {
        throw Error(ErrorCode::kInvalidArgument,
                    std::string(what) + " sentence has mismatched token and label counts");
      }
      if (!is_well_formed(s.labels)) {
        throw Error(ErrorCode::kInvalidArgument,
                    std::string(what) + " sentence has ill-formed BIO labels");
      }
      for (const auto& l : s.labels) tags.index(l);  // throws kUnknownLabel
      if (s.tokens.empty()) continue;
      TrainingSentence copy = s;
      if (copy.tokens.size() > hyper.max_sequence_length_tokens) {
        copy.tokens.resize(hyper.max_sequence_length_tokens);
        copy.labels.resize(hyper.max_sequence_length_tokens);
        ++truncated;
      }
      out.push_back(std::move(copy));
    }
    if (truncated > 0) {
      log::warn(std::to_string(truncated) + " " + what + " sentences truncated to " +
                std::to_string(hyper.max_sequence_length_tokens) + " tokens");
    }
    return out;
  };
  const std::vector<TrainingSentence> train_data = prepare(train, "training");
  const std::vector<TrainingSentence> dev_data = prepare(dev, "dev");
  if (train_data.empty()) throw Error(ErrorCode::kEmptyTrainingSet, "empty training set");

  TrainOutput trained = do_train(schema, train_data, dev_data, hyper);
  ModelHandle model;
  model.backend_id = id();
  model.schema = schema;
  model.parameters = std::move(trained.parameters);
  model.meta.hyper = hyper;
  model.meta.corpus_fingerprint = training_fingerprint(train_data);
  model.meta.dev_f1_per_epoch = std::move(trained.dev_f1_per_epoch);
  return model;
}

std::vector<BioSequence> TaggerBackend::predict(
    const ModelHandle& model, std::span<const std::vector<std::string>> sentences,
    const LabelSchema* expected) {
  if (!model.trained()) throw Error(ErrorCode::kUntrainedModel, "untrained model");
  if (model.backend_id != id()) {
    throw Error(ErrorCode::kInvalidArgument,
                "model was trained by backend '" + model.backend_id + "', not '" + id() + "'");
  }
  if (expected != nullptr && !(*expected == *model.schema)) {
    throw Error(ErrorCode::kSchemaMismatch, "model schema " + model.schema->name() +
                                                " does not match " + expected->name());
  }
  if (sentences.empty()) return {};

  const std::size_t max_len = model.meta.hyper.max_sequence_length_tokens;
  std::vector<std::vector<std::string>> inputs;
  std::vector<std::size_t> slots;  // inputs[i] answers sentences[slots[i]]
  std::size_t truncated = 0;
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    if (sentences[s].empty()) continue;
    auto& in = inputs.emplace_back(sentences[s]);
    if (in.size() > max_len) {
      in.resize(max_len);
      ++truncated;
    }
    slots.push_back(s);
  }
  if (truncated > 0) {
    log::warn(std::to_string(truncated) + " sentences longer than " + std::to_string(max_len) +
              " tokens; their tails are labeled O");
  }

  std::vector<BioSequence> out(sentences.size());
  if (inputs.empty()) return out;
  std::vector<BioSequence> predicted = do_predict(model, inputs);
  if (predicted.size() != inputs.size()) {
    throw Error(ErrorCode::kBackend, "backend returned a wrong number of sentences");
  }
  const TagSet tags(*model.schema);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (predicted[i].size() != inputs[i].size()) {
      throw Error(ErrorCode::kBackend, "backend returned a wrong number of labels");
    }
    for (const auto& l : predicted[i]) tags.index(l);
    BioSequence labels = repair_bio(predicted[i]);
    labels.resize(sentences[slots[i]].size());
    out[slots[i]] = std::move(labels);
  }
  return out;
}

std::unique_ptr<TaggerBackend> make_backend(std::string_view id, const BackendOptions& options) {
  if (id == "perceptron") return std::make_unique<PerceptronBackend>();
  if (id == "external") {
    if (!options.adapter) {
      throw Error(ErrorCode::kBackendUnreachable,
                  "backend unreachable: no adapter executable configured");
    }
    return std::make_unique<ExternalBackend>(*options.adapter, options.adapter_args);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown backend '" + std::string(id) + "'");
}

}  // namespace rhtag
