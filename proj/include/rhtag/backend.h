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

// Trainable token-classifier contract shared by the built-in perceptron and
// external backends, plus the model file format.

#ifndef RHTAG_BACKEND_H_
#define RHTAG_BACKEND_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rhtag/corpus.h"
#include "rhtag/text.h"

namespace rhtag {

struct HyperParams {
  std::size_t train_batch_size = 64;
  std::size_t eval_batch_size = 16;
  std::size_t max_sequence_length_tokens = 256;
  double dropout = 0.2;
  double learning_rate = 5e-5;
  std::size_t epochs = 10;
  std::uint64_t seed = 0;

  // Ten epochs for subtask1, twenty for subtask2.
  static HyperParams defaults_for(const LabelSchema& schema);

  // kInvalidArgument unless every field is positive and dropout in [0, 1).
  void validate() const;

  nlohmann::ordered_json to_json() const;
  // Missing keys keep the values of `base`; unknown keys are rejected.
  static HyperParams from_json(const nlohmann::json& j, const HyperParams& base);

  friend bool operator==(const HyperParams&, const HyperParams&) = default;
};

struct TrainingSentence {
  std::vector<std::string> tokens;
  BioSequence labels;
};

struct TrainingMeta {
  HyperParams hyper;
  std::string corpus_fingerprint;
  std::vector<double> dev_f1_per_epoch;
  // Caller-owned settings that predict-time code must reproduce, such as
  // whether inputs were augmented.
  nlohmann::ordered_json pipeline = nlohmann::ordered_json::object();
};

struct ModelHandle {
  std::string backend_id;
  std::optional<LabelSchema> schema;  // empty until trained
  std::string parameters;             // backend-specific bytes
  TrainingMeta meta;

  bool trained() const { return schema.has_value(); }
};

// SHA-256 over tokens and labels in order.
std::string training_fingerprint(std::span<const TrainingSentence> sentences);

class TaggerBackend {
 public:
  virtual ~TaggerBackend() = default;

  virtual std::string id() const = 0;

  // Validates the data (kEmptyTrainingSet, kUnknownLabel, kInvalidArgument),
  // truncates sentences to the maximum length, then trains.
  ModelHandle train(const LabelSchema& schema, std::span<const TrainingSentence> train,
                    std::span<const TrainingSentence> dev, const HyperParams& hyper);

  // One well-formed label sequence per sentence. Tokens past the maximum
  // length are labeled O and a warning is logged. kUntrainedModel for an
  // untrained handle, kSchemaMismatch when `expected` differs from the
  // model's schema.
  std::vector<BioSequence> predict(const ModelHandle& model,
                                   std::span<const std::vector<std::string>> sentences,
                                   const LabelSchema* expected = nullptr);

 protected:
  struct TrainOutput {
    std::string parameters;
    std::vector<double> dev_f1_per_epoch;
  };

  virtual TrainOutput do_train(const LabelSchema& schema,
                               std::span<const TrainingSentence> train,
                               std::span<const TrainingSentence> dev,
                               const HyperParams& hyper) = 0;
  // Sentences are already truncated and non-empty.
  virtual std::vector<BioSequence> do_predict(
      const ModelHandle& model, std::span<const std::vector<std::string>> sentences) = 0;
};

struct BackendOptions {
  // Executable speaking the line-delimited JSON protocol; required for
  // "external".
  std::optional<std::filesystem::path> adapter;
  std::vector<std::string> adapter_args;
};

// "perceptron" or "external". kInvalidArgument for other ids,
// kBackendUnreachable when the external adapter cannot be started.
std::unique_ptr<TaggerBackend> make_backend(std::string_view id,
                                            const BackendOptions& options = {});

// Model file: "RHTM", u16 version, schema, backend id, metadata JSON, then
// the parameter payload with a u64 length prefix and CRC-32. Integers are
// little-endian.
inline constexpr std::uint16_t kModelFormatVersion = 1;

void save_model(const ModelHandle& model, const std::filesystem::path& path);
std::string serialize_model(const ModelHandle& model);

// kBadMagic, kVersionMismatch, kTruncated or kChecksum on corrupt input.
ModelHandle load_model(const std::filesystem::path& path);
ModelHandle deserialize_model(std::string_view bytes);

}  // namespace rhtag

#endif  // RHTAG_BACKEND_H_
