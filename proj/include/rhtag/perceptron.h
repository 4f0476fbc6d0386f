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

#ifndef RHTAG_PERCEPTRON_H_
#define RHTAG_PERCEPTRON_H_

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rhtag/backend.h"
#include "rhtag/viterbi.h"

namespace rhtag {

// Observation features of token i: bias, lowercased word, 3- and 4-char
// suffixes, word shape, marker flag, and lowercased neighbors at -2..+2.
// The previous label enters through the transition matrix.
std::vector<std::string> token_features(std::span<const std::string> tokens, std::size_t i);

// "Xxxx" style shape with runs collapsed: "Allopurinol" -> "Xx", "T1D" -> "XdX".
std::string word_shape(std::string_view token);

// Averaged weights of a first-order structured perceptron.
class PerceptronModel {
 public:
  PerceptronModel(std::vector<std::string> features, std::size_t num_tags,
                  std::vector<double> weights, std::vector<double> transitions);

  std::size_t num_tags() const { return num_tags_; }
  ScoreMatrix emissions(std::span<const std::string> tokens) const;
  std::vector<std::size_t> decode(std::span<const std::string> tokens, const TagSet& tags) const;

  std::string serialize() const;
  // kInvalidArgument on malformed payloads.
  static PerceptronModel deserialize(std::string_view bytes);

 private:
  std::vector<std::string> features_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t num_tags_;
  std::vector<double> weights_;      // features x tags
  std::vector<double> transitions_;  // (tags + 1) x tags, last row = start
};

class PerceptronBackend : public TaggerBackend {
 public:
  std::string id() const override { return "perceptron"; }

 protected:
  TrainOutput do_train(const LabelSchema& schema, std::span<const TrainingSentence> train,
                       std::span<const TrainingSentence> dev,
                       const HyperParams& hyper) override;
  std::vector<BioSequence> do_predict(
      const ModelHandle& model, std::span<const std::vector<std::string>> sentences) override;
};

}  // namespace rhtag

#endif  // RHTAG_PERCEPTRON_H_
