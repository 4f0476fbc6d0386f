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

// Glue between corpora and taggers: sentence extraction with gold labels,
// optional knowledge augmentation, and prediction with projection back onto
// the original whitespace tokens.

#ifndef RHTAG_PIPELINE_H_
#define RHTAG_PIPELINE_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rhtag/backend.h"
#include "rhtag/corpus.h"
#include "rhtag/knowledge.h"
#include "rhtag/text.h"

namespace rhtag {

struct LabeledSentence {
  std::string post_id;
  std::size_t index = 0;  // position within the post
  SentenceSpan span;
  std::vector<AnnotatedSpan> gold_spans;  // spans touching this sentence
  BioSequence gold;

  std::vector<std::string> token_texts() const;
};

// Entities crossing a sentence boundary restart with B-x in each sentence.
std::vector<LabeledSentence> labeled_sentences(const Corpus& corpus,
                                               const SentenceSegmenter& segmenter = RuleSegmenter{});

// Model-side view of one sentence; `augmented` is set when an annotator was
// supplied and then `tokens` holds the marker-expanded sequence.
struct ModelInput {
  std::vector<std::string> tokens;
  std::optional<AugmentedSentence> augmented;
};

ModelInput model_input(std::span<const std::string> tokens, const BioSequence* gold,
                       const KnowledgeAnnotator* annotator);

std::vector<TrainingSentence> training_sentences(std::span<const LabeledSentence> sentences,
                                                 const KnowledgeAnnotator* annotator);

// Predicts on the (optionally augmented) inputs and returns one label
// sequence per original sentence, aligned to its whitespace tokens.
std::vector<BioSequence> predict_sentences(TaggerBackend& backend, const ModelHandle& model,
                                           std::span<const LabeledSentence> sentences,
                                           const KnowledgeAnnotator* annotator,
                                           const LabelSchema* expected = nullptr);

// One line of predictions.jsonl.
struct SentencePrediction {
  std::string post_id;
  std::size_t index = 0;
  std::size_t start_char = 0;
  std::size_t end_char = 0;
  std::vector<std::string> tokens;
  BioSequence gold;  // empty when the input carried no annotations
  BioSequence pred;
  std::string gold_class;  // sentence class from gold spans; may be empty
};

void write_predictions(const std::filesystem::path& path,
                       std::span<const SentencePrediction> predictions);
// kParse with the line number on malformed records.
std::vector<SentencePrediction> read_predictions(const std::filesystem::path& path);

}  // namespace rhtag

#endif  // RHTAG_PIPELINE_H_
