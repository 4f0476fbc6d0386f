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

#include "rhtag/pipeline.h"

#include <fstream>

#include "rhtag/error.h"

namespace rhtag {

std::vector<std::string> LabeledSentence::token_texts() const {
  std::vector<std::string> out;
  out.reserve(span.tokens.size());
  for (const auto& t : span.tokens) out.push_back(t.text);
  return out;
}

std::vector<LabeledSentence> labeled_sentences(const Corpus& corpus,
                                               const SentenceSegmenter& segmenter) {
  std::vector<LabeledSentence> out;
  for (const auto& post : corpus.posts) {
    std::vector<SentenceSpan> sentences = segmenter.segment(post.text);
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      LabeledSentence ls;
      ls.post_id = post.post_id;
      ls.index = i;
      ls.span = std::move(sentences[i]);
      for (const auto& s : post.spans) {
        if (s.start_char < ls.span.end_char && ls.span.start_char < s.end_char) {
          ls.gold_spans.push_back(s);
        }
      }
      ls.gold = encode_bio(ls.span, ls.gold_spans, corpus.schema);
      out.push_back(std::move(ls));
    }
  }
  return out;
}

ModelInput model_input(std::span<const std::string> tokens, const BioSequence* gold,
                       const KnowledgeAnnotator* annotator) {
  ModelInput in;
  if (annotator == nullptr) {
    in.tokens.assign(tokens.begin(), tokens.end());
    return in;
  }
  const std::vector<KnowledgeSpan> kspans = annotator->annotate(tokens);
  std::optional<BioSequence> labels;
  if (gold != nullptr) labels = *gold;
  in.augmented = augment(tokens, labels, kspans);
  in.tokens = in.augmented->tokens;
  return in;
}

std::vector<TrainingSentence> training_sentences(std::span<const LabeledSentence> sentences,
                                                 const KnowledgeAnnotator* annotator) {
  std::vector<TrainingSentence> out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) {
    const std::vector<std::string> tokens = s.token_texts();
    ModelInput in = model_input(tokens, &s.gold, annotator);
    TrainingSentence ts;
    ts.labels = in.augmented ? *in.augmented->labels : s.gold;
    ts.tokens = std::move(in.tokens);
    out.push_back(std::move(ts));
  }
  return out;
}

std::vector<BioSequence> predict_sentences(TaggerBackend& backend, const ModelHandle& model,
                                           std::span<const LabeledSentence> sentences,
                                           const KnowledgeAnnotator* annotator,
                                           const LabelSchema* expected) {
  std::vector<ModelInput> inputs;
  std::vector<std::vector<std::string>> batch;
  inputs.reserve(sentences.size());
  batch.reserve(sentences.size());
  for (const auto& s : sentences) {
    const std::vector<std::string> tokens = s.token_texts();
    inputs.push_back(model_input(tokens, nullptr, annotator));
    batch.push_back(inputs.back().tokens);
  }
  std::vector<BioSequence> predicted = backend.predict(model, batch, expected);
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (inputs[i].augmented) predicted[i] = project_back(*inputs[i].augmented, predicted[i]);
  }
  return predicted;
}

void write_predictions(const std::filesystem::path& path,
                       std::span<const SentencePrediction> predictions) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  for (const auto& p : predictions) {
    nlohmann::ordered_json j;
    j["post_id"] = p.post_id;
    j["sentence"] = p.index;
    j["start"] = p.start_char;
    j["end"] = p.end_char;
    j["tokens"] = p.tokens;
    j["gold"] = to_strings(p.gold);
    j["pred"] = to_strings(p.pred);
    if (!p.gold_class.empty()) j["gold_class"] = p.gold_class;
    out << j.dump() << '\n';
  }
}

std::vector<SentencePrediction> read_predictions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<SentencePrediction> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      SentencePrediction p;
      p.post_id = j.at("post_id").get<std::string>();
      p.index = j.at("sentence").get<std::size_t>();
      p.start_char = j.at("start").get<std::size_t>();
      p.end_char = j.at("end").get<std::size_t>();
      p.tokens = j.at("tokens").get<std::vector<std::string>>();
      p.gold = parse_labels(j.at("gold").get<std::vector<std::string>>());
      p.pred = parse_labels(j.at("pred").get<std::vector<std::string>>());
      p.gold_class = j.value("gold_class", std::string());
      if (p.pred.size() != p.tokens.size() || (!p.gold.empty() && p.gold.size() != p.tokens.size())) {
        throw Error(ErrorCode::kParse, "label count differs from token count");
      }
      out.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, path.string() + " line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, path.string() + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace rhtag
