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

#include "rhtag/perceptron.h"

#include <numeric>
#include <sstream>

#include "binary_io.h"
#include "rhtag/error.h"
#include "rhtag/evaluation.h"
#include "rhtag/knowledge.h"
#include "rhtag/log.h"
#include "rhtag/random.h"
#include "rhtag/utf8.h"

namespace rhtag {
namespace {

constexpr std::uint32_t kFeatureTemplateVersion = 1;

std::string neighbor(std::span<const std::string> tokens, std::ptrdiff_t i) {
  if (i < 0) return i == -1 ? "<s>" : "<s2>";
  const auto n = static_cast<std::ptrdiff_t>(tokens.size());
  if (i >= n) return i == n ? "</s>" : "</s2>";
  return utf8::to_lower(tokens[static_cast<std::size_t>(i)]);
}

// Working weights with the running sums needed for averaging: the average
// after c updates is w - u / c, where u accumulates c * delta.
struct AveragingWeights {
  std::vector<double> w;
  std::vector<double> u;

  explicit AveragingWeights(std::size_t n) : w(n, 0.0), u(n, 0.0) {}

  void update(std::size_t i, double delta, double step) {
    w[i] += delta;
    u[i] += step * delta;
  }
  std::vector<double> averaged(double step) const {
    std::vector<double> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = w[i] - u[i] / step;
    return out;
  }
};

ScoreMatrix score(const std::vector<std::vector<std::size_t>>& feats,
                  const std::vector<double>& weights, std::size_t num_tags) {
  ScoreMatrix m(feats.size(), num_tags);
  for (std::size_t t = 0; t < feats.size(); ++t) {
    for (std::size_t f : feats[t]) {
      const double* row = &weights[f * num_tags];
      for (std::size_t j = 0; j < num_tags; ++j) m.at(t, j) += row[j];
    }
  }
  return m;
}

}  // namespace

std::string word_shape(std::string_view token) {
  const auto chars = utf8::decode(token);
  std::string shape;
  if (!chars) return "?";
  for (char32_t c : *chars) {
    char s;
    if (utf8::is_upper(c)) {
      s = 'X';
    } else if (c >= U'a' && c <= U'z') {
      s = 'x';
    } else if (utf8::is_digit(c)) {
      s = 'd';
    } else if (c < 0x80) {
      s = static_cast<char>(c);
    } else {
      s = 'u';
    }
    if (shape.empty() || shape.back() != s) shape.push_back(s);
  }
  return shape;
}

std::vector<std::string> token_features(std::span<const std::string> tokens, std::size_t i) {
  const std::string lower = utf8::to_lower(tokens[i]);
  const auto at = static_cast<std::ptrdiff_t>(i);
  std::vector<std::string> f;
  f.reserve(11);
  f.emplace_back("b");
  f.push_back("w=" + lower);
  f.push_back("s3=" + utf8::suffix(lower, 3));
  f.push_back("s4=" + utf8::suffix(lower, 4));
  f.push_back("sh=" + word_shape(tokens[i]));
  if (is_marker_token(tokens[i])) f.emplace_back("mk");
  f.push_back("w-1=" + neighbor(tokens, at - 1));
  f.push_back("w+1=" + neighbor(tokens, at + 1));
  f.push_back("w-2=" + neighbor(tokens, at - 2));
  f.push_back("w+2=" + neighbor(tokens, at + 2));
  return f;
}

PerceptronModel::PerceptronModel(std::vector<std::string> features, std::size_t num_tags,
                                 std::vector<double> weights, std::vector<double> transitions)
    : features_(std::move(features)),
      num_tags_(num_tags),
      weights_(std::move(weights)),
      transitions_(std::move(transitions)) {
  if (weights_.size() != features_.size() * num_tags_ ||
      transitions_.size() != (num_tags_ + 1) * num_tags_) {
    throw Error(ErrorCode::kInvalidArgument, "perceptron weight shapes are inconsistent");
  }
  index_.reserve(features_.size());
  for (std::size_t i = 0; i < features_.size(); ++i) index_.emplace(features_[i], i);
}

ScoreMatrix PerceptronModel::emissions(std::span<const std::string> tokens) const {
  std::vector<std::vector<std::size_t>> feats(tokens.size());
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    for (const auto& name : token_features(tokens, t)) {
      if (auto it = index_.find(name); it != index_.end()) feats[t].push_back(it->second);
    }
  }
  return score(feats, weights_, num_tags_);
}

std::vector<std::size_t> PerceptronModel::decode(std::span<const std::string> tokens,
                                                 const TagSet& tags) const {
  return constrained_viterbi(emissions(tokens), tags, transitions_).tags;
}

std::string PerceptronModel::serialize() const {
  internal::ByteWriter w;
  w.put(kFeatureTemplateVersion);
  w.put(static_cast<std::uint32_t>(num_tags_));
  w.put(static_cast<std::uint32_t>(features_.size()));
  for (const auto& f : features_) w.put_string(f);
  for (double v : weights_) w.put_double(v);
  for (double v : transitions_) w.put_double(v);
  return w.take();
}

PerceptronModel PerceptronModel::deserialize(std::string_view bytes) {
  try {
    internal::ByteReader r(bytes);
    if (r.get<std::uint32_t>() != kFeatureTemplateVersion) {
      throw Error(ErrorCode::kInvalidArgument, "unsupported perceptron feature templates");
    }
    const std::size_t tags = r.get<std::uint32_t>();
    const std::size_t n = r.get<std::uint32_t>();
    std::vector<std::string> features;
    features.reserve(n);
    for (std::size_t i = 0; i < n; ++i) features.push_back(r.get_string());
    std::vector<double> weights(n * tags);
    for (auto& v : weights) v = r.get_double();
    std::vector<double> transitions((tags + 1) * tags);
    for (auto& v : transitions) v = r.get_double();
    if (r.remaining() != 0) {
      throw Error(ErrorCode::kInvalidArgument, "trailing bytes in perceptron payload");
    }
    return PerceptronModel(std::move(features), tags, std::move(weights),
                           std::move(transitions));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kTruncated) {
      throw Error(ErrorCode::kInvalidArgument, "perceptron payload is truncated");
    }
    throw;
  }
}

PerceptronBackend::TrainOutput PerceptronBackend::do_train(
    const LabelSchema& schema, std::span<const TrainingSentence> train,
    std::span<const TrainingSentence> dev, const HyperParams& hyper) {
  const TagSet tags(schema);
  const std::size_t k = tags.size();

  // Feature ids follow first occurrence in the training data, which keeps
  // the serialized model a pure function of the data order.
  std::vector<std::string> names;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::vector<std::vector<std::size_t>>> feats(train.size());
  std::vector<std::vector<std::size_t>> gold(train.size());
  for (std::size_t s = 0; s < train.size(); ++s) {
    const auto& tokens = train[s].tokens;
    feats[s].resize(tokens.size());
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      for (auto& name : token_features(tokens, t)) {
        auto [it, inserted] = index.emplace(name, names.size());
        if (inserted) names.push_back(std::move(name));
        feats[s][t].push_back(it->second);
      }
      gold[s].push_back(tags.index(train[s].labels[t]));
    }
  }

  AveragingWeights emit(names.size() * k);
  AveragingWeights trans((k + 1) * k);
  double step = 1.0;

  std::vector<BioSequence> dev_gold;
  std::vector<std::vector<std::string>> dev_tokens;
  for (const auto& d : dev) {
    dev_gold.push_back(d.labels);
    dev_tokens.push_back(d.tokens);
  }

  TrainOutput out;
  std::vector<std::size_t> order(train.size());
  for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(derive_seed(hyper.seed, epoch));
    shuffle(std::span<std::size_t>(order), rng);

    std::size_t mistakes = 0;
    for (std::size_t s : order) {
      const ScoreMatrix em = score(feats[s], emit.w, k);
      const std::vector<std::size_t> pred = constrained_viterbi(em, tags, trans.w).tags;
      if (pred != gold[s]) {
        ++mistakes;
        for (std::size_t t = 0; t < pred.size(); ++t) {
          const std::size_t g = gold[s][t];
          const std::size_t p = pred[t];
          if (g != p) {
            for (std::size_t f : feats[s][t]) {
              emit.update(f * k + g, 1.0, step);
              emit.update(f * k + p, -1.0, step);
            }
          }
          const std::size_t gp = t == 0 ? k : gold[s][t - 1];
          const std::size_t pp = t == 0 ? k : pred[t - 1];
          if (gp != pp || g != p) {
            trans.update(gp * k + g, 1.0, step);
            trans.update(pp * k + p, -1.0, step);
          }
        }
      }
      step += 1.0;
    }

    const PerceptronModel model(names, k, emit.averaged(step), trans.averaged(step));
    std::ostringstream msg;
    msg << "perceptron epoch " << epoch + 1 << "/" << hyper.epochs << ": " << mistakes
        << " sentence errors";
    if (!dev.empty()) {
      std::vector<BioSequence> dev_pred;
      dev_pred.reserve(dev_tokens.size());
      for (const auto& toks : dev_tokens) {
        BioSequence labels;
        for (std::size_t t : model.decode(toks, tags)) labels.push_back(tags.label(t));
        dev_pred.push_back(std::move(labels));
      }
      const double f1 = token_micro_f1(dev_gold, dev_pred, schema);
      out.dev_f1_per_epoch.push_back(f1);
      msg << ", dev micro-F1 " << f1;
    }
    log::info(msg.str());
    if (epoch + 1 == hyper.epochs) out.parameters = model.serialize();
  }
  return out;
}

std::vector<BioSequence> PerceptronBackend::do_predict(
    const ModelHandle& model, std::span<const std::vector<std::string>> sentences) {
  const PerceptronModel weights = PerceptronModel::deserialize(model.parameters);
  const TagSet tags(*model.schema);
  if (weights.num_tags() != tags.size()) {
    throw Error(ErrorCode::kSchemaMismatch, "model weights do not match the model schema");
  }
  std::vector<BioSequence> out;
  out.reserve(sentences.size());
  for (const auto& tokens : sentences) {
    BioSequence labels;
    labels.reserve(tokens.size());
    for (std::size_t t : weights.decode(tokens, tags)) labels.push_back(tags.label(t));
    out.push_back(std::move(labels));
  }
  return out;
}

}  // namespace rhtag
