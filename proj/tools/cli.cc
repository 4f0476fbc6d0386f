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


#include "cli.h"

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "rhtag/backend.h"
#include "rhtag/bootstrap.h"
#include "rhtag/conll.h"
#include "rhtag/corpus.h"
#include "rhtag/evaluation.h"
#include "rhtag/hashing.h"
#include "rhtag/knowledge.h"
#include "rhtag/log.h"
#include "rhtag/pipeline.h"

namespace rhtag::cli {
namespace fs = std::filesystem;
using nlohmann::ordered_json;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kUnknownSchema:
    case ErrorCode::kIo:
      return kExitUsage;
    case ErrorCode::kBackendUnreachable:
    case ErrorCode::kBackend:
      return kExitBackend;
    case ErrorCode::kFingerprintMismatch:
      return kExitPrecondition;
    default:
      return kExitData;
  }
}

namespace {

const std::set<std::string> kConfigKeys = {
    "schema", "corpus", "validation_fraction", "gazetteer", "augment", "backend", "adapter",
    "adapter_args", "hyper", "bootstrap_resamples", "bootstrap_metric", "seed", "threads", "out"};

HyperParams resolve_hyper(const RunConfig& cfg, const LabelSchema& schema) {
  HyperParams h = HyperParams::defaults_for(schema);
  h.seed = cfg.seed;
  h = HyperParams::from_json(cfg.hyper, h);
  h.validate();
  return h;
}

void require_file(const std::string& path, std::string_view what) {
  if (path.empty()) throw Error(ErrorCode::kInvalidArgument, std::string(what) + " path is required");
  if (!fs::is_regular_file(path)) {
    throw Error(ErrorCode::kIo, std::string(what) + " not found: " + path);
  }
}

void write_text(const fs::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

void write_json(const fs::path& path, const ordered_json& j) { write_text(path, j.dump(2) + "\n"); }

nlohmann::json read_json(const fs::path& path) {
  require_file(path.string(), "JSON file");
  std::ifstream in(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, path.string() + ": " + e.what());
  }
}

fs::path prepare_out(const std::string& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create output directory " + out + ": " + ec.message());
  return fs::path(out);
}

std::string corpus_text(const Corpus& corpus) {
  std::ostringstream s;
  write_corpus(s, corpus);
  return s.str();
}

// Fingerprint of the evaluation data: schema plus canonical JSONL bytes.
std::string corpus_fingerprint(const Corpus& corpus) {
  return sha256_hex(corpus.schema.name() + "\n" + corpus_text(corpus));
}

Gazetteer load_gazetteer(const std::optional<std::string>& path) {
  if (!path) return Gazetteer::builtin();
  require_file(*path, "gazetteer");
  return Gazetteer::load(*path);
}

// Runs one pipeline stage, prefixing any error with the stage name.
template <typename F>
auto stage(std::string_view name, F&& body) -> decltype(body()) {
  log::info(std::string("stage ") + std::string(name));
  try {
    return body();
  } catch (const Error& e) {
    throw Error(e.code(), std::string(name) + ": " + e.what());
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kData, std::string(name) + ": " + e.what());
  }
}

BackendOptions backend_options(const RunConfig& cfg) {
  BackendOptions opts;
  if (cfg.adapter) opts.adapter = fs::path(*cfg.adapter);
  opts.adapter_args = cfg.adapter_args;
  return opts;
}

ordered_json pipeline_meta(const RunConfig& cfg, const Gazetteer* gazetteer) {
  ordered_json j;
  j["augment"] = cfg.augment;
  j["gazetteer"] = cfg.gazetteer ? ordered_json(*cfg.gazetteer) : ordered_json(nullptr);
  j["gazetteer_sha256"] =
      gazetteer ? ordered_json(sha256_hex(gazetteer->serialize())) : ordered_json(nullptr);
  return j;
}

std::vector<SentencePrediction> to_records(std::span<const LabeledSentence> sentences,
                                           std::span<const BioSequence> predicted,
                                           const LabelSchema& schema, bool with_gold) {
  std::vector<SentencePrediction> out;
  out.reserve(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const LabeledSentence& s = sentences[i];
    SentencePrediction p;
    p.post_id = s.post_id;
    p.index = s.index;
    p.start_char = s.span.start_char;
    p.end_char = s.span.end_char;
    p.tokens = s.token_texts();
    if (with_gold) {
      p.gold = s.gold;
      p.gold_class = sentence_class(s.span, s.gold_spans, schema);
    }
    p.pred = predicted[i];
    out.push_back(std::move(p));
  }
  return out;
}

struct Evaluation {
  ordered_json metrics;
  std::string confusion_csv;
  std::optional<std::string> sentence_confusion_csv;
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
};

Evaluation evaluate_records(std::span<const SentencePrediction> records,
                            const LabelSchema& schema) {
  std::vector<BioSequence> gold;
  std::vector<BioSequence> pred;
  std::size_t tokens = 0;
  for (const auto& r : records) {
    if (r.gold.size() != r.tokens.size()) {
      throw Error(ErrorCode::kData, "sentence " + r.post_id + "#" + std::to_string(r.index) +
                                        " has no gold labels");
    }
    gold.push_back(r.gold);
    pred.push_back(r.pred);
    tokens += r.tokens.size();
  }
  const ConfusionMatrix cm = token_confusion(gold, pred, schema);
  const MetricsReport report = token_prf(cm);
  Evaluation ev;
  ev.metrics["schema"] = schema.name();
  ev.metrics["sentences"] = records.size();
  ev.metrics["tokens"] = tokens;
  ev.metrics["token_level"] = report.to_json();
  ev.metrics["confusion"] = cm.to_json();
  ev.confusion_csv = cm.to_csv();
  ev.micro_f1 = report.micro.f1;
  ev.macro_f1 = report.macro.f1;
  if (schema.name() == "subtask1") {
    std::vector<std::string> gold_cls;
    std::vector<std::string> pred_cls;
    for (std::size_t i = 0; i < records.size(); ++i) {
      gold_cls.push_back(records[i].gold_class.empty() ? sentence_class(gold[i], schema)
                                                       : records[i].gold_class);
      pred_cls.push_back(sentence_class(pred[i], schema));
    }
    const ConfusionMatrix scm = sentence_confusion(gold_cls, pred_cls, schema);
    ev.metrics["sentence_level"] = token_prf(scm).to_json();
    ev.metrics["sentence_confusion"] = scm.to_json();
    ev.sentence_confusion_csv = scm.to_csv();
  }
  return ev;
}

void write_evaluation(const fs::path& dir, const Evaluation& ev) {
  write_json(dir / "metrics.json", ev.metrics);
  write_text(dir / "confusion.csv", ev.confusion_csv);
  if (ev.sentence_confusion_csv) {
    write_text(dir / "sentence_confusion.csv", *ev.sentence_confusion_csv);
  }
}

// Restores the default log sink when a command that redirected it ends.
class LogRedirect {
 public:
  explicit LogRedirect(const fs::path& path) : file_(path, std::ios::app) {
    if (!file_) throw Error(ErrorCode::kIo, "cannot write " + path.string());
    log::set_sink(&file_);
    log::set_timestamps(true);
  }
  ~LogRedirect() {
    log::set_timestamps(false);
    log::set_sink(&std::cerr);
  }

 private:
  std::ofstream file_;
};

// ---- commands ------------------------------------------------------------

int cmd_validate(const RunConfig& cfg, bool with_stats, std::ostream& out) {
  const LabelSchema schema = LabelSchema::by_name(cfg.schema);
  require_file(cfg.corpus, "corpus");
  const Corpus corpus = read_corpus(fs::path(cfg.corpus), schema);
  const ValidationReport report = validate_corpus(corpus);
  const fs::path dir = prepare_out(cfg.out);
  write_json(dir / "validation_report.json", report.to_json());
  out << corpus.posts.size() << " posts, " << report.errors.size() << " errors, "
      << report.warnings.size() << " warnings\n";
  for (const auto& f : report.errors) {
    out << "error " << f.code << " [" << f.post_id << "]: " << f.message << '\n';
  }
  if (!report.ok()) return kExitData;
  if (with_stats) {
    const ordered_json stats = corpus_stats(corpus).to_json(schema);
    write_json(dir / "stats.json", stats);
    out << stats.dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_split(const RunConfig& cfg, std::ostream& out) {
  const LabelSchema schema = LabelSchema::by_name(cfg.schema);
  require_file(cfg.corpus, "corpus");
  const Corpus corpus = load_corpus(cfg.corpus, schema);
  const CorpusSplit split = stratified_split(corpus, cfg.validation_fraction, cfg.seed);
  const fs::path dir = prepare_out(cfg.out);
  write_corpus(dir / "train.jsonl", split.train);
  write_corpus(dir / "validation.jsonl", split.validation);
  out << "train " << split.train.posts.size() << " posts, validation "
      << split.validation.posts.size() << " posts\n";
  return kExitOk;
}

int cmd_augment(const RunConfig& cfg, std::ostream& out) {
  const LabelSchema schema = LabelSchema::by_name(cfg.schema);
  require_file(cfg.corpus, "corpus");
  const Corpus corpus = load_corpus(cfg.corpus, schema);
  const GazetteerAnnotator annotator(load_gazetteer(cfg.gazetteer));
  std::vector<ConllSentence> conll;
  std::size_t markers = 0;
  for (const auto& s : labeled_sentences(corpus)) {
    const std::vector<std::string> tokens = s.token_texts();
    ModelInput in = model_input(tokens, &s.gold, &annotator);
    markers += in.augmented->tokens.size() - tokens.size();
    conll.push_back({std::move(in.augmented->tokens), std::move(*in.augmented->labels)});
  }
  const fs::path dir = prepare_out(cfg.out);
  std::ofstream file(dir / "augmented.conll", std::ios::binary);
  if (!file) throw Error(ErrorCode::kIo, "cannot write augmented.conll");
  write_conll(file, conll);
  out << conll.size() << " sentences, " << markers << " marker tokens inserted\n";
  return kExitOk;
}

int cmd_train(const RunConfig& cfg, const std::optional<std::string>& dev_path,
              std::ostream& out) {
  const LabelSchema schema = LabelSchema::by_name(cfg.schema);
  require_file(cfg.corpus, "corpus");
  if (dev_path) require_file(*dev_path, "dev corpus");
  const HyperParams hyper = resolve_hyper(cfg, schema);
  const Corpus train_corpus = load_corpus(cfg.corpus, schema);
  std::optional<Gazetteer> gazetteer;
  if (cfg.augment) gazetteer = load_gazetteer(cfg.gazetteer);
  std::unique_ptr<GazetteerAnnotator> annotator;
  if (gazetteer) annotator = std::make_unique<GazetteerAnnotator>(*gazetteer);

  const auto train = training_sentences(labeled_sentences(train_corpus), annotator.get());
  std::vector<TrainingSentence> dev;
  if (dev_path) {
    dev = training_sentences(labeled_sentences(load_corpus(*dev_path, schema)), annotator.get());
  }
  auto backend = make_backend(cfg.backend, backend_options(cfg));
  ModelHandle model = backend->train(schema, train, dev, hyper);
  model.meta.pipeline = pipeline_meta(cfg, gazetteer ? &*gazetteer : nullptr);
  const fs::path dir = prepare_out(cfg.out);
  save_model(model, dir / "model.rhtm");
  out << "trained " << backend->id() << " on " << train.size() << " sentences";
  if (!model.meta.dev_f1_per_epoch.empty()) {
    out << ", final dev micro-F1 " << model.meta.dev_f1_per_epoch.back();
  }
  out << '\n';
  return kExitOk;
}

int cmd_predict(const RunConfig& cfg, const std::string& model_path, bool schema_given,
                std::ostream& out) {
  require_file(model_path, "model");
  require_file(cfg.corpus, "corpus");
  const ModelHandle model = load_model(model_path);
  const LabelSchema schema = *model.schema;
  if (schema_given && cfg.schema != schema.name()) {
    throw Error(ErrorCode::kSchemaMismatch,
                "model was trained on " + schema.name() + ", not " + cfg.schema);
  }
  const Corpus corpus = load_corpus(cfg.corpus, schema);
  const nlohmann::json& pipe = model.meta.pipeline;
  std::unique_ptr<GazetteerAnnotator> annotator;
  if (pipe.value("augment", false)) {
    std::optional<std::string> path = cfg.gazetteer;
    if (!path && pipe.contains("gazetteer") && pipe["gazetteer"].is_string()) {
      path = pipe["gazetteer"].get<std::string>();
    }
    Gazetteer g = load_gazetteer(path);
    if (sha256_hex(g.serialize()) != pipe.value("gazetteer_sha256", std::string())) {
      throw Error(ErrorCode::kData, "gazetteer differs from the one used in training");
    }
    annotator = std::make_unique<GazetteerAnnotator>(std::move(g));
  }
  auto backend = make_backend(model.backend_id, backend_options(cfg));
  const auto sentences = labeled_sentences(corpus);
  const auto predicted = predict_sentences(*backend, model, sentences, annotator.get(), &schema);
  const fs::path dir = prepare_out(cfg.out);
  write_predictions(dir / "predictions.jsonl", to_records(sentences, predicted, schema, true));
  out << "predicted " << sentences.size() << " sentences\n";
  return kExitOk;
}

int cmd_evaluate(const RunConfig& cfg, const std::string& predictions_path, std::ostream& out) {
  const LabelSchema schema = LabelSchema::by_name(cfg.schema);
  require_file(predictions_path, "predictions");
  const auto records = read_predictions(predictions_path);
  const Evaluation ev = evaluate_records(records, schema);
  write_evaluation(prepare_out(cfg.out), ev);
  out << "micro-F1 " << ev.micro_f1 << " macro-F1 " << ev.macro_f1 << '\n';
  return kExitOk;
}

int cmd_run(const RunConfig& cfg, std::ostream& out) {
  const LabelSchema schema = LabelSchema::by_name(cfg.schema);
  require_file(cfg.corpus, "corpus");
  if (cfg.gazetteer) require_file(*cfg.gazetteer, "gazetteer");
  const HyperParams hyper = resolve_hyper(cfg, schema);
  const ordered_json resolved = cfg.resolved_json();
  const fs::path dir = prepare_out(cfg.out);
  LogRedirect log_file(dir / "run.log");
  log::info("run started: " + resolved.dump());

  const Corpus corpus = stage("load", [&] { return load_corpus(cfg.corpus, schema); });
  const CorpusSplit split = stage("split", [&] {
    return stratified_split(corpus, cfg.validation_fraction, cfg.seed);
  });
  const std::string train_text = corpus_text(split.train);
  const std::string validation_text = corpus_text(split.validation);
  write_text(dir / "train.jsonl", train_text);
  write_text(dir / "validation.jsonl", validation_text);

  std::optional<Gazetteer> gazetteer;
  std::unique_ptr<GazetteerAnnotator> annotator;
  if (cfg.augment) {
    gazetteer = stage("augment", [&] { return load_gazetteer(cfg.gazetteer); });
    annotator = std::make_unique<GazetteerAnnotator>(*gazetteer);
  }
  const auto train_sentences = labeled_sentences(split.train);
  const auto val_sentences = labeled_sentences(split.validation);
  const auto train = stage("augment", [&] { return training_sentences(train_sentences, annotator.get()); });
  const auto dev = stage("augment", [&] { return training_sentences(val_sentences, annotator.get()); });

  std::unique_ptr<TaggerBackend> backend =
      stage("backend", [&] { return make_backend(cfg.backend, backend_options(cfg)); });
  ModelHandle model = stage("train", [&] { return backend->train(schema, train, dev, hyper); });
  model.meta.pipeline = pipeline_meta(cfg, gazetteer ? &*gazetteer : nullptr);
  const std::string model_bytes = serialize_model(model);
  write_text(dir / "model.rhtm", model_bytes);

  const auto predicted = stage("predict", [&] {
    return predict_sentences(*backend, model, val_sentences, annotator.get(), &schema);
  });
  const auto records = to_records(val_sentences, predicted, schema, true);
  write_predictions(dir / "predictions.jsonl", records);
  const Evaluation ev = stage("evaluate", [&] { return evaluate_records(records, schema); });
  write_evaluation(dir, ev);

  ordered_json manifest;
  manifest["tool"] = "rhtag";
  manifest["config"] = resolved;
  manifest["fingerprints"] = {
      {"corpus", sha256_file(cfg.corpus)},
      {"train", sha256_hex(schema.name() + "\n" + train_text)},
      {"validation", corpus_fingerprint(split.validation)},
      {"gazetteer", gazetteer ? ordered_json(sha256_hex(gazetteer->serialize())) : ordered_json(nullptr)},
      {"model", sha256_hex(model_bytes)}};
  manifest["counts"] = {{"train_posts", split.train.posts.size()},
                        {"validation_posts", split.validation.posts.size()},
                        {"train_sentences", train.size()},
                        {"validation_sentences", val_sentences.size()}};
  manifest["dev_f1_per_epoch"] = model.meta.dev_f1_per_epoch;
  manifest["metrics"] = {{"micro_f1", ev.micro_f1}, {"macro_f1", ev.macro_f1}};
  manifest["artifacts"] = {"train.jsonl",      "validation.jsonl", "model.rhtm",
                           "predictions.jsonl", "metrics.json",     "confusion.csv"};
  if (ev.sentence_confusion_csv) manifest["artifacts"].push_back("sentence_confusion.csv");
  write_json(dir / "manifest.json", manifest);
  log::info("run finished: micro-F1 " + std::to_string(ev.micro_f1));
  out << "run " << dir.string() << ": micro-F1 " << ev.micro_f1 << " macro-F1 " << ev.macro_f1
      << '\n';
  return kExitOk;
}

struct RunDir {
  nlohmann::json manifest;
  std::vector<SentencePrediction> records;
};

RunDir read_run_dir(const std::string& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::kIo, "run directory not found: " + dir);
  RunDir r;
  r.manifest = read_json(fs::path(dir) / "manifest.json");
  r.records = read_predictions(fs::path(dir) / "predictions.jsonl");
  return r;
}

int cmd_compare(const RunConfig& cfg, const std::string& dir_a, const std::string& dir_b,
                std::ostream& out) {
  const RunDir a = read_run_dir(dir_a);
  const RunDir b = read_run_dir(dir_b);
  const auto fingerprint = [](const RunDir& r) {
    return r.manifest.value("/fingerprints/validation"_json_pointer, std::string());
  };
  const auto schema_name = [](const RunDir& r) {
    return r.manifest.value("/config/schema"_json_pointer, std::string());
  };
  if (fingerprint(a).empty() || fingerprint(a) != fingerprint(b)) {
    throw Error(ErrorCode::kFingerprintMismatch,
                "validation fingerprints differ: runs were not evaluated on the same data");
  }
  if (schema_name(a) != schema_name(b)) {
    throw Error(ErrorCode::kFingerprintMismatch, "runs use different schemas");
  }
  const LabelSchema schema = LabelSchema::by_name(schema_name(a));
  if (a.records.size() != b.records.size()) {
    throw Error(ErrorCode::kFingerprintMismatch, "runs contain different sentence counts");
  }
  std::vector<EvaluationUnit> units;
  units.reserve(a.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    const SentencePrediction& ra = a.records[i];
    const SentencePrediction& rb = b.records[i];
    if (ra.post_id != rb.post_id || ra.index != rb.index || ra.tokens != rb.tokens ||
        ra.gold != rb.gold) {
      throw Error(ErrorCode::kFingerprintMismatch,
                  "prediction files disagree at sentence " + std::to_string(i));
    }
    units.push_back({ra.gold, ra.pred, rb.pred});
  }
  BootstrapOptions opts;
  opts.resamples = cfg.bootstrap_resamples;
  opts.seed = cfg.seed;
  opts.metric = parse_metric(cfg.bootstrap_metric);
  opts.threads = cfg.threads;
  const BootstrapResult result = paired_bootstrap(units, schema, opts);
  const fs::path dir = prepare_out(cfg.out);
  write_json(dir / "bootstrap.json", result.to_json());
  out << "delta " << result.observed_delta << " p " << result.p_value << '\n';
  return kExitOk;
}

std::map<std::string, std::size_t> parse_spec(const std::string& text) {
  std::map<std::string, std::size_t> spec;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument, "expected label=count, got '" + item + "'");
    }
    try {
      spec[item.substr(0, eq)] = std::stoul(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidArgument, "bad count in '" + item + "'");
    }
  }
  return spec;
}

int cmd_synth(const RunConfig& cfg, const std::string& spec, std::ostream& out) {
  const Corpus corpus = generate_synthetic_corpus(parse_spec(spec), cfg.seed);
  const fs::path dir = prepare_out(cfg.out);
  write_corpus(dir / "corpus.jsonl", corpus);
  write_text(dir / "gazetteer.txt", synthetic_gazetteer_text());
  out << corpus.posts.size() << " " << corpus.schema.name() << " posts\n";
  return kExitOk;
}

}  // namespace

ordered_json RunConfig::resolved_json() const {
  const LabelSchema s = LabelSchema::by_name(schema);
  ordered_json j;
  j["schema"] = schema;
  j["corpus"] = corpus;
  j["validation_fraction"] = validation_fraction;
  j["gazetteer"] = gazetteer ? ordered_json(*gazetteer) : ordered_json(nullptr);
  j["augment"] = augment;
  j["backend"] = backend;
  j["adapter"] = adapter ? ordered_json(*adapter) : ordered_json(nullptr);
  j["adapter_args"] = adapter_args;
  j["hyper"] = resolve_hyper(*this, s).to_json();
  j["bootstrap_resamples"] = bootstrap_resamples;
  j["bootstrap_metric"] = bootstrap_metric;
  j["seed"] = seed;
  j["threads"] = threads;
  j["out"] = out;
  return j;
}

RunConfig RunConfig::from_json(const nlohmann::json& input) {
  const nlohmann::json& j = input.contains("config") ? input.at("config") : input;
  if (!j.is_object()) throw Error(ErrorCode::kInvalidArgument, "config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!kConfigKeys.contains(key)) {
      throw Error(ErrorCode::kInvalidArgument, "unknown config key '" + key + "'");
    }
  }
  RunConfig c;
  try {
    c.schema = j.value("schema", c.schema);
    c.corpus = j.value("corpus", c.corpus);
    c.validation_fraction = j.value("validation_fraction", c.validation_fraction);
    if (j.contains("gazetteer") && !j["gazetteer"].is_null()) c.gazetteer = j["gazetteer"].get<std::string>();
    c.augment = j.value("augment", c.augment);
    c.backend = j.value("backend", c.backend);
    if (j.contains("adapter") && !j["adapter"].is_null()) c.adapter = j["adapter"].get<std::string>();
    c.adapter_args = j.value("adapter_args", c.adapter_args);
    if (j.contains("hyper")) c.hyper = j["hyper"];
    c.bootstrap_resamples = j.value("bootstrap_resamples", c.bootstrap_resamples);
    c.bootstrap_metric = j.value("bootstrap_metric", c.bootstrap_metric);
    c.seed = j.value("seed", c.seed);
    c.threads = j.value("threads", c.threads);
    c.out = j.value("out", c.out);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, std::string("bad config value: ") + e.what());
  }
  if (!c.hyper.is_object()) throw Error(ErrorCode::kInvalidArgument, "config 'hyper' must be an object");
  return c;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Patient-experience and PIO entity tagging pipeline", "rhtag");
  app.fallthrough();
  app.require_subcommand(1);

  std::string schema_flag;
  std::uint64_t seed_flag = 0;
  std::string out_flag;
  std::string config_path;
  std::size_t threads_flag = 1;
  auto* o_schema = app.add_option("--schema", schema_flag, "subtask1 or subtask2");
  auto* o_seed = app.add_option("--seed", seed_flag, "random seed");
  auto* o_out = app.add_option("--out", out_flag, "output directory");
  app.add_option("--config", config_path, "JSON run configuration or run manifest");
  auto* o_threads = app.add_option("--threads", threads_flag, "worker threads for resampling");

  std::string corpus;
  std::string dev;
  std::string model;
  std::string predictions;
  std::string gazetteer;
  std::string backend;
  std::string adapter;
  std::vector<std::string> adapter_args;
  std::string hyper;
  std::size_t epochs = 0;
  double fraction = 0.0;
  std::size_t resamples = 0;
  std::string metric;
  std::string run_a;
  std::string run_b;
  std::string spec;
  bool augment = false;
  bool no_augment = false;

  auto* validate = app.add_subcommand("validate", "Check a corpus and write validation_report.json");
  auto* stats = app.add_subcommand("stats", "Validate and write entity statistics to stats.json");
  auto* split = app.add_subcommand("split", "Write a label-balanced train/validation split");
  auto* augment_cmd = app.add_subcommand("augment", "Write gazetteer-augmented sentences as CoNLL");
  auto* train = app.add_subcommand("train", "Train a model and write model.rhtm");
  auto* predict = app.add_subcommand("predict", "Tag a corpus with a trained model");
  auto* evaluate = app.add_subcommand("evaluate", "Score predictions.jsonl against its gold labels");
  auto* run_cmd = app.add_subcommand("run", "Split, train, predict and evaluate in one directory");
  auto* compare = app.add_subcommand("compare", "Paired bootstrap test between two run directories");
  auto* synth = app.add_subcommand("synth", "Write a synthetic corpus and matching gazetteer");

  std::map<CLI::App*, CLI::Option*> corpus_opts;
  for (auto* sub : {validate, stats, split, augment_cmd, train, predict}) {
    corpus_opts[sub] = sub->add_option("corpus", corpus, "corpus JSONL");
  }
  corpus_opts[run_cmd] = run_cmd->add_option("--corpus", corpus, "corpus JSONL");
  train->add_option("--dev", dev, "development corpus for per-epoch scores");
  predict->add_option("--model", model, "model file")->required();
  evaluate->add_option("predictions", predictions, "predictions JSONL")->required();

  std::vector<CLI::Option*> gaz_opts, aug_opts, noaug_opts, backend_opts, adapter_opts,
      adapter_arg_opts, hyper_opts, epoch_opts, resample_opts, metric_opts, fraction_opts;
  for (auto* sub : {split, run_cmd}) {
    fraction_opts.push_back(
        sub->add_option("--validation-fraction", fraction, "share of posts held out"));
  }
  for (auto* sub : {augment_cmd, train, predict, run_cmd}) {
    gaz_opts.push_back(sub->add_option("--gazetteer", gazetteer, "gazetteer file"));
  }
  for (auto* sub : {train, run_cmd}) {
    aug_opts.push_back(sub->add_flag("--augment", augment, "insert knowledge markers"));
    noaug_opts.push_back(sub->add_flag("--no-augment", no_augment, "disable knowledge markers"));
    backend_opts.push_back(sub->add_option("--backend", backend, "perceptron or external"));
    hyper_opts.push_back(sub->add_option("--hyper", hyper, "JSON object of hyper-parameters"));
    epoch_opts.push_back(sub->add_option("--epochs", epochs, "training epochs"));
  }
  for (auto* sub : {train, predict, run_cmd}) {
    adapter_opts.push_back(sub->add_option("--adapter", adapter, "external adapter executable"));
    adapter_arg_opts.push_back(sub->add_option("--adapter-arg", adapter_args, "adapter argument"));
  }
  for (auto* sub : {compare, run_cmd}) {
    resample_opts.push_back(sub->add_option("--resamples", resamples, "bootstrap resamples"));
    metric_opts.push_back(sub->add_option("--metric", metric, "micro_f1 or macro_f1"));
  }
  compare->add_option("run_a", run_a, "first run directory")->required();
  compare->add_option("run_b", run_b, "second run directory")->required();
  synth->add_option("--spec", spec, "label=count pairs, comma separated")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "rhtag: " << e.what() << '\n';
    return kExitUsage;
  }

  const auto given = [](const std::vector<CLI::Option*>& opts) {
    for (auto* o : opts) {
      if (o->count() > 0) return true;
    }
    return false;
  };

  CLI::App* sub = app.get_subcommands().front();
  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg = RunConfig::from_json(read_json(config_path));
    if (o_schema->count() > 0) cfg.schema = schema_flag;
    if (o_seed->count() > 0) {
      cfg.seed = seed_flag;
      cfg.hyper.erase("seed");
    }
    if (o_out->count() > 0) cfg.out = out_flag;
    if (o_threads->count() > 0) cfg.threads = threads_flag;
    if (corpus_opts.contains(sub) && corpus_opts[sub]->count() > 0) cfg.corpus = corpus;
    if (given(fraction_opts)) cfg.validation_fraction = fraction;
    if (given(gaz_opts)) cfg.gazetteer = gazetteer;
    if (given(aug_opts)) cfg.augment = true;
    if (given(noaug_opts)) cfg.augment = false;
    if (given(backend_opts)) cfg.backend = backend;
    if (given(adapter_opts)) cfg.adapter = adapter;
    if (given(adapter_arg_opts)) cfg.adapter_args = adapter_args;
    if (given(hyper_opts)) {
      try {
        const auto h = nlohmann::json::parse(hyper);
        if (!h.is_object()) throw Error(ErrorCode::kInvalidArgument, "--hyper must be a JSON object");
        for (const auto& [k, v] : h.items()) cfg.hyper[k] = v;
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::kInvalidArgument, std::string("--hyper: ") + e.what());
      }
    }
    if (given(epoch_opts)) cfg.hyper["epochs"] = epochs;
    if (given(resample_opts)) cfg.bootstrap_resamples = resamples;
    if (given(metric_opts)) cfg.bootstrap_metric = metric;
    // Fail early on a bad schema name, before any file is touched.
    if (sub != synth && sub != compare) LabelSchema::by_name(cfg.schema);

    if (sub == validate) return cmd_validate(cfg, false, out);
    if (sub == stats) return cmd_validate(cfg, true, out);
    if (sub == split) return cmd_split(cfg, out);
    if (sub == augment_cmd) return cmd_augment(cfg, out);
    if (sub == train) return cmd_train(cfg, dev.empty() ? std::nullopt : std::optional(dev), out);
    if (sub == predict) return cmd_predict(cfg, model, o_schema->count() > 0, out);
    if (sub == evaluate) return cmd_evaluate(cfg, predictions, out);
    if (sub == run_cmd) return cmd_run(cfg, out);
    if (sub == compare) return cmd_compare(cfg, run_a, run_b, out);
    return cmd_synth(cfg, spec, out);
  } catch (const Error& e) {
    err << "rhtag " << sub->get_name() << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "rhtag " << sub->get_name() << ": " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace rhtag::cli
