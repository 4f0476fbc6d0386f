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

#include <fstream>
#include <sstream>

#include "binary_io.h"
#include "rhtag/backend.h"
#include "rhtag/error.h"
#include "rhtag/hashing.h"

namespace rhtag {
namespace {

constexpr std::string_view kMagic = "RHTM";

nlohmann::ordered_json meta_to_json(const TrainingMeta& meta) {
  nlohmann::ordered_json j;
  j["hyper"] = meta.hyper.to_json();
  j["corpus_fingerprint"] = meta.corpus_fingerprint;
  j["dev_f1_per_epoch"] = meta.dev_f1_per_epoch;
  j["pipeline"] = meta.pipeline;
  return j;
}

TrainingMeta meta_from_json(std::string_view text) {
  TrainingMeta meta;
  try {
    const auto j = nlohmann::json::parse(text);
    meta.hyper = HyperParams::from_json(j.at("hyper"), HyperParams{});
    meta.corpus_fingerprint = j.at("corpus_fingerprint").get<std::string>();
    meta.dev_f1_per_epoch = j.at("dev_f1_per_epoch").get<std::vector<double>>();
    meta.pipeline = nlohmann::ordered_json::parse(j.value("pipeline", nlohmann::json::object()).dump());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("model metadata is malformed: ") + e.what());
  }
  return meta;
}

}  // namespace

std::string serialize_model(const ModelHandle& model) {
  if (!model.trained()) throw Error(ErrorCode::kUntrainedModel, "untrained model");
  internal::ByteWriter w;
  w.put_bytes(kMagic);
  w.put(kModelFormatVersion);
  w.put_string(model.schema->name());
  w.put(static_cast<std::uint32_t>(model.schema->size()));
  for (const auto& l : model.schema->labels()) w.put_string(l);
  w.put_string(model.backend_id);
  w.put_string(meta_to_json(model.meta).dump());
  w.put(static_cast<std::uint64_t>(model.parameters.size()));
  w.put_bytes(model.parameters);
  w.put(crc32(model.parameters));
  return w.take();
}

void save_model(const ModelHandle& model, const std::filesystem::path& path) {
  const std::string bytes = serialize_model(model);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

ModelHandle deserialize_model(std::string_view bytes) {
  if (bytes.size() < kMagic.size() || bytes.substr(0, kMagic.size()) != kMagic) {
    throw Error(ErrorCode::kBadMagic, "bad magic header: not an rhtag model file");
  }
  internal::ByteReader r(bytes.substr(kMagic.size()));
  const auto version = r.get<std::uint16_t>();
  if (version != kModelFormatVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "version mismatch: file has format " + std::to_string(version) + ", expected " +
                    std::to_string(kModelFormatVersion));
  }
  ModelHandle model;
  std::string schema_name = r.get_string();
  const std::uint32_t n_labels = r.get<std::uint32_t>();
  std::vector<std::string> labels;
  for (std::uint32_t i = 0; i < n_labels; ++i) labels.push_back(r.get_string());
  model.schema = LabelSchema(std::move(schema_name), std::move(labels));
  model.backend_id = r.get_string();
  model.meta = meta_from_json(r.get_string());
  const auto payload_size = r.get<std::uint64_t>();
  if (payload_size > r.remaining()) {
    throw Error(ErrorCode::kTruncated, "model payload is truncated");
  }
  model.parameters = std::string(r.get_bytes(static_cast<std::size_t>(payload_size)));
  const auto checksum = r.get<std::uint32_t>();
  if (checksum != crc32(model.parameters)) {
    throw Error(ErrorCode::kChecksum, "model payload checksum mismatch");
  }
  if (r.remaining() != 0) throw Error(ErrorCode::kData, "trailing bytes after model payload");
  return model;
}

ModelHandle load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open model " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize_model(buf.str());
}

}  // namespace rhtag
