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

// Client side of the adapter protocol: one JSON object per line over the
// child's stdin/stdout, answered in order.
//
//   {"op":"hello"}                        -> {"ok":true,"backend":s,"protocol":1}
//   {"op":"train","schema":[..],"hyper":{..},"train":[..],"dev":[..]}
//                                         -> {"ok":true,"model_ref":s,"dev_f1_per_epoch":[..]}
//   {"op":"predict","model_ref":s,"sentences":[[..]]}
//                                         -> {"ok":true,"labels":[[..]]}
//   failures                              -> {"ok":false,"code":s,"message":s}

#ifndef RHTAG_EXTERNAL_BACKEND_H_
#define RHTAG_EXTERNAL_BACKEND_H_

#include <sys/types.h>

#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include "json.hpp"
#include "rhtag/backend.h"
#include "rhtag/error.h"

namespace rhtag {

inline constexpr int kAdapterProtocolVersion = 1;

// An {"ok":false} answer; `remote_code` is the adapter's code string.
class BackendError : public Error {
 public:
  BackendError(std::string remote_code, const std::string& message)
      : Error(ErrorCode::kBackend, remote_code + ": " + message),
        remote_code_(std::move(remote_code)) {}
  const std::string& remote_code() const { return remote_code_; }

 private:
  std::string remote_code_;
};

// Child process with a line-oriented duplex channel on its stdin/stdout.
class AdapterProcess {
 public:
  // kBackendUnreachable if the executable cannot be started.
  AdapterProcess(const std::filesystem::path& executable, const std::vector<std::string>& args);
  ~AdapterProcess();

  AdapterProcess(const AdapterProcess&) = delete;
  AdapterProcess& operator=(const AdapterProcess&) = delete;

  // kBackend when the adapter has gone away.
  void write_line(std::string_view line);
  std::string read_line();

  // write_line + read_line + JSON parse, serialized per process.
  nlohmann::json request(const nlohmann::json& message);

 private:
  int fd_ = -1;
  pid_t pid_ = -1;
  std::string buffer_;
  std::mutex mutex_;
};

class ExternalBackend : public TaggerBackend {
 public:
  // Starts the adapter and performs the hello handshake.
  ExternalBackend(const std::filesystem::path& executable,
                  const std::vector<std::string>& args = {});

  std::string id() const override { return "external"; }
  // Name the adapter reported in its hello answer.
  const std::string& adapter_name() const { return adapter_name_; }

 protected:
  TrainOutput do_train(const LabelSchema& schema, std::span<const TrainingSentence> train,
                       std::span<const TrainingSentence> dev,
                       const HyperParams& hyper) override;
  std::vector<BioSequence> do_predict(
      const ModelHandle& model, std::span<const std::vector<std::string>> sentences) override;

 private:
  nlohmann::json call(const nlohmann::json& message);

  AdapterProcess process_;
  std::string adapter_name_;
};

}  // namespace rhtag

#endif  // RHTAG_EXTERNAL_BACKEND_H_
