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

#include "rhtag/external_backend.h"

#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <thread>

extern char** environ;

namespace rhtag {
namespace {

nlohmann::json sentences_to_json(std::span<const TrainingSentence> data) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : data) {
    arr.push_back({{"tokens", s.tokens}, {"labels", to_strings(s.labels)}});
  }
  return arr;
}

}  // namespace

AdapterProcess::AdapterProcess(const std::filesystem::path& executable,
                               const std::vector<std::string>& args) {
  if (::access(executable.c_str(), X_OK) != 0) {
    throw Error(ErrorCode::kBackendUnreachable,
                "backend unreachable: cannot execute " + executable.string());
  }
  int fds[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) != 0) {
    throw Error(ErrorCode::kBackendUnreachable,
                std::string("backend unreachable: socketpair: ") + std::strerror(errno));
  }
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, fds[1], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, fds[1], STDOUT_FILENO);

  std::vector<std::string> argv_storage;
  argv_storage.push_back(executable.string());
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());
  argv.push_back(nullptr);

  const int rc = ::posix_spawn(&pid_, executable.c_str(), &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(fds[1]);
  if (rc != 0) {
    ::close(fds[0]);
    throw Error(ErrorCode::kBackendUnreachable,
                "backend unreachable: cannot start " + executable.string() + ": " +
                    std::strerror(rc));
  }
  fd_ = fds[0];
}

AdapterProcess::~AdapterProcess() {
  if (fd_ >= 0) ::close(fd_);
  if (pid_ <= 0) return;
  // Closing the channel is the shutdown signal; escalate if ignored.
  using namespace std::chrono_literals;
  const auto deadline = std::chrono::steady_clock::now() + 5s;
  int status = 0;
  while (::waitpid(pid_, &status, WNOHANG) == 0) {
    if (std::chrono::steady_clock::now() > deadline) {
      ::kill(pid_, SIGKILL);
      ::waitpid(pid_, &status, 0);
      break;
    }
    std::this_thread::sleep_for(10ms);
  }
}

void AdapterProcess::write_line(std::string_view line) {
  std::string data(line);
  data.push_back('\n');
  std::size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::kBackend, std::string("adapter write failed: ") + std::strerror(errno));
    }
    sent += static_cast<std::size_t>(n);
  }
}

std::string AdapterProcess::read_line() {
  for (;;) {
    if (const auto nl = buffer_.find('\n'); nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    char chunk[65536];
    const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::kBackend, std::string("adapter read failed: ") + std::strerror(errno));
    }
    if (n == 0) throw Error(ErrorCode::kBackend, "adapter closed the connection");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

nlohmann::json AdapterProcess::request(const nlohmann::json& message) {
  std::lock_guard<std::mutex> lock(mutex_);
  write_line(message.dump());
  const std::string line = read_line();
  try {
    return nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error&) {
    throw Error(ErrorCode::kBackend, "adapter answered with malformed JSON: " + line);
  }
}

ExternalBackend::ExternalBackend(const std::filesystem::path& executable,
                                 const std::vector<std::string>& args)
    : process_(executable, args) {
  nlohmann::json hello;
  try {
    hello = call({{"op", "hello"}});
  } catch (const Error& e) {
    throw Error(ErrorCode::kBackendUnreachable, std::string("backend unreachable: ") + e.what());
  }
  if (hello.value("protocol", 0) != kAdapterProtocolVersion) {
    throw Error(ErrorCode::kBackendUnreachable,
                "backend unreachable: adapter speaks protocol " + hello.value("protocol", nlohmann::json()).dump());
  }
  adapter_name_ = hello.value("backend", std::string("unknown"));
}

nlohmann::json ExternalBackend::call(const nlohmann::json& message) {
  nlohmann::json reply = process_.request(message);
  if (!reply.is_object() || !reply.contains("ok")) {
    throw Error(ErrorCode::kBackend, "adapter reply lacks 'ok': " + reply.dump());
  }
  if (reply["ok"] != true) {
    throw BackendError(reply.value("code", std::string("unknown")),
                       reply.value("message", std::string()));
  }
  return reply;
}

ExternalBackend::TrainOutput ExternalBackend::do_train(const LabelSchema& schema,
                                                       std::span<const TrainingSentence> train,
                                                       std::span<const TrainingSentence> dev,
                                                       const HyperParams& hyper) {
  const nlohmann::json reply = call({{"op", "train"},
                                     {"schema", schema.labels()},
                                     {"hyper", hyper.to_json()},
                                     {"train", sentences_to_json(train)},
                                     {"dev", sentences_to_json(dev)}});
  TrainOutput out;
  try {
    out.parameters = reply.at("model_ref").get<std::string>();
    out.dev_f1_per_epoch = reply.value("dev_f1_per_epoch", std::vector<double>{});
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBackend, std::string("malformed train reply: ") + e.what());
  }
  return out;
}

std::vector<BioSequence> ExternalBackend::do_predict(
    const ModelHandle& model, std::span<const std::vector<std::string>> sentences) {
  nlohmann::json batch = nlohmann::json::array();
  for (const auto& s : sentences) batch.push_back(s);
  const nlohmann::json reply =
      call({{"op", "predict"}, {"model_ref", model.parameters}, {"sentences", batch}});
  std::vector<BioSequence> out;
  try {
    for (const auto& labels : reply.at("labels")) {
      out.push_back(parse_labels(labels.get<std::vector<std::string>>()));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kBackend, std::string("malformed predict reply: ") + e.what());
  }
  return out;
}

}  // namespace rhtag
