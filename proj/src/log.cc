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
#include "rhtag/log.h"

#include <chrono>
#include <ctime>
#include <iostream>
#include <mutex>

namespace rhtag::log {
namespace {

Level g_level = Level::kInfo;
std::ostream* g_sink = &std::cerr;
std::mutex g_mutex;
bool g_timestamps = false;

const char* tag(Level level) {
  switch (level) {
    case Level::kDebug: return "D";
    case Level::kInfo: return "I";
    case Level::kWarning: return "W";
    default: return "E";
  }
}

}  // namespace

void set_level(Level level) { g_level = level; }
void set_sink(std::ostream* sink) { g_sink = sink; }
void set_timestamps(bool on) { g_timestamps = on; }

void write(Level level, std::string_view message) {
  if (level < g_level || g_sink == nullptr) return;
  std::lock_guard<std::mutex> lock(g_mutex);
  if (g_timestamps) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    ::gmtime_r(&now, &tm);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
    *g_sink << stamp << ' ';
  }
  *g_sink << tag(level) << ' ' << message << '\n';
  g_sink->flush();
}

}  // namespace rhtag::log
