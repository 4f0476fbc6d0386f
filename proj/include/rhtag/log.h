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
#ifndef RHTAG_LOG_H_
#define RHTAG_LOG_H_

#include <ostream>
#include <string_view>

namespace rhtag::log {

enum class Level { kDebug = 0, kInfo = 1, kWarning = 2, kError = 3, kOff = 4 };

// Process-wide sink; defaults to std::cerr at kInfo. Not thread-safe to
// reconfigure while logging.
void set_level(Level level);
void set_sink(std::ostream* sink);
// Prefix lines with a UTC timestamp.
void set_timestamps(bool on);

void write(Level level, std::string_view message);
inline void info(std::string_view m) { write(Level::kInfo, m); }
inline void warn(std::string_view m) { write(Level::kWarning, m); }
inline void debug(std::string_view m) { write(Level::kDebug, m); }

}  // namespace rhtag::log

#endif  // RHTAG_LOG_H_
