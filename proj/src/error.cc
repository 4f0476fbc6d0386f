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
#include "rhtag/error.h"

namespace rhtag {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kParse: return "parse_error";
    case ErrorCode::kData: return "data_error";
    case ErrorCode::kUnknownLabel: return "unknown_label";
    case ErrorCode::kUnknownSchema: return "unknown_schema";
    case ErrorCode::kEmptyTrainingSet: return "empty_training_set";
    case ErrorCode::kUntrainedModel: return "untrained_model";
    case ErrorCode::kSchemaMismatch: return "schema_mismatch";
    case ErrorCode::kBackendUnreachable: return "backend_unreachable";
    case ErrorCode::kBackend: return "backend_error";
    case ErrorCode::kBadMagic: return "bad_magic";
    case ErrorCode::kVersionMismatch: return "version_mismatch";
    case ErrorCode::kTruncated: return "truncated";
    case ErrorCode::kChecksum: return "checksum_mismatch";
    case ErrorCode::kIo: return "io_error";
    case ErrorCode::kFingerprintMismatch: return "fingerprint_mismatch";
  }
  return "unknown";
}

}  // namespace rhtag
