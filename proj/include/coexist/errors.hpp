// Copyright 2026 The coexist Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace coexist {

enum class ErrorKind {
  NotHermitian,
  DimMismatch,
  EmptyInput,
  NotProjection,
  IndexOutOfRange,
  MapMismatch,
  TooManyOutcomes,
  NotSummable,
  NotRegular,
  NotCommuting,
  CertificateInvalid,
  WitnessNotRegular,
  EmbeddingNotFound,
  WitnessInvalid,
  NotPvm,
  NotInDomain,
  NotUnit,
  InvalidScheme,
  PointerNotProjective,
  TooLarge,
  ParseError,
  ValidationError,
  UnknownName,
  UnknownCommand,
};

std::string_view error_kind_name(ErrorKind kind);

// Single exception type for every contract violation in the library; callers
// branch on kind() rather than on a class hierarchy.
// Compact rendering of a real number for messages.
inline std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

class CoexistError : public std::runtime_error {
 public:
  CoexistError(ErrorKind kind, const std::string& message)
      : std::runtime_error(
            std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind),
        message_(message) {}

  ErrorKind kind() const { return kind_; }
  // The message without the kind prefix.
  const std::string& message() const { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

}  // namespace coexist
