// Copyright 2026 The ENIQA Authors. All Rights Reserved.
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

#ifndef ENIQA_ERROR_HPP_
#define ENIQA_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace eniqa {

// Failure categories. The C API maps each one onto a status code and the CLI
// maps those onto exit codes.
enum class ErrorKind {
  kArgument,
  kSize,
  kDecode,
  kParse,
  kTraining,
  kConfig,
  kState,
  kIo,
  kInternal,
};

const char* ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void Fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace eniqa

#endif  // ENIQA_ERROR_HPP_
