// Copyright 2026 The UAST Harness Authors.
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

#ifndef UAST_ERROR_H_
#define UAST_ERROR_H_

#include <stdexcept>
#include <string>

namespace uast {

enum class ErrorCode {
  kInvalidArgument,
  kParse,
  kNotFound,
  kIo,
  kState,
  kIncompatible,
};

// All failures inside the library are reported with this exception; the C API
// translates the code into a status value.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Syntax or semantic error in one of the text inputs. Line and column are
// 1-based; column 0 means "whole line".
class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& message)
      : Error(ErrorCode::kParse, Format(line, column, message)),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string Format(int line, int column, const std::string& message) {
    std::string out = "line " + std::to_string(line);
    if (column > 0) out += ", column " + std::to_string(column);
    return out + ": " + message;
  }

  int line_;
  int column_;
};

}  // namespace uast

#endif  // UAST_ERROR_H_
