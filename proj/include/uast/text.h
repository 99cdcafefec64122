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

// Small helpers shared by the line-oriented input formats.

#ifndef UAST_TEXT_H_
#define UAST_TEXT_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace uast {

struct Token {
  std::string_view text;
  int column = 0;  // 1-based
};

std::string_view Trim(std::string_view s);

// Splits on '\n', dropping a trailing '\r' from each line.
std::vector<std::string_view> SplitLines(std::string_view text);

// Whitespace tokenizer that records 1-based columns.
std::vector<Token> Tokenize(std::string_view line);

// Removes everything from the first `marker` on (used for '#' comments).
std::string_view StripComment(std::string_view line, std::string_view marker);

bool IsIdentifier(std::string_view s);

std::optional<double> ParseDouble(std::string_view s);
std::optional<std::int64_t> ParseInt(std::string_view s);

// Shortest decimal text that round-trips to the same double.
std::string FormatDouble(double v);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view contents);

// `key = value` configuration with '#' comments. Keys keep file order for
// diagnostics; duplicate keys are an error.
class KeyValues {
 public:
  static KeyValues Parse(std::string_view text);

  bool Has(const std::string& key) const;
  std::optional<std::string> Get(const std::string& key) const;
  double GetDouble(const std::string& key, double fallback) const;
  std::int64_t GetInt(const std::string& key, std::int64_t fallback) const;
  void Set(const std::string& key, const std::string& value);

  // Keys that start with `prefix`, with the prefix removed.
  KeyValues WithPrefix(const std::string& prefix) const;

  const std::map<std::string, std::string>& entries() const {
    return entries_;
  }

 private:
  std::map<std::string, std::string> entries_;
};

}  // namespace uast

#endif  // UAST_TEXT_H_
