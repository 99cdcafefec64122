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

// Checkpoint file layout (all integers and floats little-endian):
//
//   "UASTLSTM"  u32 version (1)
//   u32 input  u32 hidden  u32 layers  u32 actions
//   actions x (u32 length, bytes)          action names
//   u64 count, count x f64                 policy parameters
//   ["UASTTRST" ...]                       optional training state
//
// The trailing training block is opaque to LoadNetwork and lets a training
// run resume exactly where it stopped.

#ifndef UAST_CHECKPOINT_H_
#define UAST_CHECKPOINT_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "uast/neural.h"

namespace uast {

class BinaryWriter {
 public:
  void U32(std::uint32_t v);
  void U64(std::uint64_t v);
  void I64(std::int64_t v) { U64(static_cast<std::uint64_t>(v)); }
  void F64(double v);
  void Bytes(std::string_view s);  // raw, no length prefix
  void String(std::string_view s);  // u32 length + bytes
  void F64s(const std::vector<double>& v);  // u64 count + values

  const std::string& data() const { return out_; }

 private:
  std::string out_;
};

class BinaryReader {
 public:
  explicit BinaryReader(std::string_view data) : data_(data) {}

  std::uint32_t U32();
  std::uint64_t U64();
  std::int64_t I64() { return static_cast<std::int64_t>(U64()); }
  double F64();
  std::string_view Bytes(std::size_t n);
  std::string String();
  std::vector<double> F64s();

  bool AtEnd() const { return pos_ == data_.size(); }
  bool StartsWith(std::string_view magic) const {
    return data_.substr(pos_, magic.size()) == magic;
  }
  std::size_t position() const { return pos_; }

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
};

struct NetworkCheckpoint {
  LstmNetwork network;
  std::vector<std::string> actions;
  std::string training_state;  // raw trailing block, empty when absent
};

std::string SerializeNetwork(const LstmNetwork& net,
                             const std::vector<std::string>& actions);
// Throws kParse for malformed data.
NetworkCheckpoint ParseCheckpoint(std::string_view data);

NetworkCheckpoint LoadCheckpoint(const std::string& path);

}  // namespace uast

#endif  // UAST_CHECKPOINT_H_
