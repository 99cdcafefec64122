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

#include "uast/checkpoint.h"

#include <bit>
#include <cstring>

#include "uast/error.h"
#include "uast/text.h"

namespace uast {

namespace {

constexpr std::string_view kMagic = "UASTLSTM";
constexpr std::uint32_t kVersion = 1;

template <typename T>
void PutLE(std::string& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
}

}  // namespace

void BinaryWriter::U32(std::uint32_t v) { PutLE(out_, v); }
void BinaryWriter::U64(std::uint64_t v) { PutLE(out_, v); }
void BinaryWriter::F64(double v) { PutLE(out_, std::bit_cast<std::uint64_t>(v)); }
void BinaryWriter::Bytes(std::string_view s) { out_.append(s); }

void BinaryWriter::String(std::string_view s) {
  U32(static_cast<std::uint32_t>(s.size()));
  out_.append(s);
}

void BinaryWriter::F64s(const std::vector<double>& v) {
  U64(v.size());
  for (double d : v) F64(d);
}

std::string_view BinaryReader::Bytes(std::size_t n) {
  if (data_.size() - pos_ < n) {
    throw Error(ErrorCode::kParse, "checkpoint is truncated");
  }
  std::string_view s = data_.substr(pos_, n);
  pos_ += n;
  return s;
}

std::uint32_t BinaryReader::U32() {
  auto b = Bytes(4);
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(b[i]);
  return v;
}

std::uint64_t BinaryReader::U64() {
  auto b = Bytes(8);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(b[i]);
  return v;
}

double BinaryReader::F64() { return std::bit_cast<double>(U64()); }

std::string BinaryReader::String() {
  std::uint32_t n = U32();
  return std::string(Bytes(n));
}

std::vector<double> BinaryReader::F64s() {
  std::uint64_t n = U64();
  if (n > (data_.size() - pos_) / 8) {
    throw Error(ErrorCode::kParse, "checkpoint is truncated");
  }
  std::vector<double> v(n);
  for (auto& d : v) d = F64();
  return v;
}

std::string SerializeNetwork(const LstmNetwork& net,
                             const std::vector<std::string>& actions) {
  const LstmShape& s = net.shape();
  if (actions.size() != s.actions) {
    throw Error(ErrorCode::kInvalidArgument,
                "action names do not match the network output width");
  }
  BinaryWriter w;
  w.Bytes(kMagic);
  w.U32(kVersion);
  w.U32(static_cast<std::uint32_t>(s.input));
  w.U32(static_cast<std::uint32_t>(s.hidden));
  w.U32(static_cast<std::uint32_t>(s.layers));
  w.U32(static_cast<std::uint32_t>(s.actions));
  for (const auto& a : actions) w.String(a);
  w.F64s(net.params());
  return w.data();
}

NetworkCheckpoint ParseCheckpoint(std::string_view data) {
  BinaryReader r(data);
  if (r.Bytes(std::min(data.size(), kMagic.size())) != kMagic) {
    throw Error(ErrorCode::kParse, "not a network checkpoint");
  }
  std::uint32_t version = r.U32();
  if (version != kVersion) {
    throw Error(ErrorCode::kIncompatible,
                "unsupported checkpoint version " + std::to_string(version));
  }
  LstmShape shape;
  shape.input = r.U32();
  shape.hidden = r.U32();
  shape.layers = r.U32();
  shape.actions = r.U32();
  if (shape.input == 0 || shape.hidden == 0 || shape.layers == 0 ||
      shape.actions == 0 || shape.hidden > 4096 || shape.layers > 64 ||
      shape.input > 4096 || shape.actions > 65536) {
    throw Error(ErrorCode::kParse, "implausible network dimensions");
  }
  NetworkCheckpoint out;
  for (std::size_t i = 0; i < shape.actions; ++i) out.actions.push_back(r.String());
  out.network = LstmNetwork(shape);
  std::vector<double> params = r.F64s();
  if (params.size() != shape.ParamCount()) {
    throw Error(ErrorCode::kParse, "parameter count does not match dimensions");
  }
  out.network.params() = std::move(params);
  out.training_state = std::string(data.substr(r.position()));
  return out;
}

NetworkCheckpoint LoadCheckpoint(const std::string& path) {
  return ParseCheckpoint(ReadFile(path));
}

}  // namespace uast
