//
// Copyright 2026 The FedQ Authors
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
//

#ifndef FEDQ_COMMON_BYTES_H_
#define FEDQ_COMMON_BYTES_H_

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fedq/common/error.h"

namespace fedq {

using Bytes = std::vector<std::uint8_t>;

// Appends little-endian encoded values to a byte buffer.
class ByteWriter {
 public:
  explicit ByteWriter(Bytes& out) : out_(out) {}

  void U8(std::uint8_t v) { out_.push_back(v); }
  void U32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void U64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void F32(float v) { U32(std::bit_cast<std::uint32_t>(v)); }
  void Raw(std::span<const std::uint8_t> bytes) {
    out_.insert(out_.end(), bytes.begin(), bytes.end());
  }
  void Raw(std::string_view s) { out_.insert(out_.end(), s.begin(), s.end()); }

  // u32 element count followed by the elements.
  void F32Vector(std::span<const float> values) {
    U32(static_cast<std::uint32_t>(values.size()));
    for (float v : values) F32(v);
  }
  void Blob(std::span<const std::uint8_t> bytes) {
    U32(static_cast<std::uint32_t>(bytes.size()));
    Raw(bytes);
  }

 private:
  Bytes& out_;
};

// Reads little-endian values; every read is bounds-checked and throws
// FormatError on truncation.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> in) : in_(in) {}

  std::uint8_t U8() { return Take(1)[0]; }
  std::uint32_t U32() {
    auto b = Take(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
  }
  std::uint64_t U64() {
    auto b = Take(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  }
  float F32() { return std::bit_cast<float>(U32()); }
  std::span<const std::uint8_t> Raw(std::size_t n) { return Take(n); }

  std::vector<float> F32Vector() {
    const std::uint32_t n = U32();
    if (static_cast<std::size_t>(n) * 4 > remaining()) {
      throw FormatError("vector length exceeds buffer");
    }
    std::vector<float> v(n);
    for (auto& x : v) x = F32();
    return v;
  }
  Bytes Blob() {
    const std::uint32_t n = U32();
    auto b = Take(n);
    return Bytes(b.begin(), b.end());
  }

  std::size_t remaining() const { return in_.size() - pos_; }
  bool done() const { return pos_ == in_.size(); }

 private:
  std::span<const std::uint8_t> Take(std::size_t n) {
    if (n > remaining()) throw FormatError("truncated buffer");
    auto s = in_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace fedq

#endif  // FEDQ_COMMON_BYTES_H_
