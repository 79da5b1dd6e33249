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

#ifndef FEDQ_NN_SERIALIZE_H_
#define FEDQ_NN_SERIALIZE_H_

#include <filesystem>
#include <span>

#include "fedq/common/bytes.h"
#include "fedq/nn/network.h"

namespace fedq::nn {

// Parameter blob layout (all integers little-endian):
//
//   "FEDQ1"                      5-byte magic
//   u64 fingerprint              NetworkSpec::Fingerprint()
//   u32 buffer_count
//   repeated buffer_count times:
//     u32 element_count
//     f32 x element_count        IEEE-754 binary32, little-endian
//
// The same blob is used for checkpoint files and for theta_g on the wire.
inline constexpr char kParamMagic[] = "FEDQ1";
inline constexpr std::size_t kParamMagicSize = 5;

Bytes SerializeParams(const NetworkSpec& spec, const ParamSet& params);

// Throws FormatError on bad magic, fingerprint mismatch, truncation, trailing
// bytes, or buffers that do not fit the spec.
ParamSet DeserializeParams(std::span<const std::uint8_t> bytes,
                           const NetworkSpec& spec);

void SaveParams(const std::filesystem::path& path, const NetworkSpec& spec,
                const ParamSet& params);
ParamSet LoadParams(const std::filesystem::path& path, const NetworkSpec& spec);

}  // namespace fedq::nn

#endif  // FEDQ_NN_SERIALIZE_H_
