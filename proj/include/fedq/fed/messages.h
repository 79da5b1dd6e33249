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

#ifndef FEDQ_FED_MESSAGES_H_
#define FEDQ_FED_MESSAGES_H_

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fedq/common/bytes.h"

namespace fedq::fed {

// Everything that may cross the boundary between the two agents. There is
// deliberately no message type able to carry an observation, a map, a raw
// reward, or the private network parameters.
//
// Wire frame, all integers little-endian:
//
//   u32 length        number of bytes that follow (tag + fields)
//   u8  tag           MessageTag
//   fields            in declaration order:
//                       u64 for indices, f32 for scalars, u8 for flags,
//                       vectors as u32 count + f32 elements,
//                       theta_g as u32 byte count + parameter blob
//                       (see nn/serialize.h), text as u32 count + bytes.

struct Init {};
struct RequestQBetaLive {};
struct RequestQBetaIndexed {
  std::uint64_t j = 0;
};
struct QBetaReply {
  std::vector<float> c_beta;
};
struct UpdateBeta {
  float y = 0.0f;
  std::uint64_t j = 0;
  std::vector<float> c_alpha;
  Bytes theta_g;
};
struct ThetaGReply {
  Bytes theta_g;
};
struct EndEpisode {};
struct Shutdown {};
// Test-time exchange: beta acts greedily from its federated head.
struct BeginEval {
  bool noise_on = false;
  Bytes theta_g;
};
struct EvalStep {
  std::vector<float> c_alpha;
};
struct ErrorReply {
  std::string message;
};

using FedMessage =
    std::variant<Init, RequestQBetaLive, RequestQBetaIndexed, QBetaReply,
                 UpdateBeta, ThetaGReply, EndEpisode, Shutdown, BeginEval,
                 EvalStep, ErrorReply>;

enum class MessageTag : std::uint8_t {
  kInit = 1,
  kRequestQBetaLive = 2,
  kRequestQBetaIndexed = 3,
  kQBetaReply = 4,
  kUpdateBeta = 5,
  kThetaGReply = 6,
  kEndEpisode = 7,
  kShutdown = 8,
  kBeginEval = 9,
  kEvalStep = 10,
  kErrorReply = 11,
};

MessageTag TagOf(const FedMessage& m);
const char* TagName(MessageTag t);

// Frames are capped so that a corrupted length cannot trigger a huge read.
inline constexpr std::uint32_t kMaxFrameBytes = 64u << 20;

// Full frame including the length prefix.
Bytes EncodeFrame(const FedMessage& m);

// Decodes the bytes after the length prefix. Throws FormatError on unknown
// tags, truncation, or trailing bytes.
FedMessage DecodePayload(std::span<const std::uint8_t> payload);

// Decodes a full frame and checks the length prefix.
FedMessage DecodeFrame(std::span<const std::uint8_t> frame);

}  // namespace fedq::fed

#endif  // FEDQ_FED_MESSAGES_H_
