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

#ifndef FEDQ_FED_LINK_H_
#define FEDQ_FED_LINK_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>

#include "fedq/common/error.h"
#include "fedq/fed/messages.h"
#include "fedq/fed/transport.h"

namespace fedq::fed {

enum class Direction : std::uint8_t { kAlphaToBeta, kBetaToAlpha };

// Receives every frame in both directions, in wire order.
using FrameSink =
    std::function<void(Direction, std::span<const std::uint8_t>)>;

// Alpha's end of the protocol: blocking request/reply plus one-way
// notifications, with an optional transcript tap.
class BetaLink {
 public:
  explicit BetaLink(Channel& channel, FrameSink sink = {})
      : channel_(channel), sink_(std::move(sink)) {}

  // Throws ProtocolError if beta answers with ErrorReply.
  FedMessage Call(const FedMessage& request);
  void Notify(const FedMessage& message);

  // Call() and check the reply type; throws ProtocolError on any other.
  template <class Reply>
  Reply CallFor(const FedMessage& request) {
    FedMessage reply = Call(request);
    if (auto* r = std::get_if<Reply>(&reply)) return std::move(*r);
    throw ProtocolError(std::string("unexpected reply ") +
                        TagName(TagOf(reply)) + " to " +
                        TagName(TagOf(request)));
  }

  std::uint64_t round_trips() const { return round_trips_; }

 private:
  void SendFrame(const FedMessage& m);

  Channel& channel_;
  FrameSink sink_;
  std::uint64_t round_trips_ = 0;
};

}  // namespace fedq::fed

#endif  // FEDQ_FED_LINK_H_
