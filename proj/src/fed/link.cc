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

#include "fedq/fed/link.h"

namespace fedq::fed {

void BetaLink::SendFrame(const FedMessage& m) {
  const Bytes frame = EncodeFrame(m);
  if (sink_) sink_(Direction::kAlphaToBeta, frame);
  channel_.Send(frame);
}

FedMessage BetaLink::Call(const FedMessage& request) {
  SendFrame(request);
  const Bytes frame = channel_.Receive();
  if (sink_) sink_(Direction::kBetaToAlpha, frame);
  ++round_trips_;
  FedMessage reply = DecodeFrame(frame);
  if (auto* err = std::get_if<ErrorReply>(&reply)) {
    throw ProtocolError("beta: " + err->message);
  }
  return reply;
}

void BetaLink::Notify(const FedMessage& message) { SendFrame(message); }

}  // namespace fedq::fed
