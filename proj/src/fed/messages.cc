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

#include "fedq/fed/messages.h"

#include "fedq/common/error.h"

namespace fedq::fed {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void EncodeFields(const FedMessage& m, ByteWriter& w) {
  std::visit(Overloaded{
                 [](const Init&) {},
                 [](const RequestQBetaLive&) {},
                 [&](const RequestQBetaIndexed& x) { w.U64(x.j); },
                 [&](const QBetaReply& x) { w.F32Vector(x.c_beta); },
                 [&](const UpdateBeta& x) {
                   w.F32(x.y);
                   w.U64(x.j);
                   w.F32Vector(x.c_alpha);
                   w.Blob(x.theta_g);
                 },
                 [&](const ThetaGReply& x) { w.Blob(x.theta_g); },
                 [](const EndEpisode&) {},
                 [](const Shutdown&) {},
                 [&](const BeginEval& x) {
                   w.U8(x.noise_on ? 1 : 0);
                   w.Blob(x.theta_g);
                 },
                 [&](const EvalStep& x) { w.F32Vector(x.c_alpha); },
                 [&](const ErrorReply& x) {
                   w.U32(static_cast<std::uint32_t>(x.message.size()));
                   w.Raw(x.message);
                 },
             },
             m);
}

}  // namespace

MessageTag TagOf(const FedMessage& m) {
  return static_cast<MessageTag>(m.index() + 1);
}

const char* TagName(MessageTag t) {
  switch (t) {
    case MessageTag::kInit: return "Init";
    case MessageTag::kRequestQBetaLive: return "RequestQBetaLive";
    case MessageTag::kRequestQBetaIndexed: return "RequestQBetaIndexed";
    case MessageTag::kQBetaReply: return "QBetaReply";
    case MessageTag::kUpdateBeta: return "UpdateBeta";
    case MessageTag::kThetaGReply: return "ThetaGReply";
    case MessageTag::kEndEpisode: return "EndEpisode";
    case MessageTag::kShutdown: return "Shutdown";
    case MessageTag::kBeginEval: return "BeginEval";
    case MessageTag::kEvalStep: return "EvalStep";
    case MessageTag::kErrorReply: return "ErrorReply";
  }
  return "Unknown";
}

Bytes EncodeFrame(const FedMessage& m) {
  Bytes frame(4, 0);
  ByteWriter w(frame);
  w.U8(static_cast<std::uint8_t>(TagOf(m)));
  EncodeFields(m, w);
  const auto len = static_cast<std::uint32_t>(frame.size() - 4);
  for (int i = 0; i < 4; ++i) frame[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(len >> (8 * i));
  return frame;
}

FedMessage DecodePayload(std::span<const std::uint8_t> payload) {
  ByteReader r(payload);
  const std::uint8_t tag = r.U8();
  FedMessage m;
  switch (static_cast<MessageTag>(tag)) {
    case MessageTag::kInit: m = Init{}; break;
    case MessageTag::kRequestQBetaLive: m = RequestQBetaLive{}; break;
    case MessageTag::kRequestQBetaIndexed: m = RequestQBetaIndexed{r.U64()}; break;
    case MessageTag::kQBetaReply: m = QBetaReply{r.F32Vector()}; break;
    case MessageTag::kUpdateBeta: {
      UpdateBeta u;
      u.y = r.F32();
      u.j = r.U64();
      u.c_alpha = r.F32Vector();
      u.theta_g = r.Blob();
      m = std::move(u);
      break;
    }
    case MessageTag::kThetaGReply: m = ThetaGReply{r.Blob()}; break;
    case MessageTag::kEndEpisode: m = EndEpisode{}; break;
    case MessageTag::kShutdown: m = Shutdown{}; break;
    case MessageTag::kBeginEval: {
      BeginEval b;
      const std::uint8_t flag = r.U8();
      if (flag > 1) throw FormatError("BeginEval flag must be 0 or 1");
      b.noise_on = flag == 1;
      b.theta_g = r.Blob();
      m = std::move(b);
      break;
    }
    case MessageTag::kEvalStep: m = EvalStep{r.F32Vector()}; break;
    case MessageTag::kErrorReply: {
      const std::uint32_t n = r.U32();
      auto text = r.Raw(n);
      m = ErrorReply{std::string(text.begin(), text.end())};
      break;
    }
    default:
      throw FormatError("unknown message tag " + std::to_string(tag));
  }
  if (!r.done()) throw FormatError("trailing bytes in message payload");
  return m;
}

FedMessage DecodeFrame(std::span<const std::uint8_t> frame) {
  ByteReader r(frame);
  const std::uint32_t len = r.U32();
  if (len != r.remaining()) throw FormatError("frame length prefix mismatch");
  return DecodePayload(frame.subspan(4));
}

}  // namespace fedq::fed
