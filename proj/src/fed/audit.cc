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

#include "fedq/fed/audit.h"

#include <cmath>

#include "fedq/common/error.h"
#include "fedq/nn/serialize.h"

namespace fedq::fed {
namespace {

constexpr std::size_t kMaxKeptViolations = 20;

bool AllowedFromAlpha(MessageTag t) {
  switch (t) {
    case MessageTag::kInit:
    case MessageTag::kRequestQBetaLive:
    case MessageTag::kRequestQBetaIndexed:
    case MessageTag::kUpdateBeta:
    case MessageTag::kEndEpisode:
    case MessageTag::kShutdown:
    case MessageTag::kBeginEval:
    case MessageTag::kEvalStep:
      return true;
    default:
      return false;
  }
}

bool AllowedFromBeta(MessageTag t) {
  return t == MessageTag::kQBetaReply || t == MessageTag::kThetaGReply ||
         t == MessageTag::kErrorReply;
}

}  // namespace

std::uint64_t AuditReport::count(MessageTag t) const {
  auto it = counts.find(TagName(t));
  return it == counts.end() ? 0 : it->second;
}

TranscriptAuditor::TranscriptAuditor(nn::NetworkSpec head_spec,
                                     std::size_t num_actions)
    : head_spec_(std::move(head_spec)), num_actions_(num_actions) {}

void TranscriptAuditor::Violation(std::string what) {
  ++report_.violation_count;
  if (report_.violations.size() < kMaxKeptViolations) {
    report_.violations.push_back("frame " + std::to_string(report_.frames) +
                                 ": " + std::move(what));
  }
}

void TranscriptAuditor::CheckVector(const std::vector<float>& v,
                                    const char* field) {
  if (v.size() != num_actions_) {
    Violation(std::string(field) + " has " + std::to_string(v.size()) +
              " values");
  }
  for (float x : v) {
    if (!std::isfinite(x)) {
      Violation(std::string(field) + " is not finite");
      return;
    }
  }
}

void TranscriptAuditor::CheckThetaG(const Bytes& blob) {
  try {
    nn::DeserializeParams(blob, head_spec_);
  } catch (const Error& e) {
    Violation(std::string("parameter blob is not the shared head: ") + e.what());
  }
}

void TranscriptAuditor::Observe(Direction dir,
                                std::span<const std::uint8_t> frame) {
  ++report_.frames;
  report_.bytes += frame.size();
  FedMessage m;
  try {
    m = DecodeFrame(frame);
  } catch (const Error& e) {
    Violation(std::string("undecodable: ") + e.what());
    return;
  }
  const MessageTag tag = TagOf(m);
  ++report_.counts[TagName(tag)];
  const bool allowed = dir == Direction::kAlphaToBeta ? AllowedFromAlpha(tag)
                                                      : AllowedFromBeta(tag);
  if (!allowed) Violation(std::string(TagName(tag)) + " in the wrong direction");

  if (auto* x = std::get_if<QBetaReply>(&m)) CheckVector(x->c_beta, "c_beta");
  if (auto* x = std::get_if<EvalStep>(&m)) CheckVector(x->c_alpha, "c_alpha");
  if (auto* x = std::get_if<UpdateBeta>(&m)) {
    CheckVector(x->c_alpha, "c_alpha");
    if (!std::isfinite(x->y)) Violation("Y is not finite");
    CheckThetaG(x->theta_g);
  }
  if (auto* x = std::get_if<ThetaGReply>(&m)) CheckThetaG(x->theta_g);
  if (auto* x = std::get_if<BeginEval>(&m)) CheckThetaG(x->theta_g);
}

}  // namespace fedq::fed
