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

#ifndef FEDQ_FED_AUDIT_H_
#define FEDQ_FED_AUDIT_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "fedq/fed/link.h"
#include "fedq/nn/network.h"

namespace fedq::fed {

struct AuditReport {
  std::uint64_t frames = 0;
  std::uint64_t bytes = 0;
  std::map<std::string, std::uint64_t> counts;  // by message name
  std::uint64_t violation_count = 0;
  std::vector<std::string> violations;  // first few, for diagnostics

  bool clean() const { return violation_count == 0; }
  std::uint64_t count(MessageTag t) const;
};

// Streaming transcript scanner. Every frame must decode completely, travel in
// an allowed direction, carry Q-vectors of exactly one value per action, and
// carry parameter blobs that decode as the shared head and nothing else.
// Since decoding is exhaustive, no observation, map, per-step reward or local
// network parameter can be hidden in a clean transcript.
class TranscriptAuditor {
 public:
  TranscriptAuditor(nn::NetworkSpec head_spec, std::size_t num_actions);

  void Observe(Direction dir, std::span<const std::uint8_t> frame);
  FrameSink Sink() {
    return [this](Direction d, std::span<const std::uint8_t> f) { Observe(d, f); };
  }

  const AuditReport& report() const { return report_; }

 private:
  void Violation(std::string what);
  void CheckVector(const std::vector<float>& v, const char* field);
  void CheckThetaG(const Bytes& blob);

  nn::NetworkSpec head_spec_;
  std::size_t num_actions_;
  AuditReport report_;
};

}  // namespace fedq::fed

#endif  // FEDQ_FED_AUDIT_H_
