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

#ifndef FEDQ_FED_TRANSPORT_H_
#define FEDQ_FED_TRANSPORT_H_

#include <cstdint>
#include <memory>
#include <string>
#include <utility>

#include "fedq/common/bytes.h"

namespace fedq::fed {

// Bidirectional, ordered, blocking frame pipe. Frames are complete encoded
// messages including their length prefix. All failures, including the peer
// going away, surface as TransportError.
class Channel {
 public:
  virtual ~Channel() = default;
  virtual void Send(const Bytes& frame) = 0;
  virtual Bytes Receive() = 0;
  // Wakes a blocked peer; further use of either end fails.
  virtual void Close() = 0;
};

// Two connected in-process endpoints backed by queues.
std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>>
MakeQueueChannelPair();

// Loopback TCP. The listener binds 127.0.0.1 on an ephemeral port unless one
// is given.
class TcpListener {
 public:
  explicit TcpListener(std::uint16_t port = 0);
  ~TcpListener();
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;

  std::uint16_t port() const { return port_; }
  std::unique_ptr<Channel> Accept();
  // Makes a pending or future Accept fail.
  void Shutdown();

 private:
  int fd_ = -1;
  std::uint16_t port_ = 0;
};

std::unique_ptr<Channel> TcpConnect(const std::string& host,
                                    std::uint16_t port);

}  // namespace fedq::fed

#endif  // FEDQ_FED_TRANSPORT_H_
