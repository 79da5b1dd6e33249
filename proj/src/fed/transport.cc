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

#include "fedq/fed/transport.h"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>

#include "fedq/common/error.h"
#include "fedq/fed/messages.h"

namespace fedq::fed {
namespace {

std::uint32_t PrefixLength(const Bytes& frame) {
  if (frame.size() < 4) throw TransportError("frame shorter than its prefix");
  std::uint32_t len = 0;
  for (int i = 0; i < 4; ++i) len |= static_cast<std::uint32_t>(frame[static_cast<std::size_t>(i)]) << (8 * i);
  if (len != frame.size() - 4) throw TransportError("frame length prefix mismatch");
  return len;
}

struct Pipe {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<Bytes> a_to_b;
  std::deque<Bytes> b_to_a;
  bool closed = false;
};

class QueueChannel : public Channel {
 public:
  QueueChannel(std::shared_ptr<Pipe> pipe, bool is_a)
      : pipe_(std::move(pipe)), is_a_(is_a) {}
  ~QueueChannel() override { Close(); }

  void Send(const Bytes& frame) override {
    PrefixLength(frame);
    {
      std::lock_guard<std::mutex> lock(pipe_->mu);
      if (pipe_->closed) throw TransportError("queue channel closed");
      (is_a_ ? pipe_->a_to_b : pipe_->b_to_a).push_back(frame);
    }
    pipe_->cv.notify_all();
  }

  Bytes Receive() override {
    std::unique_lock<std::mutex> lock(pipe_->mu);
    auto& q = is_a_ ? pipe_->b_to_a : pipe_->a_to_b;
    pipe_->cv.wait(lock, [&] { return !q.empty() || pipe_->closed; });
    if (q.empty()) throw TransportError("queue channel closed");
    Bytes frame = std::move(q.front());
    q.pop_front();
    return frame;
  }

  void Close() override {
    {
      std::lock_guard<std::mutex> lock(pipe_->mu);
      pipe_->closed = true;
    }
    pipe_->cv.notify_all();
  }

 private:
  std::shared_ptr<Pipe> pipe_;
  bool is_a_;
};

std::string ErrnoText(const char* what) {
  return std::string(what) + ": " + std::strerror(errno);
}

class SocketChannel : public Channel {
 public:
  explicit SocketChannel(int fd) : fd_(fd) {
    int one = 1;
    // Lock-step small frames; without this every reply waits on delayed ACKs.
    ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  }
  ~SocketChannel() override {
    if (fd_ >= 0) ::close(fd_);
  }

  void Send(const Bytes& frame) override {
    PrefixLength(frame);
    if (fd_ < 0) throw TransportError("socket channel closed");
    std::size_t off = 0;
    while (off < frame.size()) {
      const ssize_t n =
          ::send(fd_, frame.data() + off, frame.size() - off, MSG_NOSIGNAL);
      if (n < 0 && errno == EINTR) continue;
      if (n <= 0) throw TransportError(ErrnoText("send"));
      off += static_cast<std::size_t>(n);
    }
  }

  Bytes Receive() override {
    if (fd_ < 0) throw TransportError("socket channel closed");
    Bytes frame(4);
    ReadExact(frame.data(), 4);
    std::uint32_t len = 0;
    for (int i = 0; i < 4; ++i) len |= static_cast<std::uint32_t>(frame[static_cast<std::size_t>(i)]) << (8 * i);
    if (len > kMaxFrameBytes) throw TransportError("frame exceeds size limit");
    frame.resize(4 + static_cast<std::size_t>(len));
    ReadExact(frame.data() + 4, len);
    return frame;
  }

  void Close() override {
    if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
  }

 private:
  void ReadExact(std::uint8_t* out, std::size_t n) {
    std::size_t off = 0;
    while (off < n) {
      const ssize_t got = ::recv(fd_, out + off, n - off, 0);
      if (got < 0 && errno == EINTR) continue;
      if (got == 0) throw TransportError("peer closed the connection");
      if (got < 0) throw TransportError(ErrnoText("recv"));
      off += static_cast<std::size_t>(got);
    }
  }

  int fd_;
};

}  // namespace

std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>>
MakeQueueChannelPair() {
  auto pipe = std::make_shared<Pipe>();
  return {std::make_unique<QueueChannel>(pipe, true),
          std::make_unique<QueueChannel>(pipe, false)};
}

TcpListener::TcpListener(std::uint16_t port) {
  fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd_ < 0) throw TransportError(ErrnoText("socket"));
  int one = 1;
  ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
      ::listen(fd_, 1) != 0) {
    const std::string msg = ErrnoText("bind/listen");
    ::close(fd_);
    throw TransportError(msg);
  }
  socklen_t len = sizeof(addr);
  ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

TcpListener::~TcpListener() {
  if (fd_ >= 0) ::close(fd_);
}

std::unique_ptr<Channel> TcpListener::Accept() {
  int fd;
  do {
    fd = ::accept(fd_, nullptr, nullptr);
  } while (fd < 0 && errno == EINTR);
  if (fd < 0) throw TransportError(ErrnoText("accept"));
  return std::make_unique<SocketChannel>(fd);
}

void TcpListener::Shutdown() {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

std::unique_ptr<Channel> TcpConnect(const std::string& host,
                                    std::uint16_t port) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw TransportError(ErrnoText("socket"));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(fd);
    throw TransportError("bad IPv4 address: " + host);
  }
  int rc;
  do {
    rc = ::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr));
  } while (rc != 0 && errno == EINTR);
  if (rc != 0) {
    const std::string msg = ErrnoText("connect");
    ::close(fd);
    throw TransportError(msg);
  }
  return std::make_unique<SocketChannel>(fd);
}

}  // namespace fedq::fed
