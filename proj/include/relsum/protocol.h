// Copyright 2026 The relsum Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Scorer wire protocol: newline-delimited UTF-8 JSON, one request and one
// response per line, strictly in order.
//
//   {"op":"hello"}                          -> {"caps":[...],"vocab_size":N,"eos_id":E}
//   {"op":"tokenize","text":S}              -> {"ids":[...]}
//   {"op":"next","source":S,"prefix":[..],"cands":[..]} -> {"probs":[...]}
//   {"op":"generate","source":S,"max_len":L} -> {"text":S}
//   any failure                             -> {"error":"message"}

#ifndef RELSUM_PROTOCOL_H_
#define RELSUM_PROTOCOL_H_

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "relsum/backend.h"

namespace relsum {

// A bidirectional line-oriented byte stream.
class LineChannel {
 public:
  virtual ~LineChannel() = default;
  virtual void WriteLine(std::string_view line) = 0;
  // Throws BackendError on end of stream.
  virtual std::string ReadLine() = 0;
};

// Reads from one descriptor and writes to another. Owned descriptors are
// closed on destruction.
class FdChannel : public LineChannel {
 public:
  FdChannel(int read_fd, int write_fd, bool owns_fds);
  ~FdChannel() override;
  FdChannel(const FdChannel&) = delete;
  FdChannel& operator=(const FdChannel&) = delete;

  void WriteLine(std::string_view line) override;
  std::string ReadLine() override;
  // False once the peer closed the stream and the buffer is drained.
  bool TryReadLine(std::string* line);

 protected:
  void CloseFds();

 private:
  int read_fd_;
  int write_fd_;
  bool owns_fds_;
  std::string buffer_;
};

// Runs `command` through /bin/sh with its stdin/stdout connected to the
// channel. The child is reaped when the channel is destroyed.
std::unique_ptr<LineChannel> SpawnProcessChannel(const std::string& command);

std::unique_ptr<LineChannel> ConnectTcpChannel(const std::string& host,
                                               int port);

// Client side of the protocol. The hello handshake runs in the constructor.
class ProtocolBackend : public ScorerBackend {
 public:
  explicit ProtocolBackend(std::unique_ptr<LineChannel> channel);

  Capabilities capabilities() const override { return caps_; }
  int vocab_size() const override { return vocab_size_; }
  TokenId eos_id() const override { return eos_id_; }

  std::vector<TokenId> Tokenize(std::string_view text) override;
  std::vector<double> NextTokenProbs(
      std::string_view source, std::span<const TokenId> prefix,
      std::span<const TokenId> candidates) override;
  std::string Generate(std::string_view source, int max_len) override;

  // Sends one raw request line and returns the raw response line.
  std::string RoundTrip(std::string_view request_line);

 private:
  std::unique_ptr<LineChannel> channel_;
  Capabilities caps_;
  int vocab_size_ = 0;
  TokenId eos_id_ = 0;
};

// Server side: answers one request line against `backend`. Never throws;
// failures become {"error": ...} responses.
std::string HandleRequestLine(ScorerBackend& backend, std::string_view line);

// Serves requests until the peer closes the stream.
void ServeChannel(ScorerBackend& backend, FdChannel& channel);

// Binds 127.0.0.1:`port` (0 picks a free port) and returns the listening
// socket; the bound port is written to `bound_port`.
int ListenTcp(int port, int* bound_port);

// Accepts connections on `listen_fd`, each served on its own thread with a
// fresh backend. Returns after `max_connections` connections were served
// (0 means serve forever).
void ServeTcp(int listen_fd, const BackendFactory& factory,
              int max_connections = 0);

}  // namespace relsum

#endif  // RELSUM_PROTOCOL_H_
