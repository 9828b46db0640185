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

#include "relsum/protocol.h"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <thread>

#include "json.hpp"
#include "relsum/error.h"

namespace relsum {
namespace {

using json = nlohmann::json;

std::string Errno(const char* what) {
  return std::string(what) + ": " + std::strerror(errno);
}

class ChildProcessChannel : public FdChannel {
 public:
  ChildProcessChannel(pid_t pid, int read_fd, int write_fd)
      : FdChannel(read_fd, write_fd, /*owns_fds=*/true), pid_(pid) {}

  ~ChildProcessChannel() override {
    CloseFds();  // child sees EOF on stdin
    for (int i = 0; i < 50; ++i) {
      if (waitpid(pid_, nullptr, WNOHANG) == pid_) return;
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    kill(pid_, SIGTERM);
    waitpid(pid_, nullptr, 0);
  }

 private:
  pid_t pid_;
};

json ParseResponse(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw BackendError("malformed backend response: " + line.substr(0, 200));
  }
  if (!j.is_object()) throw BackendError("backend response is not an object");
  if (auto err = j.find("error"); err != j.end()) {
    throw BackendError("backend error: " +
                       (err->is_string() ? err->get<std::string>() : err->dump()));
  }
  return j;
}

template <typename T>
T Field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) {
    throw BackendError(std::string("backend response lacks '") + name + "'");
  }
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw BackendError(std::string("backend response field '") + name +
                       "' has the wrong type");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// FdChannel

FdChannel::FdChannel(int read_fd, int write_fd, bool owns_fds)
    : read_fd_(read_fd), write_fd_(write_fd), owns_fds_(owns_fds) {}

FdChannel::~FdChannel() { CloseFds(); }

void FdChannel::CloseFds() {
  if (!owns_fds_) return;
  if (write_fd_ >= 0 && write_fd_ != read_fd_) close(write_fd_);
  if (read_fd_ >= 0) close(read_fd_);
  read_fd_ = write_fd_ = -1;
}

void FdChannel::WriteLine(std::string_view line) {
  std::string data(line);
  data += '\n';
  std::size_t off = 0;
  while (off < data.size()) {
    ssize_t n = write(write_fd_, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw BackendError(Errno("write to backend failed"));
    }
    off += static_cast<std::size_t>(n);
  }
}

bool FdChannel::TryReadLine(std::string* line) {
  for (;;) {
    auto nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      line->assign(buffer_, 0, nl);
      buffer_.erase(0, nl + 1);
      if (!line->empty() && line->back() == '\r') line->pop_back();
      return true;
    }
    char chunk[4096];
    ssize_t n = read(read_fd_, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EINTR) continue;
      throw BackendError(Errno("read from backend failed"));
    }
    if (n == 0) {
      if (buffer_.empty()) return false;
      line->swap(buffer_);
      buffer_.clear();
      return true;
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

std::string FdChannel::ReadLine() {
  std::string line;
  if (!TryReadLine(&line)) throw BackendError("backend closed the stream");
  return line;
}

std::unique_ptr<LineChannel> SpawnProcessChannel(const std::string& command) {
  signal(SIGPIPE, SIG_IGN);
  int to_child[2];
  int from_child[2];
  if (pipe2(to_child, O_CLOEXEC) != 0) throw BackendError(Errno("pipe"));
  if (pipe2(from_child, O_CLOEXEC) != 0) {
    close(to_child[0]);
    close(to_child[1]);
    throw BackendError(Errno("pipe"));
  }
  pid_t pid = fork();
  if (pid < 0) throw BackendError(Errno("fork"));
  if (pid == 0) {
    dup2(to_child[0], STDIN_FILENO);
    dup2(from_child[1], STDOUT_FILENO);
    close(to_child[0]);
    close(to_child[1]);
    close(from_child[0]);
    close(from_child[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(to_child[0]);
  close(from_child[1]);
  return std::make_unique<ChildProcessChannel>(pid, from_child[0], to_child[1]);
}

std::unique_ptr<LineChannel> ConnectTcpChannel(const std::string& host,
                                               int port) {
  signal(SIGPIPE, SIG_IGN);
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string port_str = std::to_string(port);
  if (int rc = getaddrinfo(host.c_str(), port_str.c_str(), &hints, &res); rc != 0) {
    throw BackendError("cannot resolve " + host + ": " + gai_strerror(rc));
  }
  int fd = -1;
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    fd = socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd < 0) continue;
    if (connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
    close(fd);
    fd = -1;
  }
  freeaddrinfo(res);
  if (fd < 0) throw BackendError("cannot connect to " + host + ":" + port_str);
  return std::make_unique<FdChannel>(fd, fd, /*owns_fds=*/true);
}

// ---------------------------------------------------------------------------
// ProtocolBackend

ProtocolBackend::ProtocolBackend(std::unique_ptr<LineChannel> channel)
    : channel_(std::move(channel)) {
  json hello = ParseResponse(RoundTrip(R"({"op":"hello"})"));
  for (const auto& cap : Field<std::vector<std::string>>(hello, "caps")) {
    if (cap == "tokenize") caps_.tokenize = true;
    if (cap == "next_token") caps_.next_token = true;
    if (cap == "generate") caps_.generate = true;
  }
  vocab_size_ = Field<int>(hello, "vocab_size");
  eos_id_ = Field<TokenId>(hello, "eos_id");
  if (vocab_size_ <= 0) throw BackendError("backend reported vocab_size <= 0");
}

std::string ProtocolBackend::RoundTrip(std::string_view request_line) {
  channel_->WriteLine(request_line);
  return channel_->ReadLine();
}

std::vector<TokenId> ProtocolBackend::Tokenize(std::string_view text) {
  if (!caps_.tokenize) throw BackendError("backend cannot tokenize");
  json req = {{"op", "tokenize"}, {"text", text}};
  return Field<std::vector<TokenId>>(ParseResponse(RoundTrip(req.dump())), "ids");
}

std::vector<double> ProtocolBackend::NextTokenProbs(
    std::string_view source, std::span<const TokenId> prefix,
    std::span<const TokenId> candidates) {
  if (!caps_.next_token) throw BackendError("backend cannot score next tokens");
  json req = {{"op", "next"},
              {"source", source},
              {"prefix", std::vector<TokenId>(prefix.begin(), prefix.end())},
              {"cands", std::vector<TokenId>(candidates.begin(), candidates.end())}};
  auto probs =
      Field<std::vector<double>>(ParseResponse(RoundTrip(req.dump())), "probs");
  if (probs.size() != candidates.size()) {
    throw BackendError("backend returned " + std::to_string(probs.size()) +
                       " probabilities for " +
                       std::to_string(candidates.size()) + " candidates");
  }
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw BackendError("backend returned a probability outside [0, 1]");
    }
  }
  return probs;
}

std::string ProtocolBackend::Generate(std::string_view source, int max_len) {
  if (!caps_.generate) throw BackendError("backend cannot generate");
  json req = {{"op", "generate"}, {"source", source}, {"max_len", max_len}};
  return Field<std::string>(ParseResponse(RoundTrip(req.dump())), "text");
}

// ---------------------------------------------------------------------------
// Server side

std::string HandleRequestLine(ScorerBackend& backend, std::string_view line) {
  try {
    json req = json::parse(line);
    const std::string op = req.at("op").get<std::string>();
    json resp;
    if (op == "hello") {
      const Capabilities caps = backend.capabilities();
      std::vector<std::string> names;
      if (caps.tokenize) names.push_back("tokenize");
      if (caps.next_token) names.push_back("next_token");
      if (caps.generate) names.push_back("generate");
      resp = {{"caps", names},
              {"vocab_size", backend.vocab_size()},
              {"eos_id", backend.eos_id()}};
    } else if (op == "tokenize") {
      resp = {{"ids", backend.Tokenize(req.at("text").get<std::string>())}};
    } else if (op == "next") {
      auto prefix = req.at("prefix").get<std::vector<TokenId>>();
      auto cands = req.at("cands").get<std::vector<TokenId>>();
      resp = {{"probs", backend.NextTokenProbs(
                            req.at("source").get<std::string>(), prefix, cands)}};
    } else if (op == "generate") {
      resp = {{"text", backend.Generate(req.at("source").get<std::string>(),
                                        req.at("max_len").get<int>())}};
    } else {
      resp = {{"error", "unknown op: " + op}};
    }
    return resp.dump();
  } catch (const std::exception& e) {
    return json{{"error", e.what()}}.dump();
  }
}

void ServeChannel(ScorerBackend& backend, FdChannel& channel) {
  std::string line;
  while (channel.TryReadLine(&line)) {
    if (line.empty()) continue;
    channel.WriteLine(HandleRequestLine(backend, line));
  }
}

int ListenTcp(int port, int* bound_port) {
  int fd = socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw BackendError(Errno("socket"));
  int one = 1;
  setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(static_cast<uint16_t>(port));
  if (bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
      listen(fd, 16) != 0) {
    close(fd);
    throw BackendError(Errno("bind/listen"));
  }
  socklen_t len = sizeof(addr);
  getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  if (bound_port) *bound_port = ntohs(addr.sin_port);
  return fd;
}

void ServeTcp(int listen_fd, const BackendFactory& factory, int max_connections) {
  signal(SIGPIPE, SIG_IGN);
  std::vector<std::thread> workers;
  for (int served = 0; max_connections == 0 || served < max_connections;
       ++served) {
    int conn = accept(listen_fd, nullptr, nullptr);
    if (conn < 0) {
      if (errno == EINTR) {
        --served;
        continue;
      }
      break;
    }
    std::thread worker([conn, factory] {
      FdChannel channel(conn, conn, /*owns_fds=*/true);
      try {
        auto backend = factory();
        ServeChannel(*backend, channel);
      } catch (const std::exception&) {
        // Connection dropped; nothing to report to a closed peer.
      }
    });
    if (max_connections == 0) {
      worker.detach();
    } else {
      workers.push_back(std::move(worker));
    }
  }
  for (auto& t : workers) t.join();
}

}  // namespace relsum
