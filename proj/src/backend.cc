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

#include "relsum/backend.h"

#include <charconv>

#include "relsum/error.h"
#include "relsum/mock_scorer.h"
#include "relsum/protocol.h"

namespace relsum {
namespace {

unsigned long long ParseSeed(std::string_view text) {
  unsigned long long seed = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ValidationError("bad mock seed: " + std::string(text));
  }
  return seed;
}

}  // namespace

BackendFactory MakeBackendFactory(const std::string& spec,
                                  unsigned long long default_seed) {
  if (spec == "mock-uniform") {
    return [] { return std::make_unique<MockScorer>(); };
  }
  if (spec == "mock" || spec.starts_with("mock:")) {
    const unsigned long long seed =
        spec == "mock" ? default_seed : ParseSeed(std::string_view(spec).substr(5));
    return [seed] { return std::make_unique<MockScorer>(seed); };
  }
  if (spec.starts_with("cmd:")) {
    std::string command = spec.substr(4);
    if (command.empty()) throw ValidationError("empty backend command");
    return [command]() -> std::unique_ptr<ScorerBackend> {
      return std::make_unique<ProtocolBackend>(SpawnProcessChannel(command));
    };
  }
  if (spec.starts_with("tcp:")) {
    const std::string rest = spec.substr(4);
    const auto colon = rest.rfind(':');
    if (colon == std::string::npos || colon == 0) {
      throw ValidationError("backend spec must look like tcp:host:port");
    }
    std::string host = rest.substr(0, colon);
    const auto port_text = std::string_view(rest).substr(colon + 1);
    int port = 0;
    auto [ptr, ec] =
        std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
    if (ec != std::errc() || ptr != port_text.data() + port_text.size() ||
        port <= 0 || port > 65535) {
      throw ValidationError("bad TCP port in backend spec: " + spec);
    }
    return [host, port]() -> std::unique_ptr<ScorerBackend> {
      return std::make_unique<ProtocolBackend>(ConnectTcpChannel(host, port));
    };
  }
  throw ValidationError("unknown backend spec: " + spec +
                        " (expected mock:<seed>, cmd:<command> or tcp:<host>:<port>)");
}

}  // namespace relsum
