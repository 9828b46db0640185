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

// Serves a MockScorer over the scorer wire protocol, on stdio by default or
// on a local TCP port. Lets the protocol client be exercised end to end
// without a model.

#include <unistd.h>

#include <cstdint>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "relsum/error.h"
#include "relsum/mock_scorer.h"
#include "relsum/protocol.h"

int main(int argc, char** argv) {
  CLI::App app{"Mock scorer backend speaking the relsum wire protocol"};
  std::uint64_t seed = 0;
  bool uniform = false;
  int vocab_bits = relsum::MockScorer::kDefaultVocabBits;
  std::optional<int> tcp_port;
  int max_connections = 0;
  app.add_option("--seed", seed, "Seed for the random distributions");
  app.add_flag("--uniform", uniform, "Serve uniform distributions instead");
  app.add_option("--vocab-bits", vocab_bits, "log2 of the vocabulary size");
  app.add_option("--tcp", tcp_port, "Listen on 127.0.0.1:<port> (0 = any free port)");
  app.add_option("--max-connections", max_connections,
                 "Exit after serving this many TCP connections (0 = forever)");
  CLI11_PARSE(app, argc, argv);

  auto make = [=]() -> std::unique_ptr<relsum::ScorerBackend> {
    if (uniform) return std::make_unique<relsum::MockScorer>(std::nullopt, vocab_bits);
    return std::make_unique<relsum::MockScorer>(seed, vocab_bits);
  };
  try {
    if (tcp_port) {
      int bound = 0;
      const int fd = relsum::ListenTcp(*tcp_port, &bound);
      std::cout << bound << std::endl;
      relsum::ServeTcp(fd, make, max_connections);
      close(fd);
      return 0;
    }
    auto backend = make();
    relsum::FdChannel channel(STDIN_FILENO, STDOUT_FILENO, /*owns_fds=*/false);
    relsum::ServeChannel(*backend, channel);
  } catch (const relsum::ValidationError& e) {
    std::cerr << "relsum-mock-server: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "relsum-mock-server: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
