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

// Trie scoring against one-query-per-token scoring, and the serial instance
// loop against the OpenMP one.

#include <benchmark/benchmark.h>

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "relsum/convert.h"
#include "relsum/corpus.h"
#include "relsum/inference.h"
#include "relsum/mock_scorer.h"
#include "relsum/scoring.h"
#include "relsum/trie.h"

namespace relsum {
namespace {

struct BenchData {
  RelationOntology ontology = RelationOntology::Load("tacred");
  TemplateSet templates = LoadTemplates(
      std::string(RELSUM_DATA_DIR) + "/templates/tacred_semantic1.tsv", ontology);
  std::vector<REInstance> instances =
      LoadInstances(RELSUM_BENCH_INSTANCES, InstanceFormat::kUnifiedJsonl);

  InferenceConfig Config() const {
    return InferenceConfig{ontology, templates, std::nullopt,
                           ConversionScheme::kVerbalize,
                           {ScoreMode::kRenormalized, kDefaultProbFloor}};
  }

  // `copies` passes over the instance file.
  std::vector<REInstance> Repeated(int copies) const {
    std::vector<REInstance> out;
    for (int c = 0; c < copies; ++c) {
      for (auto inst : instances) {
        inst.id += "_" + std::to_string(c);
        out.push_back(std::move(inst));
      }
    }
    return out;
  }
};

const BenchData& Data() {
  static const BenchData* data = new BenchData();
  return *data;
}

void BM_TrieScore(benchmark::State& state) {
  const auto& d = Data();
  const auto config = d.Config();
  const REInstance& inst = d.instances.front();
  MockScorer mock(7);
  const auto trie = BuildTemplateTrie(mock, FilledTemplates(inst, config));
  const std::string source = ConstructSource(inst, config.scheme);
  for (auto _ : state) {
    benchmark::DoNotOptimize(TrieScore(mock, source, trie, config.scoring));
  }
  state.counters["forky_nodes"] = static_cast<double>(trie.forky_count());
}
BENCHMARK(BM_TrieScore);

void BM_FullSequenceRank(benchmark::State& state) {
  const auto& d = Data();
  const auto config = d.Config();
  const REInstance& inst = d.instances.front();
  MockScorer mock(7);
  const auto tokenized = TokenizeTemplates(mock, FilledTemplates(inst, config));
  const std::string source = ConstructSource(inst, config.scheme);
  for (auto _ : state) {
    benchmark::DoNotOptimize(FullSequenceRank(mock, source, tokenized));
  }
}
BENCHMARK(BM_FullSequenceRank);

void BM_ScoreInstancesSerial(benchmark::State& state) {
  const auto& d = Data();
  const auto config = d.Config();
  const auto instances = d.Repeated(static_cast<int>(state.range(0)));
  MockScorer mock(7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ScoreInstancesSerial(mock, instances, config));
  }
  state.SetItemsProcessed(state.iterations() * instances.size());
}
BENCHMARK(BM_ScoreInstancesSerial)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_ScoreInstancesParallel(benchmark::State& state) {
  const auto& d = Data();
  const auto config = d.Config();
  const auto instances = d.Repeated(5);
  const BackendFactory factory = [] { return std::make_unique<MockScorer>(7); };
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ScoreInstances(factory, instances, config, workers));
  }
  state.SetItemsProcessed(state.iterations() * instances.size());
}
BENCHMARK(BM_ScoreInstancesParallel)
    ->Arg(1)->Arg(2)->Arg(4)
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

}  // namespace
}  // namespace relsum

BENCHMARK_MAIN();
