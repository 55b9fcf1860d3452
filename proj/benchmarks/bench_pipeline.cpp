// Copyright 2026 The Sensepipe Authors.
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

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "sensepipe/classifier.hpp"
#include "sensepipe/disambiguate.hpp"
#include "sensepipe/network.hpp"
#include "sensepipe/preprocess.hpp"
#include "sensepipe/rng.hpp"

using namespace sensepipe;

namespace {

// Document-shaped instance: `spans` unigram spans with 2 candidates each
// over a pool of senses with random edges.
struct Instance {
  SemanticNetwork net;
  std::vector<CandidateSpan> spans;
};

Instance make_instance(size_t span_count, double edge_prob, uint64_t seed) {
  Instance inst;
  Rng rng(seed);
  const size_t pool = span_count * 2;
  for (size_t s = 0; s < pool; ++s)
    inst.net.add_sense("s" + std::to_string(s));
  for (SenseIndex a = 0; a < pool; ++a)
    for (SenseIndex b = a + 1; b < pool; ++b)
      if (rng.bernoulli(edge_prob)) inst.net.add_edge(a, b);
  for (size_t s = 0; s < span_count; ++s) {
    CandidateSpan span;
    span.start = static_cast<uint32_t>(s);
    span.length = 1;
    span.key = LexKey{"w" + std::to_string(s), Pos::kNoun};
    span.candidate_senses = {static_cast<SenseIndex>(2 * s),
                             static_cast<SenseIndex>(2 * s + 1)};
    inst.spans.push_back(std::move(span));
  }
  return inst;
}

void BM_BuildGraph(benchmark::State& state) {
  Instance inst = make_instance(state.range(0), 0.08, 7);
  for (auto _ : state) {
    CandidateGraph graph = build_graph(inst.spans, inst.net);
    benchmark::DoNotOptimize(graph.edge_count());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildGraph)->Range(8, 256)->Complexity();

void BM_Disambiguate(benchmark::State& state) {
  Instance inst = make_instance(state.range(0), 0.08, 7);
  CandidateGraph graph = build_graph(inst.spans, inst.net);
  for (auto _ : state) {
    DisambiguationResult result = disambiguate(graph, Theta(0.5));
    benchmark::DoNotOptimize(result.resolved.size());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Disambiguate)->Range(8, 256)->Complexity();

void BM_Tokenize(benchmark::State& state) {
  std::string text;
  for (int i = 0; i < 200; ++i) text += "Oasis were a rock band. ";
  for (auto _ : state) {
    auto tokens = tokenize(text);
    benchmark::DoNotOptimize(tokens.size());
  }
}
BENCHMARK(BM_Tokenize);

void BM_ClassifierForward(benchmark::State& state) {
  ClassifierConfig cfg;
  cfg.dimension = 64;
  cfg.num_filters = 32;
  cfg.window_size = 5;
  cfg.pool_chunk = 5;
  cfg.lstm_hidden = 32;
  cfg.num_classes = 5;
  cfg.max_doc_len = static_cast<int>(state.range(0));
  Rng rng(3);
  Parameters params = Parameters::random_init(cfg, 1000, rng);
  EncodedDoc doc;
  doc.label = 0;
  doc.ids.resize(cfg.max_doc_len);
  for (int t = 0; t < cfg.max_doc_len; ++t)
    doc.ids[t] = static_cast<int>(rng.below(1000));
  for (auto _ : state) {
    Eigen::VectorXd probs = forward_probs(params, cfg, doc);
    benchmark::DoNotOptimize(probs.sum());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ClassifierForward)->Range(64, 512)->Complexity();

void BM_ClassifierTrainStep(benchmark::State& state) {
  ClassifierConfig cfg;
  cfg.dimension = 64;
  cfg.num_filters = 32;
  cfg.window_size = 5;
  cfg.pool_chunk = 5;
  cfg.lstm_hidden = 32;
  cfg.num_classes = 5;
  cfg.max_doc_len = 128;
  Rng rng(4);
  Parameters params = Parameters::random_init(cfg, 1000, rng);
  std::vector<EncodedDoc> batch;
  for (int b = 0; b < 8; ++b) {
    EncodedDoc doc;
    doc.label = b % cfg.num_classes;
    doc.ids.resize(cfg.max_doc_len);
    for (int t = 0; t < cfg.max_doc_len; ++t)
      doc.ids[t] = static_cast<int>(rng.below(1000));
    batch.push_back(std::move(doc));
  }
  for (auto _ : state) {
    auto [loss, grads] = loss_and_grads(params, cfg, batch);
    benchmark::DoNotOptimize(loss);
    benchmark::DoNotOptimize(grads.conv_weight.sum());
  }
}
BENCHMARK(BM_ClassifierTrainStep);

}  // namespace

BENCHMARK_MAIN();
