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

#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <tuple>
#include <vector>

#include "sensepipe/disambiguate.hpp"
#include "sensepipe/network.hpp"
#include "sensepipe/preprocess.hpp"
#include "sensepipe/rng.hpp"

namespace sensepipe::testing {

inline std::filesystem::path data_dir() {
#ifdef SENSEPIPE_TEST_DATA_DIR
  return std::filesystem::path(SENSEPIPE_TEST_DATA_DIR);
#else
  return std::filesystem::path("tests/data");
#endif
}

// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("sensepipe_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }
  std::string write(const std::string& name, const std::string& content) const {
    std::string full = file(name);
    std::ofstream out(full, std::ios::binary);
    out << content;
    return full;
  }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

inline SemanticNetwork load_oasis_network() {
  return load_network(
      NetworkPaths::in_directory((data_dir() / "oasis").string()));
}

inline TagLexicon load_oasis_lexicon() {
  return load_tag_lexicon((data_dir() / "oasis" / "lexicon.tsv").string());
}

// Reference engine: recomputes every degree from scratch each iteration and
// reimplements selection, tie-breaking, and removal without touching the
// incremental engine's code or state.
inline DisambiguationResult reference_disambiguate(const CandidateGraph& g,
                                                   Theta theta) {
  const auto& nodes = g.nodes();
  const auto& spans = g.spans();
  const size_t n = nodes.size();
  std::vector<bool> discarded(n, false);  // competitor/suppressed nodes
  std::vector<bool> won(n, false);
  std::vector<bool> span_closed(spans.size(), false);

  const double cutoff = theta.cutoff(n);
  DisambiguationResult result;

  for (size_t iter = 0; iter < spans.size(); ++iter) {
    long best = -1;
    size_t best_degree = 0;
    for (size_t a = 0; a < n; ++a) {
      if (discarded[a] || won[a]) continue;
      size_t degree = 0;
      for (uint32_t b : g.adjacency(static_cast<uint32_t>(a)))
        if (!discarded[b]) ++degree;
      bool better = false;
      if (best < 0) {
        better = true;
      } else if (degree != best_degree) {
        better = degree > best_degree;
      } else {
        const auto& sa = spans[nodes[a].span];
        const auto& sb = spans[nodes[best].span];
        auto ka = std::make_tuple(-static_cast<int64_t>(sa.length),
                                  static_cast<int64_t>(sa.start),
                                  static_cast<int64_t>(nodes[a].candidate));
        auto kb = std::make_tuple(-static_cast<int64_t>(sb.length),
                                  static_cast<int64_t>(sb.start),
                                  static_cast<int64_t>(nodes[best].candidate));
        better = ka < kb;
      }
      if (better) {
        best = static_cast<long>(a);
        best_degree = degree;
      }
    }
    if (best < 0) break;
    if (static_cast<double>(best_degree) < cutoff) {
      result.stopped_by_threshold = true;
      break;
    }
    uint32_t win_span = nodes[best].span;
    result.resolved.push_back(Resolution{win_span,
                                         static_cast<uint32_t>(best),
                                         nodes[best].sense, best_degree});
    result.iterations += 1;
    won[best] = true;
    span_closed[win_span] = true;
    for (size_t m = 0; m < n; ++m) {
      if (static_cast<long>(m) == best) continue;
      uint32_t owner = nodes[m].span;
      if (owner == win_span) {
        discarded[m] = true;
      } else if (spans_overlap(spans[owner], spans[win_span])) {
        discarded[m] = true;
        span_closed[owner] = true;
      }
    }
  }
  for (uint32_t s = 0; s < spans.size(); ++s) {
    bool resolved = false;
    for (const Resolution& r : result.resolved)
      if (r.span == s) resolved = true;
    if (!resolved) result.unresolved_spans.push_back(s);
  }
  return result;
}

struct RandomInstance {
  SemanticNetwork net;
  std::vector<CandidateSpan> spans;
};

// Random document-style instance: up to max_spans spans of length 1..3 over
// a short token range, candidate lists drawn from a random sense pool, and
// a random edge set. Candidate lists are synthetic (not backed by a
// lexicalization index); disambiguation only needs spans plus adjacency.
inline RandomInstance random_instance(Rng& rng, size_t max_spans = 10,
                                      size_t max_nodes = 30) {
  RandomInstance inst;
  const size_t sense_pool = 2 + rng.below(14);
  for (size_t s = 0; s < sense_pool; ++s)
    inst.net.add_sense("s" + std::to_string(s));

  const double edge_prob = 0.05 + 0.35 * rng.uniform01();
  for (SenseIndex a = 0; a < sense_pool; ++a) {
    for (SenseIndex b = a + 1; b < sense_pool; ++b) {
      if (rng.bernoulli(edge_prob)) inst.net.add_edge(a, b);
    }
  }

  const size_t span_count = 1 + rng.below(max_spans);
  size_t nodes = 0;
  for (size_t s = 0; s < span_count && nodes < max_nodes; ++s) {
    CandidateSpan span;
    span.start = static_cast<uint32_t>(rng.below(12));
    span.length = static_cast<uint32_t>(1 + rng.below(3));
    size_t budget = std::min<size_t>(max_nodes - nodes, 4);
    size_t count = 1 + rng.below(budget);
    std::vector<SenseIndex> pool(sense_pool);
    for (size_t i = 0; i < sense_pool; ++i) pool[i] = static_cast<SenseIndex>(i);
    rng.shuffle(pool);
    span.candidate_senses.assign(pool.begin(),
                                 pool.begin() + std::min(count, pool.size()));
    span.key = LexKey{"w" + std::to_string(s), Pos::kNoun};
    nodes += span.candidate_senses.size();
    inst.spans.push_back(std::move(span));
  }
  std::sort(inst.spans.begin(), inst.spans.end(),
            [](const CandidateSpan& a, const CandidateSpan& b) {
              if (a.start != b.start) return a.start < b.start;
              return a.length > b.length;
            });
  return inst;
}

}  // namespace sensepipe::testing
