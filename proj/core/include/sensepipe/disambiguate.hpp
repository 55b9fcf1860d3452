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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sensepipe/network.hpp"
#include "sensepipe/preprocess.hpp"

namespace sensepipe {

// Confidence threshold. An iteration stops the algorithm when the maximum
// degree falls below theta * initial_node_count / 100.
struct Theta {
  double value = 0.0;

  explicit Theta(double v = 0.0);
  double cutoff(size_t initial_size) const {
    return value * static_cast<double>(initial_size) / 100.0;
  }
};

// Per-document subgraph of candidate senses. One node per (span, candidate
// sense) pair; an edge joins two nodes when their senses are network
// neighbors and their spans do not overlap. Immutable after construction.
class CandidateGraph {
 public:
  struct Node {
    SenseIndex sense;
    uint32_t span;       // index into spans()
    uint32_t candidate;  // position within the span's candidate list
  };

  CandidateGraph(std::vector<CandidateSpan> spans,
                 const SemanticNetwork& net);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<CandidateSpan>& spans() const { return spans_; }
  const std::vector<uint32_t>& adjacency(uint32_t node) const {
    return adjacency_[node];
  }
  size_t initial_size() const { return nodes_.size(); }
  size_t edge_count() const;
  size_t degree(uint32_t node) const { return adjacency_[node].size(); }

  // Strict ordering used to break degree ties: longer owning span first,
  // then smaller span start, then candidate file order.
  bool tie_break_before(uint32_t a, uint32_t b) const;

 private:
  std::vector<CandidateSpan> spans_;
  std::vector<Node> nodes_;
  std::vector<std::vector<uint32_t>> adjacency_;
};

CandidateGraph build_graph(std::vector<CandidateSpan> spans,
                           const SemanticNetwork& net);

struct NodePick {
  uint32_t node = 0;
  size_t degree = 0;
};

// Highest-degree node among those marked selectable, counting only edges to
// nodes marked supporting. Ties break by tie_break_before. Empty selectable
// set yields nullopt.
std::optional<NodePick> max_degree_candidate(
    const CandidateGraph& graph, const std::vector<bool>& selectable,
    const std::vector<bool>& supporting);

// Convenience overload: every active node both selectable and supporting.
std::optional<NodePick> max_degree_candidate(const CandidateGraph& graph,
                                             const std::vector<bool>& active);

struct Resolution {
  uint32_t span = 0;
  uint32_t node = 0;
  SenseIndex sense = 0;
  size_t degree = 0;  // degree at selection time

  bool operator==(const Resolution&) const = default;
};

struct DisambiguationResult {
  std::vector<Resolution> resolved;        // in resolution order
  std::vector<uint32_t> unresolved_spans;  // ascending span indices
  size_t iterations = 0;                   // resolutions performed
  bool stopped_by_threshold = false;

  bool operator==(const DisambiguationResult&) const = default;
  const Resolution* resolution_for(uint32_t span) const;
};

// Observes the engine's maintained state before each selection; lets tests
// compare incremental degrees against a from-scratch recount.
struct IterationObserver {
  virtual ~IterationObserver() = default;
  virtual void on_iteration(const std::vector<size_t>& degrees,
                            const std::vector<bool>& selectable,
                            const std::vector<bool>& supporting) = 0;
};

// Iterative max-degree selection. Each iteration picks the highest-degree
// selectable node; if its degree falls below theta.cutoff(initial_size) the
// loop stops. A winner resolves its span: competitor nodes of that span and
// every node of an overlapping span are discarded together with their
// edges, while the winner keeps its edges and only leaves the selectable
// set. Spans never resolved (including ones suppressed by an overlapping
// resolution) come back unresolved and fall back to their word forms.
DisambiguationResult disambiguate(const CandidateGraph& graph, Theta theta,
                                  IterationObserver* observer = nullptr);

enum class SemantifyMode { kWord, kSense, kSupersense };

std::string_view to_string(SemantifyMode mode);
std::optional<SemantifyMode> parse_mode(std::string_view text);

struct SemantifiedDocument {
  std::vector<std::string> tokens;
  size_t resolved_spans = 0;
  size_t iterations = 0;
  bool stopped_by_threshold = false;

  std::string to_line() const;  // space-joined tokens
};

// Full pipeline: tokenize -> tag -> extract spans -> build graph ->
// disambiguate -> emit. Resolved spans collapse to one token (the sense id,
// or its supersense with sense-id fallback in supersense mode); everything
// else emits the lowercased surface form. kWord bypasses disambiguation.
SemantifiedDocument semantify(std::string_view document,
                              const SemanticNetwork& net,
                              const TagLexicon& lexicon,
                              const StopwordSet& stopwords, Theta theta,
                              SemantifyMode mode);

}  // namespace sensepipe
