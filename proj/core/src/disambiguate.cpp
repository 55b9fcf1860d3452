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

#include "sensepipe/disambiguate.hpp"

#include <algorithm>
#include <stdexcept>

namespace sensepipe {

Theta::Theta(double v) : value(v) {
  if (!(v >= 0.0))
    throw std::invalid_argument("theta must be non-negative");
}

CandidateGraph::CandidateGraph(std::vector<CandidateSpan> spans,
                               const SemanticNetwork& net)
    : spans_(std::move(spans)) {
  for (uint32_t s = 0; s < spans_.size(); ++s) {
    const auto& senses = spans_[s].candidate_senses;
    for (uint32_t c = 0; c < senses.size(); ++c)
      nodes_.push_back(Node{senses[c], s, c});
  }
  adjacency_.resize(nodes_.size());
  for (uint32_t a = 0; a < nodes_.size(); ++a) {
    for (uint32_t b = a + 1; b < nodes_.size(); ++b) {
      if (nodes_[a].span == nodes_[b].span) continue;
      if (spans_overlap(spans_[nodes_[a].span], spans_[nodes_[b].span]))
        continue;
      if (!net.adjacent(nodes_[a].sense, nodes_[b].sense)) continue;
      adjacency_[a].push_back(b);
      adjacency_[b].push_back(a);
    }
  }
}

size_t CandidateGraph::edge_count() const {
  size_t twice = 0;
  for (const auto& adj : adjacency_) twice += adj.size();
  return twice / 2;
}

bool CandidateGraph::tie_break_before(uint32_t a, uint32_t b) const {
  const CandidateSpan& sa = spans_[nodes_[a].span];
  const CandidateSpan& sb = spans_[nodes_[b].span];
  if (sa.length != sb.length) return sa.length > sb.length;
  if (sa.start != sb.start) return sa.start < sb.start;
  return nodes_[a].candidate < nodes_[b].candidate;
}

CandidateGraph build_graph(std::vector<CandidateSpan> spans,
                           const SemanticNetwork& net) {
  return CandidateGraph(std::move(spans), net);
}

std::optional<NodePick> max_degree_candidate(
    const CandidateGraph& graph, const std::vector<bool>& selectable,
    const std::vector<bool>& supporting) {
  std::optional<NodePick> best;
  for (uint32_t n = 0; n < graph.nodes().size(); ++n) {
    if (!selectable[n]) continue;
    size_t degree = 0;
    for (uint32_t m : graph.adjacency(n))
      if (supporting[m]) ++degree;
    if (!best || degree > best->degree ||
        (degree == best->degree && graph.tie_break_before(n, best->node))) {
      best = NodePick{n, degree};
    }
  }
  return best;
}

std::optional<NodePick> max_degree_candidate(const CandidateGraph& graph,
                                             const std::vector<bool>& active) {
  return max_degree_candidate(graph, active, active);
}

const Resolution* DisambiguationResult::resolution_for(uint32_t span) const {
  for (const Resolution& r : resolved)
    if (r.span == span) return &r;
  return nullptr;
}

DisambiguationResult disambiguate(const CandidateGraph& graph, Theta theta,
                                  IterationObserver* observer) {
  const size_t node_count = graph.nodes().size();
  const size_t span_count = graph.spans().size();
  const double cutoff = theta.cutoff(graph.initial_size());

  // selectable: may still win. supporting: its edges still count, i.e. not
  // discarded as a competitor or by span overlap. Winners stay supporting.
  std::vector<bool> selectable(node_count, true);
  std::vector<bool> supporting(node_count, true);
  // Incrementally maintained degree over supporting neighbors; verified
  // against a from-scratch recount by the test oracle.
  std::vector<size_t> degree(node_count, 0);
  for (uint32_t n = 0; n < node_count; ++n) degree[n] = graph.degree(n);

  std::vector<bool> span_done(span_count, false);

  auto discard = [&](uint32_t n) {
    if (!supporting[n]) return;
    supporting[n] = false;
    selectable[n] = false;
    for (uint32_t m : graph.adjacency(n)) {
      if (supporting[m]) --degree[m];
    }
  };

  DisambiguationResult result;
  for (size_t iteration = 0; iteration < span_count; ++iteration) {
    if (observer) observer->on_iteration(degree, selectable, supporting);
    std::optional<NodePick> best;
    for (uint32_t n = 0; n < node_count; ++n) {
      if (!selectable[n]) continue;
      if (!best || degree[n] > best->degree ||
          (degree[n] == best->degree &&
           graph.tie_break_before(n, best->node))) {
        best = NodePick{n, degree[n]};
      }
    }
    if (!best) break;
    if (static_cast<double>(best->degree) < cutoff) {
      result.stopped_by_threshold = true;
      break;
    }

    const CandidateGraph::Node& winner = graph.nodes()[best->node];
    result.resolved.push_back(
        Resolution{winner.span, best->node, winner.sense, best->degree});
    result.iterations += 1;
    span_done[winner.span] = true;
    selectable[best->node] = false;  // keeps its edges

    for (uint32_t n = 0; n < node_count; ++n) {
      if (n == best->node) continue;
      uint32_t owner = graph.nodes()[n].span;
      if (owner == winner.span) {
        discard(n);
      } else if (spans_overlap(graph.spans()[owner],
                               graph.spans()[winner.span])) {
        discard(n);
        span_done[owner] = true;  // suppressed; reported unresolved
      }
    }
  }

  for (uint32_t s = 0; s < span_count; ++s) {
    if (!result.resolution_for(s)) result.unresolved_spans.push_back(s);
  }
  return result;
}

std::string_view to_string(SemantifyMode mode) {
  switch (mode) {
    case SemantifyMode::kWord: return "word";
    case SemantifyMode::kSense: return "sense";
    case SemantifyMode::kSupersense: return "supersense";
  }
  return "word";
}

std::optional<SemantifyMode> parse_mode(std::string_view text) {
  if (text == "word") return SemantifyMode::kWord;
  if (text == "sense") return SemantifyMode::kSense;
  if (text == "supersense") return SemantifyMode::kSupersense;
  return std::nullopt;
}

std::string SemantifiedDocument::to_line() const {
  std::string line;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) line += ' ';
    line += tokens[i];
  }
  return line;
}

SemantifiedDocument semantify(std::string_view document,
                              const SemanticNetwork& net,
                              const TagLexicon& lexicon,
                              const StopwordSet& stopwords, Theta theta,
                              SemantifyMode mode) {
  SemantifiedDocument out;
  std::vector<Token> tokens = tokenize(document);
  if (mode == SemantifyMode::kWord) {
    out.tokens.reserve(tokens.size());
    for (const Token& t : tokens)
      out.tokens.push_back(lowercase_ascii(t.surface));
    return out;
  }

  tokens = tag_and_lemmatize(std::move(tokens), lexicon, stopwords);
  CandidateGraph graph = build_graph(extract_spans(tokens, net), net);
  DisambiguationResult result = disambiguate(graph, theta);
  out.resolved_spans = result.resolved.size();
  out.iterations = result.iterations;
  out.stopped_by_threshold = result.stopped_by_threshold;

  // Resolved spans are mutually non-overlapping, so a position map works.
  std::vector<const Resolution*> starts(tokens.size(), nullptr);
  for (const Resolution& r : result.resolved)
    starts[graph.spans()[r.span].start] = &r;

  for (uint32_t pos = 0; pos < tokens.size();) {
    if (const Resolution* r = starts[pos]) {
      const std::string& sense_id = net.sense_id(r->sense);
      if (mode == SemantifyMode::kSupersense) {
        auto super = net.supersense_of(r->sense);
        out.tokens.push_back(super ? std::string(*super) : sense_id);
      } else {
        out.tokens.push_back(sense_id);
      }
      pos += graph.spans()[r->span].length;
    } else {
      out.tokens.push_back(lowercase_ascii(tokens[pos].surface));
      pos += 1;
    }
  }
  return out;
}

}  // namespace sensepipe
