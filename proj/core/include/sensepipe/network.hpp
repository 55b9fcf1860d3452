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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sensepipe {

// Parts of speech the pipeline works with. kAny is a query wildcard that
// never appears in files; kNone marks tokens outside the open classes.
enum class Pos : uint8_t { kNoun, kVerb, kAdj, kAdv, kAny, kNone };

std::string_view to_string(Pos pos);
std::optional<Pos> parse_pos(std::string_view text);

// Dense handle for a sense inside one SemanticNetwork.
using SenseIndex = uint32_t;

// Lexicalization lookup key: lowercase lemma of 1..3 single-space-separated
// parts plus a part of speech.
struct LexKey {
  std::string lemma;
  Pos pos = Pos::kNoun;

  bool operator==(const LexKey&) const = default;
};

struct LexKeyHash {
  size_t operator()(const LexKey& key) const;
};

// One row of the lexicalizations file, in file order.
struct LexEntry {
  std::string lemma;
  Pos pos;
  SenseIndex sense;

  bool operator==(const LexEntry&) const = default;
};

struct NetworkPaths {
  std::string senses;
  std::string edges;
  std::string lexicalizations;

  // Conventional file names senses.tsv / edges.tsv / lexicalizations.tsv.
  static NetworkPaths in_directory(const std::string& dir);
};

// Immutable sense graph: senses, undirected unweighted edges, the
// lemma -> senses lexicalization index, and the sense -> supersense map.
// Symmetric adjacency, no self-loops, every reference resolved at load.
// Safe for concurrent reads once constructed.
class SemanticNetwork {
 public:
  SemanticNetwork() = default;

  // --- construction ---------------------------------------------------

  // Adds a sense; empty supersense means unmapped. Rejects duplicates.
  SenseIndex add_sense(std::string id, std::string supersense = "");
  // Adds an undirected edge; self-loops are rejected, duplicates ignored.
  void add_edge(SenseIndex a, SenseIndex b);
  // Appends a lexicalization row (file order defines candidate order).
  void add_lexicalization(std::string lemma, Pos pos, SenseIndex sense);

  // --- queries ---------------------------------------------------------

  size_t sense_count() const { return ids_.size(); }
  const std::string& sense_id(SenseIndex s) const { return ids_[s]; }
  std::optional<SenseIndex> find(std::string_view id) const;
  // Throws std::out_of_range for ids not in the network.
  SenseIndex require(std::string_view id) const;

  // Adjacency of s, ascending by index. Set semantics.
  const std::vector<SenseIndex>& neighbors(SenseIndex s) const;
  const std::vector<SenseIndex>& neighbors(std::string_view id) const {
    return neighbors(require(id));
  }
  bool adjacent(SenseIndex a, SenseIndex b) const;

  // Candidate senses for a key, in lexicalization-file order. Pos::kAny
  // unions all parts of speech for the lemma, deduplicated, file order.
  // Absent keys yield an empty list.
  std::vector<SenseIndex> candidates(const LexKey& key) const;
  bool has_lemma(const LexKey& key) const;

  std::optional<std::string_view> supersense_of(SenseIndex s) const;
  std::optional<std::string_view> supersense_of(std::string_view id) const {
    return supersense_of(require(id));
  }

  // Lemma of the first lexicalization row naming s, if any.
  std::optional<std::string_view> first_lexicalization(SenseIndex s) const;

  const std::vector<LexEntry>& lex_entries() const { return lex_entries_; }
  // Distinct supersenses in first-appearance order over the senses file.
  const std::vector<std::string>& supersenses() const { return supersenses_; }

  size_t edge_count() const;

  // Structural equality: same sense set, adjacency, lexicalization index,
  // and supersense assignment. Edge/file ordering does not participate.
  bool operator==(const SemanticNetwork& other) const;

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, SenseIndex> index_;
  std::vector<std::vector<SenseIndex>> adjacency_;
  std::vector<std::string> supersense_of_;  // "" = unmapped
  std::vector<std::string> supersenses_;
  std::vector<LexEntry> lex_entries_;
  std::unordered_map<LexKey, std::vector<SenseIndex>, LexKeyHash> lex_index_;
  std::unordered_map<std::string, std::vector<SenseIndex>> any_index_;
  std::vector<int32_t> first_lex_;  // -1 = none
};

// Loads and validates a network from the three TSV files. Errors carry the
// file path and 1-based line number.
SemanticNetwork load_network(const NetworkPaths& paths);

// Writes the network back out in the same TSV formats; the result reloads
// to a network equal to the input.
void save_network(const SemanticNetwork& net, const NetworkPaths& paths);

}  // namespace sensepipe
