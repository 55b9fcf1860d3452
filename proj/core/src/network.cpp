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

#include "sensepipe/network.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>

#include <stdexcept>

#include "sensepipe/errors.hpp"

namespace sensepipe {
namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

bool valid_lemma(std::string_view lemma) {
  if (lemma.empty() || lemma.front() == ' ' || lemma.back() == ' ')
    return false;
  int parts = 1;
  for (size_t i = 0; i + 1 < lemma.size(); ++i) {
    if (lemma[i] == ' ') {
      if (lemma[i + 1] == ' ') return false;
      ++parts;
    }
  }
  return parts <= 3;
}

using LineHandler =
    std::function<void(size_t line_no, const std::vector<std::string>&)>;

void for_each_row(const std::string& path, bool allow_comments,
                  const LineHandler& handler) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    if (allow_comments && line.front() == '#') continue;
    handler(line_no, split_tabs(line));
  }
}

}  // namespace

std::string_view to_string(Pos pos) {
  switch (pos) {
    case Pos::kNoun: return "NOUN";
    case Pos::kVerb: return "VERB";
    case Pos::kAdj: return "ADJ";
    case Pos::kAdv: return "ADV";
    case Pos::kAny: return "ANY";
    case Pos::kNone: return "NONE";
  }
  return "NONE";
}

std::optional<Pos> parse_pos(std::string_view text) {
  if (text == "NOUN") return Pos::kNoun;
  if (text == "VERB") return Pos::kVerb;
  if (text == "ADJ") return Pos::kAdj;
  if (text == "ADV") return Pos::kAdv;
  if (text == "ANY") return Pos::kAny;
  if (text == "NONE") return Pos::kNone;
  return std::nullopt;
}

size_t LexKeyHash::operator()(const LexKey& key) const {
  size_t h = std::hash<std::string>{}(key.lemma);
  return h ^ (static_cast<size_t>(key.pos) * 0x9e3779b97f4a7c15ULL);
}

NetworkPaths NetworkPaths::in_directory(const std::string& dir) {
  namespace fs = std::filesystem;
  return NetworkPaths{(fs::path(dir) / "senses.tsv").string(),
                      (fs::path(dir) / "edges.tsv").string(),
                      (fs::path(dir) / "lexicalizations.tsv").string()};
}

SenseIndex SemanticNetwork::add_sense(std::string id, std::string supersense) {
  if (id.empty()) throw std::invalid_argument("empty sense id");
  auto [it, inserted] =
      index_.emplace(id, static_cast<SenseIndex>(ids_.size()));
  if (!inserted)
    throw std::invalid_argument("duplicate sense id: " + id);
  ids_.push_back(std::move(id));
  adjacency_.emplace_back();
  first_lex_.push_back(-1);
  if (!supersense.empty() &&
      std::find(supersenses_.begin(), supersenses_.end(), supersense) ==
          supersenses_.end()) {
    supersenses_.push_back(supersense);
  }
  supersense_of_.push_back(std::move(supersense));
  return it->second;
}

void SemanticNetwork::add_edge(SenseIndex a, SenseIndex b) {
  if (a >= ids_.size() || b >= ids_.size())
    throw std::invalid_argument("edge endpoint out of range");
  if (a == b)
    throw std::invalid_argument("self-loop edge on " + ids_[a]);
  auto insert_sorted = [](std::vector<SenseIndex>& adj, SenseIndex v) {
    auto it = std::lower_bound(adj.begin(), adj.end(), v);
    if (it == adj.end() || *it != v) adj.insert(it, v);
  };
  insert_sorted(adjacency_[a], b);
  insert_sorted(adjacency_[b], a);
}

void SemanticNetwork::add_lexicalization(std::string lemma, Pos pos,
                                         SenseIndex sense) {
  if (sense >= ids_.size())
    throw std::invalid_argument("lexicalization of unknown sense");
  if (!valid_lemma(lemma))
    throw std::invalid_argument("invalid lemma: '" + lemma + "'");
  if (pos == Pos::kAny || pos == Pos::kNone)
    throw std::invalid_argument("lexicalization pos must be an open class");
  auto& senses = lex_index_[LexKey{lemma, pos}];
  if (std::find(senses.begin(), senses.end(), sense) == senses.end())
    senses.push_back(sense);
  auto& any = any_index_[lemma];
  if (std::find(any.begin(), any.end(), sense) == any.end())
    any.push_back(sense);
  if (first_lex_[sense] < 0)
    first_lex_[sense] = static_cast<int32_t>(lex_entries_.size());
  lex_entries_.push_back(LexEntry{std::move(lemma), pos, sense});
}

std::optional<SenseIndex> SemanticNetwork::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SenseIndex SemanticNetwork::require(std::string_view id) const {
  auto found = find(id);
  if (!found)
    throw std::out_of_range("unknown sense id: " + std::string(id));
  return *found;
}

const std::vector<SenseIndex>& SemanticNetwork::neighbors(
    SenseIndex s) const {
  if (s >= adjacency_.size())
    throw std::out_of_range("sense index out of range");
  return adjacency_[s];
}

bool SemanticNetwork::adjacent(SenseIndex a, SenseIndex b) const {
  const auto& adj = neighbors(a);
  return std::binary_search(adj.begin(), adj.end(), b);
}

std::vector<SenseIndex> SemanticNetwork::candidates(const LexKey& key) const {
  if (key.pos == Pos::kAny) {
    auto it = any_index_.find(key.lemma);
    if (it == any_index_.end()) return {};
    return it->second;
  }
  auto it = lex_index_.find(key);
  if (it == lex_index_.end()) return {};
  return it->second;
}

bool SemanticNetwork::has_lemma(const LexKey& key) const {
  if (key.pos == Pos::kAny) return any_index_.count(key.lemma) > 0;
  return lex_index_.count(key) > 0;
}

std::optional<std::string_view> SemanticNetwork::supersense_of(
    SenseIndex s) const {
  if (s >= supersense_of_.size())
    throw std::out_of_range("sense index out of range");
  if (supersense_of_[s].empty()) return std::nullopt;
  return std::string_view(supersense_of_[s]);
}

std::optional<std::string_view> SemanticNetwork::first_lexicalization(
    SenseIndex s) const {
  if (s >= first_lex_.size())
    throw std::out_of_range("sense index out of range");
  if (first_lex_[s] < 0) return std::nullopt;
  return std::string_view(lex_entries_[first_lex_[s]].lemma);
}

size_t SemanticNetwork::edge_count() const {
  size_t twice = 0;
  for (const auto& adj : adjacency_) twice += adj.size();
  return twice / 2;
}

bool SemanticNetwork::operator==(const SemanticNetwork& other) const {
  if (ids_.size() != other.ids_.size()) return false;
  for (SenseIndex s = 0; s < ids_.size(); ++s) {
    auto theirs = other.find(ids_[s]);
    if (!theirs) return false;
    if (supersense_of_[s] != other.supersense_of_[*theirs]) return false;
    const auto& mine = adjacency_[s];
    const auto& adj = other.adjacency_[*theirs];
    if (mine.size() != adj.size()) return false;
    for (size_t i = 0; i < mine.size(); ++i)
      if (ids_[mine[i]] != other.ids_[adj[i]]) return false;
  }
  if (lex_index_.size() != other.lex_index_.size()) return false;
  for (const auto& [key, senses] : lex_index_) {
    auto it = other.lex_index_.find(key);
    if (it == other.lex_index_.end()) return false;
    if (it->second.size() != senses.size()) return false;
    for (size_t i = 0; i < senses.size(); ++i)
      if (ids_[senses[i]] != other.ids_[it->second[i]]) return false;
  }
  return true;
}

SemanticNetwork load_network(const NetworkPaths& paths) {
  SemanticNetwork net;

  for_each_row(paths.senses, /*allow_comments=*/true,
               [&](size_t line_no, const std::vector<std::string>& fields) {
                 if (fields.empty() || fields.size() > 2 || fields[0].empty())
                   throw ParseError(paths.senses, line_no,
                                    "expected sense_id[<TAB>supersense_id]");
                 try {
                   net.add_sense(fields[0],
                                 fields.size() == 2 ? fields[1] : "");
                 } catch (const std::invalid_argument& e) {
                   throw ParseError(paths.senses, line_no, e.what());
                 }
               });

  auto resolve = [&](const std::string& path, size_t line_no,
                     const std::string& id) {
    auto sense = net.find(id);
    if (!sense)
      throw ParseError(path, line_no, "unknown sense id: " + id);
    return *sense;
  };

  for_each_row(paths.edges, /*allow_comments=*/false,
               [&](size_t line_no, const std::vector<std::string>& fields) {
                 if (fields.size() != 2)
                   throw ParseError(paths.edges, line_no,
                                    "expected sense_id<TAB>sense_id");
                 SenseIndex a = resolve(paths.edges, line_no, fields[0]);
                 SenseIndex b = resolve(paths.edges, line_no, fields[1]);
                 if (a == b)
                   throw ParseError(paths.edges, line_no,
                                    "self-loop edge on " + fields[0]);
                 net.add_edge(a, b);
               });

  for_each_row(
      paths.lexicalizations, /*allow_comments=*/false,
      [&](size_t line_no, const std::vector<std::string>& fields) {
        if (fields.size() != 3)
          throw ParseError(paths.lexicalizations, line_no,
                           "expected lemma<TAB>pos<TAB>sense_id");
        auto pos = parse_pos(fields[1]);
        if (!pos || *pos == Pos::kAny || *pos == Pos::kNone)
          throw ParseError(paths.lexicalizations, line_no,
                           "pos must be one of NOUN,VERB,ADJ,ADV");
        SenseIndex sense = resolve(paths.lexicalizations, line_no, fields[2]);
        try {
          net.add_lexicalization(fields[0], *pos, sense);
        } catch (const std::invalid_argument& e) {
          throw ParseError(paths.lexicalizations, line_no, e.what());
        }
      });

  return net;
}

void save_network(const SemanticNetwork& net, const NetworkPaths& paths) {
  auto open = [](const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
  };

  std::ofstream senses = open(paths.senses);
  for (SenseIndex s = 0; s < net.sense_count(); ++s) {
    senses << net.sense_id(s) << '\t'
           << net.supersense_of(s).value_or("") << '\n';
  }

  std::ofstream edges = open(paths.edges);
  for (SenseIndex s = 0; s < net.sense_count(); ++s) {
    for (SenseIndex t : net.neighbors(s)) {
      if (s < t) edges << net.sense_id(s) << '\t' << net.sense_id(t) << '\n';
    }
  }

  std::ofstream lex = open(paths.lexicalizations);
  for (const LexEntry& entry : net.lex_entries()) {
    lex << entry.lemma << '\t' << to_string(entry.pos) << '\t'
        << net.sense_id(entry.sense) << '\n';
  }
}

}  // namespace sensepipe
