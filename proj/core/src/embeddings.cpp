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

#include "sensepipe/embeddings.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "sensepipe/errors.hpp"

namespace sensepipe {
namespace {

double parse_double(const std::string& path, size_t line_no,
                    std::string_view text) {
  double value = 0.0;
  auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ParseError(path, line_no,
                     "malformed float: '" + std::string(text) + "'");
  return value;
}

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    size_t start = i;
    while (i < line.size() && line[i] != ' ') ++i;
    if (i > start) fields.push_back(line.substr(start, i - start));
  }
  return fields;
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

EmbeddingTable::EmbeddingTable(int dimension) : dimension_(dimension) {
  if (dimension <= 0)
    throw std::invalid_argument("embedding dimension must be positive");
}

void EmbeddingTable::put(std::string key, Vector value) {
  if (value.size() != dimension_)
    throw std::invalid_argument("vector dimension mismatch for key " + key);
  auto [it, inserted] = entries_.insert_or_assign(key, std::move(value));
  if (inserted) keys_.push_back(std::move(key));
}

const Vector* EmbeddingTable::lookup(std::string_view key) const {
  auto it = entries_.find(std::string(key));
  return it == entries_.end() ? nullptr : &it->second;
}

EmbeddingTable load_embeddings(const std::string& path, size_t top_k) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line))
    throw ParseError(path, 1, "missing header line");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_spaces(line);
  if (header.size() != 2)
    throw ParseError(path, 1, "expected header '<count> <dimension>'");
  size_t declared = static_cast<size_t>(
      parse_double(path, 1, header[0]));
  int dimension = static_cast<int>(parse_double(path, 1, header[1]));
  if (dimension <= 0) throw ParseError(path, 1, "dimension must be positive");

  EmbeddingTable table(dimension);
  (void)declared;  // informational only; rows are counted as read
  size_t line_no = 1;
  size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (top_k > 0 && rows >= top_k) break;
    auto fields = split_spaces(line);
    if (fields.size() != static_cast<size_t>(dimension) + 1)
      throw ParseError(path, line_no,
                       "expected key plus " + std::to_string(dimension) +
                           " values, got " +
                           std::to_string(fields.size() - 1));
    Vector v(dimension);
    for (int i = 0; i < dimension; ++i)
      v[i] = parse_double(path, line_no, fields[i + 1]);
    table.put(std::string(fields[0]), std::move(v));
    ++rows;
  }
  return table;
}

void save_embeddings(const EmbeddingTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << table.size() << ' ' << table.dimension() << '\n';
  for (const std::string& key : table.keys()) {
    out << key;
    const Vector& v = *table.lookup(key);
    for (int i = 0; i < v.size(); ++i) out << ' ' << format_value(v[i]);
    out << '\n';
  }
}

std::vector<BiasList> load_bias_lists(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<BiasList> lists;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
      throw ParseError(path, line_no, "expected sense_id<TAB>w1,w2,...");
    BiasList list;
    list.sense_id = line.substr(0, tab);
    size_t start = tab + 1;
    while (start <= line.size()) {
      size_t comma = line.find(',', start);
      std::string word = comma == std::string::npos
                             ? line.substr(start)
                             : line.substr(start, comma - start);
      if (!word.empty()) list.words.push_back(std::move(word));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (list.words.empty())
      throw ParseError(path, line_no, "empty bias list");
    lists.push_back(std::move(list));
  }
  return lists;
}

DecayParam::DecayParam(double v) : value(v) {
  if (!(v > 0.0))
    throw std::invalid_argument("decay parameter must be positive");
}

Vector compose_sense(const EmbeddingTable& table, const BiasList& bias,
                     DecayParam delta, std::string_view word_key) {
  const Vector* word = table.lookup(word_key);
  if (!word)
    throw std::invalid_argument("word key not in table: " +
                                std::string(word_key));
  Vector sum = Vector::Zero(table.dimension());
  size_t used = 0;
  for (size_t i = 0; i < bias.words.size(); ++i) {
    const Vector* v = table.lookup(bias.words[i]);
    if (!v) continue;  // absent words keep the ranks of the rest
    double rank = static_cast<double>(i + 1);
    sum += std::exp(-rank / delta.value) * *v;
    ++used;
  }
  if (used == 0)
    throw std::invalid_argument("no usable bias words for sense " +
                                bias.sense_id);
  Vector decayed = sum / static_cast<double>(used);
  return (decayed + *word) / 2.0;
}

Vector compose_supersense(const std::vector<Vector>& sense_vectors) {
  if (sense_vectors.empty())
    throw std::invalid_argument("cannot average zero sense vectors");
  Vector sum = Vector::Zero(sense_vectors.front().size());
  for (const Vector& v : sense_vectors) {
    if (v.size() != sum.size())
      throw std::invalid_argument("sense vector dimension mismatch");
    sum += v;
  }
  return sum / static_cast<double>(sense_vectors.size());
}

namespace {

// Word key for a sense: underscore-joined first lexicalization, else the
// mean of the parts that have vectors. Multiword keys are materialized in
// the output table so later lookups hit directly.
std::optional<std::string> resolve_word_key(EmbeddingTable& table,
                                            const SemanticNetwork& net,
                                            SenseIndex sense) {
  auto lemma = net.first_lexicalization(sense);
  if (!lemma) return std::nullopt;
  std::string joined(*lemma);
  for (char& c : joined)
    if (c == ' ') c = '_';
  if (table.contains(joined)) return joined;
  if (joined.find('_') == std::string::npos) return std::nullopt;

  Vector sum = Vector::Zero(table.dimension());
  size_t used = 0;
  size_t start = 0;
  std::string part;
  const std::string text(*lemma);
  while (start <= text.size()) {
    size_t space = text.find(' ', start);
    part = space == std::string::npos ? text.substr(start)
                                      : text.substr(start, space - start);
    if (const Vector* v = table.lookup(part)) {
      sum += *v;
      ++used;
    }
    if (space == std::string::npos) break;
    start = space + 1;
  }
  if (used == 0) return std::nullopt;
  table.put(joined, sum / static_cast<double>(used));
  return joined;
}

}  // namespace

EmbeddingTable build_sense_table(const EmbeddingTable& words,
                                 const std::vector<BiasList>& bias_lists,
                                 const SemanticNetwork& net, DecayParam delta,
                                 SenseTableStats* stats) {
  EmbeddingTable table(words.dimension());
  for (const std::string& key : words.keys())
    table.put(key, *words.lookup(key));

  SenseTableStats local;
  std::unordered_map<std::string, std::vector<Vector>> per_supersense;

  for (const BiasList& bias : bias_lists) {
    auto sense = net.find(bias.sense_id);
    if (!sense) {
      ++local.senses_skipped;
      continue;
    }
    auto word_key = resolve_word_key(table, net, *sense);
    if (!word_key) {
      ++local.senses_skipped;
      continue;
    }
    Vector composed;
    try {
      composed = compose_sense(table, bias, delta, *word_key);
    } catch (const std::invalid_argument&) {
      ++local.senses_skipped;
      continue;
    }
    if (auto super = net.supersense_of(*sense))
      per_supersense[std::string(*super)].push_back(composed);
    table.put(bias.sense_id, std::move(composed));
    ++local.senses_composed;
  }

  // Supersense order follows the senses-file declaration order.
  for (const std::string& super : net.supersenses()) {
    auto it = per_supersense.find(super);
    if (it == per_supersense.end()) continue;
    table.put(super, compose_supersense(it->second));
    ++local.supersenses_composed;
  }

  if (stats) *stats = local;
  return table;
}

}  // namespace sensepipe
