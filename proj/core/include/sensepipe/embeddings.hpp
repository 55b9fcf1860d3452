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

#include <Eigen/Core>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sensepipe/network.hpp"

namespace sensepipe {

using Vector = Eigen::VectorXd;

// Fixed-dimension vectors keyed by word, sense id, or supersense id.
// Insertion order is preserved for serialization.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(int dimension);

  int dimension() const { return dimension_; }
  size_t size() const { return keys_.size(); }

  // Inserts or overwrites; an overwritten key keeps its original position.
  void put(std::string key, Vector value);
  const Vector* lookup(std::string_view key) const;
  bool contains(std::string_view key) const { return lookup(key) != nullptr; }

  const std::vector<std::string>& keys() const { return keys_; }

 private:
  int dimension_;
  std::vector<std::string> keys_;
  std::unordered_map<std::string, Vector> entries_;
};

// Plain-text interchange format: header "<count> <dimension>", then one
// "<key> <f1> ... <fd>" row per entry. top_k > 0 keeps only the first
// top_k rows. Later duplicate keys overwrite earlier ones.
EmbeddingTable load_embeddings(const std::string& path, size_t top_k = 0);

// Values are written with 9 significant digits.
void save_embeddings(const EmbeddingTable& table, const std::string& path);

// Ordered list of words biasing one sense; rank = 1-based list position.
struct BiasList {
  std::string sense_id;
  std::vector<std::string> words;
};

// TSV rows: sense_id<TAB>w1,w2,...,wn (comma-separated, rank order).
std::vector<BiasList> load_bias_lists(const std::string& path);

struct DecayParam {
  double value = 5.0;
  explicit DecayParam(double v = 5.0);
};

// Exponential-decay composition over the bias list followed by averaging
// with the word vector:
//   composed = (decayed_mean(bias) + v(word_key)) / 2
// where decayed_mean weights the i-th bias word (original 1-based rank) by
// exp(-i/delta), skips words absent from the table, and normalizes by the
// count actually used. Throws when word_key is missing or no bias word is
// usable.
Vector compose_sense(const EmbeddingTable& table, const BiasList& bias,
                     DecayParam delta, std::string_view word_key);

// Componentwise arithmetic mean; all vectors must share one dimension.
Vector compose_supersense(const std::vector<Vector>& sense_vectors);

struct SenseTableStats {
  size_t senses_composed = 0;
  size_t senses_skipped = 0;
  size_t supersenses_composed = 0;
};

// Merged table: all word vectors, one vector per composable sense, one per
// supersense (mean over its composed member senses). A sense's word key is
// its first lexicalization lemma; multiword lemmas are looked up
// underscore-joined and fall back to the mean of their parts' vectors.
// Senses without a usable word key or bias word are skipped and counted.
EmbeddingTable build_sense_table(const EmbeddingTable& words,
                                 const std::vector<BiasList>& bias_lists,
                                 const SemanticNetwork& net, DecayParam delta,
                                 SenseTableStats* stats = nullptr);

}  // namespace sensepipe
