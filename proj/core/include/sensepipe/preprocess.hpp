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

#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sensepipe/network.hpp"

namespace sensepipe {

struct Token {
  std::string surface;
  std::string lemma;       // lowercase; filled by tag_and_lemmatize
  Pos pos = Pos::kNone;
  uint32_t position = 0;   // 0-based, consecutive
};

// Splits on Unicode whitespace. Leading/trailing ASCII punctuation of a
// chunk becomes separate single-character tokens. Inside a chunk, hyphens
// between alphanumerics are kept, an apostrophe starts a new token glued to
// what follows (F1's -> F1 's), and any other ASCII punctuation stands
// alone. Only surface and position are filled in.
std::vector<Token> tokenize(std::string_view text);

// Deterministic surface -> (pos, lemma) table standing in for a statistical
// tagger. Surfaces are matched lowercase; one entry per surface, later file
// rows overwrite earlier ones.
class TagLexicon {
 public:
  struct Entry {
    Pos pos;
    std::string lemma;
  };

  void add(std::string_view surface, Pos pos, std::string_view lemma);
  const Entry* lookup(std::string_view lowercase_surface) const;
  size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, Entry> entries_;
};

// TSV rows: surface<TAB>pos<TAB>lemma.
TagLexicon load_tag_lexicon(const std::string& path);

class StopwordSet {
 public:
  StopwordSet() = default;
  explicit StopwordSet(const std::vector<std::string>& words);

  bool contains(std::string_view lowercase_word) const;
  size_t size() const { return words_.size(); }

  // The built-in list of ~120 English function words.
  static const StopwordSet& builtin();
  // One word per line.
  static StopwordSet load(const std::string& path);

 private:
  std::unordered_set<std::string> words_;
};

// Fills lemma and pos on each token: lexicon entry if present, else NONE
// for punctuation and stopwords, else NOUN as the open-class default.
// Lemma falls back to the lowercased surface.
std::vector<Token> tag_and_lemmatize(std::vector<Token> tokens,
                                     const TagLexicon& lexicon,
                                     const StopwordSet& stopwords);

// A window of 1..3 tokens whose joined lemmas have network candidates.
struct CandidateSpan {
  uint32_t start = 0;
  uint32_t length = 1;
  LexKey key;
  std::vector<SenseIndex> candidate_senses;  // == net.candidates(key)

  uint32_t end() const { return start + length; }
};

inline bool spans_overlap(const CandidateSpan& a, const CandidateSpan& b) {
  return a.start < b.end() && b.start < a.end();
}

// Emits a span for every window of length 3, 2, or 1 whose joined lemmas
// hit the lexicalization index. The window's pos is its last content
// token's tag; windows without a content token and NONE unigrams are
// skipped. Overlapping spans of different lengths coexist; output is
// sorted by (start asc, length desc).
std::vector<CandidateSpan> extract_spans(const std::vector<Token>& tokens,
                                         const SemanticNetwork& net);

std::string lowercase_ascii(std::string_view text);

}  // namespace sensepipe
