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

#include "sensepipe/preprocess.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>

#include "sensepipe/errors.hpp"

namespace sensepipe {
namespace {

bool is_ascii_punct(char c) {
  return std::ispunct(static_cast<unsigned char>(c)) != 0;
}

bool is_word_byte(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalnum(u) != 0;
}

// Unicode whitespace code points beyond ASCII.
bool is_space_codepoint(uint32_t cp) {
  if (cp == ' ' || (cp >= 0x09 && cp <= 0x0d)) return true;
  switch (cp) {
    case 0x85:
    case 0xa0:
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202f:
    case 0x205f:
    case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200a;
  }
}

// Decodes one UTF-8 code point; malformed bytes pass through as themselves.
uint32_t decode_utf8(std::string_view text, size_t pos, size_t* width) {
  unsigned char lead = text[pos];
  size_t len = lead < 0x80 ? 1 : lead < 0xe0 ? 2 : lead < 0xf0 ? 3 : 4;
  if (lead < 0xc0 || pos + len > text.size()) {
    *width = 1;
    return lead;
  }
  static constexpr std::array<uint32_t, 5> kMask = {0, 0x7f, 0x1f, 0x0f, 0x07};
  uint32_t cp = lead & kMask[len];
  for (size_t i = 1; i < len; ++i) {
    unsigned char cont = text[pos + i];
    if ((cont & 0xc0) != 0x80) {
      *width = 1;
      return lead;
    }
    cp = (cp << 6) | (cont & 0x3f);
  }
  *width = len;
  return cp;
}

void emit_chunk(std::string_view chunk, std::vector<Token>& out) {
  auto push = [&out](std::string_view s) {
    out.push_back(Token{std::string(s), "", Pos::kNone, 0});
  };

  size_t begin = 0;
  size_t end = chunk.size();
  // Leading ASCII punctuation, one token per character.
  while (begin < end && is_ascii_punct(chunk[begin])) {
    push(chunk.substr(begin, 1));
    ++begin;
  }
  // Trailing punctuation is emitted after the core, original order.
  size_t trailer_start = end;
  while (trailer_start > begin && is_ascii_punct(chunk[trailer_start - 1]))
    --trailer_start;

  std::string piece;
  auto flush = [&] {
    if (!piece.empty()) {
      push(piece);
      piece.clear();
    }
  };
  for (size_t i = begin; i < trailer_start; ++i) {
    char c = chunk[i];
    bool internal_hyphen = c == '-' && i > begin && i + 1 < trailer_start &&
                           is_word_byte(chunk[i - 1]) &&
                           is_word_byte(chunk[i + 1]);
    if (!is_ascii_punct(c) || internal_hyphen) {
      piece += c;  // internal hyphens stay (win-rate)
    } else if (c == '\'') {
      flush();
      piece = "'";  // clitic split: F1's -> F1 's
    } else {
      flush();
      push(chunk.substr(i, 1));
    }
  }
  flush();

  for (size_t i = trailer_start; i < end; ++i) push(chunk.substr(i, 1));
}

}  // namespace

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  size_t i = 0;
  while (i < text.size()) {
    size_t width = 1;
    if (is_space_codepoint(decode_utf8(text, i, &width))) {
      i += width;
      continue;
    }
    size_t start = i;
    while (i < text.size()) {
      size_t w = 1;
      if (is_space_codepoint(decode_utf8(text, i, &w))) break;
      i += w;
    }
    emit_chunk(text.substr(start, i - start), tokens);
  }
  for (size_t t = 0; t < tokens.size(); ++t)
    tokens[t].position = static_cast<uint32_t>(t);
  return tokens;
}

std::string lowercase_ascii(std::string_view text) {
  std::string out(text);
  for (char& c : out)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

void TagLexicon::add(std::string_view surface, Pos pos,
                     std::string_view lemma) {
  entries_[lowercase_ascii(surface)] = Entry{pos, lowercase_ascii(lemma)};
}

const TagLexicon::Entry* TagLexicon::lookup(
    std::string_view lowercase_surface) const {
  auto it = entries_.find(std::string(lowercase_surface));
  return it == entries_.end() ? nullptr : &it->second;
}

TagLexicon load_tag_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  TagLexicon lexicon;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t tab1 = line.find('\t');
    size_t tab2 = tab1 == std::string::npos ? tab1 : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos)
      throw ParseError(path, line_no, "expected surface<TAB>pos<TAB>lemma");
    auto pos = parse_pos(line.substr(tab1 + 1, tab2 - tab1 - 1));
    if (!pos || *pos == Pos::kAny)
      throw ParseError(path, line_no, "pos must be NOUN,VERB,ADJ,ADV or NONE");
    lexicon.add(line.substr(0, tab1), *pos, line.substr(tab2 + 1));
  }
  return lexicon;
}

StopwordSet::StopwordSet(const std::vector<std::string>& words) {
  for (const auto& w : words) words_.insert(lowercase_ascii(w));
}

bool StopwordSet::contains(std::string_view lowercase_word) const {
  return words_.count(std::string(lowercase_word)) > 0;
}

const StopwordSet& StopwordSet::builtin() {
  static const StopwordSet* set = [] {
    // ~120 English function words; mirrored in data/stopwords.txt.
    static constexpr const char* kWords[] = {
        "a",        "about",    "above",   "after",   "again",   "against",
        "all",      "am",       "an",      "and",     "any",     "are",
        "as",       "at",       "be",      "because", "been",    "before",
        "being",    "below",    "between", "both",    "but",     "by",
        "did",      "do",       "does",    "doing",   "down",    "during",
        "each",     "few",      "for",     "from",    "further", "had",
        "has",      "have",     "having",  "he",      "her",     "here",
        "hers",     "herself",  "him",     "himself", "his",     "how",
        "i",        "if",       "in",      "into",    "is",      "it",
        "its",      "itself",   "just",    "me",      "more",    "most",
        "my",       "myself",   "no",      "nor",     "not",     "now",
        "of",       "off",      "on",      "once",    "only",    "or",
        "other",    "our",      "ours",    "ourselves", "out",   "over",
        "own",      "same",     "she",     "should",  "so",      "some",
        "such",     "than",     "that",    "the",     "their",   "theirs",
        "them",     "themselves", "then",  "there",   "these",   "they",
        "this",     "those",    "through", "to",      "too",     "under",
        "until",    "up",       "very",    "was",     "we",      "were",
        "what",     "when",     "where",   "which",   "while",   "who",
        "whom",     "why",      "will",    "with",    "would",   "you",
        "your",     "yours",    "yourself", "yourselves",
        // clitic remnants produced by the tokenizer
        "'s",       "'t",       "'ll",     "'ve",     "'re",     "'d",
        "'m",       "n't",
    };
    std::vector<std::string> words(std::begin(kWords), std::end(kWords));
    return new StopwordSet(words);
  }();
  return *set;
}

StopwordSet StopwordSet::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) words.push_back(line);
  }
  return StopwordSet(words);
}

std::vector<Token> tag_and_lemmatize(std::vector<Token> tokens,
                                     const TagLexicon& lexicon,
                                     const StopwordSet& stopwords) {
  for (Token& token : tokens) {
    std::string lower = lowercase_ascii(token.surface);
    if (const TagLexicon::Entry* entry = lexicon.lookup(lower)) {
      token.lemma = entry->lemma;
      token.pos = entry->pos;
      continue;
    }
    token.lemma = lower;
    bool punct = std::all_of(token.surface.begin(), token.surface.end(),
                             is_ascii_punct);
    token.pos = (punct || stopwords.contains(lower)) ? Pos::kNone : Pos::kNoun;
  }
  return tokens;
}

std::vector<CandidateSpan> extract_spans(const std::vector<Token>& tokens,
                                         const SemanticNetwork& net) {
  std::vector<CandidateSpan> spans;
  const uint32_t n = static_cast<uint32_t>(tokens.size());
  for (uint32_t len = 3; len >= 1; --len) {
    if (n < len) continue;
    for (uint32_t start = 0; start + len <= n; ++start) {
      // Head = last content token of the window.
      Pos head = Pos::kNone;
      for (uint32_t i = start + len; i > start; --i) {
        if (tokens[i - 1].pos != Pos::kNone) {
          head = tokens[i - 1].pos;
          break;
        }
      }
      if (head == Pos::kNone) continue;
      std::string lemma = tokens[start].lemma;
      for (uint32_t i = start + 1; i < start + len; ++i) {
        lemma += ' ';
        lemma += tokens[i].lemma;
      }
      LexKey key{std::move(lemma), head};
      auto candidates = net.candidates(key);
      if (candidates.empty()) continue;
      spans.push_back(
          CandidateSpan{start, len, std::move(key), std::move(candidates)});
    }
  }
  std::sort(spans.begin(), spans.end(),
            [](const CandidateSpan& a, const CandidateSpan& b) {
              if (a.start != b.start) return a.start < b.start;
              return a.length > b.length;
            });
  return spans;
}

}  // namespace sensepipe
