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

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "sensepipe/disambiguate.hpp"
#include "sensepipe/harness.hpp"
#include "sensepipe/network.hpp"
#include "sensepipe/preprocess.hpp"

using namespace sensepipe;

int main(int argc, char** argv) {
  CLI::App app{"Replace ambiguous words and multiword expressions with "
               "sense or supersense identifiers"};

  std::string network_dir, input_path, output_path;
  std::string lexicon_path, stopwords_path;
  std::string mode_name = "sense";
  double theta = 0.0;
  int workers = 1;

  app.add_option("--network", network_dir,
                 "Directory with senses.tsv, edges.tsv, lexicalizations.tsv");
  app.add_option("--theta", theta, "Confidence threshold (>= 0)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--mode", mode_name, "sense|supersense|word")
      ->check(CLI::IsMember({"sense", "supersense", "word"}));
  app.add_option("--input", input_path, "One document per line")->required();
  app.add_option("--output", output_path, "Output path")->required();
  app.add_option("--workers", workers, "Worker threads")
      ->check(CLI::PositiveNumber);
  app.add_option("--lexicon", lexicon_path, "Tag lexicon TSV");
  app.add_option("--stopwords", stopwords_path,
                 "Stopword list overriding the built-in one");

  CLI11_PARSE(app, argc, argv);

  try {
    SemantifyMode mode = *parse_mode(mode_name);
    SemanticNetwork network;
    if (mode != SemantifyMode::kWord) {
      if (network_dir.empty())
        throw std::runtime_error("--network is required for " + mode_name +
                                 " mode");
      network = load_network(NetworkPaths::in_directory(network_dir));
    }
    TagLexicon lexicon;
    if (!lexicon_path.empty()) lexicon = load_tag_lexicon(lexicon_path);
    StopwordSet stopwords = stopwords_path.empty()
                                ? StopwordSet::builtin()
                                : StopwordSet::load(stopwords_path);

    std::ifstream in(input_path);
    if (!in) throw std::runtime_error("cannot open " + input_path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(line);
    }

    ExperimentConfig config;  // reuses the corpus-level semantify plumbing
    config.mode = mode;
    ExperimentResources res;
    res.network = mode == SemantifyMode::kWord ? nullptr : &network;
    res.lexicon = &lexicon;
    res.stopwords = &stopwords;
    auto token_lines = semantify_texts(lines, config, res, theta, workers);

    std::ofstream out(output_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + output_path);
    for (const auto& tokens : token_lines) {
      for (size_t i = 0; i < tokens.size(); ++i) {
        if (i > 0) out << ' ';
        out << tokens[i];
      }
      out << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "semantify: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
