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
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "sensepipe/embeddings.hpp"
#include "sensepipe/harness.hpp"

using namespace sensepipe;

namespace {

int run_command(const std::string& config_path) {
  ExperimentConfig config = load_experiment_config(config_path);
  LabeledCorpus corpus = load_corpus(config.dataset_path);

  LabeledCorpus test_corpus;
  const LabeledCorpus* test_ptr = nullptr;
  if (!config.test_dataset_path.empty()) {
    test_corpus = load_corpus(config.test_dataset_path);
    test_ptr = &test_corpus;
  }

  SemanticNetwork network;
  TagLexicon lexicon;
  StopwordSet stopwords = StopwordSet::builtin();
  EmbeddingTable embeddings(1);
  ExperimentResources res;

  if (config.mode != SemantifyMode::kWord) {
    if (config.network_dir.empty())
      throw std::runtime_error("config needs 'network' for sense modes");
    network = load_network(NetworkPaths::in_directory(config.network_dir));
    res.network = &network;
  }
  if (!config.lexicon_path.empty()) {
    lexicon = load_tag_lexicon(config.lexicon_path);
    res.lexicon = &lexicon;
  }
  if (!config.stopwords_path.empty())
    stopwords = StopwordSet::load(config.stopwords_path);
  res.stopwords = &stopwords;
  if (config.classifier.init_mode == InitMode::kPretrained) {
    if (config.embeddings_path.empty())
      throw std::runtime_error("config needs 'embeddings' for pretrained");
    embeddings = load_embeddings(config.embeddings_path);
    res.embeddings = &embeddings;
  }

  ExperimentReport report = run_experiment(config, corpus, res, test_ptr);
  std::string csv = report.to_csv();
  std::cout << csv;
  if (!config.output_csv.empty()) {
    std::ofstream out(config.output_csv, std::ios::binary);
    if (!out)
      throw std::runtime_error("cannot write " + config.output_csv);
    out << csv;
  }
  std::cerr << "mean accuracy " << report.mean_accuracy << ", mean macro-F1 "
            << report.mean_macro_f1 << " over " << report.folds.size()
            << " fold(s)\n";
  return 0;
}

int build_senses_command(const std::string& embeddings_path,
                         const std::string& bias_path,
                         const std::string& network_dir, double delta,
                         size_t top_k, const std::string& output_path) {
  EmbeddingTable words = load_embeddings(embeddings_path, top_k);
  std::vector<BiasList> lists = load_bias_lists(bias_path);
  SemanticNetwork network =
      load_network(NetworkPaths::in_directory(network_dir));
  SenseTableStats stats;
  EmbeddingTable merged =
      build_sense_table(words, lists, network, DecayParam(delta), &stats);
  save_embeddings(merged, output_path);
  std::cerr << "composed " << stats.senses_composed << " senses, skipped "
            << stats.senses_skipped << ", " << stats.supersenses_composed
            << " supersenses; table size " << merged.size() << '\n';
  return 0;
}

// Mean rows of a run report: dataset -> mode -> accuracy.
void collect_mean_rows(const std::string& path,
                       std::map<std::string, std::map<std::string, double>>&
                           accuracies) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      first = false;
      if (line.rfind("dataset,", 0) == 0) continue;
    }
    std::stringstream ss(line);
    std::vector<std::string> fields;
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 7)
      throw std::runtime_error(path + ": malformed report row: " + line);
    if (fields[3] != "mean") continue;
    accuracies[fields[0]][fields[1]] = std::stod(fields[5]);
  }
}

int doclen_command(const std::vector<std::string>& reports,
                   const std::vector<std::string>& datasets,
                   const std::string& output_path) {
  std::map<std::string, std::map<std::string, double>> accuracies;
  for (const std::string& report : reports)
    collect_mean_rows(report, accuracies);

  std::map<std::string, std::string> dataset_paths;
  for (const std::string& mapping : datasets) {
    size_t eq = mapping.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("--dataset expects name=path, got " + mapping);
    dataset_paths[mapping.substr(0, eq)] = mapping.substr(eq + 1);
  }

  std::vector<DatasetGain> gains;
  for (const auto& [name, by_mode] : accuracies) {
    auto word = by_mode.find("word");
    if (word == by_mode.end())
      throw std::runtime_error("no word-mode mean row for dataset " + name);
    auto path = dataset_paths.find(name);
    if (path == dataset_paths.end())
      throw std::runtime_error("no --dataset mapping for " + name);
    double avg_tokens = load_corpus(path->second).mean_doc_tokens();
    for (const auto& [mode, accuracy] : by_mode) {
      if (mode == "word") continue;
      gains.push_back(DatasetGain{name, avg_tokens, word->second, accuracy});
    }
  }
  if (gains.empty())
    throw std::runtime_error("no sense-level mean rows found in reports");

  std::string csv = report_doclen_gain(std::move(gains));
  std::cout << csv;
  if (!output_path.empty()) {
    std::ofstream out(output_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + output_path);
    out << csv;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sense-level text classification experiments"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment from a config");
  std::string config_path;
  run->add_option("--config", config_path, "key=value experiment config")
      ->required();

  auto* build = app.add_subcommand(
      "build-senses", "Compose sense and supersense vectors from word "
                      "vectors and ranked bias lists");
  std::string embeddings_path, bias_path, network_dir, table_out;
  double delta = 5.0;
  size_t top_k = 0;
  build->add_option("--embeddings", embeddings_path, "Word vector file")
      ->required();
  build->add_option("--bias", bias_path, "sense_id<TAB>w1,w2,... lists")
      ->required();
  build->add_option("--network", network_dir, "Network directory")
      ->required();
  build->add_option("--delta", delta, "Exponential decay parameter")
      ->check(CLI::PositiveNumber);
  build->add_option("--top", top_k, "Keep only the first K word vectors");
  build->add_option("--output", table_out, "Merged table path")->required();

  auto* doclen = app.add_subcommand(
      "doclen", "Relate mean document size to sense-level accuracy gain");
  std::vector<std::string> report_paths, dataset_specs;
  std::string doclen_out;
  doclen->add_option("--report", report_paths, "Run-report CSV (repeatable)")
      ->required();
  doclen->add_option("--dataset", dataset_specs,
                     "name=path corpus mapping (repeatable)")
      ->required();
  doclen->add_option("--output", doclen_out, "Output CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_command(config_path);
    if (build->parsed())
      return build_senses_command(embeddings_path, bias_path, network_dir,
                                  delta, top_k, table_out);
    if (doclen->parsed())
      return doclen_command(report_paths, dataset_specs, doclen_out);
  } catch (const std::exception& e) {
    std::cerr << "sensepipe: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
