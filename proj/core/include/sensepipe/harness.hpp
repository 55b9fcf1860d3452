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
#include <vector>

#include "sensepipe/classifier.hpp"
#include "sensepipe/disambiguate.hpp"
#include "sensepipe/embeddings.hpp"
#include "sensepipe/network.hpp"
#include "sensepipe/preprocess.hpp"

namespace sensepipe {

struct LabeledCorpus {
  std::vector<std::pair<std::string, std::string>> docs;  // (label, text)
  std::vector<std::string> label_set;                     // first appearance

  int label_index(std::string_view label) const;
  // Mean tokenize() token count per document.
  double mean_doc_tokens() const;
};

// One document per line: label<TAB>text.
LabeledCorpus load_corpus(const std::string& path);

struct FoldSplit {
  std::vector<size_t> train;
  std::vector<size_t> test;
};

// Seeded shuffle followed by k contiguous test folds; folds are disjoint,
// cover all indices, and differ in size by at most one.
std::vector<FoldSplit> kfold_split(size_t count, int k, uint64_t seed);

struct Metrics {
  double accuracy = 0.0;
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;
  std::vector<double> precision, recall, f1;        // per class
  std::vector<std::vector<size_t>> confusion;       // gold x predicted
};

// Per-class F1 is 0 when precision+recall is 0; classes absent from the
// fold still contribute their zero to the macro average.
Metrics compute_metrics(const std::vector<int>& gold,
                        const std::vector<int>& predicted,
                        size_t num_classes);

// The seven-point tuning grid {0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0}.
const std::vector<double>& default_theta_grid();

struct ExperimentConfig {
  std::string dataset_path;
  std::string dataset_name;       // defaults to the dataset file stem
  std::string test_dataset_path;  // set = fixed train/test split, unset = CV
  std::string network_dir;
  std::string embeddings_path;
  std::string lexicon_path;
  std::string stopwords_path;
  std::string output_csv;
  SemantifyMode mode = SemantifyMode::kWord;
  std::vector<double> theta_grid = default_theta_grid();
  int folds = 10;
  uint64_t seed = 13;
  int workers = 1;
  size_t max_vocab = 250000;
  ClassifierConfig classifier;

  void validate() const;
};

// Flat key=value file, '#' comments. Unknown keys are rejected.
ExperimentConfig load_experiment_config(const std::string& path);

// Loaded resources the experiment reads; null members fall back to an empty
// lexicon / the built-in stopwords, and are errors only where required
// (network for sense modes, embeddings for pretrained init).
struct ExperimentResources {
  const SemanticNetwork* network = nullptr;
  const TagLexicon* lexicon = nullptr;
  const StopwordSet* stopwords = nullptr;
  const EmbeddingTable* embeddings = nullptr;
};

// Semantifies every text at the given theta/mode, optionally fanning out
// over worker threads; output order always matches input order.
std::vector<std::vector<std::string>> semantify_texts(
    const std::vector<std::string>& texts, const ExperimentConfig& config,
    const ExperimentResources& res, double theta, int workers = 1);

// Trains one model per grid value on an inner 90/10 split of the given
// training documents and returns the theta with the best inner accuracy
// (smallest on ties). A singleton grid returns its value directly.
// Requires at least 10 training documents.
double tune_theta(const LabeledCorpus& corpus,
                  const std::vector<size_t>& train_indices,
                  const std::vector<double>& grid,
                  const ExperimentConfig& config,
                  const ExperimentResources& res, uint64_t seed);

struct FoldResult {
  int fold = 0;
  double theta = 0.0;
  Metrics metrics;
};

struct ExperimentReport {
  std::string dataset;
  SemantifyMode mode = SemantifyMode::kWord;
  InitMode init = InitMode::kRandom;
  std::vector<FoldResult> folds;
  double mean_theta = 0.0;
  double mean_accuracy = 0.0;
  double mean_macro_f1 = 0.0;
  double mean_doc_tokens = 0.0;

  // Header dataset,mode,init,fold,theta,accuracy,macro_f1; one row per
  // fold plus a "mean" row.
  std::string to_csv() const;
};

// Per fold: tune theta on the training portion (word mode skips tuning),
// semantify train and test at the chosen theta, build the vocabulary from
// the training side only, train, evaluate. Asserts the full-coverage
// micro-F1 == accuracy identity on every fold.
ExperimentReport run_experiment(const ExperimentConfig& config,
                                const LabeledCorpus& corpus,
                                const ExperimentResources& res,
                                const LabeledCorpus* test_corpus = nullptr);

struct DatasetGain {
  std::string dataset;
  double avg_doc_tokens = 0.0;
  double word_accuracy = 0.0;
  double mode_accuracy = 0.0;
};

// CSV relating mean document size to the sense-level accuracy gain; rows
// ascend by document size. Header: dataset,avg_doc_size,accuracy_gain.
std::string report_doclen_gain(std::vector<DatasetGain> rows);

}  // namespace sensepipe
