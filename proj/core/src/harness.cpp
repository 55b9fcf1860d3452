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

#include "sensepipe/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "sensepipe/errors.hpp"
#include "sensepipe/rng.hpp"

namespace sensepipe {
namespace {

std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

uint64_t mix_seed(uint64_t seed, uint64_t salt) {
  uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  return x;
}

}  // namespace

int LabeledCorpus::label_index(std::string_view label) const {
  for (size_t i = 0; i < label_set.size(); ++i)
    if (label_set[i] == label) return static_cast<int>(i);
  return -1;
}

double LabeledCorpus::mean_doc_tokens() const {
  if (docs.empty()) return 0.0;
  size_t total = 0;
  for (const auto& [label, text] : docs) total += tokenize(text).size();
  return static_cast<double>(total) / static_cast<double>(docs.size());
}

LabeledCorpus load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  LabeledCorpus corpus;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
      throw ParseError(path, line_no, "expected label<TAB>text");
    std::string label = line.substr(0, tab);
    if (corpus.label_index(label) < 0) corpus.label_set.push_back(label);
    corpus.docs.emplace_back(std::move(label), line.substr(tab + 1));
  }
  if (corpus.docs.empty()) throw std::runtime_error(path + ": empty corpus");
  return corpus;
}

std::vector<FoldSplit> kfold_split(size_t count, int k, uint64_t seed) {
  if (k < 2) throw std::invalid_argument("k must be >= 2");
  if (static_cast<size_t>(k) > count)
    throw std::invalid_argument("k exceeds document count");
  std::vector<size_t> order(count);
  for (size_t i = 0; i < count; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);

  std::vector<FoldSplit> folds(k);
  const size_t base = count / static_cast<size_t>(k);
  const size_t extra = count % static_cast<size_t>(k);
  size_t begin = 0;
  for (int f = 0; f < k; ++f) {
    size_t size = base + (static_cast<size_t>(f) < extra ? 1 : 0);
    for (size_t i = 0; i < count; ++i) {
      if (i >= begin && i < begin + size)
        folds[f].test.push_back(order[i]);
      else
        folds[f].train.push_back(order[i]);
    }
    begin += size;
  }
  return folds;
}

Metrics compute_metrics(const std::vector<int>& gold,
                        const std::vector<int>& predicted,
                        size_t num_classes) {
  if (gold.size() != predicted.size())
    throw std::invalid_argument("gold/predicted size mismatch");
  if (gold.empty()) throw std::invalid_argument("empty evaluation set");
  Metrics m;
  m.confusion.assign(num_classes, std::vector<size_t>(num_classes, 0));
  size_t correct = 0;
  for (size_t i = 0; i < gold.size(); ++i) {
    if (gold[i] < 0 || static_cast<size_t>(gold[i]) >= num_classes ||
        predicted[i] < 0 || static_cast<size_t>(predicted[i]) >= num_classes)
      throw std::invalid_argument("label outside label set");
    m.confusion[gold[i]][predicted[i]] += 1;
    if (gold[i] == predicted[i]) ++correct;
  }
  m.accuracy = static_cast<double>(correct) / static_cast<double>(gold.size());

  m.precision.assign(num_classes, 0.0);
  m.recall.assign(num_classes, 0.0);
  m.f1.assign(num_classes, 0.0);
  size_t tp_total = 0, fp_total = 0, fn_total = 0;
  for (size_t c = 0; c < num_classes; ++c) {
    size_t tp = m.confusion[c][c];
    size_t fn = 0, fp = 0;
    for (size_t o = 0; o < num_classes; ++o) {
      if (o != c) {
        fn += m.confusion[c][o];
        fp += m.confusion[o][c];
      }
    }
    tp_total += tp;
    fp_total += fp;
    fn_total += fn;
    m.precision[c] = tp + fp == 0
                         ? 0.0
                         : static_cast<double>(tp) / static_cast<double>(tp + fp);
    m.recall[c] = tp + fn == 0
                      ? 0.0
                      : static_cast<double>(tp) / static_cast<double>(tp + fn);
    double pr = m.precision[c] + m.recall[c];
    m.f1[c] = pr == 0.0 ? 0.0 : 2.0 * m.precision[c] * m.recall[c] / pr;
    m.macro_f1 += m.f1[c];
  }
  m.macro_f1 /= static_cast<double>(num_classes);
  double denom = 2.0 * static_cast<double>(tp_total) +
                 static_cast<double>(fp_total) + static_cast<double>(fn_total);
  m.micro_f1 =
      denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(tp_total) / denom;
  return m;
}

const std::vector<double>& default_theta_grid() {
  static const std::vector<double> grid = {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  return grid;
}

void ExperimentConfig::validate() const {
  if (theta_grid.empty()) throw std::invalid_argument("empty theta grid");
  for (size_t i = 0; i < theta_grid.size(); ++i) {
    if (theta_grid[i] < 0.0)
      throw std::invalid_argument("theta grid values must be >= 0");
    if (i > 0 && theta_grid[i] <= theta_grid[i - 1])
      throw std::invalid_argument("theta grid must be strictly ascending");
  }
  if (test_dataset_path.empty() && folds < 2)
    throw std::invalid_argument("folds must be >= 2");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  classifier.validate();
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  ExperimentConfig config;
  std::string line;
  size_t line_no = 0;
  auto trim = [](const std::string& s) {
    size_t a = s.find_first_not_of(" \t");
    size_t b = s.find_last_not_of(" \t");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    size_t eq = text.find('=');
    if (eq == std::string::npos)
      throw ParseError(path, line_no, "expected key = value");
    std::string key = trim(text.substr(0, eq));
    std::string value = trim(text.substr(eq + 1));
    try {
      if (key == "dataset") config.dataset_path = value;
      else if (key == "dataset_name") config.dataset_name = value;
      else if (key == "test_dataset") config.test_dataset_path = value;
      else if (key == "network") config.network_dir = value;
      else if (key == "embeddings") config.embeddings_path = value;
      else if (key == "lexicon") config.lexicon_path = value;
      else if (key == "stopwords") config.stopwords_path = value;
      else if (key == "output") config.output_csv = value;
      else if (key == "mode") {
        auto mode = parse_mode(value);
        if (!mode) throw std::invalid_argument("bad mode: " + value);
        config.mode = *mode;
      } else if (key == "init") {
        auto init = parse_init_mode(value);
        if (!init) throw std::invalid_argument("bad init: " + value);
        config.classifier.init_mode = *init;
      } else if (key == "theta_grid") {
        config.theta_grid.clear();
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ','))
          config.theta_grid.push_back(std::stod(trim(item)));
      } else if (key == "folds") config.folds = std::stoi(value);
      else if (key == "seed") {
        config.seed = std::stoull(value);
        config.classifier.seed = config.seed;
      } else if (key == "workers") config.workers = std::stoi(value);
      else if (key == "max_vocab") config.max_vocab = std::stoull(value);
      else if (key == "dimension") config.classifier.dimension = std::stoi(value);
      else if (key == "num_filters") config.classifier.num_filters = std::stoi(value);
      else if (key == "window_size") config.classifier.window_size = std::stoi(value);
      else if (key == "pool_chunk") config.classifier.pool_chunk = std::stoi(value);
      else if (key == "lstm_hidden") config.classifier.lstm_hidden = std::stoi(value);
      else if (key == "dropout") config.classifier.dropout_rate = std::stod(value);
      else if (key == "max_doc_len") config.classifier.max_doc_len = std::stoi(value);
      else if (key == "learning_rate") config.classifier.learning_rate = std::stod(value);
      else if (key == "epochs") config.classifier.epochs = std::stoi(value);
      else if (key == "batch_size") config.classifier.batch_size = std::stoi(value);
      else throw std::invalid_argument("unknown key: " + key);
    } catch (const std::invalid_argument& e) {
      throw ParseError(path, line_no, e.what());
    }
  }
  if (config.dataset_path.empty())
    throw std::runtime_error(path + ": missing required key 'dataset'");
  if (config.dataset_name.empty())
    config.dataset_name =
        std::filesystem::path(config.dataset_path).stem().string();
  return config;
}

std::vector<std::vector<std::string>> semantify_texts(
    const std::vector<std::string>& texts, const ExperimentConfig& config,
    const ExperimentResources& res, double theta, int workers) {
  static const TagLexicon kEmptyLexicon;
  const TagLexicon& lexicon = res.lexicon ? *res.lexicon : kEmptyLexicon;
  const StopwordSet& stopwords =
      res.stopwords ? *res.stopwords : StopwordSet::builtin();

  if (config.mode != SemantifyMode::kWord && !res.network)
    throw std::invalid_argument("sense/supersense mode requires a network");

  std::vector<std::vector<std::string>> out(texts.size());
  auto work = [&](size_t begin, size_t end) {
    for (size_t i = begin; i < end; ++i) {
      if (config.mode == SemantifyMode::kWord) {
        std::vector<std::string> words;
        for (const Token& t : tokenize(texts[i]))
          words.push_back(lowercase_ascii(t.surface));
        out[i] = std::move(words);
      } else {
        out[i] = semantify(texts[i], *res.network, lexicon, stopwords,
                           Theta(theta), config.mode)
                     .tokens;
      }
    }
  };

  if (workers <= 1 || texts.size() < 2) {
    work(0, texts.size());
    return out;
  }
  size_t n_threads = std::min<size_t>(workers, texts.size());
  std::vector<std::thread> threads;
  size_t chunk = (texts.size() + n_threads - 1) / n_threads;
  for (size_t t = 0; t < n_threads; ++t) {
    size_t begin = t * chunk;
    size_t end = std::min(texts.size(), begin + chunk);
    if (begin < end) threads.emplace_back(work, begin, end);
  }
  for (auto& thread : threads) thread.join();
  return out;
}

namespace {

struct PreparedSplit {
  std::vector<std::vector<std::string>> train_tokens;
  std::vector<std::vector<std::string>> test_tokens;
  std::vector<int> train_labels;
  std::vector<int> test_labels;
};

PreparedSplit prepare_split(const LabeledCorpus& corpus,
                            const std::vector<size_t>& train_idx,
                            const std::vector<size_t>& test_idx,
                            const LabeledCorpus* test_corpus,
                            const std::vector<std::string>& label_set,
                            const ExperimentConfig& config,
                            const ExperimentResources& res, double theta) {
  auto index_of = [&label_set](const std::string& label) {
    auto it = std::find(label_set.begin(), label_set.end(), label);
    return static_cast<int>(it - label_set.begin());
  };

  std::vector<std::string> train_texts, test_texts;
  PreparedSplit split;
  for (size_t i : train_idx) {
    train_texts.push_back(corpus.docs[i].second);
    split.train_labels.push_back(index_of(corpus.docs[i].first));
  }
  if (test_corpus) {
    for (const auto& [label, text] : test_corpus->docs) {
      test_texts.push_back(text);
      split.test_labels.push_back(index_of(label));
    }
  } else {
    for (size_t i : test_idx) {
      test_texts.push_back(corpus.docs[i].second);
      split.test_labels.push_back(index_of(corpus.docs[i].first));
    }
  }
  split.train_tokens =
      semantify_texts(train_texts, config, res, theta, config.workers);
  split.test_tokens =
      semantify_texts(test_texts, config, res, theta, config.workers);
  return split;
}

Metrics evaluate_split(const PreparedSplit& split,
                       const ExperimentConfig& config,
                       const ExperimentResources& res, size_t num_classes,
                       uint64_t seed) {
  Vocabulary vocab = Vocabulary::build(split.train_tokens, config.max_vocab);
  ClassifierConfig cc = config.classifier;
  cc.num_classes = static_cast<int>(num_classes);
  cc.seed = seed;
  if (cc.init_mode == InitMode::kPretrained && !res.embeddings)
    throw std::invalid_argument("pretrained init requires embeddings");

  std::vector<EncodedDoc> train_docs, test_docs;
  for (size_t i = 0; i < split.train_tokens.size(); ++i)
    train_docs.push_back(encode_document(split.train_tokens[i], vocab, cc,
                                         split.train_labels[i]));
  for (size_t i = 0; i < split.test_tokens.size(); ++i)
    test_docs.push_back(encode_document(split.test_tokens[i], vocab, cc,
                                        split.test_labels[i]));

  TrainResult trained = train(train_docs, cc, vocab, res.embeddings);
  std::vector<int> predicted;
  predicted.reserve(test_docs.size());
  for (const EncodedDoc& doc : test_docs)
    predicted.push_back(predict(trained.params, cc, doc));
  return compute_metrics(split.test_labels, predicted, num_classes);
}

}  // namespace

double tune_theta(const LabeledCorpus& corpus,
                  const std::vector<size_t>& train_indices,
                  const std::vector<double>& grid,
                  const ExperimentConfig& config,
                  const ExperimentResources& res, uint64_t seed) {
  if (grid.empty()) throw std::invalid_argument("empty theta grid");
  if (grid.size() == 1) return grid[0];
  if (train_indices.size() < 10)
    throw std::invalid_argument("theta tuning needs >= 10 training docs");

  std::vector<size_t> order = train_indices;
  Rng rng(mix_seed(seed, 0x7474));
  rng.shuffle(order);
  size_t val_size = std::max<size_t>(1, order.size() / 10);
  std::vector<size_t> inner_train(order.begin(), order.end() - val_size);
  std::vector<size_t> inner_val(order.end() - val_size, order.end());

  double best_theta = grid[0];
  double best_accuracy = -1.0;
  for (double theta : grid) {
    PreparedSplit split =
        prepare_split(corpus, inner_train, inner_val, nullptr,
                      corpus.label_set, config, res, theta);
    Metrics metrics = evaluate_split(split, config, res,
                                     corpus.label_set.size(), seed);
    if (metrics.accuracy > best_accuracy) {
      best_accuracy = metrics.accuracy;
      best_theta = theta;
    }
  }
  return best_theta;
}

std::string ExperimentReport::to_csv() const {
  std::string csv = "dataset,mode,init,fold,theta,accuracy,macro_f1\n";
  auto row = [&](const std::string& fold, double theta, double acc,
                 double macro) {
    csv += dataset + "," + std::string(to_string(mode)) + "," +
           std::string(to_string(init)) + "," + fold + "," +
           format("%.6g", theta) + "," + format("%.6f", acc) + "," +
           format("%.6f", macro) + "\n";
  };
  for (const FoldResult& fr : folds)
    row(std::to_string(fr.fold), fr.theta, fr.metrics.accuracy,
        fr.metrics.macro_f1);
  row("mean", mean_theta, mean_accuracy, mean_macro_f1);
  return csv;
}

ExperimentReport run_experiment(const ExperimentConfig& config,
                                const LabeledCorpus& corpus,
                                const ExperimentResources& res,
                                const LabeledCorpus* test_corpus) {
  config.validate();
  if (config.mode != SemantifyMode::kWord && !res.network)
    throw std::invalid_argument("sense/supersense mode requires a network");
  if (config.classifier.init_mode == InitMode::kPretrained && !res.embeddings)
    throw std::invalid_argument("pretrained init requires embeddings");

  // Class indices come from first appearance, train corpus first, and stay
  // fixed across folds.
  std::vector<std::string> label_set = corpus.label_set;
  if (test_corpus) {
    for (const std::string& label : test_corpus->label_set) {
      if (std::find(label_set.begin(), label_set.end(), label) ==
          label_set.end())
        label_set.push_back(label);
    }
  }
  const size_t num_classes = label_set.size();
  if (num_classes < 2)
    throw std::invalid_argument("need at least two classes");

  std::vector<FoldSplit> splits;
  if (test_corpus) {
    FoldSplit split;
    for (size_t i = 0; i < corpus.docs.size(); ++i) split.train.push_back(i);
    splits.push_back(std::move(split));
  } else {
    splits = kfold_split(corpus.docs.size(), config.folds, config.seed);
  }

  ExperimentReport report;
  report.dataset = config.dataset_name.empty() ? config.dataset_path
                                               : config.dataset_name;
  report.mode = config.mode;
  report.init = config.classifier.init_mode;
  report.mean_doc_tokens = corpus.mean_doc_tokens();

  for (size_t f = 0; f < splits.size(); ++f) {
    uint64_t fold_seed = mix_seed(config.seed, f);
    double theta = 0.0;
    if (config.mode != SemantifyMode::kWord) {
      theta = tune_theta(corpus, splits[f].train, config.theta_grid, config,
                         res, fold_seed);
    }
    PreparedSplit split =
        prepare_split(corpus, splits[f].train, splits[f].test, test_corpus,
                      label_set, config, res, theta);
    Metrics metrics =
        evaluate_split(split, config, res, num_classes, fold_seed);
    // Full coverage: every document gets exactly one prediction.
    if (std::abs(metrics.micro_f1 - metrics.accuracy) > 1e-12)
      throw std::logic_error("micro-F1 deviates from accuracy");
    report.folds.push_back(FoldResult{static_cast<int>(f), theta, metrics});
  }

  for (const FoldResult& fr : report.folds) {
    report.mean_theta += fr.theta;
    report.mean_accuracy += fr.metrics.accuracy;
    report.mean_macro_f1 += fr.metrics.macro_f1;
  }
  const double n = static_cast<double>(report.folds.size());
  report.mean_theta /= n;
  report.mean_accuracy /= n;
  report.mean_macro_f1 /= n;
  return report;
}

std::string report_doclen_gain(std::vector<DatasetGain> rows) {
  std::sort(rows.begin(), rows.end(),
            [](const DatasetGain& a, const DatasetGain& b) {
              if (a.avg_doc_tokens != b.avg_doc_tokens)
                return a.avg_doc_tokens < b.avg_doc_tokens;
              return a.dataset < b.dataset;
            });
  std::string csv = "dataset,avg_doc_size,accuracy_gain\n";
  for (const DatasetGain& row : rows) {
    csv += row.dataset + "," + format("%.3f", row.avg_doc_tokens) + "," +
           format("%.6f", row.mode_accuracy - row.word_accuracy) + "\n";
  }
  return csv;
}

}  // namespace sensepipe
