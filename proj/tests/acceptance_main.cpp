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
//
// End-to-end acceptance suite. Each criterion prints exactly one
// [PASS]/[FAIL] line; the exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "common/fixtures.hpp"
#include "common/gradcheck.hpp"
#include "sensepipe/classifier.hpp"
#include "sensepipe/disambiguate.hpp"
#include "sensepipe/embeddings.hpp"
#include "sensepipe/harness.hpp"

using namespace sensepipe;
using sensepipe::testing::TempDir;

namespace {

std::string g_tools_dir;
std::string g_data_dir;

struct Outcome {
  bool ok = false;
  std::string detail;
};

Outcome pass(std::string detail) { return {true, std::move(detail)}; }
Outcome fail(std::string detail) { return {false, std::move(detail)}; }

// ---------------------------------------------------------------- C1

Outcome oasis_golden() {
  auto net = load_network(NetworkPaths::in_directory(g_data_dir + "/oasis"));
  auto tokens =
      tag_and_lemmatize(tokenize("Oasis were a rock band from Manchester"),
                        TagLexicon(), StopwordSet::builtin());
  auto spans = extract_spans(tokens, net);
  if (spans.size() != 5)
    return fail("expected 5 spans, got " + std::to_string(spans.size()));
  CandidateGraph graph = build_graph(std::move(spans), net);
  DisambiguationResult result = disambiguate(graph, Theta(0.5));

  const std::vector<std::pair<std::string, size_t>> expected = {
      {"oasis#band", 3}, {"rock_band#music", 2}, {"manchester#city", 1}};
  if (result.resolved.size() != expected.size())
    return fail("resolved " + std::to_string(result.resolved.size()) +
                " spans, expected 3");
  for (size_t i = 0; i < expected.size(); ++i) {
    const Resolution& r = result.resolved[i];
    if (net.sense_id(r.sense) != expected[i].first ||
        r.degree != expected[i].second)
      return fail("iteration " + std::to_string(i + 1) + " picked " +
                  net.sense_id(r.sense) + " at degree " +
                  std::to_string(r.degree));
  }
  return pass("oasis#band(3) -> rock_band#music(2) -> manchester#city(1)");
}

// ---------------------------------------------------------------- C2

Outcome oracle_equivalence() {
  Rng rng(20260810);
  for (int round = 0; round < 500; ++round) {
    auto inst = sensepipe::testing::random_instance(rng, 10, 30);
    CandidateGraph graph = build_graph(inst.spans, inst.net);
    Theta theta(3.0 * rng.uniform01());
    DisambiguationResult fast = disambiguate(graph, theta);
    DisambiguationResult slow =
        sensepipe::testing::reference_disambiguate(graph, theta);
    if (!(fast == slow))
      return fail("divergence from the brute-force reference at graph " +
                  std::to_string(round));
  }
  return pass("500 random graphs identical to the brute-force reference");
}

// ---------------------------------------------------------------- C3

Outcome theta_monotonicity() {
  Rng rng(77002);
  int checked = 0;
  for (int round = 0; round < 200; ++round) {
    auto inst = sensepipe::testing::random_instance(rng, 10, 30);
    CandidateGraph graph = build_graph(inst.spans, inst.net);
    double t1 = 3.0 * rng.uniform01();
    double t2 = 3.0 * rng.uniform01();
    if (t1 > t2) std::swap(t1, t2);
    auto low = disambiguate(graph, Theta(t1));
    auto high = disambiguate(graph, Theta(t2));
    if (high.resolved.size() > low.resolved.size())
      return fail("theta " + std::to_string(t2) + " resolved more than " +
                  std::to_string(t1));
    for (size_t i = 0; i < high.resolved.size(); ++i) {
      if (!(high.resolved[i] == low.resolved[i]))
        return fail("shared prefix diverged at iteration " +
                    std::to_string(i));
    }
    ++checked;
  }
  return pass(std::to_string(checked) + " graph/theta pairs, 0 violations");
}

// ---------------------------------------------------------------- C4

Outcome decay_composition() {
  // Single bias word with a zero word vector isolates the decayed part.
  EmbeddingTable table(3);
  Vector v(3); v << 0.3, -1.7, 2.4;
  Vector zero = Vector::Zero(3);
  table.put("w1", v);
  table.put("anchor", zero);
  Vector composed =
      compose_sense(table, BiasList{"s", {"w1"}}, DecayParam(5.0), "anchor");
  Vector decayed = 2.0 * composed;
  Vector expected = std::exp(-0.2) * v;
  double rel = (decayed - expected).norm() / expected.norm();
  if (rel >= 1e-9)
    return fail("single-bias relative error " + std::to_string(rel));

  Vector v2(3); v2 << -0.9, 0.4, 1.1;
  table.put("w2", v2);
  Vector big_delta =
      2.0 * compose_sense(table, BiasList{"s", {"w1", "w2"}},
                          DecayParam(1e9), "anchor");
  Vector mean = (v + v2) / 2.0;
  double rel_mean = (big_delta - mean).norm() / mean.norm();
  if (rel_mean >= 1e-6)
    return fail("large-delta relative error " + std::to_string(rel_mean));
  std::ostringstream detail;
  detail << "single-bias rel err " << rel << ", delta->inf rel err "
         << rel_mean;
  return pass(detail.str());
}

// ---------------------------------------------------------------- C5

Outcome gradient_check() {
  ClassifierConfig cfg;
  cfg.dimension = 8;
  cfg.num_filters = 4;
  cfg.window_size = 3;
  cfg.lstm_hidden = 8;
  cfg.dropout_rate = 0.0;
  cfg.num_classes = 3;
  cfg.max_doc_len = 12;
  cfg.seed = 6;

  Rng rng(90101);
  std::vector<EncodedDoc> batch;
  for (int b = 0; b < 2; ++b) {
    EncodedDoc doc;
    doc.label = b % cfg.num_classes;
    doc.ids.resize(cfg.max_doc_len);
    for (int t = 0; t < cfg.max_doc_len; ++t)
      doc.ids[t] = static_cast<int>(rng.below(14));
    batch.push_back(std::move(doc));
  }

  double worst_overall = 0.0;
  for (int chunk : {0, 4}) {  // global and chunked pooling
    ClassifierConfig pooled = cfg;
    pooled.pool_chunk = chunk;
    auto report = sensepipe::testing::run_gradcheck(pooled, 14, batch,
                                                    512 + chunk, false);
    for (const auto& [tensor, err] : report.per_tensor) {
      if (err >= 1e-4)
        return fail(tensor + " relative error " + std::to_string(err) +
                    (chunk ? " (chunked)" : " (global)"));
    }
    worst_overall = std::max(worst_overall, report.worst);
  }
  std::ostringstream detail;
  detail << "max relative error " << worst_overall
         << " over all tensors, global+chunked";
  return pass(detail.str());
}

// ---------------------------------------------------------------- C6

Outcome overfit_toy() {
  ClassifierConfig cfg;
  cfg.dimension = 16;
  cfg.num_filters = 8;
  cfg.window_size = 2;
  cfg.pool_chunk = 3;
  cfg.lstm_hidden = 8;
  cfg.dropout_rate = 0.0;
  cfg.num_classes = 2;
  cfg.max_doc_len = 8;
  cfg.learning_rate = 0.01;
  cfg.epochs = 200;
  cfg.batch_size = 8;
  cfg.seed = 29;

  std::vector<std::vector<std::string>> texts;
  std::vector<int> labels;
  for (int i = 0; i < 4; ++i) {
    texts.push_back({"north", "light", "tag" + std::to_string(i), "shared"});
    labels.push_back(0);
    texts.push_back({"south", "light", "tag" + std::to_string(i), "shared"});
    labels.push_back(1);
  }
  Vocabulary vocab = Vocabulary::build(texts);
  std::vector<EncodedDoc> docs;
  for (size_t i = 0; i < texts.size(); ++i)
    docs.push_back(encode_document(texts[i], vocab, cfg, labels[i]));

  TrainResult first = train(docs, cfg, vocab);
  size_t correct = 0;
  for (const EncodedDoc& doc : docs)
    if (predict(first.params, cfg, doc) == doc.label) ++correct;
  if (correct != docs.size())
    return fail("training accuracy " + std::to_string(correct) + "/8");

  TrainResult second = train(docs, cfg, vocab);
  TempDir dir("accept_overfit");
  save_parameters(first.params, cfg, dir.file("a.model"));
  save_parameters(second.params, cfg, dir.file("b.model"));
  if (sensepipe::testing::read_file(dir.file("a.model")) !=
      sensepipe::testing::read_file(dir.file("b.model")))
    return fail("same-seed retrain is not byte-identical");
  return pass("8/8 training accuracy within 200 epochs, reruns identical");
}

// ---------------------------------------------------------------- C7

// Two classes distinguishable only through which sense of the shared
// lemma "bolt" the document context supports: class 0 documents carry a
// majority of anchors wired to bolt#A, class 1 a majority wired to bolt#B.
// Every anchor and filler word occurs in both classes.
struct SyntheticCorpus {
  SemanticNetwork net;
  LabeledCorpus corpus;
};

SyntheticCorpus make_ambiguity_corpus(size_t docs_per_class, Rng& rng) {
  SyntheticCorpus out;
  const int kAnchors = 30;
  SenseIndex bolt_a = out.net.add_sense("bolt#A");
  SenseIndex bolt_b = out.net.add_sense("bolt#B");
  out.net.add_lexicalization("bolt", Pos::kNoun, bolt_a);
  out.net.add_lexicalization("bolt", Pos::kNoun, bolt_b);
  std::vector<SenseIndex> u_senses, v_senses;
  for (int i = 0; i < kAnchors; ++i) {
    SenseIndex u = out.net.add_sense("u" + std::to_string(i) + "#s");
    SenseIndex v = out.net.add_sense("v" + std::to_string(i) + "#s");
    out.net.add_edge(bolt_a, u);
    out.net.add_edge(bolt_b, v);
    out.net.add_lexicalization("u" + std::to_string(i), Pos::kNoun, u);
    out.net.add_lexicalization("v" + std::to_string(i), Pos::kNoun, v);
    u_senses.push_back(u);
    v_senses.push_back(v);
  }

  out.corpus.label_set = {"alpha", "beta"};
  auto sample_anchors = [&rng, kAnchors](int count, const std::string& prefix,
                                         std::vector<std::string>& into) {
    std::vector<int> pool(kAnchors);
    for (int i = 0; i < kAnchors; ++i) pool[i] = i;
    rng.shuffle(pool);
    for (int i = 0; i < count; ++i)
      into.push_back(prefix + std::to_string(pool[i]));
  };

  for (size_t d = 0; d < docs_per_class * 2; ++d) {
    const bool is_alpha = d % 2 == 0;
    std::vector<std::string> words;
    for (int k = 0; k < 3; ++k) words.push_back("bolt");
    sample_anchors(5, is_alpha ? "u" : "v", words);
    sample_anchors(4, is_alpha ? "v" : "u", words);
    while (words.size() < 50)
      words.push_back("f" + std::to_string(rng.below(60)));
    rng.shuffle(words);
    std::string text;
    for (size_t i = 0; i < words.size(); ++i) {
      if (i > 0) text += ' ';
      text += words[i];
    }
    out.corpus.docs.emplace_back(is_alpha ? "alpha" : "beta",
                                 std::move(text));
  }
  return out;
}

Outcome semantification_benefit() {
  Rng rng(424242);
  SyntheticCorpus synth = make_ambiguity_corpus(120, rng);

  ExperimentConfig config;
  config.dataset_name = "synthetic";
  config.folds = 10;
  config.seed = 3;
  config.theta_grid = {0.5};
  config.classifier.dimension = 24;
  config.classifier.num_filters = 12;
  config.classifier.window_size = 3;
  config.classifier.pool_chunk = 4;
  config.classifier.lstm_hidden = 10;
  config.classifier.dropout_rate = 0.0;
  config.classifier.max_doc_len = 56;
  config.classifier.learning_rate = 0.01;
  config.classifier.epochs = 20;
  config.classifier.batch_size = 16;
  config.classifier.init_mode = InitMode::kRandom;

  ExperimentResources res;
  res.network = &synth.net;

  config.mode = SemantifyMode::kSense;
  ExperimentReport sense = run_experiment(config, synth.corpus, res);
  config.mode = SemantifyMode::kWord;
  ExperimentReport word = run_experiment(config, synth.corpus, res);

  double gain = sense.mean_accuracy - word.mean_accuracy;
  std::ostringstream detail;
  detail << "sense " << sense.mean_accuracy << " vs word "
         << word.mean_accuracy << " (gain " << gain * 100 << " points)";
  if (gain < 0.10) return fail(detail.str());
  return pass(detail.str());
}

// ---------------------------------------------------------------- C8

Outcome protocol_fidelity() {
  const auto& grid = default_theta_grid();
  const std::vector<double> expected = {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  if (grid != expected) return fail("default theta grid is wrong");

  auto folds = kfold_split(103, 10, 31);
  auto again = kfold_split(103, 10, 31);
  std::vector<bool> seen(103, false);
  size_t smallest = 103, largest = 0;
  for (size_t f = 0; f < folds.size(); ++f) {
    if (folds[f].test != again[f].test) return fail("folds not reproducible");
    smallest = std::min(smallest, folds[f].test.size());
    largest = std::max(largest, folds[f].test.size());
    for (size_t i : folds[f].test) {
      if (seen[i]) return fail("folds overlap");
      seen[i] = true;
    }
  }
  for (bool s : seen)
    if (!s) return fail("folds do not cover every document");
  if (largest - smallest > 1) return fail("fold sizes differ by more than 1");

  // Full coverage makes micro-F1 the same number as accuracy.
  Rng rng(555);
  for (int round = 0; round < 50; ++round) {
    size_t classes = 2 + rng.below(5);
    std::vector<int> gold, pred;
    for (int i = 0; i < 40; ++i) {
      gold.push_back(static_cast<int>(rng.below(classes)));
      pred.push_back(static_cast<int>(rng.below(classes)));
    }
    Metrics m = compute_metrics(gold, pred, classes);
    if (std::abs(m.micro_f1 - m.accuracy) > 1e-12)
      return fail("micro-F1 deviates from accuracy");
  }
  return pass("7-value grid, balanced reproducible folds, micro-F1 == "
              "accuracy on 50 runs");
}

// ---------------------------------------------------------------- C9

int run(const std::string& command) {
  return std::system(command.c_str());
}

Outcome determinism() {
  TempDir dir("accept_determinism");
  const std::string net_dir = g_data_dir + "/oasis";
  const std::string input = g_data_dir + "/oasis/input.txt";
  const std::string semantify = g_tools_dir + "/semantify";
  const std::string sensepipe_cli = g_tools_dir + "/sensepipe";

  for (const std::string mode : {"sense", "supersense", "word"}) {
    std::string base = semantify + " --network " + net_dir + " --theta 0.5" +
                       " --mode " + mode + " --input " + input;
    if (run(base + " --output " + dir.file(mode + "_a.txt")) != 0 ||
        run(base + " --output " + dir.file(mode + "_b.txt") +
            " --workers 4") != 0)
      return fail("semantify exited nonzero in " + mode + " mode");
    if (sensepipe::testing::read_file(dir.file(mode + "_a.txt")) !=
        sensepipe::testing::read_file(dir.file(mode + "_b.txt")))
      return fail("semantify outputs differ in " + mode + " mode");
  }

  // A small experiment config, run twice.
  std::string corpus;
  for (int i = 0; i < 9; ++i) {
    corpus += "music\tOasis were a rock band from Manchester take " +
              std::to_string(i) + "\n";
    corpus += "nature\tthe oasis shimmered over quiet sand " +
              std::to_string(i) + "\n";
  }
  std::string corpus_path = dir.write("toy.tsv", corpus);
  std::string config_text =
      "dataset = " + corpus_path + "\n" +
      "dataset_name = toy\nmode = sense\nnetwork = " + net_dir + "\n" +
      "theta_grid = 0.5\nfolds = 3\nseed = 17\ndimension = 10\n" +
      "num_filters = 5\nwindow_size = 2\npool_chunk = 3\nlstm_hidden = 6\n" +
      "dropout = 0.1\nmax_doc_len = 12\nlearning_rate = 0.01\nepochs = 4\n" +
      "batch_size = 6\n";
  std::string config_a =
      dir.write("exp_a.conf",
                config_text + "output = " + dir.file("report_a.csv") + "\n");
  std::string config_b =
      dir.write("exp_b.conf",
                config_text + "output = " + dir.file("report_b.csv") + "\n");
  if (run(sensepipe_cli + " run --config " + config_a + " > /dev/null 2>&1") !=
          0 ||
      run(sensepipe_cli + " run --config " + config_b + " > /dev/null 2>&1") !=
          0)
    return fail("sensepipe run exited nonzero");
  std::string report_a = sensepipe::testing::read_file(dir.file("report_a.csv"));
  if (report_a.empty()) return fail("empty experiment report");
  if (report_a != sensepipe::testing::read_file(dir.file("report_b.csv")))
    return fail("experiment reports differ between reruns");

  // Sense-table construction, run twice.
  std::string words = dir.write(
      "words.vec", "4 3\noasis 1 0 0\nrock 0 1 0\nband 0 0 1\nsand 1 1 1\n");
  std::string bias = dir.write(
      "bias.tsv", "oasis#band\trock,band\nrock_band#music\trock,band\n");
  std::string build = sensepipe_cli + " build-senses --embeddings " + words +
                      " --bias " + bias + " --network " + net_dir +
                      " --delta 5";
  if (run(build + " --output " + dir.file("table_a.vec") + " 2>/dev/null") !=
          0 ||
      run(build + " --output " + dir.file("table_b.vec") + " 2>/dev/null") !=
          0)
    return fail("sensepipe build-senses exited nonzero");
  if (sensepipe::testing::read_file(dir.file("table_a.vec")) !=
      sensepipe::testing::read_file(dir.file("table_b.vec")))
    return fail("sense tables differ between reruns");

  // Doc-size/gain summary, run twice off the experiment report. The word
  // row is synthesized so the report pair covers both modes.
  std::string word_report =
      "dataset,mode,init,fold,theta,accuracy,macro_f1\n"
      "toy,word,random,mean,0,0.500000,0.400000\n";
  std::string word_path = dir.write("report_word.csv", word_report);
  std::string doclen = sensepipe_cli + " doclen --report " +
                       dir.file("report_a.csv") + " --report " + word_path +
                       " --dataset toy=" + corpus_path;
  if (run(doclen + " --output " + dir.file("gain_a.csv") + " >/dev/null") !=
          0 ||
      run(doclen + " --output " + dir.file("gain_b.csv") + " >/dev/null") !=
          0)
    return fail("sensepipe doclen exited nonzero");
  if (sensepipe::testing::read_file(dir.file("gain_a.csv")) !=
      sensepipe::testing::read_file(dir.file("gain_b.csv")))
    return fail("doclen summaries differ between reruns");

  return pass(
      "semantify (3 modes), run, build-senses, and doclen byte-identical");
}

struct Criterion {
  std::string name;
  std::function<Outcome()> body;
  double time_budget_s;  // 0 = no bound
};

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i + 1 < argc; i += 2) {
    std::string flag = argv[i];
    if (flag == "--tools-dir") g_tools_dir = argv[i + 1];
    if (flag == "--data-dir") g_data_dir = argv[i + 1];
  }
  if (g_tools_dir.empty() || g_data_dir.empty()) {
    std::cerr << "usage: acceptance --tools-dir DIR --data-dir DIR\n";
    return 64;
  }

  const std::vector<Criterion> criteria = {
      {"oasis golden walkthrough", oasis_golden, 1.0},
      {"incremental engine == brute-force oracle (500 graphs)",
       oracle_equivalence, 10.0},
      {"theta-monotonicity (200 graph/theta pairs)", theta_monotonicity, 0.0},
      {"exponential-decay composition numerics", decay_composition, 0.0},
      {"gradient check vs central differences", gradient_check, 30.0},
      {"toy-corpus overfit within 200 epochs", overfit_toy, 0.0},
      {"synthetic sense-mode benefit >= 10 points", semantification_benefit,
       300.0},
      {"protocol fidelity (grid, folds, micro-F1)", protocol_fidelity, 0.0},
      {"CLI determinism across reruns", determinism, 0.0},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].body();
    } catch (const std::exception& e) {
      outcome = fail(std::string("exception: ") + e.what());
    }
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (outcome.ok && criteria[i].time_budget_s > 0.0 &&
        elapsed > criteria[i].time_budget_s) {
      outcome = fail("over time budget: " + std::to_string(elapsed) + "s > " +
                     std::to_string(criteria[i].time_budget_s) + "s");
    }
    if (!outcome.ok) ++failures;
    std::printf("[%s] C%zu %s (%.2fs): %s\n", outcome.ok ? "PASS" : "FAIL",
                i + 1, criteria[i].name.c_str(), elapsed,
                outcome.detail.c_str());
    std::fflush(stdout);
  }
  if (failures == 0)
    std::printf("all %zu acceptance criteria passed\n", criteria.size());
  else
    std::printf("%d acceptance criteria FAILED\n", failures);
  return failures;
}
