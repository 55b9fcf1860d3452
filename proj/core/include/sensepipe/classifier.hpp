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
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sensepipe/embeddings.hpp"
#include "sensepipe/rng.hpp"

namespace sensepipe {

enum class InitMode { kRandom, kPretrained };

std::string_view to_string(InitMode mode);
std::optional<InitMode> parse_init_mode(std::string_view text);

// Embedding lookup -> dropout -> 1-D convolution with ReLU -> chunked max
// pooling -> LSTM -> softmax. pool_chunk = 0 collapses the feature map to a
// single pooled step (global max pooling).
struct ClassifierConfig {
  int dimension = 300;
  int num_filters = 100;
  int window_size = 5;
  int pool_chunk = 5;  // 0 = global
  int lstm_hidden = 100;
  double dropout_rate = 0.5;
  int num_classes = 2;
  int max_doc_len = 400;
  double learning_rate = 1e-3;
  int epochs = 10;
  int batch_size = 32;
  uint64_t seed = 1;
  InitMode init_mode = InitMode::kRandom;

  void validate() const;
  int feature_positions() const { return max_doc_len - window_size + 1; }
  int pooled_steps() const;
};

// Token ids. Id 0 is the padding row (embedding frozen at zero), id 1 the
// trained unknown-token row.
class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;

  Vocabulary();

  int add(std::string_view token);           // existing id if known
  int lookup(std::string_view token) const;  // kUnk if absent
  const std::string& token(int id) const { return tokens_[id]; }
  size_t size() const { return tokens_.size(); }

  // First-appearance order over the documents. Throws on overflow.
  static Vocabulary build(const std::vector<std::vector<std::string>>& docs,
                          size_t max_size = 250000);

  void save(const std::string& path) const;  // id<TAB>token rows
  static Vocabulary load(const std::string& path);

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

struct EncodedDoc {
  std::vector<int> ids;  // exactly max_doc_len entries, padded with kPad
  int label = 0;
};

EncodedDoc encode_document(const std::vector<std::string>& tokens,
                           const Vocabulary& vocab,
                           const ClassifierConfig& config, int label);

struct Parameters {
  Eigen::MatrixXd embedding;    // vocab x d; row 0 zero and frozen
  Eigen::MatrixXd conv_weight;  // F x (h*d)
  Eigen::VectorXd conv_bias;    // F
  Eigen::MatrixXd w_forget, w_input, w_output, w_cell;  // H x F
  Eigen::MatrixXd u_forget, u_input, u_output, u_cell;  // H x H
  Eigen::VectorXd b_forget, b_input, b_output;          // H (no cell bias)
  Eigen::MatrixXd out_weight;  // C x H
  Eigen::VectorXd out_bias;    // C

  static Parameters zeros(const ClassifierConfig& config, size_t vocab_size);
  // Uniform in [-0.05, 0.05]; padding row reset to zero.
  static Parameters random_init(const ClassifierConfig& config,
                                size_t vocab_size, Rng& rng);
};

// Named view over every parameter tensor, in a fixed order shared by the
// optimizer, the gradient checker, and the serializer.
struct TensorRef {
  std::string_view name;
  double* data;
  Eigen::Index rows;
  Eigen::Index cols;
  size_t size() const { return static_cast<size_t>(rows * cols); }
};
std::vector<TensorRef> tensor_refs(Parameters& params);

// Class probabilities. In train mode with a dropout rng, inverted dropout
// is applied after the embedding lookup; otherwise the pass is
// deterministic and independent of dropout_rate.
Eigen::VectorXd forward_probs(const Parameters& params,
                              const ClassifierConfig& config,
                              const EncodedDoc& doc, bool train_mode = false,
                              Rng* dropout_rng = nullptr);

// Mean cross-entropy over the batch plus exact gradients for every tensor.
// The dropout rng, when given, is consumed in a fixed order, so cloning the
// rng reproduces the masks (the finite-difference oracle relies on this).
std::pair<double, Parameters> loss_and_grads(
    const Parameters& params, const ClassifierConfig& config,
    const std::vector<EncodedDoc>& batch, Rng* dropout_rng = nullptr);

// Same forward pass without gradient bookkeeping.
double loss_only(const Parameters& params, const ClassifierConfig& config,
                 const std::vector<EncodedDoc>& batch,
                 Rng* dropout_rng = nullptr);

// Argmax class in eval mode; ties break toward the smaller index.
int predict(const Parameters& params, const ClassifierConfig& config,
            const EncodedDoc& doc);

struct TrainResult {
  Parameters params;
  std::vector<double> epoch_loss;  // mean loss per epoch
  int best_epoch = -1;             // -1 when no validation split given
};

// Mini-batch Adam (beta1=0.9, beta2=0.999, eps=1e-8), deterministic per
// seed. Pretrained mode seeds embedding rows whose vocabulary token exists
// in `pretrained` and random-initializes the rest. With a validation set,
// returns the parameters of the best-accuracy epoch (earliest on ties).
TrainResult train(const std::vector<EncodedDoc>& corpus,
                  const ClassifierConfig& config, const Vocabulary& vocab,
                  const EmbeddingTable* pretrained = nullptr,
                  const std::vector<EncodedDoc>* validation = nullptr);

void save_parameters(const Parameters& params, const ClassifierConfig& config,
                     const std::string& path);
std::pair<Parameters, ClassifierConfig> load_parameters(
    const std::string& path);

namespace detail {

// ReLU feature map of shape F x (n-h+1): column i is the filter response
// on the window starting at row i of `embedded`.
Eigen::MatrixXd conv_feature_map(const Eigen::MatrixXd& conv_weight,
                                 const Eigen::VectorXd& conv_bias,
                                 const Eigen::MatrixXd& embedded, int window);

// Columnwise max over non-overlapping chunks; chunk = 0 pools globally.
// argmax, when given, receives the winning column per (filter, step).
Eigen::MatrixXd chunk_max_pool(const Eigen::MatrixXd& features, int chunk,
                               Eigen::MatrixXi* argmax = nullptr);

struct LstmTrace {
  Eigen::MatrixXd forget, input, output, cell_pre, cell, hidden;  // H x T
};
LstmTrace lstm_forward(const Parameters& params,
                       const Eigen::MatrixXd& pooled);

}  // namespace detail

}  // namespace sensepipe
