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

#include "sensepipe/classifier.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "sensepipe/errors.hpp"

namespace sensepipe {

std::string_view to_string(InitMode mode) {
  return mode == InitMode::kRandom ? "random" : "pretrained";
}

std::optional<InitMode> parse_init_mode(std::string_view text) {
  if (text == "random") return InitMode::kRandom;
  if (text == "pretrained") return InitMode::kPretrained;
  return std::nullopt;
}

void ClassifierConfig::validate() const {
  if (dimension <= 0) throw std::invalid_argument("dimension must be > 0");
  if (num_filters <= 0) throw std::invalid_argument("num_filters must be > 0");
  if (window_size < 1) throw std::invalid_argument("window_size must be >= 1");
  if (max_doc_len < window_size)
    throw std::invalid_argument("max_doc_len must be >= window_size");
  if (pool_chunk < 0) throw std::invalid_argument("pool_chunk must be >= 0");
  if (lstm_hidden <= 0) throw std::invalid_argument("lstm_hidden must be > 0");
  if (dropout_rate < 0.0 || dropout_rate >= 1.0)
    throw std::invalid_argument("dropout_rate must be in [0, 1)");
  if (num_classes < 2) throw std::invalid_argument("num_classes must be >= 2");
  if (learning_rate <= 0.0)
    throw std::invalid_argument("learning_rate must be > 0");
  if (epochs < 0) throw std::invalid_argument("epochs must be >= 0");
  if (batch_size <= 0) throw std::invalid_argument("batch_size must be > 0");
}

int ClassifierConfig::pooled_steps() const {
  int positions = feature_positions();
  if (pool_chunk == 0) return 1;
  return (positions + pool_chunk - 1) / pool_chunk;
}

Vocabulary::Vocabulary() {
  tokens_ = {"<pad>", "<unk>"};
  index_ = {{"<pad>", kPad}, {"<unk>", kUnk}};
}

int Vocabulary::add(std::string_view token) {
  auto it = index_.find(std::string(token));
  if (it != index_.end()) return it->second;
  int id = static_cast<int>(tokens_.size());
  tokens_.emplace_back(token);
  index_.emplace(tokens_.back(), id);
  return id;
}

int Vocabulary::lookup(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnk : it->second;
}

Vocabulary Vocabulary::build(
    const std::vector<std::vector<std::string>>& docs, size_t max_size) {
  Vocabulary vocab;
  for (const auto& doc : docs) {
    for (const auto& token : doc) {
      vocab.add(token);
      if (vocab.size() > max_size)
        throw std::runtime_error("vocabulary overflow: more than " +
                                 std::to_string(max_size) + " tokens");
    }
  }
  return vocab;
}

void Vocabulary::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (size_t id = 0; id < tokens_.size(); ++id)
    out << id << '\t' << tokens_[id] << '\n';
}

Vocabulary Vocabulary::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Vocabulary vocab;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw ParseError(path, line_no, "expected id<TAB>token");
    int id = std::stoi(line.substr(0, tab));
    std::string token = line.substr(tab + 1);
    if (id < 2) continue;  // reserved rows are implicit
    int got = vocab.add(token);
    if (got != id)
      throw ParseError(path, line_no, "non-contiguous vocabulary ids");
  }
  return vocab;
}

EncodedDoc encode_document(const std::vector<std::string>& tokens,
                           const Vocabulary& vocab,
                           const ClassifierConfig& config, int label) {
  config.validate();
  EncodedDoc doc;
  doc.label = label;
  doc.ids.assign(static_cast<size_t>(config.max_doc_len), Vocabulary::kPad);
  size_t n = std::min(tokens.size(), static_cast<size_t>(config.max_doc_len));
  for (size_t i = 0; i < n; ++i) {
    int id = vocab.lookup(tokens[i]);
    if (id < 0 || static_cast<size_t>(id) >= vocab.size())
      throw std::out_of_range("token id outside vocabulary");
    doc.ids[i] = id;
  }
  return doc;
}

Parameters Parameters::zeros(const ClassifierConfig& config,
                             size_t vocab_size) {
  config.validate();
  const int d = config.dimension;
  const int f = config.num_filters;
  const int h = config.lstm_hidden;
  const int c = config.num_classes;
  Parameters p;
  p.embedding = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(vocab_size), d);
  p.conv_weight =
      Eigen::MatrixXd::Zero(f, static_cast<Eigen::Index>(config.window_size) * d);
  p.conv_bias = Eigen::VectorXd::Zero(f);
  p.w_forget = Eigen::MatrixXd::Zero(h, f);
  p.w_input = Eigen::MatrixXd::Zero(h, f);
  p.w_output = Eigen::MatrixXd::Zero(h, f);
  p.w_cell = Eigen::MatrixXd::Zero(h, f);
  p.u_forget = Eigen::MatrixXd::Zero(h, h);
  p.u_input = Eigen::MatrixXd::Zero(h, h);
  p.u_output = Eigen::MatrixXd::Zero(h, h);
  p.u_cell = Eigen::MatrixXd::Zero(h, h);
  p.b_forget = Eigen::VectorXd::Zero(h);
  p.b_input = Eigen::VectorXd::Zero(h);
  p.b_output = Eigen::VectorXd::Zero(h);
  p.out_weight = Eigen::MatrixXd::Zero(c, h);
  p.out_bias = Eigen::VectorXd::Zero(c);
  return p;
}

Parameters Parameters::random_init(const ClassifierConfig& config,
                                   size_t vocab_size, Rng& rng) {
  Parameters p = zeros(config, vocab_size);
  constexpr double kRange = 0.05;
  for (TensorRef ref : tensor_refs(p)) {
    for (size_t i = 0; i < ref.size(); ++i)
      ref.data[i] = rng.uniform(-kRange, kRange);
  }
  p.embedding.row(Vocabulary::kPad).setZero();
  return p;
}

std::vector<TensorRef> tensor_refs(Parameters& p) {
  auto mat = [](std::string_view name, Eigen::MatrixXd& m) {
    return TensorRef{name, m.data(), m.rows(), m.cols()};
  };
  auto vec = [](std::string_view name, Eigen::VectorXd& v) {
    return TensorRef{name, v.data(), v.rows(), 1};
  };
  return {
      mat("embedding", p.embedding),
      mat("conv_weight", p.conv_weight),
      vec("conv_bias", p.conv_bias),
      mat("w_forget", p.w_forget),
      mat("w_input", p.w_input),
      mat("w_output", p.w_output),
      mat("w_cell", p.w_cell),
      mat("u_forget", p.u_forget),
      mat("u_input", p.u_input),
      mat("u_output", p.u_output),
      mat("u_cell", p.u_cell),
      vec("b_forget", p.b_forget),
      vec("b_input", p.b_input),
      vec("b_output", p.b_output),
      mat("out_weight", p.out_weight),
      vec("out_bias", p.out_bias),
  };
}

namespace detail {

Eigen::MatrixXd conv_feature_map(const Eigen::MatrixXd& conv_weight,
                                 const Eigen::VectorXd& conv_bias,
                                 const Eigen::MatrixXd& embedded,
                                 int window) {
  const Eigen::Index d = embedded.cols();
  const Eigen::Index positions = embedded.rows() - window + 1;
  Eigen::MatrixXd windows(positions, static_cast<Eigen::Index>(window) * d);
  for (Eigen::Index i = 0; i < positions; ++i) {
    for (int k = 0; k < window; ++k)
      windows.row(i).segment(k * d, d) = embedded.row(i + k);
  }
  Eigen::MatrixXd pre = conv_weight * windows.transpose();
  pre.colwise() += conv_bias;
  return pre.cwiseMax(0.0);
}

Eigen::MatrixXd chunk_max_pool(const Eigen::MatrixXd& features, int chunk,
                               Eigen::MatrixXi* argmax) {
  const Eigen::Index filters = features.rows();
  const Eigen::Index positions = features.cols();
  const Eigen::Index width = chunk == 0 ? positions : chunk;
  const Eigen::Index steps = (positions + width - 1) / width;
  Eigen::MatrixXd pooled(filters, steps);
  if (argmax) argmax->resize(filters, steps);
  for (Eigen::Index t = 0; t < steps; ++t) {
    Eigen::Index begin = t * width;
    Eigen::Index len = std::min(width, positions - begin);
    for (Eigen::Index f = 0; f < filters; ++f) {
      Eigen::Index best = begin;
      double value = features(f, begin);
      for (Eigen::Index i = begin + 1; i < begin + len; ++i) {
        if (features(f, i) > value) {
          value = features(f, i);
          best = i;
        }
      }
      pooled(f, t) = value;
      if (argmax) (*argmax)(f, t) = static_cast<int>(best);
    }
  }
  return pooled;
}

namespace {
inline Eigen::ArrayXd sigmoid(const Eigen::ArrayXd& x) {
  return 1.0 / (1.0 + (-x).exp());
}
}  // namespace

LstmTrace lstm_forward(const Parameters& params,
                       const Eigen::MatrixXd& pooled) {
  const Eigen::Index hidden = params.u_forget.rows();
  const Eigen::Index steps = pooled.cols();
  LstmTrace trace;
  trace.forget.resize(hidden, steps);
  trace.input.resize(hidden, steps);
  trace.output.resize(hidden, steps);
  trace.cell_pre.resize(hidden, steps);
  trace.cell.resize(hidden, steps);
  trace.hidden.resize(hidden, steps);

  Eigen::VectorXd h_prev = Eigen::VectorXd::Zero(hidden);
  Eigen::VectorXd c_prev = Eigen::VectorXd::Zero(hidden);
  for (Eigen::Index t = 0; t < steps; ++t) {
    Eigen::VectorXd g = pooled.col(t);
    Eigen::ArrayXd f =
        sigmoid((params.w_forget * g + params.u_forget * h_prev +
                 params.b_forget).array());
    Eigen::ArrayXd i =
        sigmoid((params.w_input * g + params.u_input * h_prev +
                 params.b_input).array());
    Eigen::ArrayXd o =
        sigmoid((params.w_output * g + params.u_output * h_prev +
                 params.b_output).array());
    Eigen::ArrayXd cell_pre =
        (params.w_cell * g + params.u_cell * h_prev).array();
    Eigen::ArrayXd c = f * c_prev.array() + i * cell_pre.tanh();
    Eigen::ArrayXd h = o * c.tanh();
    trace.forget.col(t) = f;
    trace.input.col(t) = i;
    trace.output.col(t) = o;
    trace.cell_pre.col(t) = cell_pre;
    trace.cell.col(t) = c;
    trace.hidden.col(t) = h;
    h_prev = h.matrix();
    c_prev = c.matrix();
  }
  return trace;
}

}  // namespace detail

namespace {

struct ForwardCache {
  Eigen::MatrixXd embedded;  // L x d, after dropout
  Eigen::MatrixXd mask;      // empty when dropout inactive
  Eigen::MatrixXd features;  // F x positions (post-ReLU)
  Eigen::MatrixXi argmax;    // F x steps
  Eigen::MatrixXd pooled;    // F x steps
  detail::LstmTrace lstm;
  Eigen::VectorXd probs;
};

ForwardCache run_forward(const Parameters& params,
                         const ClassifierConfig& config,
                         const EncodedDoc& doc, bool train_mode,
                         Rng* dropout_rng) {
  if (doc.ids.size() != static_cast<size_t>(config.max_doc_len))
    throw std::invalid_argument("document not encoded to max_doc_len");
  ForwardCache cache;
  const int d = config.dimension;
  const Eigen::Index len = static_cast<Eigen::Index>(doc.ids.size());

  cache.embedded.resize(len, d);
  for (Eigen::Index t = 0; t < len; ++t)
    cache.embedded.row(t) = params.embedding.row(doc.ids[t]);

  if (train_mode && config.dropout_rate > 0.0 && dropout_rng) {
    const double keep = 1.0 - config.dropout_rate;
    cache.mask.resize(len, d);
    for (Eigen::Index t = 0; t < len; ++t) {
      for (int j = 0; j < d; ++j)
        cache.mask(t, j) = dropout_rng->bernoulli(keep) ? 1.0 / keep : 0.0;
    }
    cache.embedded.array() *= cache.mask.array();
  }

  cache.features = detail::conv_feature_map(
      params.conv_weight, params.conv_bias, cache.embedded,
      config.window_size);
  cache.pooled =
      detail::chunk_max_pool(cache.features, config.pool_chunk, &cache.argmax);
  cache.lstm = detail::lstm_forward(params, cache.pooled);

  Eigen::VectorXd last = cache.lstm.hidden.col(cache.lstm.hidden.cols() - 1);
  Eigen::VectorXd logits = params.out_weight * last + params.out_bias;
  Eigen::ArrayXd shifted = logits.array() - logits.maxCoeff();
  Eigen::ArrayXd exps = shifted.exp();
  cache.probs = (exps / exps.sum()).matrix();
  return cache;
}

// Backpropagates one document's cross-entropy into `grads` (accumulating);
// returns the document loss.
double backward(const Parameters& params, const ClassifierConfig& config,
                const EncodedDoc& doc, const ForwardCache& cache,
                Parameters& grads) {
  const int d = config.dimension;
  const int h = config.window_size;
  const Eigen::Index steps = cache.pooled.cols();
  const Eigen::Index positions = cache.features.cols();

  double loss = -std::log(std::max(cache.probs[doc.label], 1e-300));

  Eigen::VectorXd dlogits = cache.probs;
  dlogits[doc.label] -= 1.0;
  Eigen::VectorXd last = cache.lstm.hidden.col(steps - 1);
  grads.out_weight += dlogits * last.transpose();
  grads.out_bias += dlogits;

  Eigen::VectorXd dh = params.out_weight.transpose() * dlogits;
  Eigen::VectorXd dc = Eigen::VectorXd::Zero(cache.lstm.cell.rows());
  Eigen::MatrixXd dpooled = Eigen::MatrixXd::Zero(cache.pooled.rows(), steps);

  for (Eigen::Index t = steps - 1; t >= 0; --t) {
    Eigen::ArrayXd f = cache.lstm.forget.col(t).array();
    Eigen::ArrayXd i = cache.lstm.input.col(t).array();
    Eigen::ArrayXd o = cache.lstm.output.col(t).array();
    Eigen::ArrayXd cell_tanh = cache.lstm.cell.col(t).array().tanh();
    Eigen::ArrayXd pre_tanh = cache.lstm.cell_pre.col(t).array().tanh();
    Eigen::VectorXd h_prev =
        t > 0 ? Eigen::VectorXd(cache.lstm.hidden.col(t - 1))
              : Eigen::VectorXd::Zero(dh.size());
    Eigen::ArrayXd c_prev =
        t > 0 ? Eigen::ArrayXd(cache.lstm.cell.col(t - 1).array())
              : Eigen::ArrayXd::Zero(dh.size());

    Eigen::ArrayXd dout = dh.array() * cell_tanh;
    Eigen::ArrayXd dcell =
        dc.array() + dh.array() * o * (1.0 - cell_tanh.square());
    Eigen::ArrayXd dforget = dcell * c_prev;
    Eigen::ArrayXd dinput = dcell * pre_tanh;
    Eigen::ArrayXd dcell_pre = dcell * i * (1.0 - pre_tanh.square());

    Eigen::VectorXd zf = (dforget * f * (1.0 - f)).matrix();
    Eigen::VectorXd zi = (dinput * i * (1.0 - i)).matrix();
    Eigen::VectorXd zo = (dout * o * (1.0 - o)).matrix();
    Eigen::VectorXd zc = dcell_pre.matrix();

    Eigen::VectorXd g = cache.pooled.col(t);
    grads.w_forget += zf * g.transpose();
    grads.w_input += zi * g.transpose();
    grads.w_output += zo * g.transpose();
    grads.w_cell += zc * g.transpose();
    grads.u_forget += zf * h_prev.transpose();
    grads.u_input += zi * h_prev.transpose();
    grads.u_output += zo * h_prev.transpose();
    grads.u_cell += zc * h_prev.transpose();
    grads.b_forget += zf;
    grads.b_input += zi;
    grads.b_output += zo;

    dpooled.col(t) = params.w_forget.transpose() * zf +
                     params.w_input.transpose() * zi +
                     params.w_output.transpose() * zo +
                     params.w_cell.transpose() * zc;
    dh = params.u_forget.transpose() * zf + params.u_input.transpose() * zi +
         params.u_output.transpose() * zo + params.u_cell.transpose() * zc;
    dc = (dcell * f).matrix();
  }

  // Max pooling routes each pooled gradient to its argmax position.
  Eigen::MatrixXd dfeatures =
      Eigen::MatrixXd::Zero(cache.features.rows(), positions);
  for (Eigen::Index t = 0; t < steps; ++t) {
    for (Eigen::Index fi = 0; fi < cache.features.rows(); ++fi)
      dfeatures(fi, cache.argmax(fi, t)) += dpooled(fi, t);
  }
  // ReLU gate: features hold max(0, pre), so positive entries pass through.
  dfeatures = (cache.features.array() > 0.0).select(dfeatures, 0.0);

  Eigen::MatrixXd windows(positions, static_cast<Eigen::Index>(h) * d);
  for (Eigen::Index i = 0; i < positions; ++i) {
    for (int k = 0; k < h; ++k)
      windows.row(i).segment(static_cast<Eigen::Index>(k) * d, d) =
          cache.embedded.row(i + k);
  }
  grads.conv_weight += dfeatures * windows;
  grads.conv_bias += dfeatures.rowwise().sum();

  Eigen::MatrixXd dwindows = dfeatures.transpose() * params.conv_weight;
  Eigen::MatrixXd dembedded =
      Eigen::MatrixXd::Zero(cache.embedded.rows(), d);
  for (Eigen::Index i = 0; i < positions; ++i) {
    for (int k = 0; k < h; ++k)
      dembedded.row(i + k) +=
          dwindows.row(i).segment(static_cast<Eigen::Index>(k) * d, d);
  }
  if (cache.mask.size() > 0) dembedded.array() *= cache.mask.array();
  for (Eigen::Index t = 0; t < dembedded.rows(); ++t)
    grads.embedding.row(doc.ids[t]) += dembedded.row(t);

  return loss;
}

}  // namespace

Eigen::VectorXd forward_probs(const Parameters& params,
                              const ClassifierConfig& config,
                              const EncodedDoc& doc, bool train_mode,
                              Rng* dropout_rng) {
  return run_forward(params, config, doc, train_mode, dropout_rng).probs;
}

std::pair<double, Parameters> loss_and_grads(
    const Parameters& params, const ClassifierConfig& config,
    const std::vector<EncodedDoc>& batch, Rng* dropout_rng) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  Parameters grads = Parameters::zeros(config, params.embedding.rows());
  double total = 0.0;
  for (size_t b = 0; b < batch.size(); ++b) {
    ForwardCache cache = run_forward(params, config, batch[b],
                                     /*train_mode=*/dropout_rng != nullptr,
                                     dropout_rng);
    total += backward(params, config, batch[b], cache, grads);
  }
  const double scale = 1.0 / static_cast<double>(batch.size());
  double loss = total * scale;
  if (!std::isfinite(loss))
    throw std::runtime_error("non-finite loss over batch of " +
                             std::to_string(batch.size()) + " documents");
  for (TensorRef ref : tensor_refs(grads)) {
    for (size_t i = 0; i < ref.size(); ++i) ref.data[i] *= scale;
  }
  grads.embedding.row(Vocabulary::kPad).setZero();  // frozen padding row
  return {loss, std::move(grads)};
}

double loss_only(const Parameters& params, const ClassifierConfig& config,
                 const std::vector<EncodedDoc>& batch, Rng* dropout_rng) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  double total = 0.0;
  for (const EncodedDoc& doc : batch) {
    ForwardCache cache = run_forward(params, config, doc,
                                     /*train_mode=*/dropout_rng != nullptr,
                                     dropout_rng);
    total += -std::log(std::max(cache.probs[doc.label], 1e-300));
  }
  return total / static_cast<double>(batch.size());
}

int predict(const Parameters& params, const ClassifierConfig& config,
            const EncodedDoc& doc) {
  Eigen::VectorXd probs = forward_probs(params, config, doc);
  int best = 0;
  for (int c = 1; c < probs.size(); ++c)
    if (probs[c] > probs[best]) best = c;
  return best;
}

namespace {

struct AdamState {
  Parameters m;
  Parameters v;
  long step = 0;
};

void adam_update(Parameters& params, Parameters& grads, AdamState& state,
                 double learning_rate) {
  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kEps = 1e-8;
  state.step += 1;
  const double correction1 = 1.0 - std::pow(kBeta1, state.step);
  const double correction2 = 1.0 - std::pow(kBeta2, state.step);

  auto p = tensor_refs(params);
  auto g = tensor_refs(grads);
  auto m = tensor_refs(state.m);
  auto v = tensor_refs(state.v);
  for (size_t t = 0; t < p.size(); ++t) {
    for (size_t i = 0; i < p[t].size(); ++i) {
      double grad = g[t].data[i];
      m[t].data[i] = kBeta1 * m[t].data[i] + (1.0 - kBeta1) * grad;
      v[t].data[i] = kBeta2 * v[t].data[i] + (1.0 - kBeta2) * grad * grad;
      double m_hat = m[t].data[i] / correction1;
      double v_hat = v[t].data[i] / correction2;
      p[t].data[i] -= learning_rate * m_hat / (std::sqrt(v_hat) + kEps);
    }
  }
}

double accuracy_on(const Parameters& params, const ClassifierConfig& config,
                   const std::vector<EncodedDoc>& docs) {
  if (docs.empty()) return 0.0;
  size_t correct = 0;
  for (const EncodedDoc& doc : docs)
    if (predict(params, config, doc) == doc.label) ++correct;
  return static_cast<double>(correct) / static_cast<double>(docs.size());
}

}  // namespace

TrainResult train(const std::vector<EncodedDoc>& corpus,
                  const ClassifierConfig& config, const Vocabulary& vocab,
                  const EmbeddingTable* pretrained,
                  const std::vector<EncodedDoc>* validation) {
  config.validate();
  if (corpus.empty()) throw std::invalid_argument("empty training corpus");
  for (const EncodedDoc& doc : corpus) {
    if (doc.label < 0 || doc.label >= config.num_classes)
      throw std::invalid_argument("label outside num_classes");
  }

  Rng rng(config.seed);
  Parameters params = Parameters::random_init(config, vocab.size(), rng);
  if (config.init_mode == InitMode::kPretrained) {
    if (!pretrained)
      throw std::invalid_argument("pretrained init requires a table");
    if (pretrained->dimension() != config.dimension)
      throw std::invalid_argument("embedding table dimension mismatch");
    for (size_t id = Vocabulary::kUnk + 1; id < vocab.size(); ++id) {
      if (const Vector* v = pretrained->lookup(vocab.token(id)))
        params.embedding.row(static_cast<Eigen::Index>(id)) = v->transpose();
    }
  }

  TrainResult result;
  AdamState adam{Parameters::zeros(config, vocab.size()),
                 Parameters::zeros(config, vocab.size())};

  Parameters best = params;
  double best_accuracy = -1.0;
  int best_epoch = -1;

  std::vector<size_t> order(corpus.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_total = 0.0;
    for (size_t begin = 0; begin < order.size();
         begin += static_cast<size_t>(config.batch_size)) {
      size_t end = std::min(order.size(),
                            begin + static_cast<size_t>(config.batch_size));
      std::vector<EncodedDoc> batch;
      batch.reserve(end - begin);
      for (size_t i = begin; i < end; ++i) batch.push_back(corpus[order[i]]);
      auto [loss, grads] = loss_and_grads(params, config, batch, &rng);
      adam_update(params, grads, adam, config.learning_rate);
      epoch_total += loss * static_cast<double>(batch.size());
    }
    result.epoch_loss.push_back(epoch_total /
                                static_cast<double>(corpus.size()));
    if (validation) {
      double acc = accuracy_on(params, config, *validation);
      if (acc > best_accuracy) {
        best_accuracy = acc;
        best = params;
        best_epoch = epoch;
      }
    }
  }

  if (validation && best_epoch >= 0) {
    result.params = std::move(best);
    result.best_epoch = best_epoch;
  } else {
    result.params = std::move(params);
  }
  return result;
}

void save_parameters(const Parameters& params, const ClassifierConfig& config,
                     const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  char buf[32];
  auto fmt = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return std::string(buf);
  };
  out << "sensepipe-model 1\n";
  out << "dimension " << config.dimension << '\n';
  out << "num_filters " << config.num_filters << '\n';
  out << "window_size " << config.window_size << '\n';
  out << "pool_chunk " << config.pool_chunk << '\n';
  out << "lstm_hidden " << config.lstm_hidden << '\n';
  out << "dropout_rate " << fmt(config.dropout_rate) << '\n';
  out << "num_classes " << config.num_classes << '\n';
  out << "max_doc_len " << config.max_doc_len << '\n';
  out << "learning_rate " << fmt(config.learning_rate) << '\n';
  out << "epochs " << config.epochs << '\n';
  out << "batch_size " << config.batch_size << '\n';
  out << "seed " << config.seed << '\n';
  out << "init_mode " << to_string(config.init_mode) << '\n';
  out << "vocab_size " << params.embedding.rows() << '\n';
  for (TensorRef ref : tensor_refs(const_cast<Parameters&>(params))) {
    out << "tensor " << ref.name << ' ' << ref.rows << ' ' << ref.cols
        << '\n';
    // Column-major storage; rows written in row-major reading order.
    for (Eigen::Index r = 0; r < ref.rows; ++r) {
      for (Eigen::Index c = 0; c < ref.cols; ++c) {
        if (c > 0) out << ' ';
        out << fmt(ref.data[c * ref.rows + r]);
      }
      out << '\n';
    }
  }
}

std::pair<Parameters, ClassifierConfig> load_parameters(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string word;
  in >> word;
  if (word != "sensepipe-model")
    throw std::runtime_error(path + ": not a model file");
  int version = 0;
  in >> version;
  if (version != 1) throw std::runtime_error(path + ": unsupported version");

  ClassifierConfig config;
  size_t vocab_size = 0;
  std::string init;
  in >> word >> config.dimension;
  in >> word >> config.num_filters;
  in >> word >> config.window_size;
  in >> word >> config.pool_chunk;
  in >> word >> config.lstm_hidden;
  in >> word >> config.dropout_rate;
  in >> word >> config.num_classes;
  in >> word >> config.max_doc_len;
  in >> word >> config.learning_rate;
  in >> word >> config.epochs;
  in >> word >> config.batch_size;
  in >> word >> config.seed;
  in >> word >> init;
  in >> word >> vocab_size;
  auto mode = parse_init_mode(init);
  if (!mode) throw std::runtime_error(path + ": bad init_mode");
  config.init_mode = *mode;
  config.validate();

  Parameters params = Parameters::zeros(config, vocab_size);
  for (TensorRef ref : tensor_refs(params)) {
    Eigen::Index rows = 0, cols = 0;
    std::string name;
    in >> word >> name >> rows >> cols;
    if (word != "tensor" || name != ref.name || rows != ref.rows ||
        cols != ref.cols)
      throw std::runtime_error(path + ": tensor mismatch at " +
                               std::string(ref.name));
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (Eigen::Index c = 0; c < cols; ++c) {
        if (!(in >> ref.data[c * rows + r]))
          throw std::runtime_error(path + ": truncated tensor " +
                                   std::string(ref.name));
      }
    }
  }
  return {std::move(params), config};
}

}  // namespace sensepipe
