/*
 * Copyright 2026 The slicevuln Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Compact pre-LayerNorm transformer encoder with a two-way classification
// head on the CLS position, written out by hand (forward, backward, AdamW)
// so that every gradient can be checked against finite differences.
//
// Templated on the scalar type: training normally runs in float, gradient
// checks in double.
//
//   x      = dropout(tok_emb[ids] + pos_emb[0..S))
//   layer: x += dropout(MHA(LN1(x)))      masked keys get weight exactly 0
//          x += dropout(W2 gelu(W1 LN2(x)))
//   logits = head(LN_f(x[CLS]))

#ifndef SLICEVULN_MODEL_HPP_
#define SLICEVULN_MODEL_HPP_

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "slicevuln/common.hpp"
#include "slicevuln/corpus.hpp"
#include "slicevuln/tokenizer.hpp"

namespace slicevuln {

struct ModelConfig {
  int num_layers = 2;
  int hidden_dim = 64;
  int num_heads = 4;
  int ff_dim = 256;
  int max_len = 512;
  int vocab_size = static_cast<int>(kDefaultVocabSize);
  double dropout = 0.1;
  static constexpr int num_classes = 2;

  int head_dim() const { return hidden_dim / num_heads; }

  void validate() const {
    if (num_layers < 1 || hidden_dim < 1 || num_heads < 1 || ff_dim < 1 ||
        max_len < 2 || vocab_size < static_cast<int>(kNumReserved) + 1) {
      throw ConfigError("model config: sizes must be positive");
    }
    if (hidden_dim % num_heads != 0) {
      throw ConfigError("model config: hidden_dim " + std::to_string(hidden_dim) +
                        " not divisible by num_heads " +
                        std::to_string(num_heads));
    }
    if (!(dropout >= 0.0 && dropout < 1.0)) {
      throw ConfigError("model config: dropout must lie in [0, 1)");
    }
  }

  bool operator==(const ModelConfig&) const = default;
};

// Closed-form parameter count for a configuration.
inline std::size_t parameter_count(const ModelConfig& c) {
  const std::size_t h = c.hidden_dim, f = c.ff_dim;
  const std::size_t per_layer = 4 * h * h + 2 * h * f + 9 * h + f;
  return (static_cast<std::size_t>(c.vocab_size) + c.max_len) * h +
         c.num_layers * per_layer + 2 * h + 2 * h + 2;
}

struct TensorInfo {
  std::string name;
  std::vector<std::size_t> shape;
  std::size_t offset = 0;
  std::size_t size = 0;
  bool decay = false;  // weight decay applies (matrices and embeddings)
};

// Encodings padded to a common length. With dynamic padding the length is
// the longest unmasked prefix in the batch; otherwise the full encoding.
struct Batch {
  std::size_t rows = 0;
  std::size_t seq_len = 0;
  std::vector<std::int32_t> ids;
  std::vector<std::uint8_t> mask;
};

inline Batch collate(std::span<const Encoding> encodings, std::size_t max_len,
                     bool dynamic_padding) {
  Batch b;
  b.rows = encodings.size();
  std::size_t len = dynamic_padding ? 1 : max_len;
  for (const auto& e : encodings) {
    if (e.ids.size() != max_len || e.attention_mask.size() != max_len) {
      throw ConfigError("encoding length " + std::to_string(e.ids.size()) +
                        " does not match model max_len " +
                        std::to_string(max_len));
    }
    if (dynamic_padding) {
      for (std::size_t i = max_len; i-- > 0;) {
        if (e.attention_mask[i]) {
          len = std::max(len, i + 1);
          break;
        }
      }
    }
  }
  b.seq_len = len;
  b.ids.reserve(b.rows * len);
  b.mask.reserve(b.rows * len);
  for (const auto& e : encodings) {
    b.ids.insert(b.ids.end(), e.ids.begin(), e.ids.begin() + static_cast<long>(len));
    b.mask.insert(b.mask.end(), e.attention_mask.begin(),
                  e.attention_mask.begin() + static_cast<long>(len));
  }
  return b;
}

template <typename T>
class TransformerClassifier {
 public:
  using Scalar = T;
  using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using RowVec = Eigen::Matrix<T, 1, Eigen::Dynamic>;
  using MatMap = Eigen::Map<Mat>;
  using ConstMatMap = Eigen::Map<const Mat>;
  using RowMap = Eigen::Map<RowVec>;
  using ConstRowMap = Eigen::Map<const RowVec>;

  explicit TransformerClassifier(const ModelConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    build_layout();
    params_.assign(total_, T(0));
  }

  // Normal(0, 0.02) weights and embeddings, zero biases, unit LN gains.
  static TransformerClassifier init(const ModelConfig& cfg, std::uint64_t seed) {
    TransformerClassifier m(cfg);
    for (std::size_t t = 0; t < m.tensors_.size(); ++t) {
      const TensorInfo& info = m.tensors_[t];
      T* p = m.params_.data() + info.offset;
      if (info.name.ends_with(".gain")) {
        std::fill(p, p + info.size, T(1));
      } else if (info.decay) {
        CounterRng rng(derive_key(seed, 0x1417ULL, t));
        for (std::size_t i = 0; i < info.size; ++i) {
          p[i] = static_cast<T>(rng.normal(0.0, 0.02));
        }
      }
    }
    return m;
  }

  const ModelConfig& config() const { return cfg_; }
  const std::vector<TensorInfo>& tensors() const { return tensors_; }
  std::size_t num_parameters() const { return total_; }
  std::span<T> parameters() { return params_; }
  std::span<const T> parameters() const { return params_; }

  const TensorInfo& tensor(const std::string& name) const {
    for (const auto& t : tensors_) {
      if (t.name == name) return t;
    }
    throw ConfigError("no tensor named '" + name + "'");
  }

  template <typename U>
  TransformerClassifier<U> cast() const {
    TransformerClassifier<U> out(cfg_);
    auto dst = out.parameters();
    for (std::size_t i = 0; i < total_; ++i) dst[i] = static_cast<U>(params_[i]);
    return out;
  }

  // Logits [batch x 2]. Dropout is applied only when train_mode is set.
  Mat forward(std::span<const Encoding> encodings, bool train_mode,
              std::uint64_t dropout_key = 0, bool dynamic_padding = true) const {
    const Batch batch = collate(encodings, cfg_.max_len, dynamic_padding);
    Mat logits(batch.rows, 2);
    for (std::size_t r = 0; r < batch.rows; ++r) {
      Tape tape;
      run_forward(batch, r, train_mode, dropout_key, tape);
      logits.row(r) = tape.logits;
    }
    return logits;
  }

  // Mean cross-entropy of the batch; `grad` is resized to the parameter
  // count and overwritten with d(loss)/d(parameters).
  T loss_and_gradient(std::span<const Encoding> encodings,
                      std::span<const Label> labels, std::vector<T>& grad,
                      bool train_mode, std::uint64_t dropout_key = 0,
                      bool dynamic_padding = true) const {
    if (encodings.size() != labels.size() || encodings.empty()) {
      throw ConfigError("loss_and_gradient: batch/label size mismatch");
    }
    const Batch batch = collate(encodings, cfg_.max_len, dynamic_padding);
    grad.assign(total_, T(0));
    const T inv_batch = T(1) / static_cast<T>(batch.rows);
    T loss = 0;
    for (std::size_t r = 0; r < batch.rows; ++r) {
      Tape tape;
      run_forward(batch, r, train_mode, dropout_key, tape);
      const int y = to_int(labels[r]);
      const T l0 = tape.logits(0), l1 = tape.logits(1);
      const T mx = std::max(l0, l1);
      const T lse = mx + std::log(std::exp(l0 - mx) + std::exp(l1 - mx));
      loss += (lse - (y ? l1 : l0)) * inv_batch;
      RowVec dlogits(2);
      dlogits(0) = (std::exp(l0 - lse) - (y == 0 ? T(1) : T(0))) * inv_batch;
      dlogits(1) = (std::exp(l1 - lse) - (y == 1 ? T(1) : T(0))) * inv_batch;
      run_backward(tape, dlogits, grad);
    }
    return loss;
  }

 private:
  struct LayerIndex {
    std::size_t ln1_gain, ln1_bias, wq, bq, wk, bk, wv, bv, wo, bo;
    std::size_t ln2_gain, ln2_bias, w1, b1, w2, b2;
  };

  struct LayerTape {
    Mat x_in;
    Mat xhat1;
    std::vector<T> rstd1;
    Mat h1, q, k, v;
    std::vector<Mat> probs;  // per head, [S x S]
    Mat attn;                // concatenated heads
    Mat drop_attn;           // empty when dropout is off
    Mat x_mid;
    Mat xhat2;
    std::vector<T> rstd2;
    Mat h2, u, g;
    Mat drop_ff;
  };

  struct Tape {
    std::size_t seq_len = 0;
    const std::int32_t* ids = nullptr;
    const std::uint8_t* mask = nullptr;
    Mat drop_emb;
    std::vector<LayerTape> layers;
    Mat xhat_f;  // [1 x H], CLS row
    std::vector<T> rstd_f;
    Mat z;
    RowVec logits;
  };

  std::size_t add_tensor(std::string name, std::vector<std::size_t> shape,
                         bool decay) {
    TensorInfo t;
    t.name = std::move(name);
    t.size = std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                             std::multiplies<>());
    t.shape = std::move(shape);
    t.offset = total_;
    t.decay = decay;
    total_ += t.size;
    tensors_.push_back(std::move(t));
    return tensors_.size() - 1;
  }

  void build_layout() {
    const std::size_t h = cfg_.hidden_dim, f = cfg_.ff_dim;
    tok_emb_ = add_tensor("embeddings.token", {std::size_t(cfg_.vocab_size), h}, true);
    pos_emb_ = add_tensor("embeddings.position", {std::size_t(cfg_.max_len), h}, true);
    for (int l = 0; l < cfg_.num_layers; ++l) {
      const std::string p = "layer" + std::to_string(l) + ".";
      LayerIndex li;
      li.ln1_gain = add_tensor(p + "ln1.gain", {h}, false);
      li.ln1_bias = add_tensor(p + "ln1.bias", {h}, false);
      li.wq = add_tensor(p + "attn.wq", {h, h}, true);
      li.bq = add_tensor(p + "attn.bq", {h}, false);
      li.wk = add_tensor(p + "attn.wk", {h, h}, true);
      li.bk = add_tensor(p + "attn.bk", {h}, false);
      li.wv = add_tensor(p + "attn.wv", {h, h}, true);
      li.bv = add_tensor(p + "attn.bv", {h}, false);
      li.wo = add_tensor(p + "attn.wo", {h, h}, true);
      li.bo = add_tensor(p + "attn.bo", {h}, false);
      li.ln2_gain = add_tensor(p + "ln2.gain", {h}, false);
      li.ln2_bias = add_tensor(p + "ln2.bias", {h}, false);
      li.w1 = add_tensor(p + "ff.w1", {h, f}, true);
      li.b1 = add_tensor(p + "ff.b1", {f}, false);
      li.w2 = add_tensor(p + "ff.w2", {f, h}, true);
      li.b2 = add_tensor(p + "ff.b2", {h}, false);
      layers_.push_back(li);
    }
    lnf_gain_ = add_tensor("final_ln.gain", {h}, false);
    lnf_bias_ = add_tensor("final_ln.bias", {h}, false);
    head_w_ = add_tensor("head.weight", {h, 2}, true);
    head_b_ = add_tensor("head.bias", {2}, false);
  }

  ConstMatMap mat(std::size_t t) const {
    const auto& info = tensors_[t];
    return ConstMatMap(params_.data() + info.offset, info.shape[0], info.shape[1]);
  }
  ConstRowMap vec(std::size_t t) const {
    const auto& info = tensors_[t];
    return ConstRowMap(params_.data() + info.offset, info.size);
  }
  MatMap gmat(std::vector<T>& g, std::size_t t) const {
    const auto& info = tensors_[t];
    return MatMap(g.data() + info.offset, info.shape[0], info.shape[1]);
  }
  RowMap gvec(std::vector<T>& g, std::size_t t) const {
    const auto& info = tensors_[t];
    return RowMap(g.data() + info.offset, info.size);
  }

  static constexpr T kLnEps = T(1e-5);

  static void layer_norm(const Mat& x, const ConstRowMap& gain,
                         const ConstRowMap& bias, Mat& xhat,
                         std::vector<T>& rstd, Mat& y) {
    const auto n = x.cols();
    xhat.resize(x.rows(), n);
    y.resize(x.rows(), n);
    rstd.resize(x.rows());
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      const T mean = x.row(r).sum() / static_cast<T>(n);
      const RowVec centered = x.row(r).array() - mean;
      const T var = centered.squaredNorm() / static_cast<T>(n);
      rstd[r] = T(1) / std::sqrt(var + kLnEps);
      xhat.row(r) = centered * rstd[r];
      y.row(r) = xhat.row(r).cwiseProduct(gain) + bias;
    }
  }

  static Mat layer_norm_backward(const Mat& dy, const Mat& xhat,
                                 const std::vector<T>& rstd,
                                 const ConstRowMap& gain, RowMap dgain,
                                 RowMap dbias) {
    const auto n = static_cast<T>(dy.cols());
    Mat dx(dy.rows(), dy.cols());
    for (Eigen::Index r = 0; r < dy.rows(); ++r) {
      dgain += dy.row(r).cwiseProduct(xhat.row(r));
      dbias += dy.row(r);
      const RowVec dxhat = dy.row(r).cwiseProduct(gain);
      const T mean_d = dxhat.sum() / n;
      const T mean_dx = dxhat.dot(xhat.row(r)) / n;
      dx.row(r) = ((dxhat.array() - mean_d) - xhat.row(r).array() * mean_dx) *
                  rstd[r];
    }
    return dx;
  }

  static T gelu(T x) {
    return T(0.5) * x * (T(1) + std::erf(x * T(M_SQRT1_2)));
  }
  static T gelu_grad(T x) {
    const T cdf = T(0.5) * (T(1) + std::erf(x * T(M_SQRT1_2)));
    const T pdf = std::exp(T(-0.5) * x * x) * T(0.3989422804014327);
    return cdf + x * pdf;
  }

  Mat dropout_mask(std::uint64_t key, std::size_t rows, std::size_t cols) const {
    Mat m(rows, cols);
    CounterRng rng(key);
    const T keep_scale = T(1) / T(1 - cfg_.dropout);
    for (std::size_t i = 0; i < rows * cols; ++i) {
      m.data()[i] = rng.uniform() < cfg_.dropout ? T(0) : keep_scale;
    }
    return m;
  }

  void run_forward(const Batch& batch, std::size_t row, bool train_mode,
                   std::uint64_t dropout_key, Tape& tape) const {
    const std::size_t S = batch.seq_len;
    const std::size_t H = cfg_.hidden_dim;
    const std::size_t d = cfg_.head_dim();
    const bool drop = train_mode && cfg_.dropout > 0.0;
    tape.seq_len = S;
    tape.ids = batch.ids.data() + row * S;
    tape.mask = batch.mask.data() + row * S;

    const ConstMatMap tok = mat(tok_emb_);
    const ConstMatMap pos = mat(pos_emb_);
    Mat x(S, H);
    for (std::size_t s = 0; s < S; ++s) {
      const std::int32_t id = tape.ids[s];
      if (id < 0 || id >= cfg_.vocab_size) {
        throw ConfigError("token id " + std::to_string(id) +
                          " outside vocabulary of " +
                          std::to_string(cfg_.vocab_size));
      }
      x.row(s) = tok.row(id) + pos.row(s);
    }
    if (drop) {
      tape.drop_emb = dropout_mask(derive_key(dropout_key, row, 0xe3bULL), S, H);
      x = x.cwiseProduct(tape.drop_emb);
    }

    const T scale = T(1) / std::sqrt(static_cast<T>(d));
    tape.layers.resize(layers_.size());
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      const LayerIndex& li = layers_[l];
      LayerTape& lt = tape.layers[l];
      lt.x_in = x;
      layer_norm(x, vec(li.ln1_gain), vec(li.ln1_bias), lt.xhat1, lt.rstd1, lt.h1);
      lt.q = (lt.h1 * mat(li.wq)).rowwise() + vec(li.bq);
      lt.k = (lt.h1 * mat(li.wk)).rowwise() + vec(li.bk);
      lt.v = (lt.h1 * mat(li.wv)).rowwise() + vec(li.bv);
      lt.attn.setZero(S, H);
      lt.probs.resize(cfg_.num_heads);
      for (int h = 0; h < cfg_.num_heads; ++h) {
        const auto qh = lt.q.middleCols(h * d, d);
        const auto kh = lt.k.middleCols(h * d, d);
        Mat scores = (qh * kh.transpose()) * scale;
        masked_softmax_rows(scores, tape.mask);
        lt.attn.middleCols(h * d, d) = scores * lt.v.middleCols(h * d, d);
        lt.probs[h] = std::move(scores);
      }
      Mat o = (lt.attn * mat(li.wo)).rowwise() + vec(li.bo);
      if (drop) {
        lt.drop_attn = dropout_mask(derive_key(dropout_key, row, l, 0xa77ULL), S, H);
        o = o.cwiseProduct(lt.drop_attn);
      }
      x += o;
      lt.x_mid = x;
      layer_norm(x, vec(li.ln2_gain), vec(li.ln2_bias), lt.xhat2, lt.rstd2, lt.h2);
      lt.u = (lt.h2 * mat(li.w1)).rowwise() + vec(li.b1);
      lt.g = lt.u.unaryExpr([](T v) { return gelu(v); });
      Mat y = (lt.g * mat(li.w2)).rowwise() + vec(li.b2);
      if (drop) {
        lt.drop_ff = dropout_mask(derive_key(dropout_key, row, l, 0xffULL), S, H);
        y = y.cwiseProduct(lt.drop_ff);
      }
      x += y;
    }

    Mat cls = x.topRows(1);
    layer_norm(cls, vec(lnf_gain_), vec(lnf_bias_), tape.xhat_f, tape.rstd_f, tape.z);
    tape.logits = (tape.z * mat(head_w_)) + vec(head_b_);
  }

  // Softmax over unmasked keys; masked keys get weight exactly zero.
  static void masked_softmax_rows(Mat& scores, const std::uint8_t* mask) {
    const Eigen::Index n = scores.cols();
    for (Eigen::Index r = 0; r < scores.rows(); ++r) {
      T mx = -std::numeric_limits<T>::infinity();
      for (Eigen::Index c = 0; c < n; ++c) {
        if (mask[c]) mx = std::max(mx, scores(r, c));
      }
      T sum = 0;
      for (Eigen::Index c = 0; c < n; ++c) {
        if (mask[c]) {
          scores(r, c) = std::exp(scores(r, c) - mx);
          sum += scores(r, c);
        } else {
          scores(r, c) = 0;
        }
      }
      if (sum > 0) scores.row(r) /= sum;
    }
  }

  void run_backward(const Tape& tape, const RowVec& dlogits,
                    std::vector<T>& grad) const {
    const std::size_t S = tape.seq_len;
    const std::size_t H = cfg_.hidden_dim;
    const std::size_t d = cfg_.head_dim();
    const T scale = T(1) / std::sqrt(static_cast<T>(d));

    gmat(grad, head_w_) += tape.z.transpose() * dlogits;
    gvec(grad, head_b_) += dlogits;
    const Mat dz = dlogits * mat(head_w_).transpose();
    const Mat dcls = layer_norm_backward(dz, tape.xhat_f, tape.rstd_f, vec(lnf_gain_),
                                         gvec(grad, lnf_gain_), gvec(grad, lnf_bias_));
    Mat dx = Mat::Zero(S, H);
    dx.row(0) = dcls.row(0);

    for (std::size_t l = layers_.size(); l-- > 0;) {
      const LayerIndex& li = layers_[l];
      const LayerTape& lt = tape.layers[l];

      // Feed-forward block.
      Mat dy = lt.drop_ff.size() ? Mat(dx.cwiseProduct(lt.drop_ff)) : dx;
      gmat(grad, li.w2) += lt.g.transpose() * dy;
      gvec(grad, li.b2) += dy.colwise().sum();
      Mat du = dy * mat(li.w2).transpose();
      for (Eigen::Index i = 0; i < du.size(); ++i) {
        du.data()[i] *= gelu_grad(lt.u.data()[i]);
      }
      gmat(grad, li.w1) += lt.h2.transpose() * du;
      gvec(grad, li.b1) += du.colwise().sum();
      const Mat dh2 = du * mat(li.w1).transpose();
      dx += layer_norm_backward(dh2, lt.xhat2, lt.rstd2, vec(li.ln2_gain),
                                gvec(grad, li.ln2_gain), gvec(grad, li.ln2_bias));

      // Attention block.
      Mat dout = lt.drop_attn.size() ? Mat(dx.cwiseProduct(lt.drop_attn)) : dx;
      gmat(grad, li.wo) += lt.attn.transpose() * dout;
      gvec(grad, li.bo) += dout.colwise().sum();
      const Mat dattn = dout * mat(li.wo).transpose();
      Mat dq(S, H), dk(S, H), dv(S, H);
      for (int h = 0; h < cfg_.num_heads; ++h) {
        const Mat& p = lt.probs[h];
        const auto dah = dattn.middleCols(h * d, d);
        dv.middleCols(h * d, d) = p.transpose() * dah;
        Mat dp = dah * lt.v.middleCols(h * d, d).transpose();
        // Softmax backward, row by row.
        for (Eigen::Index r = 0; r < dp.rows(); ++r) {
          const T dot = dp.row(r).dot(p.row(r));
          dp.row(r) = p.row(r).cwiseProduct(
              (dp.row(r).array() - dot).matrix());
        }
        dq.middleCols(h * d, d) = (dp * lt.k.middleCols(h * d, d)) * scale;
        dk.middleCols(h * d, d) = (dp.transpose() * lt.q.middleCols(h * d, d)) * scale;
      }
      gmat(grad, li.wq) += lt.h1.transpose() * dq;
      gvec(grad, li.bq) += dq.colwise().sum();
      gmat(grad, li.wk) += lt.h1.transpose() * dk;
      gvec(grad, li.bk) += dk.colwise().sum();
      gmat(grad, li.wv) += lt.h1.transpose() * dv;
      gvec(grad, li.bv) += dv.colwise().sum();
      const Mat dh1 = dq * mat(li.wq).transpose() + dk * mat(li.wk).transpose() +
                      dv * mat(li.wv).transpose();
      dx += layer_norm_backward(dh1, lt.xhat1, lt.rstd1, vec(li.ln1_gain),
                                gvec(grad, li.ln1_gain), gvec(grad, li.ln1_bias));
    }

    if (tape.drop_emb.size()) dx = dx.cwiseProduct(tape.drop_emb);
    MatMap dtok = gmat(grad, tok_emb_);
    MatMap dpos = gmat(grad, pos_emb_);
    for (std::size_t s = 0; s < S; ++s) {
      dtok.row(tape.ids[s]) += dx.row(s);
      dpos.row(s) += dx.row(s);
    }
  }

  ModelConfig cfg_;
  std::vector<TensorInfo> tensors_;
  std::vector<LayerIndex> layers_;
  std::size_t tok_emb_ = 0, pos_emb_ = 0, lnf_gain_ = 0, lnf_bias_ = 0;
  std::size_t head_w_ = 0, head_b_ = 0;
  std::size_t total_ = 0;
  std::vector<T> params_;
};

// Mean cross-entropy of `logits` [n x 2] against labels.
template <typename Derived>
double cross_entropy(const Eigen::MatrixBase<Derived>& logits,
                     std::span<const Label> labels) {
  if (static_cast<std::size_t>(logits.rows()) != labels.size() ||
      logits.cols() != 2 || labels.empty()) {
    throw ConfigError("cross_entropy: shape mismatch");
  }
  double total = 0;
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const double l0 = static_cast<double>(logits(r, 0));
    const double l1 = static_cast<double>(logits(r, 1));
    const double mx = std::max(l0, l1);
    const double lse = mx + std::log(std::exp(l0 - mx) + std::exp(l1 - mx));
    total += lse - (labels[r] == Label::Vulnerable ? l1 : l0);
  }
  return total / static_cast<double>(labels.size());
}

// Probability of the Vulnerable class for one logit row.
inline double vulnerable_probability(double logit0, double logit1) {
  return 1.0 / (1.0 + std::exp(logit0 - logit1));
}

// Decoupled weight decay Adam.
template <typename T>
class AdamW {
 public:
  AdamW(std::size_t num_params, double lr, double weight_decay,
        double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : lr_(lr), wd_(weight_decay), beta1_(beta1), beta2_(beta2), eps_(eps),
        m_(num_params, T(0)), v_(num_params, T(0)) {}

  void step(TransformerClassifier<T>& model, const std::vector<T>& grad) {
    ++t_;
    const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    auto params = model.parameters();
    for (const auto& info : model.tensors()) {
      const T decay = info.decay ? static_cast<T>(lr_ * wd_) : T(0);
      for (std::size_t i = info.offset; i < info.offset + info.size; ++i) {
        const T g = grad[i];
        m_[i] = static_cast<T>(beta1_) * m_[i] + static_cast<T>(1 - beta1_) * g;
        v_[i] = static_cast<T>(beta2_) * v_[i] + static_cast<T>(1 - beta2_) * g * g;
        const T mhat = m_[i] / static_cast<T>(c1);
        const T vhat = v_[i] / static_cast<T>(c2);
        params[i] -= decay * params[i];
        params[i] -= static_cast<T>(lr_) * mhat /
                     (std::sqrt(vhat) + static_cast<T>(eps_));
      }
    }
  }

  std::uint64_t steps() const { return t_; }

 private:
  double lr_, wd_, beta1_, beta2_, eps_;
  std::uint64_t t_ = 0;
  std::vector<T> m_, v_;
};

struct TrainConfig {
  double learning_rate = 1e-3;  // 2e-5 is the pretrained-scale setting
  int batch_size = 8;
  int epochs = 5;
  double weight_decay = 0.01;
  int early_stop_patience = 2;
  std::uint64_t seed = 42;
  bool dynamic_padding = true;

  void validate() const {
    if (!(learning_rate > 0) || batch_size < 1 || epochs < 1 ||
        weight_decay < 0 || early_stop_patience < 1) {
      throw ConfigError(
          "train config: learning_rate, batch_size, epochs must be positive, "
          "weight_decay non-negative, patience >= 1");
    }
  }
};

struct TrainHistory {
  std::vector<double> train_loss;
  std::vector<double> val_loss;
  std::vector<double> val_accuracy;
  int stopped_epoch = 0;
  int best_epoch = 0;

  bool operator==(const TrainHistory&) const = default;
};

// Stops once the monitored value has not improved (strictly decreased) for
// `patience` consecutive epochs.
class EarlyStopping {
 public:
  explicit EarlyStopping(int patience) : patience_(patience) {}

  // Returns true when training should stop after this epoch.
  bool update(double value) {
    ++epoch_;
    if (value < best_) {
      best_ = value;
      best_epoch_ = epoch_;
      bad_ = 0;
      improved_ = true;
      return false;
    }
    improved_ = false;
    return ++bad_ >= patience_;
  }

  bool improved() const { return improved_; }
  int best_epoch() const { return best_epoch_; }
  double best() const { return best_; }

 private:
  int patience_;
  int epoch_ = 0;
  int best_epoch_ = 0;
  int bad_ = 0;
  bool improved_ = false;
  double best_ = std::numeric_limits<double>::infinity();
};

struct EpochStats {
  int epoch = 0;  // 1-based
  double train_loss = 0;
  double val_loss = 0;
  double val_accuracy = 0;
};

// Labeled encodings; both spans must have equal length.
struct Dataset {
  std::span<const Encoding> encodings;
  std::span<const Label> labels;
};

template <typename T>
std::vector<double> vulnerable_probabilities(const TransformerClassifier<T>& model,
                                             std::span<const Encoding> encodings,
                                             std::size_t batch_size = 32) {
  std::vector<double> out;
  out.reserve(encodings.size());
  for (std::size_t start = 0; start < encodings.size(); start += batch_size) {
    const std::size_t n = std::min(batch_size, encodings.size() - start);
    const auto logits = model.forward(encodings.subspan(start, n), false);
    for (Eigen::Index r = 0; r < logits.rows(); ++r) {
      out.push_back(vulnerable_probability(static_cast<double>(logits(r, 0)),
                                           static_cast<double>(logits(r, 1))));
    }
  }
  return out;
}

// Vulnerable iff P(Vulnerable) >= threshold. Dropout is off.
template <typename T>
std::vector<Label> predict(const TransformerClassifier<T>& model,
                           std::span<const Encoding> encodings,
                           double threshold = 0.5, std::size_t batch_size = 32) {
  std::vector<Label> out;
  out.reserve(encodings.size());
  for (double p : vulnerable_probabilities(model, encodings, batch_size)) {
    out.push_back(p >= threshold ? Label::Vulnerable : Label::NonVulnerable);
  }
  return out;
}

template <typename T>
double evaluate_loss(const TransformerClassifier<T>& model, Dataset data,
                     std::size_t batch_size = 32) {
  double total = 0;
  for (std::size_t start = 0; start < data.encodings.size(); start += batch_size) {
    const std::size_t n = std::min(batch_size, data.encodings.size() - start);
    const auto logits = model.forward(data.encodings.subspan(start, n), false);
    total += cross_entropy(logits, data.labels.subspan(start, n)) *
             static_cast<double>(n);
  }
  return total / static_cast<double>(data.encodings.size());
}

// Mini-batch AdamW with per-epoch shuffling keyed by (seed, epoch) and early
// stopping on validation loss. On return `model` holds the weights of the
// best validation epoch. `on_epoch` may return false to stop early.
template <typename T>
TrainHistory train(TransformerClassifier<T>& model, Dataset train_set,
                   Dataset val_set, const TrainConfig& tcfg,
                   const std::function<bool(const EpochStats&)>& on_epoch = {}) {
  tcfg.validate();
  if (train_set.encodings.empty() || val_set.encodings.empty()) {
    throw ConfigError("train: training and validation sets must be non-empty");
  }
  if (train_set.encodings.size() != train_set.labels.size() ||
      val_set.encodings.size() != val_set.labels.size()) {
    throw ConfigError("train: encodings and labels differ in length");
  }

  AdamW<T> opt(model.num_parameters(), tcfg.learning_rate, tcfg.weight_decay);
  EarlyStopping stopper(tcfg.early_stop_patience);
  std::vector<T> best(model.parameters().begin(), model.parameters().end());
  TrainHistory hist;
  std::vector<T> grad;
  std::vector<Encoding> batch_enc;
  std::vector<Label> batch_lab;

  const std::size_t n = train_set.encodings.size();
  for (int epoch = 1; epoch <= tcfg.epochs; ++epoch) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    CounterRng(derive_key(tcfg.seed, 0x5a0fULL, epoch)).shuffle(order);

    double loss_sum = 0;
    std::size_t step = 0;
    for (std::size_t start = 0; start < n; start += tcfg.batch_size, ++step) {
      const std::size_t end = std::min(n, start + tcfg.batch_size);
      batch_enc.clear();
      batch_lab.clear();
      for (std::size_t i = start; i < end; ++i) {
        batch_enc.push_back(train_set.encodings[order[i]]);
        batch_lab.push_back(train_set.labels[order[i]]);
      }
      const T loss = model.loss_and_gradient(
          batch_enc, batch_lab, grad, true,
          derive_key(tcfg.seed, 0xd20ULL, epoch, step), tcfg.dynamic_padding);
      if (!std::isfinite(static_cast<double>(loss))) {
        throw NumericError("non-finite training loss at epoch " +
                           std::to_string(epoch) + ", step " +
                           std::to_string(step));
      }
      opt.step(model, grad);
      loss_sum += static_cast<double>(loss) * static_cast<double>(end - start);
    }
    for (T p : model.parameters()) {
      if (!std::isfinite(static_cast<double>(p))) {
        throw NumericError("non-finite parameter after epoch " +
                           std::to_string(epoch));
      }
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = loss_sum / static_cast<double>(n);
    stats.val_loss = evaluate_loss(model, val_set);
    if (!std::isfinite(stats.val_loss)) {
      throw NumericError("non-finite validation loss at epoch " +
                         std::to_string(epoch));
    }
    const auto preds = predict(model, val_set.encodings);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
      correct += preds[i] == val_set.labels[i];
    }
    stats.val_accuracy = static_cast<double>(correct) / static_cast<double>(preds.size());
    hist.train_loss.push_back(stats.train_loss);
    hist.val_loss.push_back(stats.val_loss);
    hist.val_accuracy.push_back(stats.val_accuracy);
    hist.stopped_epoch = epoch;

    const bool stop = stopper.update(stats.val_loss);
    if (stopper.improved()) {
      std::copy(model.parameters().begin(), model.parameters().end(), best.begin());
    }
    const bool keep_going = on_epoch ? on_epoch(stats) : true;
    if (stop || !keep_going) break;
  }
  hist.best_epoch = stopper.best_epoch();
  std::copy(best.begin(), best.end(), model.parameters().begin());
  return hist;
}

struct GradCheckResult {
  double max_relative_error = 0;
  std::size_t checked = 0;
  std::vector<std::size_t> indices;  // parameters that were perturbed
};

// Central differences on a sample of parameters drawn from every tensor
// (token-embedding rows restricted to ids present in the batch). Dropout is
// off. Relative error is |a - n| / max(|a| + |n|, kGradCheckFloor); the floor
// sits above the central-difference roundoff (about 1e-11 at epsilon 1e-5) so
// gradients that vanish analytically do not read as large relative errors.
inline constexpr double kGradCheckFloor = 1e-6;

template <typename T>
GradCheckResult grad_check(const TransformerClassifier<T>& model,
                           std::span<const Encoding> batch,
                           std::span<const Label> labels, double epsilon,
                           std::size_t min_params = 256, std::uint64_t seed = 7) {
  std::vector<T> analytic;
  model.loss_and_gradient(batch, labels, analytic, false);
  for (T g : analytic) {
    if (!std::isfinite(static_cast<double>(g))) {
      throw NumericError("grad_check: non-finite analytic gradient");
    }
  }

  std::vector<std::int32_t> used_ids;
  for (const auto& e : batch) {
    for (std::size_t i = 0; i < e.ids.size(); ++i) {
      if (e.attention_mask[i]) used_ids.push_back(e.ids[i]);
    }
  }
  std::sort(used_ids.begin(), used_ids.end());
  used_ids.erase(std::unique(used_ids.begin(), used_ids.end()), used_ids.end());

  const auto& tensors = model.tensors();
  const std::size_t per_tensor = (min_params + tensors.size() - 1) / tensors.size();
  CounterRng rng(derive_key(seed, 0x9c4ULL));
  auto draw = [&](const TensorInfo& info) {
    if (info.name == "embeddings.token") {
      const std::size_t cols = info.shape[1];
      const auto row = used_ids[rng.uniform_below(used_ids.size())];
      return info.offset + static_cast<std::size_t>(row) * cols + rng.uniform_below(cols);
    }
    return info.offset + rng.uniform_below(info.size);
  };
  std::set<std::size_t> chosen;
  for (const auto& info : tensors) {
    for (std::size_t k = 0; k < per_tensor; ++k) chosen.insert(draw(info));
  }
  // Small tensors yield duplicates; top up from the whole model.
  const std::size_t target = std::min(min_params, model.num_parameters());
  for (std::size_t attempt = 0; chosen.size() < target && attempt < 64 * target; ++attempt) {
    chosen.insert(draw(tensors[rng.uniform_below(tensors.size())]));
  }
  std::vector<std::size_t> indices(chosen.begin(), chosen.end());

  TransformerClassifier<T> probe = model;
  auto params = probe.parameters();
  GradCheckResult res;
  for (std::size_t idx : indices) {
    const T saved = params[idx];
    params[idx] = saved + static_cast<T>(epsilon);
    const double up = cross_entropy(probe.forward(batch, false), labels);
    params[idx] = saved - static_cast<T>(epsilon);
    const double down = cross_entropy(probe.forward(batch, false), labels);
    params[idx] = saved;
    const double numeric = (up - down) / (2 * epsilon);
    const double a = static_cast<double>(analytic[idx]);
    if (!std::isfinite(numeric)) {
      throw NumericError("grad_check: non-finite numeric gradient");
    }
    const double rel = std::abs(a - numeric) /
                       std::max(std::abs(a) + std::abs(numeric), kGradCheckFloor);
    res.max_relative_error = std::max(res.max_relative_error, rel);
  }
  res.checked = indices.size();
  res.indices = std::move(indices);
  return res;
}

// Checkpoint layout (little-endian):
//   "SVCKPT01" magic, u32 version, 6 x i32 config, f64 dropout,
//   u64 vocab hash, u32 tensor count, then per tensor: u32 name length,
//   name bytes, u32 rank, u64 dims..., f64 values.
inline constexpr char kCheckpointMagic[8] = {'S', 'V', 'C', 'K', 'P', 'T', '0', '1'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

namespace detail {

template <typename V>
void put(std::ostream& out, V value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(V));
}

template <typename V>
V get(std::istream& in, const std::string& path) {
  V value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(V));
  if (!in) throw DataError("checkpoint '" + path + "' is truncated");
  return value;
}

}  // namespace detail

template <typename T>
void save_checkpoint(const TransformerClassifier<T>& model,
                     std::uint64_t vocab_hash, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  detail::put<std::uint32_t>(out, kCheckpointVersion);
  const ModelConfig& c = model.config();
  for (int v : {c.num_layers, c.hidden_dim, c.num_heads, c.ff_dim, c.max_len,
                c.vocab_size}) {
    detail::put<std::int32_t>(out, v);
  }
  detail::put<double>(out, c.dropout);
  detail::put<std::uint64_t>(out, vocab_hash);
  detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(model.tensors().size()));
  const auto params = model.parameters();
  for (const auto& t : model.tensors()) {
    detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(t.name.size()));
    out.write(t.name.data(), static_cast<std::streamsize>(t.name.size()));
    detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(t.shape.size()));
    for (auto dim : t.shape) detail::put<std::uint64_t>(out, dim);
    for (std::size_t i = 0; i < t.size; ++i) {
      detail::put<double>(out, static_cast<double>(params[t.offset + i]));
    }
  }
  if (!out) throw DataError("write to '" + path + "' failed");
}

// Refuses checkpoints whose vocabulary hash differs from `expected_vocab_hash`.
template <typename T>
TransformerClassifier<T> load_checkpoint(const std::string& path,
                                         std::uint64_t expected_vocab_hash) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint '" + path + "'");
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0) {
    throw DataError("'" + path + "' is not a model checkpoint");
  }
  const auto version = detail::get<std::uint32_t>(in, path);
  if (version != kCheckpointVersion) {
    throw DataError("checkpoint version " + std::to_string(version) +
                    " is not supported");
  }
  ModelConfig c;
  c.num_layers = detail::get<std::int32_t>(in, path);
  c.hidden_dim = detail::get<std::int32_t>(in, path);
  c.num_heads = detail::get<std::int32_t>(in, path);
  c.ff_dim = detail::get<std::int32_t>(in, path);
  c.max_len = detail::get<std::int32_t>(in, path);
  c.vocab_size = detail::get<std::int32_t>(in, path);
  c.dropout = detail::get<double>(in, path);
  const auto vocab_hash = detail::get<std::uint64_t>(in, path);
  if (vocab_hash != expected_vocab_hash) {
    throw DataError("checkpoint '" + path + "' was trained with vocabulary " +
                    hex64(vocab_hash) + ", not " + hex64(expected_vocab_hash));
  }
  TransformerClassifier<T> model(c);
  const auto count = detail::get<std::uint32_t>(in, path);
  if (count != model.tensors().size()) {
    throw DataError("checkpoint tensor count does not match its config");
  }
  auto params = model.parameters();
  for (const auto& t : model.tensors()) {
    const auto name_len = detail::get<std::uint32_t>(in, path);
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    const auto rank = detail::get<std::uint32_t>(in, path);
    std::vector<std::size_t> shape(rank);
    for (auto& dim : shape) dim = detail::get<std::uint64_t>(in, path);
    if (!in || name != t.name || shape != t.shape) {
      throw DataError("checkpoint tensor '" + name + "' does not match '" +
                      t.name + "'");
    }
    for (std::size_t i = 0; i < t.size; ++i) {
      params[t.offset + i] = static_cast<T>(detail::get<double>(in, path));
    }
  }
  return model;
}

}  // namespace slicevuln

#endif  // SLICEVULN_MODEL_HPP_
