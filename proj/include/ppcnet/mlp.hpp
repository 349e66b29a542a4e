#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include "ppcnet/core.hpp"

namespace ppcnet {

using Eigen::MatrixXd;
using Eigen::VectorXd;

enum class OutputHead { Regression, Logit };

enum class ForwardMode { Train, InferDeterministic, InferStochastic };

enum class LossKind { PlannerMse, CollisionBce };

struct Gradients {
  std::vector<MatrixXd> weights;
  std::vector<VectorXd> biases;
};

// Plain fully connected network: affine + ReLU per hidden layer, linear output
// head. Dropout (inverted, surviving units scaled by 1/(1-p)) is applied to
// hidden activations in Train and InferStochastic modes only. Inputs are
// normalized to [-1,1] by the stored per-input bounds before the first layer.
class Mlp {
 public:
  Mlp() = default;

  Mlp(std::vector<int> layer_sizes, double dropout_rate, OutputHead head, VectorXd input_lo,
      VectorXd input_hi)
      : layer_sizes_(std::move(layer_sizes)),
        dropout_rate_(dropout_rate),
        head_(head),
        input_lo_(std::move(input_lo)),
        input_hi_(std::move(input_hi)) {
    if (layer_sizes_.size() < 2) throw ContractError("mlp: need at least input and output layers");
    if (dropout_rate_ < 0.0 || dropout_rate_ >= 1.0) {
      throw ContractError("mlp: dropout rate must be in [0,1)");
    }
    if (input_lo_.size() != layer_sizes_.front() || input_hi_.size() != layer_sizes_.front()) {
      throw ContractError("mlp: input bounds must match input width");
    }
    weights_.resize(num_layers());
    biases_.resize(num_layers());
    for (std::size_t l = 0; l < num_layers(); ++l) {
      weights_[l] = MatrixXd::Zero(layer_sizes_[l + 1], layer_sizes_[l]);
      biases_[l] = VectorXd::Zero(layer_sizes_[l + 1]);
    }
  }

  std::size_t num_layers() const { return layer_sizes_.size() - 1; }
  const std::vector<int>& layer_sizes() const { return layer_sizes_; }
  int input_size() const { return layer_sizes_.front(); }
  int output_size() const { return layer_sizes_.back(); }
  double dropout_rate() const { return dropout_rate_; }
  OutputHead head() const { return head_; }
  const VectorXd& input_lo() const { return input_lo_; }
  const VectorXd& input_hi() const { return input_hi_; }
  std::vector<MatrixXd>& weights() { return weights_; }
  std::vector<VectorXd>& biases() { return biases_; }
  const std::vector<MatrixXd>& weights() const { return weights_; }
  const std::vector<VectorXd>& biases() const { return biases_; }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    for (std::size_t l = 0; l < num_layers(); ++l) {
      n += static_cast<std::size_t>(weights_[l].size()) + biases_[l].size();
    }
    return n;
  }

  // He-normal weights, zero biases.
  void init_random(Rng& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t l = 0; l < num_layers(); ++l) {
      const double scale = std::sqrt(2.0 / layer_sizes_[l]);
      for (Eigen::Index i = 0; i < weights_[l].size(); ++i) {
        weights_[l].data()[i] = scale * gauss(rng);
      }
      biases_[l].setZero();
    }
  }

  MatrixXd normalize_input(const MatrixXd& raw) const {
    if (raw.rows() != input_size()) throw DimensionError("mlp: input width mismatch");
    MatrixXd x = raw;
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
      const double lo = input_lo_[r];
      const double hi = input_hi_[r];
      x.row(r) = (2.0 * (x.row(r).array() - lo) / (hi - lo) - 1.0).matrix();
    }
    return x;
  }

  // Raw inputs as columns; returns outputs as columns. `rng` is required for
  // Train and InferStochastic when dropout is active.
  MatrixXd forward(const MatrixXd& raw_input, ForwardMode mode, Rng* rng = nullptr) const {
    Cache cache;
    return forward_internal(raw_input, mode, rng, &cache);
  }

  // Same outputs and rng draws as forward(), skipping the backward-pass cache;
  // for hot inference loops.
  MatrixXd infer(const MatrixXd& raw_input, ForwardMode mode, Rng* rng = nullptr) const {
    const bool use_dropout =
        dropout_rate_ > 0.0 && (mode == ForwardMode::Train || mode == ForwardMode::InferStochastic);
    if (use_dropout && rng == nullptr) {
      throw ContractError("mlp: stochastic forward mode needs an rng");
    }
    MatrixXd a = normalize_input(raw_input);
    MatrixXd z;
    const double keep = 1.0 - dropout_rate_;
    const double inv_keep = use_dropout ? 1.0 / keep : 1.0;
    const std::uint64_t keep_bound =
        static_cast<std::uint64_t>(keep * 9007199254740992.0);  // keep * 2^53
    for (std::size_t l = 0; l + 1 < num_layers(); ++l) {
      z.noalias() = weights_[l] * a;
      z.colwise() += biases_[l];
      z = z.cwiseMax(0.0);
      if (use_dropout) {
        for (Eigen::Index i = 0; i < z.size(); ++i) {
          z.data()[i] *= ((*rng)() >> 11) < keep_bound ? inv_keep : 0.0;
        }
      }
      a.swap(z);
    }
    z.noalias() = weights_.back() * a;
    z.colwise() += biases_.back();
    return z;
  }

  double forward_scalar(const VectorXd& raw_input, ForwardMode mode, Rng* rng = nullptr) const {
    return forward(raw_input, mode, rng)(0, 0);
  }

  // Mean loss and its gradient with respect to every parameter, computed in one
  // backward pass. Dropout masks (Train mode) are shared between the forward
  // and backward passes.
  double gradients(const MatrixXd& raw_input, const MatrixXd& targets, LossKind loss,
                   ForwardMode mode, Rng* rng, Gradients* grads) const {
    Cache cache;
    const MatrixXd output = forward_internal(raw_input, mode, rng, &cache);
    const Eigen::Index batch = raw_input.cols();
    if (batch == 0) throw ContractError("mlp: empty batch");

    double loss_value = 0.0;
    MatrixXd delta;  // dLoss/dZ for the output layer
    if (loss == LossKind::PlannerMse) {
      const MatrixXd err = output - targets;
      loss_value = err.colwise().squaredNorm().mean();
      delta = 2.0 * err / static_cast<double>(batch);
    } else {
      delta.resize(output.rows(), output.cols());
      for (Eigen::Index c = 0; c < batch; ++c) {
        const double z = output(0, c);
        const double y = targets(0, c);
        loss_value += stable_bce(z, y);
        delta(0, c) = (sigmoid(z) - y) / static_cast<double>(batch);
      }
      loss_value /= static_cast<double>(batch);
    }
    if (!grads) return loss_value;

    grads->weights.resize(num_layers());
    grads->biases.resize(num_layers());
    for (std::size_t li = num_layers(); li-- > 0;) {
      grads->weights[li].noalias() = delta * cache.activations[li].transpose();
      grads->biases[li] = delta.rowwise().sum();
      if (li == 0) break;
      MatrixXd upstream = weights_[li].transpose() * delta;
      // Through dropout, then through the ReLU.
      if (cache.masks_active) upstream.array() *= cache.masks[li - 1].array();
      upstream.array() *= (cache.pre_activations[li - 1].array() > 0.0).cast<double>();
      delta = std::move(upstream);
    }
    return loss_value;
  }

  bool same_shape(const Mlp& other) const {
    return layer_sizes_ == other.layer_sizes_;
  }

 private:
  struct Cache {
    std::vector<MatrixXd> activations;      // layer inputs, activations[0] = normalized input
    std::vector<MatrixXd> pre_activations;  // hidden layer pre-nonlinearity
    std::vector<MatrixXd> masks;            // dropout masks per hidden layer
    bool masks_active = false;
  };

  static double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

  // max(z,0) - z*y + log(1 + exp(-|z|)): finite for any finite logit and label.
  static double stable_bce(double z, double y) {
    return std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
  }

  MatrixXd forward_internal(const MatrixXd& raw_input, ForwardMode mode, Rng* rng,
                            Cache* cache) const {
    const bool use_dropout =
        dropout_rate_ > 0.0 && (mode == ForwardMode::Train || mode == ForwardMode::InferStochastic);
    if (use_dropout && rng == nullptr) {
      throw ContractError("mlp: stochastic forward mode needs an rng");
    }
    cache->activations.clear();
    cache->pre_activations.clear();
    cache->masks.clear();
    cache->masks_active = use_dropout;

    MatrixXd a = normalize_input(raw_input);
    cache->activations.push_back(a);
    const double keep = 1.0 - dropout_rate_;
    const double inv_keep = use_dropout ? 1.0 / keep : 1.0;
    // One raw 53-bit draw per unit against keep in fixed point: the same
    // Bernoulli as a canonical-double comparison, without the per-unit
    // division of uniform_real_distribution.
    const std::uint64_t keep_bound =
        static_cast<std::uint64_t>(keep * 9007199254740992.0);  // keep * 2^53
    for (std::size_t l = 0; l + 1 < num_layers(); ++l) {
      MatrixXd z = (weights_[l] * a).colwise() + biases_[l];
      cache->pre_activations.push_back(z);
      a = z.cwiseMax(0.0);
      if (use_dropout) {
        MatrixXd mask(a.rows(), a.cols());
        for (Eigen::Index i = 0; i < mask.size(); ++i) {
          mask.data()[i] = ((*rng)() >> 11) < keep_bound ? inv_keep : 0.0;
        }
        a.array() *= mask.array();
        cache->masks.push_back(std::move(mask));
      } else {
        cache->masks.emplace_back();
      }
      cache->activations.push_back(a);
    }
    return (weights_.back() * a).colwise() + biases_.back();
  }

  std::vector<int> layer_sizes_;
  double dropout_rate_ = 0.0;
  OutputHead head_ = OutputHead::Regression;
  VectorXd input_lo_;
  VectorXd input_hi_;
  std::vector<MatrixXd> weights_;
  std::vector<VectorXd> biases_;
};

// Mean over all waypoints of the squared Euclidean prediction error.
inline double planner_loss(const MatrixXd& predictions, const MatrixXd& targets) {
  if (predictions.rows() != targets.rows() || predictions.cols() != targets.cols()) {
    throw DimensionError("planner_loss: shape mismatch");
  }
  if (predictions.cols() == 0) throw ContractError("planner_loss: empty batch");
  return (predictions - targets).colwise().squaredNorm().mean();
}

// Binary cross-entropy on logits, log-sum-exp form; labels may be soft.
inline double collision_loss(const VectorXd& logits, const VectorXd& labels) {
  if (logits.size() != labels.size()) throw DimensionError("collision_loss: shape mismatch");
  if (logits.size() == 0) throw ContractError("collision_loss: empty batch");
  double total = 0.0;
  for (Eigen::Index i = 0; i < logits.size(); ++i) {
    const double z = logits[i];
    const double y = labels[i];
    total += std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
  }
  return total / static_cast<double>(logits.size());
}

struct AdamState {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long step = 0;
  std::vector<MatrixXd> m_weights, v_weights;
  std::vector<VectorXd> m_biases, v_biases;

  explicit AdamState(const Mlp& net, double lr_ = 1e-4) : lr(lr_) {
    for (std::size_t l = 0; l < net.num_layers(); ++l) {
      m_weights.push_back(MatrixXd::Zero(net.weights()[l].rows(), net.weights()[l].cols()));
      v_weights.push_back(MatrixXd::Zero(net.weights()[l].rows(), net.weights()[l].cols()));
      m_biases.push_back(VectorXd::Zero(net.biases()[l].size()));
      v_biases.push_back(VectorXd::Zero(net.biases()[l].size()));
    }
  }
};

// Standard bias-corrected Adam update, in place.
inline void adam_step(Mlp& net, AdamState& state, const Gradients& grads) {
  if (grads.weights.size() != net.num_layers()) throw DimensionError("adam_step: shape mismatch");
  state.step += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
      m = state.beta1 * m + (1.0 - state.beta1) * g;
      v = state.beta2 * v + (1.0 - state.beta2) * g.cwiseProduct(g);
      param.array() -=
          state.lr * (m.array() / bc1) / ((v.array() / bc2).sqrt() + state.eps);
    };
    update(net.weights()[l], state.m_weights[l], state.v_weights[l], grads.weights[l]);
    update(net.biases()[l], state.m_biases[l], state.v_biases[l], grads.biases[l]);
  }
}

struct FitParams {
  int epochs = 100;
  int batch_size = 256;
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Shuffled mini-batch training. Returns the mean loss over the last epoch.
inline double fit(Mlp& net, const MatrixXd& inputs, const MatrixXd& targets, LossKind loss,
                  const FitParams& params, Rng& rng) {
  const Eigen::Index n = inputs.cols();
  if (n == 0) throw ContractError("fit: empty dataset");
  AdamState adam(net, params.lr);
  adam.beta1 = params.beta1;
  adam.beta2 = params.beta2;
  adam.eps = params.eps;

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  Gradients grads;
  double last_epoch_loss = 0.0;
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    // Fisher-Yates keeps shuffling deterministic across library versions.
    for (Eigen::Index i = n - 1; i > 0; --i) {
      std::uniform_int_distribution<Eigen::Index> pick(0, i);
      std::swap(order[i], order[pick(rng)]);
    }
    double epoch_loss = 0.0;
    Eigen::Index batches = 0;
    for (Eigen::Index begin = 0; begin < n; begin += params.batch_size) {
      const Eigen::Index size = std::min<Eigen::Index>(params.batch_size, n - begin);
      MatrixXd bx(inputs.rows(), size);
      MatrixXd by(targets.rows(), size);
      for (Eigen::Index c = 0; c < size; ++c) {
        bx.col(c) = inputs.col(order[begin + c]);
        by.col(c) = targets.col(order[begin + c]);
      }
      epoch_loss += net.gradients(bx, by, loss, ForwardMode::Train, &rng, &grads);
      adam_step(net, adam, grads);
      ++batches;
    }
    last_epoch_loss = epoch_loss / static_cast<double>(batches);
  }
  return last_epoch_loss;
}

// --- checkpoint i/o ----------------------------------------------------------
//
// Binary: magic, u32 version, u32 head, f64 dropout, u32 layer count, u32
// sizes, f64 input bounds (lo then hi), then the flat little-endian f64
// parameter block (per layer: column-major weights, then biases).

namespace detail {

constexpr char kCheckpointMagic[8] = {'P', 'P', 'C', 'N', 'C', 'K', 'P', 'T'};

template <typename T>
void write_pod(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& in, const std::string& path) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw FormatError("checkpoint: truncated file '" + path + "'");
  return v;
}

}  // namespace detail

inline void save_checkpoint(const Mlp& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("checkpoint: cannot write '" + path + "'");
  out.write(detail::kCheckpointMagic, sizeof(detail::kCheckpointMagic));
  detail::write_pod<std::uint32_t>(out, 1);
  detail::write_pod<std::uint32_t>(out, net.head() == OutputHead::Regression ? 0 : 1);
  detail::write_pod<double>(out, net.dropout_rate());
  detail::write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(net.layer_sizes().size()));
  for (int s : net.layer_sizes()) detail::write_pod<std::uint32_t>(out, s);
  for (Eigen::Index i = 0; i < net.input_lo().size(); ++i) {
    detail::write_pod<double>(out, net.input_lo()[i]);
  }
  for (Eigen::Index i = 0; i < net.input_hi().size(); ++i) {
    detail::write_pod<double>(out, net.input_hi()[i]);
  }
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    out.write(reinterpret_cast<const char*>(net.weights()[l].data()),
              static_cast<std::streamsize>(sizeof(double) * net.weights()[l].size()));
    out.write(reinterpret_cast<const char*>(net.biases()[l].data()),
              static_cast<std::streamsize>(sizeof(double) * net.biases()[l].size()));
  }
  if (!out) throw FormatError("checkpoint: write failed for '" + path + "'");
}

inline Mlp load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("checkpoint: cannot open '" + path + "'");
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, detail::kCheckpointMagic, sizeof(magic)) != 0) {
    throw FormatError("checkpoint: bad magic in '" + path + "'");
  }
  const auto version = detail::read_pod<std::uint32_t>(in, path);
  if (version != 1) throw FormatError("checkpoint: unsupported version in '" + path + "'");
  const auto head_code = detail::read_pod<std::uint32_t>(in, path);
  if (head_code > 1) throw FormatError("checkpoint: bad output head in '" + path + "'");
  const double dropout = detail::read_pod<double>(in, path);
  const auto n_layers = detail::read_pod<std::uint32_t>(in, path);
  if (n_layers < 2 || n_layers > 64) throw FormatError("checkpoint: bad layer count in '" + path + "'");
  std::vector<int> sizes(n_layers);
  for (auto& s : sizes) {
    s = static_cast<int>(detail::read_pod<std::uint32_t>(in, path));
    if (s < 1) throw FormatError("checkpoint: bad layer size in '" + path + "'");
  }
  VectorXd lo(sizes.front()), hi(sizes.front());
  for (Eigen::Index i = 0; i < lo.size(); ++i) lo[i] = detail::read_pod<double>(in, path);
  for (Eigen::Index i = 0; i < hi.size(); ++i) hi[i] = detail::read_pod<double>(in, path);
  Mlp net(sizes, dropout, head_code == 0 ? OutputHead::Regression : OutputHead::Logit,
          std::move(lo), std::move(hi));
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    in.read(reinterpret_cast<char*>(net.weights()[l].data()),
            static_cast<std::streamsize>(sizeof(double) * net.weights()[l].size()));
    in.read(reinterpret_cast<char*>(net.biases()[l].data()),
            static_cast<std::streamsize>(sizeof(double) * net.biases()[l].size()));
    if (!in) throw FormatError("checkpoint: truncated file '" + path + "'");
  }
  char extra;
  if (in.read(&extra, 1)) throw FormatError("checkpoint: trailing bytes in '" + path + "'");
  return net;
}

}  // namespace ppcnet
