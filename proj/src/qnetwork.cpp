#include "noisyq/qnetwork.hpp"

namespace noisyq {

namespace {

template <typename M>
std::span<double> flat(M& m) {
  return {m.data(), static_cast<std::size_t>(m.size())};
}

}  // namespace

QNetwork::QNetwork(Index inputs, int actions, const std::vector<Index>& hidden, bool noisy,
                   double sigma0, Rng& init_rng) {
  require_shape(inputs > 0 && actions > 0, "QNetwork: input and action counts must be positive");
  std::vector<Index> sizes{inputs};
  sizes.insert(sizes.end(), hidden.begin(), hidden.end());
  sizes.push_back(actions);
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const Index in = sizes[l], out = sizes[l + 1];
    if (noisy) {
      noisy_.push_back(NoisyLinear::initialised(in, out, sigma0, init_rng));
    } else {
      dense_.push_back(DenseLayer::uniform(in, out, init_rng));
    }
    LayerGrads g{RealMatrix::Zero(out, in), RealVector::Zero(out), RealMatrix(), RealVector()};
    if (noisy) {
      g.sigma_w = RealMatrix::Zero(out, in);
      g.sigma_b = RealVector::Zero(out);
    }
    grads_.push_back(std::move(g));
  }
  activations_.resize(sizes.size() - 2);
}

Index QNetwork::input_size() const {
  return noisy() ? noisy_.front().inputs() : dense_.front().inputs();
}

int QNetwork::action_count() const {
  return static_cast<int>(noisy() ? noisy_.back().outputs() : dense_.back().outputs());
}

Batch QNetwork::forward(const Batch& x) {
  Batch h = x;
  const std::size_t n = layer_count();
  for (std::size_t l = 0; l < n; ++l) {
    h = noisy() ? noisy_[l].forward(h) : dense_[l].forward(h);
    if (l + 1 < n) h = activations_[l].forward(h);
  }
  return h;
}

RealVector QNetwork::q_values(const RealVector& obs) { return forward(Batch(obs)).col(0); }

void QNetwork::backward(const Batch& upstream) {
  Batch g = upstream;
  for (std::size_t l = layer_count(); l-- > 0;) {
    auto& acc = grads_[l];
    if (noisy()) {
      NoisyGrads lg = noisy_[l].backward(g);
      acc.w += lg.mu_w;
      acc.b += lg.mu_b;
      acc.sigma_w += lg.sigma_w;
      acc.sigma_b += lg.sigma_b;
      g = std::move(lg.input);
    } else {
      DenseGrads lg = dense_[l].backward(g);
      acc.w += lg.weights;
      acc.b += lg.bias;
      g = std::move(lg.input);
    }
    if (l > 0) g = activations_[l - 1].backward(g);
  }
}

void QNetwork::zero_grad() {
  for (auto& g : grads_) {
    g.w.setZero();
    g.b.setZero();
    g.sigma_w.setZero();
    g.sigma_b.setZero();
  }
}

void QNetwork::sample_noise(Rng& rng) {
  for (auto& layer : noisy_) layer.sample_noise(rng);
}

void QNetwork::zero_noise() {
  for (auto& layer : noisy_) layer.zero_noise();
}

std::vector<ParamGroup> QNetwork::parameters() {
  std::vector<ParamGroup> out;
  for (std::size_t l = 0; l < layer_count(); ++l) {
    const std::string tag = std::to_string(l);
    auto& g = grads_[l];
    if (noisy()) {
      auto& layer = noisy_[l];
      out.push_back({"mu_w" + tag, flat(layer.mu_w()), flat(g.w)});
      out.push_back({"mu_b" + tag, flat(layer.mu_b()), flat(g.b)});
      out.push_back({"sigma_w" + tag, flat(layer.sigma_w()), flat(g.sigma_w)});
      out.push_back({"sigma_b" + tag, flat(layer.sigma_b()), flat(g.sigma_b)});
    } else {
      auto& layer = dense_[l];
      out.push_back({"w" + tag, flat(layer.weights()), flat(g.w)});
      out.push_back({"b" + tag, flat(layer.bias()), flat(g.b)});
    }
  }
  return out;
}

NoisyLinear& QNetwork::output_layer() {
  if (!noisy()) throw StateError("output_layer: network has no noisy layers");
  return noisy_.back();
}

const NoisyLinear& QNetwork::output_layer() const {
  if (!noisy()) throw StateError("output_layer: network has no noisy layers");
  return noisy_.back();
}

bool QNetwork::same_structure(const QNetwork& other) const {
  if (noisy() != other.noisy() || layer_count() != other.layer_count()) return false;
  for (std::size_t l = 0; l < layer_count(); ++l) {
    if (noisy()) {
      if (noisy_[l].inputs() != other.noisy_[l].inputs() ||
          noisy_[l].outputs() != other.noisy_[l].outputs())
        return false;
    } else if (dense_[l].inputs() != other.dense_[l].inputs() ||
               dense_[l].outputs() != other.dense_[l].outputs()) {
      return false;
    }
  }
  return true;
}

void QNetwork::copy_parameters_from(const QNetwork& other) {
  if (!same_structure(other)) throw ShapeError("copy_parameters_from: network structures differ");
  for (std::size_t l = 0; l < layer_count(); ++l) {
    if (noisy()) {
      noisy_[l].mu_w() = other.noisy_[l].mu_w();
      noisy_[l].mu_b() = other.noisy_[l].mu_b();
      noisy_[l].sigma_w() = other.noisy_[l].sigma_w();
      noisy_[l].sigma_b() = other.noisy_[l].sigma_b();
    } else {
      dense_[l].weights() = other.dense_[l].weights();
      dense_[l].bias() = other.dense_[l].bias();
    }
  }
}

}  // namespace noisyq
