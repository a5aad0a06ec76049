#ifndef PIVOTROUTE_LSTM_HPP
#define PIVOTROUTE_LSTM_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "pivotroute/featurizer.hpp"

namespace pivotroute {

// Gate rows inside the stacked 4H pre-activation: input, forget, candidate, output.
enum Gate : int { kInputGate = 0, kForgetGate = 1, kCandidateGate = 2, kOutputGate = 3 };

template <typename Scalar>
struct LstmLayer {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix input_weights;      // 4H x in
  Matrix recurrent_weights;  // 4H x H
  Matrix bias;               // 4H x 1

  Eigen::Index hidden_dim() const { return recurrent_weights.cols(); }
  Eigen::Index input_dim() const { return input_weights.cols(); }
};

/// Path-quality regressor: language embeddings feed a stacked LSTM whose last
/// top-layer hidden state goes through a linear head. The same type doubles as
/// the gradient and optimizer-moment container.
template <typename Scalar>
class LtrModel {
public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  EmbeddingTable<Scalar> embeddings;  // kEmbeddingDim x num_languages
  std::vector<LstmLayer<Scalar>> layers;
  Matrix head_weights;  // H x 1
  Matrix head_bias;     // 1 x 1

  LtrModel() = default;
  LtrModel(std::size_t num_languages, Eigen::Index hidden_dim, std::size_t num_layers) {
    const auto n = static_cast<Eigen::Index>(num_languages);
    embeddings = Matrix::Zero(kEmbeddingDim, n);
    Eigen::Index in = kFeatureDim;
    for (std::size_t l = 0; l < num_layers; ++l) {
      layers.push_back({Matrix::Zero(4 * hidden_dim, in), Matrix::Zero(4 * hidden_dim, hidden_dim),
                        Matrix::Zero(4 * hidden_dim, 1)});
      in = hidden_dim;
    }
    head_weights = Matrix::Zero(hidden_dim, 1);
    head_bias = Matrix::Zero(1, 1);
  }

  std::size_t num_languages() const { return static_cast<std::size_t>(embeddings.cols()); }
  std::size_t num_layers() const { return layers.size(); }
  Eigen::Index hidden_dim() const { return head_weights.rows(); }

  /// Zero-valued model of identical shape.
  LtrModel zeros_like() const {
    LtrModel z = *this;
    z.visit([](const std::string&, Matrix& m) { m.setZero(); });
    return z;
  }

  /// Calls f(name, tensor) for every parameter tensor in a fixed order.
  template <typename F>
  void visit(F&& f) {
    f("embeddings", embeddings);
    for (std::size_t l = 0; l < layers.size(); ++l) {
      const auto prefix = "lstm." + std::to_string(l) + ".";
      f(prefix + "input_weights", layers[l].input_weights);
      f(prefix + "recurrent_weights", layers[l].recurrent_weights);
      f(prefix + "bias", layers[l].bias);
    }
    f("head.weights", head_weights);
    f("head.bias", head_bias);
  }

  template <typename F>
  void visit(F&& f) const {
    const_cast<LtrModel*>(this)->visit([&](const std::string& name, Matrix& m) { f(name, std::as_const(m)); });
  }

  std::size_t parameter_count() const {
    std::size_t n = 0;
    visit([&](const std::string&, const Matrix& m) { n += static_cast<std::size_t>(m.size()); });
    return n;
  }

  bool all_finite() const {
    bool ok = true;
    visit([&](const std::string&, const Matrix& m) { ok = ok && m.allFinite(); });
    return ok;
  }

  bool operator==(const LtrModel& other) const {
    if (layers.size() != other.layers.size()) return false;
    bool same = true;
    std::vector<const Matrix*> mine, theirs;
    visit([&](const std::string&, const Matrix& m) { mine.push_back(&m); });
    other.visit([&](const std::string&, const Matrix& m) { theirs.push_back(&m); });
    for (std::size_t i = 0; i < mine.size() && same; ++i)
      same = mine[i]->rows() == theirs[i]->rows() && mine[i]->cols() == theirs[i]->cols() && *mine[i] == *theirs[i];
    return same;
  }
};

/// Parameters drawn from U[-0.1, 0.1], deterministic in seed.
template <typename Scalar>
LtrModel<Scalar> init_model(std::size_t num_languages, Eigen::Index hidden_dim, std::size_t num_layers,
                            std::uint64_t seed) {
  if (num_languages < 2) throw Error("init_model: need at least 2 languages");
  if (hidden_dim < 1) throw Error("init_model: hidden_dim must be positive");
  if (num_layers < 1) throw Error("init_model: need at least one layer");
  LtrModel<Scalar> model(num_languages, hidden_dim, num_layers);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(-0.1, 0.1);
  model.visit([&](const std::string&, typename LtrModel<Scalar>::Matrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = static_cast<Scalar>(uniform(rng));
  });
  return model;
}

template <typename Scalar>
Scalar sigmoid(Scalar x) {
  return Scalar(1) / (Scalar(1) + std::exp(-x));
}

/// Activations of one layer over a sequence, kept for backpropagation.
template <typename Scalar>
struct LayerTrace {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix inputs;  // in x T
  Matrix gates;   // 4H x T, post-nonlinearity
  Matrix cells;   // H x T
  Matrix hidden;  // H x T
};

template <typename Scalar>
struct ForwardTrace {
  std::vector<LayerTrace<Scalar>> layers;
  Scalar prediction = Scalar(0);
};

template <typename Scalar>
ForwardTrace<Scalar> forward_trace(const LtrModel<Scalar>& model, const FeatureSequence<Scalar>& features) {
  using Matrix = typename LtrModel<Scalar>::Matrix;
  using Vector = typename LtrModel<Scalar>::Vector;
  if (model.layers.empty()) throw Error("forward: model has no layers");
  if (features.rows() != model.layers.front().input_dim())
    throw Error("forward: feature dimension " + std::to_string(features.rows()) + " does not match model input " +
                std::to_string(model.layers.front().input_dim()));
  if (features.cols() == 0) throw Error("forward: empty sequence");

  const auto steps = features.cols();
  ForwardTrace<Scalar> trace;
  trace.layers.reserve(model.layers.size());
  Matrix inputs = features;
  for (const auto& layer : model.layers) {
    const auto h = layer.hidden_dim();
    LayerTrace<Scalar> lt;
    lt.gates.resize(4 * h, steps);
    lt.cells.resize(h, steps);
    lt.hidden.resize(h, steps);
    Vector prev_h = Vector::Zero(h);
    Vector prev_c = Vector::Zero(h);
    for (Eigen::Index t = 0; t < steps; ++t) {
      Vector a = layer.input_weights * inputs.col(t) + layer.recurrent_weights * prev_h + layer.bias;
      for (Eigen::Index k = 0; k < 4 * h; ++k) {
        const bool candidate = k >= kCandidateGate * h && k < kOutputGate * h;
        a[k] = candidate ? std::tanh(a[k]) : sigmoid(a[k]);
      }
      const auto i = a.segment(kInputGate * h, h).array();
      const auto f = a.segment(kForgetGate * h, h).array();
      const auto g = a.segment(kCandidateGate * h, h).array();
      const auto o = a.segment(kOutputGate * h, h).array();
      Vector c = (f * prev_c.array() + i * g).matrix();
      Vector hid = (o * c.array().tanh()).matrix();
      lt.gates.col(t) = a;
      lt.cells.col(t) = c;
      lt.hidden.col(t) = hid;
      prev_h = hid;
      prev_c = c;
    }
    lt.inputs = std::move(inputs);
    inputs = lt.hidden;
    trace.layers.push_back(std::move(lt));
  }
  const auto& top = trace.layers.back().hidden;
  trace.prediction = (model.head_weights.transpose() * top.col(steps - 1))(0, 0) + model.head_bias(0, 0);
  return trace;
}

/// Predicted normalized BLEU; the head is linear so values may leave [0,1].
template <typename Scalar>
Scalar forward(const LtrModel<Scalar>& model, const FeatureSequence<Scalar>& features) {
  return forward_trace(model, features).prediction;
}

template <typename Scalar>
Scalar forward(const LtrModel<Scalar>& model, const EncodedPath& path) {
  return forward(model, featurize<Scalar>(path, model.embeddings));
}

template <typename Scalar>
Scalar loss_mse(Scalar prediction, Scalar label) {
  const Scalar d = prediction - label;
  return d * d;
}

/// Backpropagation through time for a single sequence. Accumulates into
/// `grad` (same shape as model) and returns dLoss/dFeatures.
template <typename Scalar>
FeatureSequence<Scalar> backward_features(const LtrModel<Scalar>& model, const ForwardTrace<Scalar>& trace,
                                          Scalar dprediction, LtrModel<Scalar>& grad) {
  using Matrix = typename LtrModel<Scalar>::Matrix;
  using Vector = typename LtrModel<Scalar>::Vector;
  const auto& top = trace.layers.back().hidden;
  const auto steps = top.cols();

  grad.head_weights += top.col(steps - 1) * dprediction;
  grad.head_bias(0, 0) += dprediction;

  Matrix d_hidden = Matrix::Zero(model.hidden_dim(), steps);
  d_hidden.col(steps - 1) = model.head_weights * dprediction;

  for (std::size_t li = model.layers.size(); li-- > 0;) {
    const auto& layer = model.layers[li];
    const auto& lt = trace.layers[li];
    auto& lg = grad.layers[li];
    const auto h = layer.hidden_dim();
    Matrix d_inputs(layer.input_dim(), steps);
    Vector dh_next = Vector::Zero(h);
    Vector dc_next = Vector::Zero(h);
    Vector da(4 * h);
    for (Eigen::Index t = steps; t-- > 0;) {
      const auto gates = lt.gates.col(t);
      const auto i = gates.segment(kInputGate * h, h).array();
      const auto f = gates.segment(kForgetGate * h, h).array();
      const auto g = gates.segment(kCandidateGate * h, h).array();
      const auto o = gates.segment(kOutputGate * h, h).array();
      const Vector prev_c = t > 0 ? Vector(lt.cells.col(t - 1)) : Vector::Zero(h);
      const Vector tanh_c = lt.cells.col(t).array().tanh();

      const Vector dh = d_hidden.col(t) + dh_next;
      const Vector dc = (dh.array() * o * (Scalar(1) - tanh_c.array().square())).matrix() + dc_next;
      da.segment(kInputGate * h, h) = (dc.array() * g * i * (Scalar(1) - i)).matrix();
      da.segment(kForgetGate * h, h) = (dc.array() * prev_c.array() * f * (Scalar(1) - f)).matrix();
      da.segment(kCandidateGate * h, h) = (dc.array() * i * (Scalar(1) - g.square())).matrix();
      da.segment(kOutputGate * h, h) = (dh.array() * tanh_c.array() * o * (Scalar(1) - o)).matrix();
      dc_next = (dc.array() * f).matrix();

      lg.input_weights.noalias() += da * lt.inputs.col(t).transpose();
      if (t > 0) lg.recurrent_weights.noalias() += da * lt.hidden.col(t - 1).transpose();
      lg.bias += da;
      d_inputs.col(t).noalias() = layer.input_weights.transpose() * da;
      dh_next.noalias() = layer.recurrent_weights.transpose() * da;
    }
    d_hidden = std::move(d_inputs);
  }
  return d_hidden;
}

/// Routes feature gradients into the embedding columns the tokens read from;
/// hop tokens give half to each language.
template <typename Scalar>
void scatter_embedding_grad(const EncodedPath& path, const FeatureSequence<Scalar>& d_features,
                            EmbeddingTable<Scalar>& d_embeddings) {
  const auto e = d_embeddings.rows();
  for (std::size_t t = 0; t < path.length(); ++t) {
    const auto [a, b] = path.tokens[t];
    const auto col = d_features.col(static_cast<Eigen::Index>(t)).head(e);
    if (a == b) {
      d_embeddings.col(static_cast<Eigen::Index>(a)) += col;
    } else {
      d_embeddings.col(static_cast<Eigen::Index>(a)) += Scalar(0.5) * col;
      d_embeddings.col(static_cast<Eigen::Index>(b)) += Scalar(0.5) * col;
    }
  }
}

/// Accumulates dLoss/dParams of one (path, label) sample into grad and
/// returns the loss.
template <typename Scalar>
Scalar accumulate_gradient(const LtrModel<Scalar>& model, const EncodedPath& path, Scalar label,
                           LtrModel<Scalar>& grad, Scalar weight = Scalar(1)) {
  const auto features = featurize<Scalar>(path, model.embeddings);
  const auto trace = forward_trace(model, features);
  const Scalar dpred = weight * Scalar(2) * (trace.prediction - label);
  const auto d_features = backward_features(model, trace, dpred, grad);
  scatter_embedding_grad(path, d_features, grad.embeddings);
  return loss_mse(trace.prediction, label);
}

/// Exact gradient of loss_mse(forward(model, path), label) for every parameter.
template <typename Scalar>
LtrModel<Scalar> backward(const LtrModel<Scalar>& model, const EncodedPath& path, Scalar label) {
  auto grad = model.zeros_like();
  accumulate_gradient(model, path, label, grad);
  return grad;
}

/// Same parameters at another precision.
template <typename To, typename From>
LtrModel<To> cast_model(const LtrModel<From>& model) {
  LtrModel<To> out(model.num_languages(), model.hidden_dim(), model.num_layers());
  std::vector<const typename LtrModel<From>::Matrix*> src;
  model.visit([&](const std::string&, const typename LtrModel<From>::Matrix& m) { src.push_back(&m); });
  std::size_t i = 0;
  out.visit([&](const std::string&, typename LtrModel<To>::Matrix& m) { m = src[i++]->template cast<To>(); });
  return out;
}

/// Max over parameters of |a - n| / max(|a|, |n|, 1e-8), where n is the
/// central difference estimate of each partial derivative. The two probe
/// losses are evaluated at Probe precision; with Probe = Scalar the
/// difference quotient carries roughly ulp(loss) / epsilon of roundoff, which
/// swamps partials near the 1e-8 floor.
template <typename Probe = long double, typename Scalar>
Scalar compare_gradients(const LtrModel<Scalar>& model, const EncodedPath& path, Scalar label,
                         const LtrModel<Scalar>& analytic, Scalar epsilon = Scalar(1e-5)) {
  using Matrix = typename LtrModel<Probe>::Matrix;
  LtrModel<Probe> probe = cast_model<Probe>(model);
  std::vector<Matrix*> probe_params;
  std::vector<const typename LtrModel<Scalar>::Matrix*> grad_params;
  probe.visit([&](const std::string&, Matrix& m) { probe_params.push_back(&m); });
  analytic.visit([&](const std::string&, const typename LtrModel<Scalar>::Matrix& m) { grad_params.push_back(&m); });

  const Probe eps = static_cast<Probe>(epsilon);
  auto loss = [&] { return loss_mse(forward(probe, path), static_cast<Probe>(label)); };
  Scalar worst = Scalar(0);
  for (std::size_t p = 0; p < probe_params.size(); ++p) {
    Matrix& param = *probe_params[p];
    for (Eigen::Index k = 0; k < param.size(); ++k) {
      const Probe saved = param.data()[k];
      param.data()[k] = saved + eps;
      const Probe up = loss();
      param.data()[k] = saved - eps;
      const Probe down = loss();
      param.data()[k] = saved;
      const auto numeric = static_cast<Scalar>((up - down) / (Probe(2) * eps));
      const Scalar a = grad_params[p]->data()[k];
      const Scalar denom = std::max({std::abs(a), std::abs(numeric), Scalar(1e-8)});
      worst = std::max(worst, std::abs(a - numeric) / denom);
    }
  }
  return worst;
}

template <typename Probe = long double, typename Scalar>
Scalar grad_check(const LtrModel<Scalar>& model, const EncodedPath& path, Scalar label,
                  Scalar epsilon = Scalar(1e-5)) {
  return compare_gradients<Probe>(model, path, label, backward(model, path, label), epsilon);
}

struct AdamConfig {
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

template <typename Scalar>
class AdamOptimizer {
public:
  using Matrix = typename LtrModel<Scalar>::Matrix;

  AdamOptimizer(const LtrModel<Scalar>& model, AdamConfig config)
      : config_(config), first_(model.zeros_like()), second_(model.zeros_like()) {}

  void step(LtrModel<Scalar>& model, const LtrModel<Scalar>& grad) {
    ++steps_;
    const Scalar b1 = static_cast<Scalar>(config_.beta1);
    const Scalar b2 = static_cast<Scalar>(config_.beta2);
    const Scalar lr = static_cast<Scalar>(config_.learning_rate);
    const Scalar eps = static_cast<Scalar>(config_.epsilon);
    const Scalar c1 = Scalar(1) - std::pow(b1, static_cast<Scalar>(steps_));
    const Scalar c2 = Scalar(1) - std::pow(b2, static_cast<Scalar>(steps_));

    std::vector<Matrix*> params, m1, m2;
    std::vector<const Matrix*> grads;
    model.visit([&](const std::string&, Matrix& m) { params.push_back(&m); });
    first_.visit([&](const std::string&, Matrix& m) { m1.push_back(&m); });
    second_.visit([&](const std::string&, Matrix& m) { m2.push_back(&m); });
    grad.visit([&](const std::string&, const Matrix& m) { grads.push_back(&m); });
    for (std::size_t p = 0; p < params.size(); ++p) {
      *m1[p] = b1 * *m1[p] + (Scalar(1) - b1) * *grads[p];
      *m2[p] = b2 * *m2[p] + (Scalar(1) - b2) * grads[p]->cwiseAbs2();
      params[p]->array() -= lr * (m1[p]->array() / c1) / ((m2[p]->array() / c2).sqrt() + eps);
    }
  }

  std::uint64_t steps() const { return steps_; }

private:
  AdamConfig config_;
  LtrModel<Scalar> first_;
  LtrModel<Scalar> second_;
  std::uint64_t steps_ = 0;
};

}  // namespace pivotroute

#endif
