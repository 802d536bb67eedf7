#include "slicesim/neural.hpp"

#include <cmath>

#include "slicesim/errors.hpp"
#include "slicesim/rng.hpp"

namespace slicesim {

Mlp mlp_init(const std::vector<int>& dims, std::uint64_t seed) {
  if (dims.size() < 2)
    throw ValidationError("mlp_init: need at least input and output dims");
  for (int d : dims)
    if (d < 1) throw ValidationError("mlp_init: dims must be >= 1");

  Mlp net;
  net.dims = dims;
  Rng rng(seed);
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const int fan_in = dims[l], fan_out = dims[l + 1];
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    Eigen::MatrixXd w(fan_out, fan_in);
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      for (Eigen::Index j = 0; j < w.cols(); ++j)
        w(i, j) = rng.uniform(-limit, limit);
    net.weights.push_back(std::move(w));
    net.biases.emplace_back(Eigen::VectorXd::Zero(fan_out));
  }
  return net;
}

Eigen::VectorXd mlp_forward(const Mlp& net,
                            const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != net.input_dim())
    throw ValidationError("mlp_forward: input dimension mismatch");
  Eigen::VectorXd h = x;
  for (int l = 0; l < net.n_layers(); ++l) {
    Eigen::VectorXd z = net.weights[l] * h + net.biases[l];
    h = (l + 1 < net.n_layers()) ? z.cwiseMax(0.0).eval() : std::move(z);
  }
  return h;
}

AdamState adam_init(const Mlp& net, double lr, double beta1, double beta2,
                    double eps) {
  AdamState s;
  s.lr = lr;
  s.beta1 = beta1;
  s.beta2 = beta2;
  s.eps = eps;
  for (int l = 0; l < net.n_layers(); ++l) {
    s.m_w.emplace_back(Eigen::MatrixXd::Zero(net.weights[l].rows(),
                                             net.weights[l].cols()));
    s.v_w.emplace_back(Eigen::MatrixXd::Zero(net.weights[l].rows(),
                                             net.weights[l].cols()));
    s.m_b.emplace_back(Eigen::VectorXd::Zero(net.biases[l].size()));
    s.v_b.emplace_back(Eigen::VectorXd::Zero(net.biases[l].size()));
  }
  return s;
}

Gradients mlp_backward(const Mlp& net, const std::vector<ArmSample>& batch) {
  if (batch.empty()) throw ValidationError("mlp_backward: empty batch");
  const int L = net.n_layers();
  Gradients g;
  for (int l = 0; l < L; ++l) {
    g.w.emplace_back(Eigen::MatrixXd::Zero(net.weights[l].rows(),
                                           net.weights[l].cols()));
    g.b.emplace_back(Eigen::VectorXd::Zero(net.biases[l].size()));
  }

  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  for (const auto& sample : batch) {
    if (sample.arm < 0 || sample.arm >= net.output_dim())
      throw ValidationError("mlp_backward: arm out of range");
    if (!std::isfinite(sample.target))
      throw ValidationError("mlp_backward: non-finite target");

    // Forward pass keeping activations; activations[l] feeds layer l.
    std::vector<Eigen::VectorXd> activations{sample.x};
    std::vector<Eigen::VectorXd> pre;  // hidden pre-activations
    Eigen::VectorXd h = sample.x;
    for (int l = 0; l < L; ++l) {
      Eigen::VectorXd z = net.weights[l] * h + net.biases[l];
      if (l + 1 < L) {
        pre.push_back(z);
        h = z.cwiseMax(0.0);
        activations.push_back(h);
      } else {
        h = std::move(z);
      }
    }

    const double residual = h(sample.arm) - sample.target;
    g.loss += residual * residual * inv_batch;

    // Only the chosen arm's output receives direct gradient.
    Eigen::VectorXd delta = Eigen::VectorXd::Zero(net.output_dim());
    delta(sample.arm) = 2.0 * residual * inv_batch;
    for (int l = L - 1; l >= 0; --l) {
      g.w[l].noalias() += delta * activations[l].transpose();
      g.b[l] += delta;
      if (l > 0) {
        delta = net.weights[l].transpose() * delta;
        delta.array() *= (pre[l - 1].array() > 0.0).cast<double>();
      }
    }
  }
  return g;
}

namespace {

template <typename T>
void adam_update(T& param, T& m, T& v, const T& grad, const AdamState& s) {
  m = s.beta1 * m + (1.0 - s.beta1) * grad;
  v = s.beta2 * v + (1.0 - s.beta2) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.step));
  const double c2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.step));
  param -= (s.lr * (m / c1).array() / ((v / c2).array().sqrt() + s.eps))
               .matrix();
}

}  // namespace

double train_step(Mlp& net, AdamState& adam,
                  const std::vector<ArmSample>& batch) {
  const Gradients g = mlp_backward(net, batch);
  ++adam.step;
  for (int l = 0; l < net.n_layers(); ++l) {
    adam_update(net.weights[l], adam.m_w[l], adam.v_w[l], g.w[l], adam);
    adam_update(net.biases[l], adam.m_b[l], adam.v_b[l], g.b[l], adam);
  }
  return g.loss;
}

nlohmann::json mlp_to_json(const Mlp& net) {
  nlohmann::json j;
  j["dims"] = net.dims;
  nlohmann::json weights = nlohmann::json::array();
  nlohmann::json biases = nlohmann::json::array();
  for (int l = 0; l < net.n_layers(); ++l) {
    std::vector<double> w(net.weights[l].data(),
                          net.weights[l].data() + net.weights[l].size());
    std::vector<double> b(net.biases[l].data(),
                          net.biases[l].data() + net.biases[l].size());
    weights.push_back(w);
    biases.push_back(b);
  }
  j["weights"] = std::move(weights);
  j["biases"] = std::move(biases);
  return j;
}

Mlp mlp_from_json(const nlohmann::json& j) {
  Mlp net;
  net.dims = j.at("dims").get<std::vector<int>>();
  if (net.dims.size() < 2) throw ParseError("mlp checkpoint: bad dims");
  const auto& weights = j.at("weights");
  const auto& biases = j.at("biases");
  if (weights.size() != net.dims.size() - 1 ||
      biases.size() != net.dims.size() - 1)
    throw ParseError("mlp checkpoint: layer count mismatch");
  for (std::size_t l = 0; l + 1 < net.dims.size(); ++l) {
    const auto w = weights[l].get<std::vector<double>>();
    const auto b = biases[l].get<std::vector<double>>();
    const int rows = net.dims[l + 1], cols = net.dims[l];
    if (static_cast<int>(w.size()) != rows * cols ||
        static_cast<int>(b.size()) != rows)
      throw ParseError("mlp checkpoint: parameter shape mismatch");
    net.weights.emplace_back(
        Eigen::Map<const Eigen::MatrixXd>(w.data(), rows, cols));
    net.biases.emplace_back(Eigen::Map<const Eigen::VectorXd>(b.data(), rows));
  }
  return net;
}

}  // namespace slicesim
