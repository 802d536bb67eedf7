#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include <json.hpp>

namespace slicesim {

// Dense feed-forward net: rectifier on hidden layers, identity output.
// All parameters are 64-bit.
struct Mlp {
  std::vector<int> dims;
  std::vector<Eigen::MatrixXd> weights;  // [l]: dims[l+1] x dims[l]
  std::vector<Eigen::VectorXd> biases;

  int input_dim() const { return dims.front(); }
  int output_dim() const { return dims.back(); }
  int n_layers() const { return static_cast<int>(weights.size()); }
};

// Glorot-uniform weights (+-sqrt(6/(fan_in+fan_out))), zero biases,
// deterministic in the seed.
Mlp mlp_init(const std::vector<int>& dims, std::uint64_t seed);

Eigen::VectorXd mlp_forward(const Mlp& net,
                            const Eigen::Ref<const Eigen::VectorXd>& x);

struct AdamState {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long step = 0;
  std::vector<Eigen::MatrixXd> m_w, v_w;
  std::vector<Eigen::VectorXd> m_b, v_b;
};

AdamState adam_init(const Mlp& net, double lr = 1e-3, double beta1 = 0.9,
                    double beta2 = 0.999, double eps = 1e-8);

// One training example: context, chosen arm, observed reward.
struct ArmSample {
  Eigen::VectorXd x;
  int arm = 0;
  double target = 0.0;
};

struct Gradients {
  std::vector<Eigen::MatrixXd> w;
  std::vector<Eigen::VectorXd> b;
  double loss = 0.0;  // mean squared error over the batch
};

// Backprop of mean_i (forward(x_i)[arm_i] - target_i)^2; gradients flow only
// through each sample's chosen arm.
Gradients mlp_backward(const Mlp& net, const std::vector<ArmSample>& batch);

// One Adam update; returns the pre-update loss.
double train_step(Mlp& net, AdamState& adam,
                  const std::vector<ArmSample>& batch);

// Checkpoint round-trips exactly (shortest round-trip double encoding).
nlohmann::json mlp_to_json(const Mlp& net);
Mlp mlp_from_json(const nlohmann::json& j);

}  // namespace slicesim
