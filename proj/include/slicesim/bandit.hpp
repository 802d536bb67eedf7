#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "slicesim/env.hpp"
#include "slicesim/neural.hpp"
#include "slicesim/rng.hpp"

namespace slicesim {

// Decision interface shared by all agents. Arms are slice-config bitmask
// indices in [0, 2^S). One agent instance per base station.
class Agent {
 public:
  virtual ~Agent() = default;
  virtual int select_action(const Observation& ctx) = 0;
  virtual void update(const Observation& ctx, int arm, double reward) = 0;
  // Switch to the evaluation regime: greedy/posterior-mean selection and no
  // further learning.
  virtual void freeze() {}
  virtual std::string kind() const = 0;
  virtual nlohmann::json checkpoint() const;
};

struct DcmabConfig {
  std::vector<int> hidden{32, 32};
  double lr = 1e-3;
  double epsilon_start = 1.0;
  double epsilon_decay = 0.995;
  double epsilon_floor = 0.05;
  int buffer_capacity = 10000;
  int warmup = 64;
  int batch_size = 32;
};

// Neural epsilon-greedy contextual bandit: an MLP maps the context to one
// predicted reward per arm; experience replay with FIFO eviction.
class DcmabAgent : public Agent {
 public:
  DcmabAgent(int context_dim, int n_arms, const DcmabConfig& cfg,
             std::uint64_t seed);

  int select_action(const Observation& ctx) override;
  void update(const Observation& ctx, int arm, double reward) override;
  void freeze() override { frozen_ = true; }
  std::string kind() const override { return "dcmab"; }
  nlohmann::json checkpoint() const override;

  double epsilon() const { return epsilon_; }
  std::size_t buffer_size() const { return buffer_.size(); }
  const Mlp& net() const { return net_; }
  // Test hook: overwrite the predictor.
  void set_net(Mlp net) { net_ = std::move(net); }

 private:
  int greedy_arm(const Eigen::VectorXd& x) const;

  DcmabConfig cfg_;
  int n_arms_;
  Mlp net_;
  AdamState adam_;
  std::vector<ArmSample> buffer_;  // ring buffer
  std::size_t buffer_head_ = 0;
  double epsilon_;
  bool frozen_ = false;
  Rng rng_;
};

struct ThompsonConfig {
  double lambda = 1.0;  // prior precision scale
  double v = 0.25;      // posterior noise scale
};

// Linear Thompson sampling: per arm a Gaussian posterior over weights with
// precision B_a (init lambda*I) and response f_a; selection samples
// w ~ N(B_a^-1 f_a, v^2 B_a^-1) and plays argmax ctx . w.
class ThompsonAgent : public Agent {
 public:
  ThompsonAgent(int context_dim, int n_arms, const ThompsonConfig& cfg,
                std::uint64_t seed);

  int select_action(const Observation& ctx) override;
  void update(const Observation& ctx, int arm, double reward) override;
  void freeze() override { frozen_ = true; }
  std::string kind() const override { return "thompson"; }
  nlohmann::json checkpoint() const override;

  Eigen::VectorXd posterior_mean(int arm) const;
  const Eigen::MatrixXd& precision(int arm) const { return precision_[arm]; }
  const Eigen::VectorXd& response(int arm) const { return response_[arm]; }

 private:
  ThompsonConfig cfg_;
  int dim_;
  std::vector<Eigen::MatrixXd> precision_;  // B_a
  std::vector<Eigen::VectorXd> response_;   // f_a
  bool frozen_ = false;
  Rng rng_;
};

// Keeps every slice instance active: always the all-ones mask.
class AllActiveAgent : public Agent {
 public:
  explicit AllActiveAgent(int n_arms) : arm_(n_arms - 1) {}
  int select_action(const Observation&) override { return arm_; }
  void update(const Observation&, int, double) override {}
  std::string kind() const override { return "allactive"; }

 private:
  int arm_;
};

class RandomAgent : public Agent {
 public:
  RandomAgent(int n_arms, std::uint64_t seed) : n_arms_(n_arms), rng_(seed) {}
  int select_action(const Observation&) override {
    return static_cast<int>(rng_.uniform_int(n_arms_));
  }
  void update(const Observation&, int, double) override {}
  std::string kind() const override { return "random"; }

 private:
  std::uint64_t n_arms_;
  Rng rng_;
};

std::unique_ptr<Agent> make_agent(const std::string& kind, int context_dim,
                                  int n_arms, const DcmabConfig& dcmab,
                                  const ThompsonConfig& thompson,
                                  std::uint64_t seed);

// Stable per-kind stream id for hierarchical seeding.
std::uint64_t agent_stream_id(const std::string& kind);

}  // namespace slicesim
