#include "slicesim/bandit.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "slicesim/errors.hpp"

namespace slicesim {

nlohmann::json Agent::checkpoint() const {
  return nlohmann::json{{"kind", kind()}};
}

DcmabAgent::DcmabAgent(int context_dim, int n_arms, const DcmabConfig& cfg,
                       std::uint64_t seed)
    : cfg_(cfg),
      n_arms_(n_arms),
      epsilon_(cfg.epsilon_start),
      rng_(derive_seed(seed, 1)) {
  if (context_dim < 1 || n_arms < 1)
    throw ValidationError("dcmab: bad context_dim or n_arms");
  if (cfg.batch_size < 1 || cfg.buffer_capacity < cfg.batch_size)
    throw ValidationError("dcmab: buffer_capacity must be >= batch_size >= 1");
  std::vector<int> dims{context_dim};
  dims.insert(dims.end(), cfg.hidden.begin(), cfg.hidden.end());
  dims.push_back(n_arms);
  net_ = mlp_init(dims, derive_seed(seed, 0));
  adam_ = adam_init(net_, cfg.lr);
  buffer_.reserve(cfg.buffer_capacity);
}

int DcmabAgent::greedy_arm(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd q = mlp_forward(net_, x);
  int best = 0;
  for (int a = 1; a < n_arms_; ++a)
    if (q(a) > q(best)) best = a;
  return best;
}

int DcmabAgent::select_action(const Observation& ctx) {
  if (frozen_) return greedy_arm(ctx.as_vector());
  int arm;
  if (rng_.uniform() < epsilon_)
    arm = static_cast<int>(rng_.uniform_int(n_arms_));
  else
    arm = greedy_arm(ctx.as_vector());
  epsilon_ = std::max(cfg_.epsilon_floor, epsilon_ * cfg_.epsilon_decay);
  return arm;
}

void DcmabAgent::update(const Observation& ctx, int arm, double reward) {
  if (frozen_) return;
  if (arm < 0 || arm >= n_arms_)
    throw ValidationError("dcmab update: arm out of range");
  if (!std::isfinite(reward))
    throw ValidationError("dcmab update: non-finite reward");

  ArmSample sample{ctx.as_vector(), arm, reward};
  if (static_cast<int>(buffer_.size()) < cfg_.buffer_capacity) {
    buffer_.push_back(std::move(sample));
  } else {
    buffer_[buffer_head_] = std::move(sample);  // evict the oldest
    buffer_head_ = (buffer_head_ + 1) % buffer_.size();
  }

  if (static_cast<int>(buffer_.size()) < cfg_.warmup) return;
  std::vector<ArmSample> batch;
  batch.reserve(cfg_.batch_size);
  for (int i = 0; i < cfg_.batch_size; ++i)
    batch.push_back(buffer_[rng_.uniform_int(buffer_.size())]);
  train_step(net_, adam_, batch);
}

nlohmann::json DcmabAgent::checkpoint() const {
  nlohmann::json j;
  j["kind"] = kind();
  j["epsilon"] = epsilon_;
  j["net"] = mlp_to_json(net_);
  return j;
}

ThompsonAgent::ThompsonAgent(int context_dim, int n_arms,
                             const ThompsonConfig& cfg, std::uint64_t seed)
    : cfg_(cfg), dim_(context_dim), rng_(seed) {
  if (context_dim < 1 || n_arms < 1)
    throw ValidationError("thompson: bad context_dim or n_arms");
  if (cfg.lambda <= 0.0) throw ValidationError("thompson: lambda must be > 0");
  if (cfg.v < 0.0) throw ValidationError("thompson: v must be >= 0");
  precision_.assign(
      n_arms, (cfg.lambda * Eigen::MatrixXd::Identity(dim_, dim_)).eval());
  response_.assign(n_arms, Eigen::VectorXd::Zero(dim_));
}

Eigen::VectorXd ThompsonAgent::posterior_mean(int arm) const {
  const Eigen::LLT<Eigen::MatrixXd> llt(precision_[arm]);
  if (llt.info() != Eigen::Success)
    throw NumericalError("thompson: precision matrix not SPD");
  return llt.solve(response_[arm]);
}

int ThompsonAgent::select_action(const Observation& ctx) {
  const Eigen::VectorXd x = ctx.as_vector();
  if (x.size() != dim_)
    throw ValidationError("thompson: context dimension mismatch");
  const double v = frozen_ ? 0.0 : cfg_.v;

  int best = 0;
  double best_score = 0.0;
  for (std::size_t a = 0; a < precision_.size(); ++a) {
    const Eigen::LLT<Eigen::MatrixXd> llt(precision_[a]);
    if (llt.info() != Eigen::Success)
      throw NumericalError("thompson: precision matrix not SPD");
    Eigen::VectorXd w = llt.solve(response_[a]);
    if (v > 0.0) {
      const Eigen::MatrixXd cov =
          v * v * llt.solve(Eigen::MatrixXd::Identity(dim_, dim_));
      const Eigen::LLT<Eigen::MatrixXd> cov_llt(cov);
      if (cov_llt.info() != Eigen::Success)
        throw NumericalError("thompson: posterior covariance not SPD");
      Eigen::VectorXd z(dim_);
      for (Eigen::Index i = 0; i < dim_; ++i) z(i) = rng_.normal();
      w += cov_llt.matrixL() * z;
    }
    const double score = x.dot(w);
    if (a == 0 || score > best_score) {
      best = static_cast<int>(a);
      best_score = score;
    }
  }
  return best;
}

void ThompsonAgent::update(const Observation& ctx, int arm, double reward) {
  if (frozen_) return;
  if (arm < 0 || arm >= static_cast<int>(precision_.size()))
    throw ValidationError("thompson update: arm out of range");
  if (!std::isfinite(reward))
    throw ValidationError("thompson update: non-finite reward");
  const Eigen::VectorXd x = ctx.as_vector();
  precision_[arm].noalias() += x * x.transpose();
  response_[arm] += reward * x;
}

nlohmann::json ThompsonAgent::checkpoint() const {
  nlohmann::json j;
  j["kind"] = kind();
  j["lambda"] = cfg_.lambda;
  j["v"] = cfg_.v;
  nlohmann::json arms = nlohmann::json::array();
  for (std::size_t a = 0; a < precision_.size(); ++a) {
    std::vector<double> B(precision_[a].data(),
                          precision_[a].data() + precision_[a].size());
    std::vector<double> f(response_[a].data(),
                          response_[a].data() + response_[a].size());
    arms.push_back({{"B", B}, {"f", f}});
  }
  j["arms"] = std::move(arms);
  return j;
}

std::unique_ptr<Agent> make_agent(const std::string& kind, int context_dim,
                                  int n_arms, const DcmabConfig& dcmab,
                                  const ThompsonConfig& thompson,
                                  std::uint64_t seed) {
  if (kind == "dcmab")
    return std::make_unique<DcmabAgent>(context_dim, n_arms, dcmab, seed);
  if (kind == "thompson")
    return std::make_unique<ThompsonAgent>(context_dim, n_arms, thompson, seed);
  if (kind == "allactive") return std::make_unique<AllActiveAgent>(n_arms);
  if (kind == "random") return std::make_unique<RandomAgent>(n_arms, seed);
  throw ValidationError("unknown agent kind '" + kind + "'");
}

std::uint64_t agent_stream_id(const std::string& kind) {
  if (kind == "dcmab") return 1;
  if (kind == "thompson") return 2;
  if (kind == "allactive") return 3;
  if (kind == "random") return 4;
  throw ValidationError("unknown agent kind '" + kind + "'");
}

}  // namespace slicesim
