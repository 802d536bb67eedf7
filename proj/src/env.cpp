#include "slicesim/env.hpp"

#include <cmath>
#include <numbers>

#include "slicesim/errors.hpp"

namespace slicesim {

Eigen::VectorXd Observation::as_vector() const {
  Eigen::VectorXd v(dim());
  v(0) = e_norm;
  v(1) = qos_prev;
  if (has_time) {
    v(2) = sin_hour;
    v(3) = cos_hour;
  }
  return v;
}

double reward(double e_norm, double qos, double beta) {
  if (!(e_norm >= 0.0 && e_norm <= 1.0))
    throw ValidationError("reward: e_norm out of [0, 1]");
  if (!(qos >= 0.0 && qos <= 1.0))
    throw ValidationError("reward: qos out of [0, 1]");
  if (!(beta >= 0.0)) throw ValidationError("reward: beta must be >= 0");
  return beta * qos - e_norm;
}

StepOutcome evaluate_config(const BaseStationModel& bs,
                            const std::vector<ServiceClass>& classes,
                            const Eigen::Ref<const Eigen::VectorXd>& traffic_mbps,
                            const SliceConfig& config, double beta) {
  const auto n = static_cast<int>(bs.slices.size());
  if (static_cast<int>(classes.size()) != n)
    throw ValidationError("evaluate_config: one service class per slice required");
  if (traffic_mbps.size() != n)
    throw ValidationError("evaluate_config: one demand entry per service required");
  if ((traffic_mbps.array() < 0.0).any())
    throw ValidationError("evaluate_config: negative demand");

  StepOutcome out;
  out.per_slice_load_mbps = Eigen::VectorXd::Zero(n + 1);

  std::vector<UserSession> users;
  std::vector<int> placement;
  for (int s = 0; s < n; ++s) {
    const auto service_users = sessions_from_demand(traffic_mbps(s), classes[s]);
    const bool migrate = !config.active(s);
    const int target = migrate ? n : s;
    out.per_slice_load_mbps(target) += traffic_mbps(s);
    if (migrate) out.n_migrated += static_cast<int>(service_users.size());
    for (const auto& u : service_users) {
      users.push_back(u);
      placement.push_back(target);
    }
  }
  out.n_users = static_cast<int>(users.size());

  out.energy_wh =
      bs_energy_wh(config, out.per_slice_load_mbps, bs, bs.sadi_hours);
  out.e_norm = out.energy_wh / bs.e_max_wh_per_sadi;
  out.qos = qos(users, placement, config, out.per_slice_load_mbps, bs);
  out.reward = reward(out.e_norm, out.qos, beta);
  return out;
}

OracleResult oracle_best(const BaseStationModel& bs,
                         const std::vector<ServiceClass>& classes,
                         const Eigen::Ref<const Eigen::VectorXd>& traffic_mbps,
                         double beta) {
  const auto n = static_cast<int>(bs.slices.size());
  if (n > 16) throw ValidationError("oracle_best: too many slices to enumerate");
  OracleResult best;
  bool have = false;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    const SliceConfig cfg{mask, n};
    const StepOutcome o = evaluate_config(bs, classes, traffic_mbps, cfg, beta);
    const bool better =
        !have || o.reward > best.reward ||
        (o.reward == best.reward &&
         (cfg.n_active() < best.config.n_active() ||
          (cfg.n_active() == best.config.n_active() && mask < best.config.mask)));
    if (better) {
      best.config = cfg;
      best.reward = o.reward;
      have = true;
    }
  }
  return best;
}

SliceEnv::SliceEnv(BaseStationModel bs, std::vector<ServiceClass> classes,
                   Eigen::MatrixXd traffic, double beta, double sadi_seconds,
                   bool time_features, std::uint64_t seed)
    : bs_(std::move(bs)),
      classes_(std::move(classes)),
      traffic_(std::move(traffic)),
      beta_(beta),
      sadi_seconds_(sadi_seconds),
      time_features_(time_features),
      seed_(seed) {
  if (beta_ < 0.0) throw ValidationError("SliceEnv: beta must be >= 0");
  if (sadi_seconds_ <= 0.0)
    throw ValidationError("SliceEnv: sadi_seconds must be > 0");
  if (traffic_.rows() != static_cast<Eigen::Index>(bs_.slices.size()))
    throw ValidationError("SliceEnv: traffic rows must match slices");
  if (traffic_.cols() < 1) throw ValidationError("SliceEnv: empty horizon");
}

double SliceEnv::hour_of(int t) const {
  return std::fmod(t * sadi_seconds_ / 3600.0, 24.0);
}

Observation SliceEnv::make_observation(const StepOutcome& outcome,
                                       int next_t) const {
  Observation obs;
  obs.e_norm = outcome.e_norm;
  obs.qos_prev = outcome.qos;
  obs.has_time = time_features_;
  if (time_features_) {
    const double angle = 2.0 * std::numbers::pi * hour_of(next_t) / 24.0;
    obs.sin_hour = std::sin(angle);
    obs.cos_hour = std::cos(angle);
  }
  return obs;
}

Observation SliceEnv::bootstrap_observation() const {
  const StepOutcome out =
      evaluate_config(bs_, classes_, traffic_.col(0),
                      SliceConfig::all_active(n_slices()), beta_);
  return make_observation(out, 0);
}

SliceEnv::StepResult SliceEnv::step(const SliceConfig& action) {
  if (t_ >= horizon()) throw ValidationError("SliceEnv: stepped past horizon");
  StepResult res;
  res.outcome = evaluate_config(bs_, classes_, traffic_.col(t_), action, beta_);
  res.reward = res.outcome.reward;
  last_outcome_ = res.outcome;
  ++t_;
  res.observation = make_observation(res.outcome, t_);
  return res;
}

}  // namespace slicesim
