#include "slicesim/netmodel.hpp"

#include <cmath>
#include <limits>

#include "slicesim/errors.hpp"

namespace slicesim {

namespace {

void check_spec(const SliceSpec& s, const char* what) {
  if (s.capacity_mbps <= 0.0)
    throw ValidationError(std::string(what) + ": capacity_mbps must be > 0");
  if (s.idle_power_w < 0.0 || s.load_power_w_per_mbps < 0.0)
    throw ValidationError(std::string(what) + ": powers must be >= 0");
  if (s.base_delay_ms <= 0.0)
    throw ValidationError(std::string(what) + ": base_delay_ms must be > 0");
}

}  // namespace

BaseStationModel make_base_station(std::string id, double static_power_w,
                                   std::vector<SliceSpec> slices,
                                   SliceSpec eco, double sadi_hours) {
  if (static_power_w < 0.0)
    throw ValidationError("base station: static_power_w must be >= 0");
  if (sadi_hours <= 0.0)
    throw ValidationError("base station: sadi_hours must be > 0");
  if (slices.empty()) throw ValidationError("base station: no slices");
  for (const auto& s : slices) {
    check_spec(s, "slice");
    if (s.is_eco) throw ValidationError("base station: Eco spec in slice list");
  }
  check_spec(eco, "eco slice");
  eco.is_eco = true;
  eco.service_index = -1;

  BaseStationModel bs;
  bs.id = std::move(id);
  bs.static_power_w = static_power_w;
  bs.slices = std::move(slices);
  bs.eco = eco;
  bs.sadi_hours = sadi_hours;
  double power = static_power_w;
  for (const auto& s : bs.slices)
    power += s.idle_power_w + s.load_power_w_per_mbps * s.capacity_mbps;
  power += eco.idle_power_w + eco.load_power_w_per_mbps * eco.capacity_mbps;
  bs.e_max_wh_per_sadi = power * sadi_hours;
  if (!(bs.e_max_wh_per_sadi > 0.0))
    throw ValidationError("base station: e_max must be > 0");
  return bs;
}

std::vector<UserSession> sessions_from_demand(double demand_mbps,
                                              const ServiceClass& sc) {
  if (demand_mbps < 0.0)
    throw ValidationError("sessions_from_demand: negative demand");
  if (sc.per_user_rate_mbps <= 0.0)
    throw ValidationError("sessions_from_demand: per_user_rate must be > 0");
  std::vector<UserSession> users;
  if (demand_mbps == 0.0) return users;
  const auto n =
      static_cast<std::size_t>(std::ceil(demand_mbps / sc.per_user_rate_mbps));
  users.assign(n, UserSession{sc.service.index,
                              demand_mbps / static_cast<double>(n),
                              sc.delay_budget_ms});
  return users;
}

double slice_delay_ms(double offered_load_mbps, const SliceSpec& spec) {
  if (offered_load_mbps < 0.0)
    throw ValidationError("slice_delay_ms: negative load");
  if (offered_load_mbps >= spec.capacity_mbps)
    return std::numeric_limits<double>::infinity();
  return spec.base_delay_ms / (1.0 - offered_load_mbps / spec.capacity_mbps);
}

double slice_energy_wh(double offered_load_mbps, const SliceSpec& spec,
                       bool active, double sadi_hours) {
  if (offered_load_mbps < 0.0)
    throw ValidationError("slice_energy_wh: negative load");
  if (!active) return 0.0;
  const double carried = std::min(offered_load_mbps, spec.capacity_mbps);
  return (spec.idle_power_w + spec.load_power_w_per_mbps * carried) *
         sadi_hours;
}

double bs_energy_wh(const SliceConfig& config,
                    const Eigen::Ref<const Eigen::VectorXd>& per_slice_load_mbps,
                    const BaseStationModel& bs, double sadi_hours) {
  const auto n = static_cast<Eigen::Index>(bs.slices.size());
  if (per_slice_load_mbps.size() != n + 1)
    throw ValidationError("bs_energy_wh: loads must cover all slices plus Eco");
  double e = bs.static_power_w * sadi_hours;
  for (Eigen::Index s = 0; s < n; ++s)
    e += slice_energy_wh(per_slice_load_mbps(s), bs.slices[s],
                         config.active(static_cast<int>(s)), sadi_hours);
  e += slice_energy_wh(per_slice_load_mbps(n), bs.eco, true, sadi_hours);
  return e;
}

double qos(const std::vector<UserSession>& users,
           const std::vector<int>& placement, const SliceConfig& config,
           const Eigen::Ref<const Eigen::VectorXd>& per_slice_load_mbps,
           const BaseStationModel& bs) {
  if (users.empty()) return 1.0;
  if (placement.size() != users.size())
    throw ValidationError("qos: placement must cover every user");
  const auto n = static_cast<int>(bs.slices.size());

  Eigen::VectorXd delay(n + 1);
  for (int s = 0; s < n; ++s)
    delay(s) = slice_delay_ms(per_slice_load_mbps(s), bs.slices[s]);
  delay(n) = slice_delay_ms(per_slice_load_mbps(n), bs.eco);

  std::size_t satisfied = 0;
  for (std::size_t u = 0; u < users.size(); ++u) {
    const int s = placement[u];
    if (s < 0 || s > n) throw ContractError("qos: placement out of range");
    if (s < n && !config.active(s))
      throw ContractError("qos: user placed on an inactive slice");
    if (delay(s) <= users[u].delay_req_ms) ++satisfied;
  }
  return static_cast<double>(satisfied) / static_cast<double>(users.size());
}

}  // namespace slicesim
