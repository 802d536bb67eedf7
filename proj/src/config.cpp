#include "slicesim/config.hpp"

#include <fstream>
#include <set>

#include "slicesim/errors.hpp"

namespace slicesim {

namespace {

using nlohmann::json;

// Pull a field if present, leaving the default otherwise.
template <typename T>
void get_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

SliceParams slice_params_from_json(const json& j) {
  SliceParams p;
  get_if(j, "capacity_mbps", p.capacity_mbps);
  get_if(j, "idle_power_w", p.idle_power_w);
  get_if(j, "load_power_w_per_mbps", p.load_power_w_per_mbps);
  get_if(j, "base_delay_ms", p.base_delay_ms);
  return p;
}

json to_json(const SliceParams& p) {
  return {{"capacity_mbps", p.capacity_mbps},
          {"idle_power_w", p.idle_power_w},
          {"load_power_w_per_mbps", p.load_power_w_per_mbps},
          {"base_delay_ms", p.base_delay_ms}};
}

}  // namespace

ScenarioConfig ScenarioConfig::defaults() {
  ScenarioConfig s;
  s.services = {
      {"facebook", 8, 300.0, 1.0, SliceParams{}},
      {"netflix", 6, 300.0, 5.0, SliceParams{}},
      {"spotify", 7, 100.0, 0.4, SliceParams{}},
  };
  return s;
}

void validate(const ExperimentConfig& cfg) {
  if (!(cfg.beta >= 0.0)) throw ValidationError("config: beta must be >= 0");
  if (cfg.sadi_seconds <= 0.0)
    throw ValidationError("config: sadi_seconds must be > 0");
  if (cfg.horizon_sadis < 1)
    throw ValidationError("config: horizon_sadis must be >= 1");
  if (cfg.eval_sadis < 0 || cfg.eval_sadis >= cfg.horizon_sadis)
    throw ValidationError("config: eval_sadis must lie in [0, horizon)");
  if (cfg.cluster_k < 1) throw ValidationError("config: k must be >= 1");
  if (cfg.agents.empty()) throw ValidationError("config: no agents requested");
  for (const auto& a : cfg.agents) agent_stream_id(a);  // throws on unknown

  const auto& sc = cfg.scenario;
  if (sc.services.empty())
    throw ValidationError("config: scenario needs at least one service");
  if (sc.services.size() > 16)
    throw ValidationError("config: at most 16 services (2^S action space)");
  if (sc.static_power_w < 0.0)
    throw ValidationError("config: static_power_w must be >= 0");
  std::set<std::string> names;
  for (const auto& svc : sc.services) {
    if (svc.name.empty()) throw ValidationError("config: empty service name");
    if (!names.insert(svc.name).second)
      throw ValidationError("config: duplicate service '" + svc.name + "'");
    if (svc.delay_budget_ms <= 0.0)
      throw ValidationError("config: delay_budget_ms must be > 0 for " +
                            svc.name);
    if (svc.per_user_rate_mbps <= 0.0)
      throw ValidationError("config: per_user_rate_mbps must be > 0 for " +
                            svc.name);
  }

  if (cfg.traffic.kind == TrafficSource::Kind::csv) {
    if (cfg.traffic.csv_path.empty())
      throw ValidationError("config: traffic.csv_path missing");
    if (cfg.traffic.tick_seconds <= 0.0)
      throw ValidationError("config: traffic.tick_seconds must be > 0");
  } else {
    validate(cfg.traffic.synthetic);
    std::set<std::string> synth;
    for (const auto& [name, _] : cfg.traffic.synthetic.services)
      synth.insert(name);
    if (synth != names)
      throw ValidationError(
          "config: synthetic traffic services must match scenario services");
  }

  const auto& d = cfg.dcmab;
  if (d.epsilon_start < 0.0 || d.epsilon_start > 1.0 ||
      d.epsilon_floor < 0.0 || d.epsilon_floor > d.epsilon_start)
    throw ValidationError("config: dcmab epsilon range invalid");
  if (d.epsilon_decay <= 0.0 || d.epsilon_decay > 1.0)
    throw ValidationError("config: dcmab epsilon_decay must be in (0, 1]");
  if (d.batch_size < 1 || d.buffer_capacity < d.batch_size ||
      d.warmup < d.batch_size)
    throw ValidationError(
        "config: dcmab needs buffer_capacity >= warmup >= batch_size >= 1");
  if (d.lr <= 0.0) throw ValidationError("config: dcmab lr must be > 0");
  for (int h : d.hidden)
    if (h < 1) throw ValidationError("config: dcmab hidden dims must be >= 1");
  if (cfg.thompson.lambda <= 0.0)
    throw ValidationError("config: thompson lambda must be > 0");
  if (cfg.thompson.v < 0.0)
    throw ValidationError("config: thompson v must be >= 0");
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  get_if(j, "seed", cfg.seed);
  get_if(j, "sadi_seconds", cfg.sadi_seconds);
  get_if(j, "beta", cfg.beta);
  get_if(j, "horizon_sadis", cfg.horizon_sadis);
  get_if(j, "eval_sadis", cfg.eval_sadis);
  get_if(j, "time_features", cfg.time_features);
  get_if(j, "agents", cfg.agents);
  get_if(j, "out_dir", cfg.out_dir);
  if (j.contains("clustering")) get_if(j.at("clustering"), "k", cfg.cluster_k);

  if (j.contains("dcmab")) {
    const auto& d = j.at("dcmab");
    get_if(d, "hidden", cfg.dcmab.hidden);
    get_if(d, "lr", cfg.dcmab.lr);
    get_if(d, "epsilon_start", cfg.dcmab.epsilon_start);
    get_if(d, "epsilon_decay", cfg.dcmab.epsilon_decay);
    get_if(d, "epsilon_floor", cfg.dcmab.epsilon_floor);
    get_if(d, "buffer_capacity", cfg.dcmab.buffer_capacity);
    get_if(d, "warmup", cfg.dcmab.warmup);
    get_if(d, "batch_size", cfg.dcmab.batch_size);
  }
  if (j.contains("thompson")) {
    get_if(j.at("thompson"), "lambda", cfg.thompson.lambda);
    get_if(j.at("thompson"), "v", cfg.thompson.v);
  }

  if (j.contains("scenario")) {
    const auto& s = j.at("scenario");
    get_if(s, "static_power_w", cfg.scenario.static_power_w);
    if (s.contains("eco")) {
      const auto& e = s.at("eco");
      get_if(e, "capacity_mbps", cfg.scenario.eco.capacity_mbps);
      get_if(e, "idle_power_w", cfg.scenario.eco.idle_power_w);
      get_if(e, "load_power_w_per_mbps", cfg.scenario.eco.load_power_w_per_mbps);
      get_if(e, "base_delay_ms", cfg.scenario.eco.base_delay_ms);
    }
    if (s.contains("services")) {
      cfg.scenario.services.clear();
      for (const auto& svc : s.at("services")) {
        ServiceSpec spec;
        spec.name = svc.at("name").get<std::string>();
        get_if(svc, "qci", spec.qci);
        get_if(svc, "delay_budget_ms", spec.delay_budget_ms);
        get_if(svc, "per_user_rate_mbps", spec.per_user_rate_mbps);
        if (svc.contains("slice"))
          spec.slice = slice_params_from_json(svc.at("slice"));
        cfg.scenario.services.push_back(std::move(spec));
      }
    }
  }

  if (j.contains("traffic")) {
    const auto& t = j.at("traffic");
    std::string source = "synthetic";
    get_if(t, "source", source);
    if (source == "csv")
      cfg.traffic.kind = TrafficSource::Kind::csv;
    else if (source == "synthetic")
      cfg.traffic.kind = TrafficSource::Kind::synthetic;
    else
      throw ValidationError("config: traffic.source must be synthetic or csv");
    get_if(t, "csv_path", cfg.traffic.csv_path);
    get_if(t, "tick_seconds", cfg.traffic.tick_seconds);
    if (t.contains("synthetic")) {
      const auto& y = t.at("synthetic");
      auto& syn = cfg.traffic.synthetic;
      get_if(y, "n_tiles", syn.n_tiles);
      get_if(y, "n_days", syn.n_days);
      get_if(y, "tick_seconds", syn.tick_seconds);
      get_if(y, "spatial_groups", syn.spatial_groups);
      get_if(y, "seed", syn.seed);
      if (y.contains("services")) {
        syn.services.clear();
        // Keyed by service name; ordered to match the scenario services.
        for (const auto& svc : cfg.scenario.services) {
          if (!y.at("services").contains(svc.name))
            throw ValidationError(
                "config: traffic.synthetic.services missing '" + svc.name +
                "'");
          const auto& p = y.at("services").at(svc.name);
          ServiceProfile prof;
          get_if(p, "base_mbps", prof.base_mbps);
          get_if(p, "peak_mbps", prof.peak_mbps);
          get_if(p, "peak_hour", prof.peak_hour);
          get_if(p, "noise_std_mbps", prof.noise_std_mbps);
          syn.services.emplace_back(svc.name, prof);
        }
      }
    }
  }
  return cfg;
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;
  j["sadi_seconds"] = cfg.sadi_seconds;
  j["beta"] = cfg.beta;
  j["horizon_sadis"] = cfg.horizon_sadis;
  j["eval_sadis"] = cfg.eval_sadis;
  j["time_features"] = cfg.time_features;
  j["agents"] = cfg.agents;
  j["out_dir"] = cfg.out_dir;
  j["clustering"] = {{"k", cfg.cluster_k}};
  j["dcmab"] = {{"hidden", cfg.dcmab.hidden},
                {"lr", cfg.dcmab.lr},
                {"epsilon_start", cfg.dcmab.epsilon_start},
                {"epsilon_decay", cfg.dcmab.epsilon_decay},
                {"epsilon_floor", cfg.dcmab.epsilon_floor},
                {"buffer_capacity", cfg.dcmab.buffer_capacity},
                {"warmup", cfg.dcmab.warmup},
                {"batch_size", cfg.dcmab.batch_size}};
  j["thompson"] = {{"lambda", cfg.thompson.lambda}, {"v", cfg.thompson.v}};

  json services = json::array();
  for (const auto& svc : cfg.scenario.services)
    services.push_back({{"name", svc.name},
                        {"qci", svc.qci},
                        {"delay_budget_ms", svc.delay_budget_ms},
                        {"per_user_rate_mbps", svc.per_user_rate_mbps},
                        {"slice", to_json(svc.slice)}});
  j["scenario"] = {
      {"static_power_w", cfg.scenario.static_power_w},
      {"eco",
       {{"capacity_mbps", cfg.scenario.eco.capacity_mbps},
        {"idle_power_w", cfg.scenario.eco.idle_power_w},
        {"load_power_w_per_mbps", cfg.scenario.eco.load_power_w_per_mbps},
        {"base_delay_ms", cfg.scenario.eco.base_delay_ms}}},
      {"services", std::move(services)}};

  json synth_services;
  for (const auto& [name, p] : cfg.traffic.synthetic.services)
    synth_services[name] = {{"base_mbps", p.base_mbps},
                            {"peak_mbps", p.peak_mbps},
                            {"peak_hour", p.peak_hour},
                            {"noise_std_mbps", p.noise_std_mbps}};
  j["traffic"] = {
      {"source",
       cfg.traffic.kind == TrafficSource::Kind::csv ? "csv" : "synthetic"},
      {"csv_path", cfg.traffic.csv_path},
      {"tick_seconds", cfg.traffic.tick_seconds},
      {"synthetic",
       {{"n_tiles", cfg.traffic.synthetic.n_tiles},
        {"n_days", cfg.traffic.synthetic.n_days},
        {"tick_seconds", cfg.traffic.synthetic.tick_seconds},
        {"spatial_groups", cfg.traffic.synthetic.spatial_groups},
        {"seed", cfg.traffic.synthetic.seed},
        {"services", std::move(synth_services)}}}};
  return j;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw ValidationError("config: cannot open " + path.string());
  json j;
  try {
    j = json::parse(in, nullptr, /*allow_exceptions=*/true,
                    /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ParseError("config: " + std::string(e.what()));
  }
  try {
    return experiment_config_from_json(j);
  } catch (const json::exception& e) {
    throw ValidationError("config: " + std::string(e.what()));
  }
}

std::vector<ServiceClass> service_classes(const ScenarioConfig& scenario) {
  std::vector<ServiceClass> classes;
  for (std::size_t s = 0; s < scenario.services.size(); ++s) {
    const auto& svc = scenario.services[s];
    classes.push_back({{static_cast<int>(s), svc.name},
                       svc.qci,
                       svc.delay_budget_ms,
                       svc.per_user_rate_mbps});
  }
  return classes;
}

BaseStationModel base_station_from_scenario(const ScenarioConfig& scenario,
                                            const std::string& id,
                                            double sadi_hours) {
  std::vector<SliceSpec> slices;
  for (std::size_t s = 0; s < scenario.services.size(); ++s) {
    const auto& p = scenario.services[s].slice;
    slices.push_back({static_cast<int>(s), p.capacity_mbps, p.idle_power_w,
                      p.load_power_w_per_mbps, p.base_delay_ms, false});
  }
  SliceSpec eco{-1,
                scenario.eco.capacity_mbps,
                scenario.eco.idle_power_w,
                scenario.eco.load_power_w_per_mbps,
                scenario.eco.base_delay_ms,
                true};
  return make_base_station(id, scenario.static_power_w, std::move(slices), eco,
                           sadi_hours);
}

}  // namespace slicesim
