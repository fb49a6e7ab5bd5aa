#include "threatdyn/simulation.hpp"

#include <cmath>
#include <set>
#include <string>

#include "threatdyn/errors.hpp"

namespace threatdyn {

std::int64_t SimConfig::steps() const {
  return static_cast<std::int64_t>(std::llround(horizon / dt));
}

KernelConstants SimConfig::kernel_constants() const {
  KernelConstants k;
  k.spontaneous_recovery = rho;
  return k;
}

void validate(const DesignSpec& spec) {
  if (spec.n_runs < 0) throw ValidationError("n_runs must be >= 0", {"n"});
  std::set<std::string> seen;
  for (std::size_t i = 0; i < kParameterCount; ++i) {
    const auto& r = spec.ranges[i];
    if (r.name != kParameterNames[i]) {
      throw ValidationError("range " + std::to_string(i) + " is '" + r.name +
                                "', expected " + std::string(kParameterNames[i]),
                            {r.name});
    }
    if (!seen.insert(r.name).second) {
      throw ValidationError("duplicate range " + r.name, {r.name});
    }
    if (!(std::isfinite(r.low) && std::isfinite(r.high) && r.low < r.high)) {
      throw ValidationError("range " + r.name + " requires low < high",
                            {r.name});
    }
  }
}

void validate(const SimConfig& config) {
  if (!(config.dt > 0.0)) throw ValidationError("dt must be positive", {"dt"});
  if (!(config.horizon > 0.0)) {
    throw ValidationError("horizon must be positive", {"horizon"});
  }
  if (!(config.tau > 0.0)) throw ValidationError("tau must be positive", {"tau"});
  if (!(config.dt < config.tau)) {
    throw ValidationError("invariant violated: dt < tau", {"dt", "tau"});
  }
  if (!(config.rho >= 0.0 && config.rho * config.dt <= 1.0)) {
    throw ValidationError("invariant violated: 0 <= rho * dt <= 1", {"rho"});
  }
  const double ratio = config.horizon / config.dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
    throw ValidationError("horizon must be a whole number of dt steps",
                          {"horizon", "dt"});
  }
  validate(config.design);
  const double max_decay = config.design.ranges[5].high;
  if (!(max_decay * config.dt < 1.0)) {
    throw ValidationError(
        "invariant violated: energyDecay * dt < 1 for the largest energyDecay",
        {"energyDecay", "dt"});
  }
  for (std::size_t i = 0; i < kParameterCount; ++i) {
    const auto& r = config.design.ranges[i];
    // energyDecay and habituationRate must stay strictly positive.
    const bool rate = (i == 5 || i == 6);
    if (r.low < 0.0 || r.high > 1.0 || (rate && r.low <= 0.0)) {
      throw ValidationError("range " + r.name + " must lie within " +
                                (rate ? "(0,1]" : "[0,1]"),
                            {r.name});
    }
  }
  validate(config.couplings);
}

void validate(const ParameterSet& params, const SimConfig& config) {
  std::vector<std::string> bad;
  for (std::size_t i = 0; i < kParameterCount; ++i) {
    const double v = parameter_at(params, i);
    const auto& r = config.design.ranges[i];
    if (!(v >= r.low && v <= r.high)) bad.push_back(r.name);
  }
  if (!bad.empty()) {
    std::string msg = "parameters outside their ranges:";
    for (const auto& b : bad) msg += " " + b;
    throw ValidationError(msg, bad);
  }
}

RunRecord run_simulation(const ParameterSet& params, const SimConfig& config,
                         std::int64_t run_id, Trajectory* trajectory) {
  validate(params, config);

  const auto globals = threat_globals(params);
  const auto constants = config.kernel_constants();
  const SocioParams socio{params.rel_frequency, params.big5_openness,
                          params.big5_conscientiousness,
                          params.big5_agreeableness, params.big5_extraversion};
  PerThreat<ThreatParams> per_threat;
  for (auto d : kAllThreats) per_threat[d] = threat_params(params, d);

  PerThreat<ThreatState> threats;
  SocioState stocks;
  double soc_pred_sum = 0.0;
  double cfn_sum = 0.0;

  const std::int64_t steps = config.steps();
  if (trajectory) {
    trajectory->stocks.reserve(steps);
    trajectory->latents.reserve(steps);
    trajectory->threats.reserve(steps);
  }

  PerThreat<double> engagements;
  for (std::int64_t step = 0; step < steps; ++step) {
    for (auto d : kAllThreats) {
      threats[d] =
          step_threat(threats[d], per_threat[d], globals, config.dt, constants);
      engagements[d] = threats[d].engagement;
    }
    const auto latents = aggregate_latents(engagements);
    soc_pred_sum += latents.soc_pred;
    cfn_sum += latents.con_fin_nat;
    const auto targets = compute_targets(latents, engagements, socio, globals,
                                         stocks, config.couplings);
    stocks = relax(stocks, targets, config.tau, config.dt);

    if (trajectory) {
      trajectory->stocks.push_back(stocks);
      trajectory->latents.push_back(latents);
      trajectory->threats.push_back(threats);
    }
  }

  RunRecord record;
  record.run_id = run_id;
  record.params = params;
  record.stocks = stocks;
  if (steps > 0) {
    record.latents = {soc_pred_sum / static_cast<double>(steps),
                      cfn_sum / static_cast<double>(steps)};
  }
  for (auto d : kAllThreats) {
    record.hazard_event_count[d] = threats[d].event_count;
    record.engagement[d] = threats[d].engagement;
    record.energy[d] = threats[d].energy;
    record.added_energy[d] = threats[d].added_energy_last;
  }
  return record;
}

}  // namespace threatdyn
