#include "threatdyn/threat_kernel.hpp"

#include <cmath>
#include <string>

#include "threatdyn/errors.hpp"

namespace threatdyn {

namespace {

void require_unit(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError(std::string(name) + " must lie in [0,1], got " +
                      std::to_string(x));
  }
}

}  // namespace

double media_amplification(double threat_pct, double tv_use,
                           double social_use) {
  require_unit(threat_pct, "threat_pct_of_media");
  require_unit(tv_use, "tv_media_use");
  require_unit(social_use, "social_media_use");
  return 1.0 + threat_pct * (0.5 * tv_use + 0.5 * social_use);
}

double rescorla_wagner_update(double strength, double rate) {
  require_unit(strength, "associative strength");
  require_unit(rate, "learning rate");
  return strength + rate * (1.0 - strength);
}

FiredEvents fire_events(double accumulator, double inflow) {
  if (!(inflow >= 0.0) || !std::isfinite(inflow)) {
    throw DomainError("event inflow must be finite and non-negative");
  }
  if (!(accumulator >= 0.0) || !std::isfinite(accumulator)) {
    throw DomainError("event accumulator must be finite and non-negative");
  }
  const double total = accumulator + inflow;
  const double whole = std::floor(total);
  return {total - whole, static_cast<std::int64_t>(whole)};
}

ThreatState step_threat(const ThreatState& state, const ThreatParams& params,
                        const ThreatGlobals& globals, double dt,
                        const KernelConstants& constants) {
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  if (!(globals.energy_decay * dt < 1.0)) {
    throw DomainError("energyDecay * dt must be below 1");
  }
  if (!(constants.spontaneous_recovery >= 0.0 &&
        constants.spontaneous_recovery * dt <= 1.0)) {
    throw DomainError("spontaneous recovery * dt must lie in [0,1]");
  }

  const double amplification =
      media_amplification(globals.threat_pct_of_media, globals.tv_media_use,
                          globals.social_media_use);
  const double inflow = params.hazard_intensity * amplification * dt;
  const auto fired = fire_events(state.accumulator, inflow);

  ThreatState next = state;
  next.accumulator = fired.accumulator;

  const double sensitivity =
      1.0 + constants.neuroticism_gain * (globals.neuroticism - 0.5);
  for (std::int64_t i = 0; i < fired.count; ++i) {
    const double added = (1.0 - next.assoc_strength) * sensitivity;
    next.energy += added;
    next.injected_total += added;
    next.added_energy_last = added;
    next.assoc_strength =
        rescorla_wagner_update(next.assoc_strength, globals.habituation_rate);
    ++next.event_count;
  }

  next.energy *= 1.0 - globals.energy_decay * dt;
  next.assoc_strength *= 1.0 - constants.spontaneous_recovery * dt;
  next.engagement = params.initial_concern * next.energy;
  return next;
}

LatentThreats aggregate_latents(const PerThreat<double>& engagements) {
  for (double e : engagements) {
    if (!(e >= 0.0)) throw DomainError("engagements must be non-negative");
  }
  using D = ThreatDimension;
  constexpr double soc_pred_weight = loadings::social + loadings::predation;
  constexpr double cfn_weight =
      loadings::financial + loadings::contagion + loadings::natural;
  return {
      (loadings::social * engagements[D::social] +
       loadings::predation * engagements[D::predation]) /
          soc_pred_weight,
      (loadings::financial * engagements[D::financial] +
       loadings::contagion * engagements[D::contagion] +
       loadings::natural * engagements[D::natural]) /
          cfn_weight,
  };
}

}  // namespace threatdyn
