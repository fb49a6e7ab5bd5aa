#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>

#include "threatdyn/threat_kernel.hpp"

namespace threatdyn {

// Coupling constants of the socio-political target equations. Every
// coefficient is signed as it enters its equation.
struct Couplings {
  // nationalism
  double nat_soc_pred = 2.75;
  double nat_con_fin_nat = -3.62;
  double nat_rel_frequency = 0.2;
  double nat_baseline = -0.1;
  // anthropomorphic promiscuity
  double ap_predation = 0.243;
  double ap_contagion = -0.638;
  double ap_financial = -0.142;
  double ap_natural = -0.299;
  double ap_social = 0.488;
  double ap_openness = -0.3;
  double ap_baseline = 0.36;
  // sociographic prudery
  double sp_rel_frequency = 0.9;
  double sp_soc_pred = 0.4;
  double sp_con_fin_nat = -0.2;
  double sp_baseline = -0.45;
  // social conservatism
  double sc_ap = 0.48;
  double sc_soc_pred = 1.0;
  double sc_con_fin_nat = -1.3;
  double sc_baseline = 0.0;
  // economic conservatism
  double ec_ap = 0.26;
  double ec_sp = -0.08;
  double ec_soc_pred = 0.9;
  double ec_con_fin_nat = -1.2;
  double ec_baseline = 0.0;
  // anti-immigrant sentiment
  double ais_sc = 0.06;
  double ais_ec = 0.02;
  double ais_nationalism = 0.5;
  double ais_openness = 0.05;
  double ais_conscientiousness = -0.03;
  double ais_agreeableness = -0.03;
  double ais_baseline = 0.0;
  double media_gain = -6.0;
  double media_extraversion = 0.5;
  double financial_gain = -1.0;
  // Gate g(X) = max(0, 1 - X_n / gate_midpoint), X_n = (X + 1) / 2.
  // 1 gives the linear gate 1 - X_n; 0.5 closes the gate above neutral.
  double gate_midpoint = 0.5;
  // Engagements entering the target equations are clamped to [0, this].
  double engagement_clamp = 3.0;

  friend bool operator==(const Couplings&, const Couplings&) = default;
};

inline constexpr std::size_t kCouplingCount = 36;

inline constexpr std::array<std::string_view, kCouplingCount> kCouplingNames =
    {"nat_soc_pred",       "nat_con_fin_nat",
     "nat_rel_frequency",  "nat_baseline",
     "ap_predation",       "ap_contagion",
     "ap_financial",       "ap_natural",
     "ap_social",          "ap_openness",
     "ap_baseline",        "sp_rel_frequency",
     "sp_soc_pred",        "sp_con_fin_nat",
     "sp_baseline",        "sc_ap",
     "sc_soc_pred",        "sc_con_fin_nat",
     "sc_baseline",        "ec_ap",
     "ec_sp",              "ec_soc_pred",
     "ec_con_fin_nat",     "ec_baseline",
     "ais_sc",             "ais_ec",
     "ais_nationalism",    "ais_openness",
     "ais_conscientiousness", "ais_agreeableness",
     "ais_baseline",       "media_gain",
     "media_extraversion", "financial_gain",
     "gate_midpoint",      "engagement_clamp"};

double& coupling_at(Couplings& c, std::size_t index);
double coupling_at(const Couplings& c, std::size_t index);
std::optional<std::size_t> coupling_index(std::string_view name);

// Throws ValidationError when gate_midpoint or engagement_clamp is unusable.
void validate(const Couplings& c);

struct SocioParams {
  double rel_frequency = 0.0;
  double openness = 0.0;
  double conscientiousness = 0.0;
  double agreeableness = 0.0;
  double extraversion = 0.0;
};

inline constexpr std::size_t kSocioStocks = 6;

struct SocioState {
  double nationalism = 0.0;
  double anthropomorphic_promiscuity = 0.0;
  double sociographic_prudery = 0.0;
  double social_conservatism = 0.0;
  double economic_conservatism = 0.0;
  double anti_immigrant_sentiment = 0.0;

  friend bool operator==(const SocioState&, const SocioState&) = default;
};

// Equilibrium values the stocks relax toward; same layout as SocioState.
using SocioTargets = SocioState;

// x / (1 + |x|)
constexpr double squash(double x) noexcept {
  return x / (1.0 + (x < 0.0 ? -x : x));
}

// Media-threat coupling and the financial-threat coupling, both gated.
double media_term(const Couplings& c, const ThreatGlobals& g,
                  const SocioParams& p, const SocioState& s);
double financial_term(const Couplings& c, double clamped_financial_engagement,
                      const SocioState& s);

SocioTargets compute_targets(const LatentThreats& latents,
                             const PerThreat<double>& engagements,
                             const SocioParams& p, const ThreatGlobals& g,
                             const SocioState& s, const Couplings& c = {});

// First-order relaxation X += (X* - X) dt / tau. Requires 0 < dt < tau.
SocioState relax(const SocioState& s, const SocioTargets& targets, double tau,
                 double dt);

}  // namespace threatdyn
