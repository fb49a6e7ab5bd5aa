#include "threatdyn/socio_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "threatdyn/errors.hpp"

namespace threatdyn {

namespace {

using C = Couplings;

constexpr std::array<double C::*, kCouplingCount> kCouplingMembers = {
    &C::nat_soc_pred,       &C::nat_con_fin_nat,
    &C::nat_rel_frequency,  &C::nat_baseline,
    &C::ap_predation,       &C::ap_contagion,
    &C::ap_financial,       &C::ap_natural,
    &C::ap_social,          &C::ap_openness,
    &C::ap_baseline,        &C::sp_rel_frequency,
    &C::sp_soc_pred,        &C::sp_con_fin_nat,
    &C::sp_baseline,        &C::sc_ap,
    &C::sc_soc_pred,        &C::sc_con_fin_nat,
    &C::sc_baseline,        &C::ec_ap,
    &C::ec_sp,              &C::ec_soc_pred,
    &C::ec_con_fin_nat,     &C::ec_baseline,
    &C::ais_sc,             &C::ais_ec,
    &C::ais_nationalism,    &C::ais_openness,
    &C::ais_conscientiousness, &C::ais_agreeableness,
    &C::ais_baseline,       &C::media_gain,
    &C::media_extraversion, &C::financial_gain,
    &C::gate_midpoint,      &C::engagement_clamp};

constexpr double normalized(double x) { return 0.5 * (x + 1.0); }

double gate(double stock, double midpoint) {
  return std::max(0.0, 1.0 - normalized(stock) / midpoint);
}

}  // namespace

double& coupling_at(Couplings& c, std::size_t index) {
  return c.*kCouplingMembers.at(index);
}

double coupling_at(const Couplings& c, std::size_t index) {
  return c.*kCouplingMembers.at(index);
}

std::optional<std::size_t> coupling_index(std::string_view name) {
  for (std::size_t i = 0; i < kCouplingCount; ++i) {
    if (kCouplingNames[i] == name) return i;
  }
  return std::nullopt;
}

void validate(const Couplings& c) {
  for (std::size_t i = 0; i < kCouplingCount; ++i) {
    if (!std::isfinite(coupling_at(c, i))) {
      throw ValidationError(
          "coupling " + std::string(kCouplingNames[i]) + " is not finite",
          {std::string(kCouplingNames[i])});
    }
  }
  if (!(c.gate_midpoint > 0.0 && c.gate_midpoint <= 1.0)) {
    throw ValidationError("gate_midpoint must lie in (0,1]", {"gate_midpoint"});
  }
  if (!(c.engagement_clamp > 0.0)) {
    throw ValidationError("engagement_clamp must be positive",
                          {"engagement_clamp"});
  }
}

double media_term(const Couplings& c, const ThreatGlobals& g,
                  const SocioParams& p, const SocioState& s) {
  const double exposure = 0.5 * g.tv_media_use + 0.5 * g.social_media_use;
  return c.media_gain * g.threat_pct_of_media * exposure *
         (1.0 + c.media_extraversion * p.extraversion) *
         gate(s.sociographic_prudery, c.gate_midpoint) *
         gate(s.anthropomorphic_promiscuity, c.gate_midpoint);
}

double financial_term(const Couplings& c, double clamped_financial_engagement,
                      const SocioState& s) {
  return c.financial_gain * clamped_financial_engagement *
         gate(s.nationalism, c.gate_midpoint);
}

SocioTargets compute_targets(const LatentThreats& latents,
                             const PerThreat<double>& engagements,
                             const SocioParams& p, const ThreatGlobals& g,
                             const SocioState& s, const Couplings& c) {
  using D = ThreatDimension;
  PerThreat<double> e;
  for (auto d : kAllThreats) {
    e[d] = std::clamp(engagements[d], 0.0, c.engagement_clamp);
  }
  const double tsp = latents.soc_pred;
  const double tcfn = latents.con_fin_nat;

  SocioTargets t;
  t.nationalism = squash(c.nat_soc_pred * tsp + c.nat_con_fin_nat * tcfn +
                         c.nat_rel_frequency * p.rel_frequency +
                         c.nat_baseline);
  t.anthropomorphic_promiscuity = squash(
      c.ap_predation * e[D::predation] + c.ap_contagion * e[D::contagion] +
      c.ap_financial * e[D::financial] + c.ap_natural * e[D::natural] +
      c.ap_social * e[D::social] + c.ap_openness * p.openness +
      c.ap_baseline);
  t.sociographic_prudery =
      squash(c.sp_rel_frequency * p.rel_frequency + c.sp_soc_pred * tsp +
             c.sp_con_fin_nat * tcfn + c.sp_baseline);
  t.social_conservatism =
      squash(c.sc_ap * s.anthropomorphic_promiscuity + c.sc_soc_pred * tsp +
             c.sc_con_fin_nat * tcfn + c.sc_baseline);
  t.economic_conservatism =
      squash(c.ec_ap * s.anthropomorphic_promiscuity +
             c.ec_sp * s.sociographic_prudery + c.ec_soc_pred * tsp +
             c.ec_con_fin_nat * tcfn + c.ec_baseline);
  t.anti_immigrant_sentiment =
      squash(c.ais_sc * s.social_conservatism +
             c.ais_ec * s.economic_conservatism +
             c.ais_nationalism * s.nationalism + c.ais_openness * p.openness +
             c.ais_conscientiousness * p.conscientiousness +
             c.ais_agreeableness * p.agreeableness + c.ais_baseline +
             media_term(c, g, p, s) + financial_term(c, e[D::financial], s));
  return t;
}

SocioState relax(const SocioState& s, const SocioTargets& targets, double tau,
                 double dt) {
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  if (!(tau > dt)) throw ValidationError("relaxation requires dt < tau", {"dt"});
  const double k = dt / tau;
  auto step = [k](double x, double target) { return x + (target - x) * k; };
  return {
      step(s.nationalism, targets.nationalism),
      step(s.anthropomorphic_promiscuity, targets.anthropomorphic_promiscuity),
      step(s.sociographic_prudery, targets.sociographic_prudery),
      step(s.social_conservatism, targets.social_conservatism),
      step(s.economic_conservatism, targets.economic_conservatism),
      step(s.anti_immigrant_sentiment, targets.anti_immigrant_sentiment),
  };
}

}  // namespace threatdyn
