#include "threatdyn/parameters.hpp"

#include <stdexcept>

namespace threatdyn {

namespace {

template <typename Set>
auto& field_at(Set& p, std::size_t index) {
  using D = ThreatDimension;
  switch (index) {
    case 0: return p.big5_agreeableness;
    case 1: return p.big5_conscientiousness;
    case 2: return p.big5_extraversion;
    case 3: return p.big5_neuroticism;
    case 4: return p.big5_openness;
    case 5: return p.energy_decay;
    case 6: return p.habituation_rate;
    case 7: return p.hazard_intensity[D::contagion];
    case 8: return p.hazard_intensity[D::financial];
    case 9: return p.hazard_intensity[D::natural];
    case 10: return p.hazard_intensity[D::predation];
    case 11: return p.hazard_intensity[D::social];
    case 12: return p.initial_concern[D::contagion];
    case 13: return p.initial_concern[D::financial];
    case 14: return p.initial_concern[D::natural];
    case 15: return p.initial_concern[D::predation];
    case 16: return p.initial_concern[D::social];
    case 17: return p.rel_frequency;
    case 18: return p.social_media_use;
    case 19: return p.threat_pct_of_media;
    case 20: return p.tv_media_use;
    default: throw std::out_of_range("parameter index out of range");
  }
}

}  // namespace

double& parameter_at(ParameterSet& p, std::size_t index) {
  return field_at(p, index);
}

double parameter_at(const ParameterSet& p, std::size_t index) {
  return field_at(p, index);
}

std::optional<std::size_t> parameter_index(std::string_view name) {
  for (std::size_t i = 0; i < kParameterCount; ++i) {
    if (kParameterNames[i] == name) return i;
  }
  return std::nullopt;
}

std::array<ParamRange, kParameterCount> default_ranges() {
  std::array<ParamRange, kParameterCount> ranges;
  for (std::size_t i = 0; i < kParameterCount; ++i) {
    ranges[i] = {std::string(kParameterNames[i]), 0.0, 1.0};
  }
  ranges[5].low = 0.05;  // energyDecay
  ranges[5].high = 0.5;
  ranges[6].low = 0.1;  // habituationRate
  return ranges;
}

ThreatGlobals threat_globals(const ParameterSet& p) {
  return {p.habituation_rate,   p.energy_decay,     p.threat_pct_of_media,
          p.tv_media_use,       p.social_media_use, p.big5_neuroticism};
}

ThreatParams threat_params(const ParameterSet& p, ThreatDimension d) {
  return {p.hazard_intensity[d], p.initial_concern[d]};
}

}  // namespace threatdyn
