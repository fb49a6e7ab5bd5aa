#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "threatdyn/threat_kernel.hpp"

namespace threatdyn {

// The swept inputs of one simulation run, in parameter-table order.
struct ParameterSet {
  double big5_agreeableness = 0.5;
  double big5_conscientiousness = 0.5;
  double big5_extraversion = 0.5;
  double big5_neuroticism = 0.5;
  double big5_openness = 0.5;
  double energy_decay = 0.275;
  double habituation_rate = 0.55;
  PerThreat<double> hazard_intensity{{0.5, 0.5, 0.5, 0.5, 0.5}};
  PerThreat<double> initial_concern{{0.5, 0.5, 0.5, 0.5, 0.5}};
  double rel_frequency = 0.5;
  double social_media_use = 0.5;
  double threat_pct_of_media = 0.5;
  double tv_media_use = 0.5;

  friend bool operator==(const ParameterSet&, const ParameterSet&) = default;
};

inline constexpr std::size_t kParameterCount = 21;

// Column names in the order used by the design sampler and the CSV schema.
inline constexpr std::array<std::string_view, kParameterCount>
    kParameterNames = {
        "Big_5_agreeableness",        "Big_5_conscientiousness",
        "Big_5_extraversion",         "Big_5_neuroticism",
        "Big_5_openness",             "energyDecay",
        "habituationRate",            "Hazard_intensity_contagion",
        "Hazard_intensity_financial", "Hazard_intensity_natural",
        "Hazard_intensity_predation", "Hazard_intensity_social",
        "Initial_concern_1",          "Initial_concern_2",
        "Initial_concern_3",          "Initial_concern_4",
        "Initial_concern_5",          "Rel_frequency",
        "socialMediaUse",             "ThreatPctOfMedia",
        "tvMediaUse",
};

double& parameter_at(ParameterSet& p, std::size_t index);
double parameter_at(const ParameterSet& p, std::size_t index);

std::optional<std::size_t> parameter_index(std::string_view name);

struct ParamRange {
  std::string name;
  double low = 0.0;
  double high = 1.0;
};

// Default sweep range for every parameter, in kParameterNames order.
std::array<ParamRange, kParameterCount> default_ranges();

ThreatGlobals threat_globals(const ParameterSet& p);
ThreatParams threat_params(const ParameterSet& p, ThreatDimension d);

}  // namespace threatdyn
