#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace threatdyn {

// Canonical order is alphabetical; the numeric suffix of engagement_i,
// energy_i, addedEnergy_i and Initial_concern_i is index + 1.
enum class ThreatDimension : std::uint8_t {
  contagion = 0,
  financial = 1,
  natural = 2,
  predation = 3,
  social = 4,
};

inline constexpr std::size_t kThreatDimensions = 5;

inline constexpr std::array<ThreatDimension, kThreatDimensions> kAllThreats = {
    ThreatDimension::contagion, ThreatDimension::financial,
    ThreatDimension::natural, ThreatDimension::predation,
    ThreatDimension::social};

constexpr std::size_t index_of(ThreatDimension d) noexcept {
  return static_cast<std::size_t>(d);
}

// 1-based numbering used in column suffixes.
constexpr int number_of(ThreatDimension d) noexcept {
  return static_cast<int>(d) + 1;
}

constexpr std::string_view name_of(ThreatDimension d) noexcept {
  switch (d) {
    case ThreatDimension::contagion: return "contagion";
    case ThreatDimension::financial: return "financial";
    case ThreatDimension::natural: return "natural";
    case ThreatDimension::predation: return "predation";
    case ThreatDimension::social: return "social";
  }
  return "";
}

// Values keyed by threat dimension.
template <typename T>
class PerThreat {
 public:
  constexpr PerThreat() = default;
  constexpr explicit PerThreat(const std::array<T, kThreatDimensions>& values)
      : values_(values) {}

  constexpr T& operator[](ThreatDimension d) noexcept {
    return values_[index_of(d)];
  }
  constexpr const T& operator[](ThreatDimension d) const noexcept {
    return values_[index_of(d)];
  }

  constexpr auto begin() noexcept { return values_.begin(); }
  constexpr auto end() noexcept { return values_.end(); }
  constexpr auto begin() const noexcept { return values_.begin(); }
  constexpr auto end() const noexcept { return values_.end(); }

  constexpr const std::array<T, kThreatDimensions>& values() const noexcept {
    return values_;
  }

  friend constexpr bool operator==(const PerThreat&, const PerThreat&) = default;

 private:
  std::array<T, kThreatDimensions> values_{};
};

struct ThreatParams {
  double hazard_intensity = 0.0;  // events per unit time, [0,1]
  double initial_concern = 0.0;   // [0,1]
};

struct ThreatGlobals {
  double habituation_rate = 0.5;  // [0.01,1]
  double energy_decay = 0.1;      // per unit time, [0.01,0.5]
  double threat_pct_of_media = 0.0;
  double tv_media_use = 0.0;
  double social_media_use = 0.0;
  double neuroticism = 0.5;
};

// Per-dimension stock/flow state of one threat subsystem.
struct ThreatState {
  double accumulator = 0.0;        // fractional progress to the next event, [0,1)
  double assoc_strength = 0.0;     // Rescorla-Wagner V, [0,1]
  double energy = 0.0;             // >= 0
  double added_energy_last = 0.0;  // energy injected by the most recent event
  double injected_total = 0.0;     // cumulative injected energy over the run
  std::int64_t event_count = 0;
  double engagement = 0.0;

  friend bool operator==(const ThreatState&, const ThreatState&) = default;
};

struct LatentThreats {
  double soc_pred = 0.0;     // social + predation cluster
  double con_fin_nat = 0.0;  // contagion + financial + natural cluster

  friend bool operator==(const LatentThreats&, const LatentThreats&) = default;
};

struct KernelConstants {
  // Spontaneous recovery of associative strength per unit time.
  double spontaneous_recovery = 0.3;
  // Added energy scales by 1 + neuroticism_gain * (neuroticism - 0.5).
  double neuroticism_gain = 0.5;
};

struct FiredEvents {
  double accumulator;
  std::int64_t count;
};

// 1 + pct * (0.5 tv + 0.5 sm). Inputs must lie in [0,1].
double media_amplification(double threat_pct, double tv_use, double social_use);

// V + rate * (1 - V), with the asymptote fixed at 1.
double rescorla_wagner_update(double strength, double rate);

// Deterministic event generation: integer part of (accumulator + inflow) is
// the number of events fired, fractional part carries over.
FiredEvents fire_events(double accumulator, double inflow);

// One explicit Euler step of a single threat subsystem.
ThreatState step_threat(const ThreatState& state, const ThreatParams& params,
                        const ThreatGlobals& globals, double dt,
                        const KernelConstants& constants = {});

// Factor-loading weighted means of the five engagements.
LatentThreats aggregate_latents(const PerThreat<double>& engagements);

namespace loadings {
inline constexpr double social = 1.00;
inline constexpr double predation = 0.81;
inline constexpr double financial = 1.00;
inline constexpr double contagion = 0.86;
inline constexpr double natural = 0.56;
}  // namespace loadings

}  // namespace threatdyn
