#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "threatdyn/parameters.hpp"
#include "threatdyn/socio_dynamics.hpp"
#include "threatdyn/threat_kernel.hpp"

namespace threatdyn {

struct DesignSpec {
  std::int64_t n_runs = 20000;
  std::uint64_t seed = 42;
  std::array<ParamRange, kParameterCount> ranges = default_ranges();
};

struct SimConfig {
  double dt = 0.25;
  double horizon = 365.0;
  double tau = 20.0;
  double rho = KernelConstants{}.spontaneous_recovery;
  Couplings couplings{};
  DesignSpec design{};

  std::int64_t steps() const;
  KernelConstants kernel_constants() const;
};

// Throws ValidationError naming the first violated invariant.
void validate(const SimConfig& config);
void validate(const DesignSpec& spec);

struct RunRecord {
  std::int64_t run_id = 0;
  ParameterSet params{};
  PerThreat<std::int64_t> hazard_event_count{};
  SocioState stocks{};  // final values
  LatentThreats latents{};  // averaged over all steps
  PerThreat<double> engagement{};  // final values, as are energy and added_energy
  PerThreat<double> energy{};
  PerThreat<double> added_energy{};

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

// Throws ValidationError listing every parameter outside the config's ranges.
void validate(const ParameterSet& params, const SimConfig& config);

// Full trajectory of one run, kept for diagnostics and tests.
struct Trajectory {
  std::vector<SocioState> stocks;
  std::vector<LatentThreats> latents;
  std::vector<PerThreat<ThreatState>> threats;
};

RunRecord run_simulation(const ParameterSet& params, const SimConfig& config,
                         std::int64_t run_id = 0,
                         Trajectory* trajectory = nullptr);

}  // namespace threatdyn
