#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "threatdyn/simulation.hpp"

namespace threatdyn {

// Parameter j of run i takes the (i * kParameterCount + j)-th draw of a
// SplitMix64 stream seeded with spec.seed, scaled to [low, high).
std::vector<ParameterSet> sample_design(const DesignSpec& spec);

struct SweepMetadata {
  std::uint64_t seed = 0;
  std::int64_t n = 0;
  double dt = 0.0;
  double horizon = 0.0;

  friend bool operator==(const SweepMetadata&, const SweepMetadata&) = default;
};

struct SweepResult {
  SweepMetadata meta;
  std::vector<RunRecord> records;  // ascending run_id, 0..n-1

  friend bool operator==(const SweepResult&, const SweepResult&) = default;
};

// Called with the number of finished runs; may be invoked from worker threads
// but never concurrently.
using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

// Runs every parameter set on `workers` threads. Output does not depend on
// the worker count. A failing run aborts the sweep with a SweepError carrying
// the smallest failing run_id.
SweepResult execute_sweep(const std::vector<ParameterSet>& design,
                          const SimConfig& config, unsigned workers,
                          const ProgressFn& progress = {});

// Column header of the sweep CSV, in order.
const std::vector<std::string>& record_columns();

// One record as numbers, aligned with record_columns(). Integer fields are
// exact since they stay far below 2^53.
std::vector<double> record_values(const RunRecord& r);

void write_records_csv(const SweepResult& result, std::ostream& out);
void write_records_csv(const SweepResult& result,
                       const std::filesystem::path& path);
std::string to_csv_string(const SweepResult& result);

SweepResult read_records_csv(std::istream& in);
SweepResult read_records_csv(const std::filesystem::path& path);

}  // namespace threatdyn
