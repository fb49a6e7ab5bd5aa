// threatdyn: single runs, parameter sweeps, analyses and reports.

#include <CLI11.hpp>

#include <array>
#include <charconv>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "threatdyn/analyses.hpp"
#include "threatdyn/config.hpp"
#include "threatdyn/errors.hpp"
#include "threatdyn/experiment.hpp"

namespace td = threatdyn;

namespace {

constexpr int kOk = 0;
constexpr int kValidation = 1;
constexpr int kIo = 2;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> n;
  std::optional<unsigned> workers;
  std::string out;
  std::vector<std::string> overrides;
  std::string csv;
  std::string analysis;
  bool quiet = false;
};

td::SimConfig effective_config(const Options& o) {
  td::SimConfig config = o.config_path.empty() ? td::SimConfig{} : td::load_config(o.config_path);
  if (o.seed) config.design.seed = *o.seed;
  if (o.n) config.design.n_runs = *o.n;
  td::validate(config);
  return config;
}

unsigned worker_count(const Options& o) {
  if (o.workers) {
    if (*o.workers < 1) throw td::ValidationError("--workers must be >= 1", {"workers"});
    return *o.workers;
  }
  if (const char* env = std::getenv("THREATDYN_WORKERS"); env && *env) {
    const std::string_view s(env);
    unsigned v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || v < 1) {
      throw td::ValidationError("THREATDYN_WORKERS must be a positive integer, got '" +
                                    std::string(s) + "'",
                                {"workers"});
    }
    return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

td::ParameterSet apply_overrides(const std::vector<std::string>& overrides) {
  td::ParameterSet p;
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw td::ValidationError("expected NAME=VALUE, got '" + item + "'");
    }
    const std::string name = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    const auto idx = td::parameter_index(name);
    if (!idx) throw td::ValidationError("unknown parameter '" + name + "'", {name});
    double v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
      throw td::ValidationError("value of " + name + " is not a number: '" + value + "'",
                                {name});
    }
    td::parameter_at(p, *idx) = v;
  }
  return p;
}

std::string shortest(double v) {
  std::array<char, 64> buf;
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

int cmd_run(const Options& o) {
  const auto config = effective_config(o);
  const auto params = apply_overrides(o.overrides);
  const auto record = td::run_simulation(params, config);
  const auto& cols = td::record_columns();
  const auto values = td::record_values(record);
  std::size_t width = 0;
  for (const auto& c : cols) width = std::max(width, c.size());
  for (std::size_t i = 0; i < cols.size(); ++i) {
    std::cout << cols[i] << std::string(width + 2 - cols[i].size(), ' ')
              << shortest(values[i]) << '\n';
  }
  return kOk;
}

int cmd_sweep(const Options& o) {
  const auto config = effective_config(o);
  const unsigned workers = worker_count(o);
  const auto design = td::sample_design(config.design);
  td::ProgressFn progress;
  if (!o.quiet) {
    progress = [](std::size_t done, std::size_t total) {
      if (done % 1000 == 0 || done == total) {
        std::cerr << "\rruns " << done << "/" << total << std::flush;
        if (done == total) std::cerr << '\n';
      }
    };
  }
  const auto result = td::execute_sweep(design, config, workers, progress);
  if (o.out.empty() || o.out == "-") {
    td::write_records_csv(result, std::cout);
  } else {
    td::write_records_csv(result, std::filesystem::path(o.out));
  }
  return kOk;
}

int cmd_analyze(const Options& o) {
  const auto sweep = td::read_records_csv(std::filesystem::path(o.csv));
  const auto table = td::make_table(sweep.records);
  std::cout << td::run_analysis(table, o.analysis);
  return kOk;
}

int cmd_report(const Options& o) {
  const auto sweep = td::read_records_csv(std::filesystem::path(o.csv));
  for (const auto& path : td::write_report(sweep, o.out)) {
    std::cout << path.string() << '\n';
  }
  return kOk;
}

std::string defaults_footer() {
  const td::SimConfig c;
  std::string s = "Defaults: dt=" + shortest(c.dt) + " horizon=" + shortest(c.horizon) +
                  " tau=" + shortest(c.tau) + " rho=" + shortest(c.rho) +
                  " n=" + std::to_string(c.design.n_runs) +
                  " seed=" + std::to_string(c.design.seed) +
                  "\nWorkers: --workers, else THREATDYN_WORKERS, else hardware threads."
                  "\nExit codes: 0 success, 1 validation error, 2 I/O error.";
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  const td::SimConfig defaults;

  CLI::App app{"Threat-perception system-dynamics simulator"};
  app.footer(defaults_footer());
  app.require_subcommand(1);

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "Configuration file");
  };

  auto* run = app.add_subcommand("run", "Simulate one parameter set and print its record");
  add_config(run);
  run->add_option("--set", o.overrides,
                  "Override a parameter, NAME=VALUE (repeatable); unset parameters are 0.5 "
                  "except energyDecay and habituationRate, which take their range midpoints");

  auto* sweep = app.add_subcommand("sweep", "Sample the design and simulate every run");
  add_config(sweep);
  sweep->add_option("--seed", o.seed, "Design seed")
      ->default_str(std::to_string(defaults.design.seed));
  sweep->add_option("--n", o.n, "Number of runs")
      ->default_str(std::to_string(defaults.design.n_runs));
  sweep->add_option("--workers", o.workers, "Worker threads");
  sweep->add_option("--out", o.out, "Output CSV path ('-' for stdout)")->default_str("-");
  sweep->add_flag("--quiet", o.quiet, "No run counter on stderr");

  auto* analyze = app.add_subcommand("analyze", "Print one analysis of a sweep CSV");
  analyze->add_option("csv", o.csv, "Sweep CSV")->required();
  std::string names;
  for (const auto& n : td::analysis_names()) names += (names.empty() ? "" : ", ") + n;
  analyze->add_option("analysis", o.analysis, "One of: " + names)->required();

  auto* report = app.add_subcommand("report", "Write every table and figure input");
  report->add_option("csv", o.csv, "Sweep CSV")->required();
  report->add_option("--out", o.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidation;
  }

  try {
    if (*run) return cmd_run(o);
    if (*sweep) return cmd_sweep(o);
    if (*analyze) return cmd_analyze(o);
    if (*report) return cmd_report(o);
  } catch (const td::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kValidation;
}
