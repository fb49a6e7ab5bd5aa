#include "threatdyn/experiment.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <string_view>
#include <thread>

#include "threatdyn/errors.hpp"
#include "threatdyn/splitmix64.hpp"

namespace threatdyn {

std::vector<ParameterSet> sample_design(const DesignSpec& spec) {
  validate(spec);
  SplitMix64 rng(spec.seed);
  std::vector<ParameterSet> design(static_cast<std::size_t>(spec.n_runs));
  for (auto& p : design) {
    for (std::size_t j = 0; j < kParameterCount; ++j) {
      const auto& r = spec.ranges[j];
      double v = r.low + (r.high - r.low) * rng.next_unit();
      // Rounding can land exactly on the open upper bound.
      if (v >= r.high) v = std::nextafter(r.high, r.low);
      parameter_at(p, j) = v;
    }
  }
  return design;
}

SweepResult execute_sweep(const std::vector<ParameterSet>& design,
                          const SimConfig& config, unsigned workers,
                          const ProgressFn& progress) {
  if (workers < 1) throw ValidationError("workers must be >= 1", {"workers"});
  validate(config);

  const std::size_t total = design.size();
  std::vector<RunRecord> records(total);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::atomic<bool> failed{false};
  std::mutex mutex;
  std::optional<std::pair<std::size_t, std::string>> first_failure;

  auto work = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total) break;
      try {
        records[i] = run_simulation(design[i], config,
                                    static_cast<std::int64_t>(i));
      } catch (const std::exception& e) {
        std::lock_guard lock(mutex);
        if (!first_failure || i < first_failure->first) {
          first_failure = {i, e.what()};
        }
        failed = true;
        break;
      }
      const std::size_t finished = done.fetch_add(1) + 1;
      if (progress) {
        std::lock_guard lock(mutex);
        progress(finished, total);
      }
    }
  };

  const unsigned n_threads =
      static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(total, 1)));
  if (n_threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(work);
  }

  if (first_failure) {
    throw SweepError(first_failure->second, first_failure->first);
  }

  SweepResult result;
  result.meta = {config.design.seed, static_cast<std::int64_t>(total),
                 config.dt, config.horizon};
  result.records = std::move(records);
  return result;
}

// --- CSV -------------------------------------------------------------------

namespace {

constexpr std::array<std::string_view, 6> kStockColumns = {
    "nationalism_level",           "economic_conservatism",
    "social_conservatism",         "anthropomorphic_promiscuity",
    "sociographic_prudery",        "anti_immigrant_sentiment"};

std::vector<std::string> build_columns() {
  std::vector<std::string> cols;
  cols.emplace_back("run_id");
  for (auto name : kParameterNames) cols.emplace_back(name);
  for (auto d : kAllThreats) {
    cols.push_back("hazard_event_count_" + std::string(name_of(d)));
  }
  for (auto name : kStockColumns) cols.emplace_back(name);
  cols.emplace_back("threat_con_fin_nat");
  cols.emplace_back("threat_soc_pred");
  for (const char* prefix : {"engagement_", "energy_", "addedEnergy_"}) {
    for (auto d : kAllThreats) {
      cols.push_back(prefix + std::to_string(number_of(d)));
    }
  }
  return cols;
}

double& stock_at(SocioState& s, std::size_t i) {
  switch (i) {
    case 0: return s.nationalism;
    case 1: return s.economic_conservatism;
    case 2: return s.social_conservatism;
    case 3: return s.anthropomorphic_promiscuity;
    case 4: return s.sociographic_prudery;
    default: return s.anti_immigrant_sentiment;
  }
}

void append_real(std::string& line, double v) {
  std::array<char, 64> buf;
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  line.append(buf.data(), end);
}

void append_int(std::string& line, std::int64_t v) {
  std::array<char, 32> buf;
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  line.append(buf.data(), end);
}

std::string format_row(const RunRecord& r) {
  std::string line;
  line.reserve(1024);
  const auto values = record_values(r);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) line.push_back(',');
    append_real(line, values[i]);
  }
  return line;
}

std::string format_meta(const SweepMetadata& m) {
  std::string line = "# seed=";
  line += std::to_string(m.seed);
  line += " n=";
  append_int(line, m.n);
  line += " dt=";
  append_real(line, m.dt);
  line += " horizon=";
  append_real(line, m.horizon);
  return line;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

SweepMetadata parse_meta(std::string_view line) {
  if (line.substr(0, 2) != "# ") {
    throw ParseError("expected metadata line '# seed=... n=... dt=... horizon=...'",
                     1, 1);
  }
  SweepMetadata m;
  bool seen[4] = {false, false, false, false};
  for (auto token : split(line.substr(2), ' ')) {
    if (token.empty()) continue;
    const auto eq = token.find('=');
    if (eq == std::string_view::npos) throw ParseError("malformed metadata", 1, 1);
    const auto key = token.substr(0, eq);
    const auto value = token.substr(eq + 1);
    bool ok = false;
    if (key == "seed") {
      auto v = parse_number<std::uint64_t>(value);
      if ((ok = v.has_value())) m.seed = *v, seen[0] = true;
    } else if (key == "n") {
      auto v = parse_number<std::int64_t>(value);
      if ((ok = v.has_value())) m.n = *v, seen[1] = true;
    } else if (key == "dt") {
      auto v = parse_number<double>(value);
      if ((ok = v.has_value())) m.dt = *v, seen[2] = true;
    } else if (key == "horizon") {
      auto v = parse_number<double>(value);
      if ((ok = v.has_value())) m.horizon = *v, seen[3] = true;
    }
    if (!ok) {
      throw ParseError("bad metadata entry '" + std::string(token) + "'", 1, 1);
    }
  }
  if (!(seen[0] && seen[1] && seen[2] && seen[3])) {
    throw ParseError("metadata must define seed, n, dt and horizon", 1, 1);
  }
  return m;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

std::vector<double> record_values(const RunRecord& r) {
  std::vector<double> v;
  v.reserve(record_columns().size());
  v.push_back(static_cast<double>(r.run_id));
  for (std::size_t j = 0; j < kParameterCount; ++j) v.push_back(parameter_at(r.params, j));
  for (auto d : kAllThreats) v.push_back(static_cast<double>(r.hazard_event_count[d]));
  SocioState stocks = r.stocks;
  for (std::size_t i = 0; i < kStockColumns.size(); ++i) v.push_back(stock_at(stocks, i));
  v.push_back(r.latents.con_fin_nat);
  v.push_back(r.latents.soc_pred);
  for (auto d : kAllThreats) v.push_back(r.engagement[d]);
  for (auto d : kAllThreats) v.push_back(r.energy[d]);
  for (auto d : kAllThreats) v.push_back(r.added_energy[d]);
  return v;
}

const std::vector<std::string>& record_columns() {
  static const std::vector<std::string> cols = build_columns();
  return cols;
}

void write_records_csv(const SweepResult& result, std::ostream& out) {
  out << format_meta(result.meta) << '\n';
  const auto& cols = record_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out << ',';
    out << cols[i];
  }
  out << '\n';
  for (const auto& r : result.records) out << format_row(r) << '\n';
}

void write_records_csv(const SweepResult& result,
                       const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_records_csv(result, out);
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

std::string to_csv_string(const SweepResult& result) {
  std::ostringstream out;
  write_records_csv(result, out);
  return out.str();
}

SweepResult read_records_csv(std::istream& in) {
  SweepResult result;
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty file", 1, 1);
  strip_cr(line);
  result.meta = parse_meta(line);

  if (!std::getline(in, line)) throw SchemaError("missing header line");
  strip_cr(line);
  const auto& cols = record_columns();
  const auto header = split(line, ',');
  if (header.size() != cols.size()) {
    throw SchemaError("header has " + std::to_string(header.size()) +
                      " columns, expected " + std::to_string(cols.size()));
  }
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (header[i] != cols[i]) {
      throw SchemaError("header column " + std::to_string(i + 1) + " is '" +
                        std::string(header[i]) + "', expected '" + cols[i] +
                        "'");
    }
  }

  std::size_t row = 2;
  while (std::getline(in, line)) {
    ++row;
    strip_cr(line);
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != cols.size()) {
      throw ParseError("expected " + std::to_string(cols.size()) +
                           " cells, found " + std::to_string(cells.size()),
                       row, std::min(cells.size(), cols.size()));
    }
    std::size_t col = 0;
    auto next_int = [&]() {
      auto v = parse_number<std::int64_t>(cells[col]);
      ++col;
      if (!v) throw ParseError("not an integer: '" + std::string(cells[col - 1]) + "'", row, col);
      return *v;
    };
    auto next_real = [&]() {
      auto v = parse_number<double>(cells[col]);
      ++col;
      if (!v) throw ParseError("not a number: '" + std::string(cells[col - 1]) + "'", row, col);
      return *v;
    };

    RunRecord r;
    r.run_id = next_int();
    for (std::size_t j = 0; j < kParameterCount; ++j) parameter_at(r.params, j) = next_real();
    for (auto d : kAllThreats) r.hazard_event_count[d] = next_int();
    for (std::size_t i = 0; i < kStockColumns.size(); ++i) stock_at(r.stocks, i) = next_real();
    r.latents.con_fin_nat = next_real();
    r.latents.soc_pred = next_real();
    for (auto d : kAllThreats) r.engagement[d] = next_real();
    for (auto d : kAllThreats) r.energy[d] = next_real();
    for (auto d : kAllThreats) r.added_energy[d] = next_real();
    result.records.push_back(r);
  }
  return result;
}

SweepResult read_records_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_records_csv(in);
}

}  // namespace threatdyn
