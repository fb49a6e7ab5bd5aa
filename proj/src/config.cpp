#include "threatdyn/config.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "threatdyn/errors.hpp"

namespace threatdyn {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_value(std::string_view text, std::string_view key, std::size_t line) {
  T v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    const char* kind = std::is_floating_point_v<T> ? "a number" : "an integer";
    throw ConfigError("value of '" + std::string(key) + "' is not " + kind + ": '" +
                          std::string(text) + "'",
                      line);
  }
  return v;
}

std::string real(double v) {
  std::array<char, 64> buf;
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), end);
}

}  // namespace

SimConfig parse_config(std::string_view text) {
  SimConfig config;
  std::map<std::string, std::size_t> where;  // field name -> line that set it
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;

  while (pos <= text.size()) {
    const auto end = text.find('\n', pos);
    std::string_view line = text.substr(pos, end == std::string_view::npos ? text.size() - pos : end - pos);
    pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section header", line_no);
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section == "sim" || section == "design" || section == "couplings") continue;
      if (section.rfind("ranges.", 0) == 0) {
        if (!parameter_index(section.substr(7))) {
          throw ConfigError("unknown parameter in section [" + section + "]", line_no);
        }
        continue;
      }
      throw ConfigError("unknown section [" + section + "]", line_no);
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no);
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key", line_no);
    if (value.empty()) throw ConfigError("missing value for '" + key + "'", line_no);

    auto unknown = [&] {
      return ConfigError("unknown key '" + key + "' in " +
                             (section.empty() ? std::string("top level") : "[" + section + "]"),
                         line_no);
    };

    if (section == "sim") {
      double* target = key == "dt"        ? &config.dt
                       : key == "horizon" ? &config.horizon
                       : key == "tau"     ? &config.tau
                       : key == "rho"     ? &config.rho
                                          : nullptr;
      if (!target) throw unknown();
      *target = parse_value<double>(value, key, line_no);
      where[key] = line_no;
    } else if (section == "design") {
      if (key == "n" || key == "n_runs") {
        config.design.n_runs = parse_value<std::int64_t>(value, key, line_no);
        where["n"] = line_no;
      } else if (key == "seed") {
        config.design.seed = parse_value<std::uint64_t>(value, key, line_no);
        where["seed"] = line_no;
      } else {
        throw unknown();
      }
    } else if (section == "couplings") {
      const auto idx = coupling_index(key);
      if (!idx) throw unknown();
      coupling_at(config.couplings, *idx) = parse_value<double>(value, key, line_no);
      where[key] = line_no;
    } else if (section.rfind("ranges.", 0) == 0) {
      const std::string param = section.substr(7);
      auto& range = config.design.ranges[*parameter_index(param)];
      if (key == "low") {
        range.low = parse_value<double>(value, key, line_no);
      } else if (key == "high") {
        range.high = parse_value<double>(value, key, line_no);
      } else {
        throw unknown();
      }
      where[param] = line_no;
    } else {
      throw unknown();
    }
  }

  try {
    validate(config);
  } catch (const ValidationError& e) {
    std::size_t line = 0;
    for (const auto& f : e.fields()) {
      if (auto it = where.find(f); it != where.end()) {
        line = it->second;
        break;
      }
    }
    throw ConfigError(e.what(), line);
  }
  return config;
}

SimConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("failed reading config " + path.string());
  return parse_config(buffer.str());
}

std::string format_config(const SimConfig& config) {
  std::ostringstream out;
  out << "[sim]\n"
      << "dt = " << real(config.dt) << '\n'
      << "horizon = " << real(config.horizon) << '\n'
      << "tau = " << real(config.tau) << '\n'
      << "rho = " << real(config.rho) << "\n\n"
      << "[design]\n"
      << "n = " << config.design.n_runs << '\n'
      << "seed = " << config.design.seed << "\n\n"
      << "[couplings]\n";
  for (std::size_t i = 0; i < kCouplingCount; ++i) {
    out << kCouplingNames[i] << " = " << real(coupling_at(config.couplings, i)) << '\n';
  }
  for (const auto& r : config.design.ranges) {
    out << "\n[ranges." << r.name << "]\n"
        << "low = " << real(r.low) << '\n'
        << "high = " << real(r.high) << '\n';
  }
  return out.str();
}

}  // namespace threatdyn
