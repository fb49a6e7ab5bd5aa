#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "threatdyn/config.hpp"
#include "threatdyn/errors.hpp"

using namespace threatdyn;

namespace {

std::size_t error_line(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  FAIL("expected a config error");
  return 0;
}

std::string error_text(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

bool same(const SimConfig& a, const SimConfig& b) {
  if (a.dt != b.dt || a.horizon != b.horizon || a.tau != b.tau || a.rho != b.rho) return false;
  if (!(a.couplings == b.couplings)) return false;
  if (a.design.n_runs != b.design.n_runs || a.design.seed != b.design.seed) return false;
  for (std::size_t j = 0; j < kParameterCount; ++j) {
    if (a.design.ranges[j].low != b.design.ranges[j].low ||
        a.design.ranges[j].high != b.design.ranges[j].high)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("empty text gives the defaults") {
  CHECK(same(parse_config(""), SimConfig{}));
  CHECK(same(parse_config("# only a comment\n\n   \n"), SimConfig{}));
}

TEST_CASE("sim and design keys") {
  const auto c = parse_config(
      "[sim]\n"
      "dt = 0.5   # coarser\n"
      "horizon=100\n"
      "\n"
      "[design]\n"
      "n_runs = 250\n"
      "seed = 18446744073709551615\n");
  CHECK(c.dt == 0.5);
  CHECK(c.horizon == 100.0);
  CHECK(c.tau == SimConfig{}.tau);
  CHECK(c.design.n_runs == 250);
  CHECK(c.design.seed == 18446744073709551615ULL);
  CHECK(c.steps() == 200);
  CHECK(parse_config("[design]\nn = 7\n").design.n_runs == 7);
}

TEST_CASE("couplings and ranges") {
  const auto c = parse_config(
      "[couplings]\n"
      "media_gain = -0.4\n"
      "gate_midpoint = 1\n"
      "[ranges.energyDecay]\n"
      "low = 0.01\n"
      "high = 0.2\n");
  CHECK(c.couplings.media_gain == -0.4);
  CHECK(c.couplings.gate_midpoint == 1.0);
  const auto idx = *parameter_index("energyDecay");
  CHECK(c.design.ranges[idx].low == 0.01);
  CHECK(c.design.ranges[idx].high == 0.2);
}

TEST_CASE("invariant violations point at the line that set the value") {
  const std::string text = "[sim]\ntau = 20\n\ndt = 30\n";
  CHECK(error_line(text) == 4);
  const auto msg = error_text(text);
  CHECK(msg.find("line 4") != std::string::npos);
  CHECK(msg.find("dt < tau") != std::string::npos);

  CHECK(error_line("[sim]\nhorizon = -1\n") == 2);
  CHECK(error_line("[design]\nn = -3\n") == 2);
  CHECK(error_line("[ranges.tvMediaUse]\nlow = 0.8\nhigh = 0.2\n") == 3);
}

TEST_CASE("syntax errors") {
  CHECK(error_line("[sim]\nstep = 1\n") == 2);
  CHECK(error_text("[sim]\nstep = 1\n").find("unknown key 'step'") != std::string::npos);
  CHECK(error_line("dt = 0.1\n") == 1);
  CHECK(error_line("\n[physics]\n") == 2);
  CHECK(error_line("[ranges.nothing]\n") == 1);
  CHECK(error_line("[sim\n") == 1);
  CHECK(error_line("[sim]\ndt 0.1\n") == 2);
  CHECK(error_line("[sim]\ndt =\n") == 2);
  CHECK(error_line("[sim]\n= 3\n") == 2);
  CHECK(error_line("[sim]\ndt = fast\n") == 2);
  CHECK(error_line("[sim]\ndt = 0.1x\n") == 2);
  CHECK(error_line("[design]\nseed = 1.5\n") == 2);
  CHECK(error_line("[design]\nn = -\n") == 2);
  CHECK(error_line("[couplings]\nnot_a_coupling = 1\n") == 2);
  CHECK(error_line("[ranges.tvMediaUse]\nmid = 0.5\n") == 2);
  CHECK(error_text("[sim]\ndt = fast\n").find("not a number") != std::string::npos);
}

TEST_CASE("windows line endings") {
  const auto c = parse_config("[sim]\r\ndt = 0.125\r\n");
  CHECK(c.dt == 0.125);
}

TEST_CASE("format then parse is the identity") {
  CHECK(same(parse_config(format_config(SimConfig{})), SimConfig{}));

  SimConfig c;
  c.dt = 0.125;
  c.horizon = 12.5;
  c.rho = 0.123456789;
  c.design.n_runs = 3;
  c.design.seed = 987654321;
  c.couplings.nat_soc_pred = 1.0 / 3.0;
  c.design.ranges[4].low = 0.2;
  const auto text = format_config(c);
  CHECK(same(parse_config(text), c));
  CHECK(text == format_config(parse_config(text)));
}

TEST_CASE("config files") {
  const auto path = std::filesystem::temp_directory_path() / "threatdyn_test.conf";
  {
    std::ofstream out(path);
    out << "[design]\nseed = 5\n";
  }
  CHECK(load_config(path).design.seed == 5);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_config(path), IoError);
}
