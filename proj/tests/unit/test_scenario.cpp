#include <doctest.h>

#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hfanova/config.hpp"
#include "hfanova/csv.hpp"
#include "hfanova/error.hpp"
#include "hfanova/parallel.hpp"
#include "hfanova/scenario.hpp"

using namespace hfanova;

namespace {

Config parse(const std::string& text) {
  std::istringstream is(text);
  return Config::parse(is);
}

ScenarioConfig small(ScenarioConfig c) {
  c.replicates = 4;
  c.n = 40;
  return c;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = parse("seed = 7\n[test]\ndirections=3\nalpha=0.01\nflag=yes\n");
  CHECK(c.get_integer("seed", 0) == 7);
  CHECK(c.get_integer("test.directions", 0) == 3);
  CHECK(c.get_double("test.alpha", 0.0) == 0.01);
  CHECK(c.get_bool("test.flag", false));
  CHECK(c.get_double("missing", 2.5) == 2.5);
  CHECK(c.canonical() == "seed=7\ntest.alpha=0.01\ntest.directions=3\ntest.flag=yes\n");
  CHECK(c.hash_hex().size() == 16);
  CHECK(c.hash() == parse("seed=7\n[test]\nflag=yes\nalpha=0.01\ndirections=3\n").hash());
  CHECK(c.hash() != parse("seed=8\n[test]\ndirections=3\nalpha=0.01\nflag=yes\n").hash());
  CHECK_THROWS_AS(parse("seed=seven\n").get_integer("seed", 0), ConfigError);
  CHECK_THROWS_AS(parse("flag=maybe\n").get_bool("flag", false), ConfigError);
  CHECK_THROWS_AS(parse("[broken\n"), ConfigError);
  CHECK_THROWS_AS(Config::load("/nonexistent/run.ini"), ConfigError);
  // FNV-1a reference values.
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("csv round trip") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1e-300) == "1e-300");
  CHECK(format_number(std::nan("")) == "nan");
  const double x = 0.1 + 0.2;
  CHECK(parse_double(format_number(x)) == x);
  std::ostringstream os;
  csv_comment(os, "config_hash=abc");
  csv_row(os, "k", "value");
  csv_row(os, 1, 2.5);
  std::istringstream is(os.str());
  const auto recs = read_csv(is);
  REQUIRE(recs.size() == 2);
  CHECK_FALSE(is_numeric_record(recs[0]));
  CHECK(is_numeric_record(recs[1]));
  CHECK_THROWS_AS(parse_double("1.5x"), ConfigError);
  CHECK_THROWS_AS(parse_integer("2.5"), ConfigError);
}

TEST_CASE("parallel_for") {
  CHECK(resolve_threads(3) == 3);
  CHECK(resolve_threads(0) >= 1);
  std::vector<int> out(100, 0);
  parallel_for(out.size(), 4, [&](std::size_t i) { out[i] = static_cast<int>(i * i); });
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == static_cast<int>(i * i));
  // The lowest failing index wins.
  try {
    parallel_for(50, 4, [](std::size_t i) {
      if (i == 7 || i == 31) throw std::runtime_error(std::to_string(i));
    });
    FAIL("no exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "7");
  }
  CHECK_NOTHROW(parallel_for(0, 4, [](std::size_t) { throw std::runtime_error("never"); }));
}

TEST_CASE("scenario tables") {
  CHECK(published_scenarios("rectangle").size() == 8);
  CHECK(published_scenarios("disk").size() == 12);
  CHECK(published_scenarios("sector").size() == 12);
  const auto c = find_scenario("rectangle", "P1,a,C1");
  CHECK(truncation_order(c) == 16);
  CHECK(c.n == 200);
  CHECK_THROWS_AS(find_scenario("rectangle", "P9,z,C9"), ConfigError);
  CHECK_THROWS(published_scenarios("triangle"));
  for (const auto& id : table_ids()) CHECK_FALSE(id.empty());
}

TEST_CASE("spectrum reference scale") {
  CHECK(reference_scale(Rectangle{-2, 3, -2, 3}, SpectrumReference::Unit) == 25.0);
  CHECK(reference_scale(Disk{12}, SpectrumReference::Unit) == 144.0);
  CHECK(reference_scale(CircularSector{25, 2.0 / 3}, SpectrumReference::Unit) == 625.0);
  CHECK(reference_scale(Disk{12}, SpectrumReference::Physical) == 1.0);
  CHECK(parse_spectrum_reference("physical") == SpectrumReference::Physical);
  CHECK(to_string(SpectrumReference::Unit) == "unit");
  CHECK_THROWS_AS(parse_spectrum_reference("metric"), ConfigError);
}

TEST_CASE("config overrides") {
  const auto c = scenario_from_config(parse("domain=disk\nradius=10\ntr=5\nn=60\nseed=9\nspectrum=physical\n"));
  CHECK(std::get<Disk>(c.domain).radius == 10.0);
  CHECK(c.steps.first == doctest::Approx(10.0 / 145));
  CHECK(truncation_order(c) == 5);
  CHECK(c.n == 60);
  CHECK(c.seed == 9);
  CHECK(c.reference == SpectrumReference::Physical);
  CHECK(c.id == "custom");
  const auto g = scenario_from_config(parse("scenario=P1,b,C2\ntruncation_mode=global\ntr=9\n"));
  CHECK(std::holds_alternative<GlobalTruncation>(g.truncation));
  CHECK(truncation_order(g) == 9);
  CHECK_THROWS_AS(scenario_from_config(parse("n=1\n")), ConfigError);
  CHECK_THROWS_AS(scenario_from_config(parse("alpha=2\n")), ConfigError);
  CHECK_THROWS_AS(scenario_from_config(parse("truncation_mode=odd\n")), ConfigError);
  CHECK_THROWS_AS(scenario_from_config(parse("shape=square\n")), std::exception);

  std::ostringstream os;
  write_scenario_config(os, c);
  CHECK(os.str().find("generator=") != std::string::npos);
  CHECK(os.str().find("domain=disk") != std::string::npos);
}

TEST_CASE("runs are independent of the thread count") {
  for (const char* domain : {"rectangle", "sector"}) {
    const auto c = small(published_scenarios(domain).front());
    const auto one = run_scenario(c, 1);
    const auto three = run_scenario(c, 3);
    CHECK(one.efmse_beta == three.efmse_beta);
    CHECK(one.efmse_y == three.efmse_y);
    CHECK(one.f.median == three.f.median);
    REQUIRE(one.beta_hat.size() == 4);
    for (std::size_t v = 0; v < 4; ++v) CHECK(one.beta_hat[v] == three.beta_hat[v]);
    auto other = c;
    other.seed += 1;
    CHECK(run_scenario(other, 1).efmse_beta != one.efmse_beta);
  }
  auto camp = default_campaign("rectangle");
  camp.scenario.n = 40;
  camp.samples = 10;
  camp.directions = 3;
  const auto a = run_campaign(camp, 1), b = run_campaign(camp, 4);
  REQUIRE(a.size() == 3);
  for (std::size_t d = 0; d < a.size(); ++d) {
    CHECK(a[d].success_rate == b[d].success_rate);
    CHECK(a[d].mean_p_value == b[d].mean_p_value);
  }
  const auto na = run_null_calibration(camp, 6, 1), nb = run_null_calibration(camp, 6, 2);
  for (std::size_t r = 0; r < na.size(); ++r) CHECK(na[r].t_value == nb[r].t_value);
}

TEST_CASE("grid metrics and pd floor") {
  auto c = small(find_scenario("rectangle", "P1,a,C1"));
  c.grid_metrics = true;
  const auto r = run_scenario(c, 2);
  const auto nodes = static_cast<Eigen::Index>(prepare(c).basis.nodes());
  CHECK(r.linf_beta.size() == nodes);
  CHECK(r.linf_y.size() == nodes);
  CHECK(r.linf_beta.minCoeff() >= 0.0);
  c.pd_floor = 1e-8;
  CHECK_NOTHROW(prepare(c));
}
