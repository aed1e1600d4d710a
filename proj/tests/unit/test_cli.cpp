#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <unistd.h>

#include "ponder/cli/config.hpp"
#include "ponder/cli/io.hpp"
#include "ponder/cli/runner.hpp"
#include "ponder/errors.hpp"

using namespace ponder;
using namespace ponder::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json bound_fraction_config(std::size_t n = 2000) {
  return {{"scenario", "bound-fraction"},
          {"seed", 4},
          {"potential", {{"amplitude_meV", 30}, {"group_velocity_c", 0.2}, {"spatial_period_nm", 206}}},
          {"ensemble", {{"particles", n}, {"energy_mean_eV", -9}, {"energy_fwhm_eV", 0.5}}},
          {"amplitudes_meV", {{"start", 0}, {"stop", 60}, {"count", 13}}}};
}

std::string config_error_key(const json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<none>";
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("ponder_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

std::map<std::string, std::string> checksums(const RunReport& r) {
  std::map<std::string, std::string> out;
  for (const auto& f : r.manifest["files"]) out[f["path"]] = f["sha256"];
  return out;
}

}  // namespace

TEST_CASE("config values are read in SI from unit-suffixed keys") {
  const auto cfg = parse_config(bound_fraction_config());
  REQUIRE(cfg.cases.size() == 1);
  const auto& c = cfg.cases[0];
  CHECK(c.potential.amplitude == doctest::Approx(30 * units::meV));
  CHECK(c.potential.spatial_period == doctest::Approx(206e-9));
  CHECK(c.potential.group_velocity == doctest::Approx(0.2 * codata.speed_of_light));
  const auto& s = std::get<BoundFractionSettings>(c.settings);
  CHECK(s.ensemble.energy.mean == doctest::Approx(-9 * units::eV));
  CHECK(s.ensemble.seed == 4);
  REQUIRE(s.amplitudes.size() == 13);
  CHECK(s.amplitudes[12] == doctest::Approx(60 * units::meV));
  CHECK(cfg.sha256.size() == 64);
}

TEST_CASE("config errors name the offending key") {
  auto bad = bound_fraction_config();
  bad["ensemble"]["energy_fwhm_eV"] = -1;
  CHECK(config_error_key(bad) == "ensemble.energy_fwhm_eV");

  bad = bound_fraction_config();
  bad["ensemble"]["colour"] = "blue";
  CHECK(config_error_key(bad) == "ensemble.colour");

  bad = bound_fraction_config();
  bad["potential"].erase("amplitude_meV");
  bad["potential"]["amplitude"] = 30;
  CHECK(config_error_key(bad) == "potential.amplitude");

  bad = bound_fraction_config();
  bad["potential"]["amplitude_eV"] = 0.03;
  CHECK(config_error_key(bad) == "potential.amplitude");

  bad = bound_fraction_config();
  bad["scenario"] = "sideways";
  CHECK(config_error_key(bad) == "scenario");

  bad = bound_fraction_config();
  bad["cases"] = json::array({{{"name", "a"}, {"ensemble", {{"particles", 0}}}}});
  CHECK(config_error_key(bad) == "cases[0].ensemble.particles");
}

TEST_CASE("cases are merged over the base config") {
  auto j = bound_fraction_config();
  j["cases"] = json::array({{{"name", "weak"}}, {{"name", "strong"}, {"potential", {{"amplitude_meV", 60}}}}});
  const auto cfg = parse_config(j);
  REQUIRE(cfg.cases.size() == 2);
  CHECK(cfg.cases[0].potential.amplitude == doctest::Approx(30 * units::meV));
  CHECK(cfg.cases[1].potential.amplitude == doctest::Approx(60 * units::meV));
  CHECK(cfg.cases[1].name == "strong");
  j["cases"][1]["name"] = "weak";
  CHECK(config_error_key(j) == "cases[1].name");
}

TEST_CASE("grid csv round-trips bitwise") {
  SpectralDensityGrid g;
  g.sweep = Axis::uniform("time", "s", 0.0, 2e-12, 2);
  g.observable = Axis::uniform("energy offset", "J", -1.0 / 3.0, 0.1, 2);
  g.density = {0.1, 1.0 / 3.0, 0.9, 2.0 / 3.0};
  g.outside = {5, 0};
  g.metadata["note"] = "x";
  const fs::path dir = scratch("grid");
  fs::create_directories(dir);
  const auto files = write_grid(g, dir / "g", {{"seed", 3}});
  REQUIRE(files.size() == 2);
  const auto r = read_grid(files[0]);
  CHECK(r.sweep.edges == g.sweep.edges);
  CHECK(r.observable.edges == g.observable.edges);
  CHECK(r.observable.name == "energy offset");
  CHECK(r.density == g.density);
  CHECK(r.outside == g.outside);
  CHECK(r.metadata["note"] == "x");
  for (std::size_t s = 0; s < 2; ++s) CHECK(r.column_sum(s) == doctest::Approx(1.0).epsilon(1e-15));

  Table t{{"a_s", "b_J"}, {{1.0 / 7.0, 2.5}, {-1e-300, 4.0}}};
  const auto tf = write_table(t, dir / "t", json::object());
  const auto tr = read_table(tf[0]);
  CHECK(tr.columns == t.columns);
  CHECK(tr.values == t.values);
  fs::remove_all(dir);
}

TEST_CASE("runs are reproducible and written with a manifest") {
  const auto cfg = parse_config(bound_fraction_config());
  const fs::path a = scratch("run_a"), b = scratch("run_b");
  const auto ra = run(cfg, {a, 1, "bound-fraction"});
  const auto rb = run(cfg, {b, 3, "bound-fraction"});
  CHECK(checksums(ra) == checksums(rb));
  CHECK(checksums(ra).size() == 2);
  CHECK(fs::exists(a / "manifest.json"));
  CHECK(ra.manifest["config_sha256"] == cfg.sha256);
  // re-running into an existing run replaces it
  const auto rc = run(cfg, {a, 2, "bound-fraction"});
  CHECK(checksums(rc) == checksums(ra));

  std::ifstream side(a / "bound-fraction.json");
  const auto meta = json::parse(side);
  CHECK(meta["potential"]["amplitude_J"].get<double>() == cfg.cases[0].potential.amplitude);
  CHECK(meta["seed"] == 4);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("failed runs leave nothing behind") {
  auto j = bound_fraction_config(100);
  j["ensemble"]["energy_mean_eV"] = -1e6;  // beyond the synchronous kinetic energy
  const auto cfg = parse_config(j);
  const fs::path out = scratch("fail");
  CHECK_THROWS_AS(run(cfg, {out, 1, "bad"}), DomainError);
  CHECK_FALSE(fs::exists(out));
  for (const auto& e : fs::directory_iterator(out.parent_path())) {
    CHECK(e.path().filename().string().find(out.filename().string() + ".staging") == std::string::npos);
  }

  // a foreign directory is never replaced
  fs::create_directories(out);
  std::ofstream(out / "keep.txt") << "mine";
  CHECK_THROWS_AS(run(parse_config(bound_fraction_config(10)), {out, 1, "x"}), IOError);
  CHECK(fs::exists(out / "keep.txt"));
  fs::remove_all(out);
}

TEST_CASE("shipped scenarios: fig01 to fig12 each present once and valid") {
  const fs::path dir = PONDER_SCENARIO_DIR;
  std::set<int> slots;
  std::size_t count = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() != ".json") continue;
    ++count;
    INFO(e.path().string());
    CHECK_NOTHROW(load_config(e.path()));
    const std::string name = e.path().filename().string();
    if (name.rfind("fig", 0) == 0) CHECK(slots.insert(std::stoi(name.substr(3, 2))).second);
  }
  CHECK(count >= 12);
  for (int f = 1; f <= 12; ++f) CHECK(slots.count(f) == 1);
}
