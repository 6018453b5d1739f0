#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "kpzlab/error.hpp"
#include "kpzlab/harness.hpp"
#include "kpzlab/random.hpp"

using namespace kpz;
using namespace kpz::harness;
namespace fs = std::filesystem;

namespace {

Errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc{0};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double uniform_cdf(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

}  // namespace

TEST_CASE("ecdf") {
  Ecdf f({3.0, 1.0, 2.0, 2.0});
  CHECK(f(0.5) == 0.0);
  CHECK(f(1.0) == 0.25);
  CHECK(f(2.0) == 0.75);
  CHECK(f(1e9) == 1.0);
  CHECK(f.sorted().front() == 1.0);
}

TEST_CASE("ks_distance examples") {
  CHECK(ks_distance({0.5}, uniform_cdf).d == doctest::Approx(0.5));
  CHECK(ks_distance({0.1, 0.7}, [](double) { return 0.0; }).d == 1.0);
  CHECK(code_of([] { ks_distance({}, uniform_cdf); }) == Errc::empty_sample);

  // by hand: sorted (0.2, 0.4), steps at 1/2 and 1
  auto k = ks_distance({0.4, 0.2}, uniform_cdf);
  CHECK(k.d == doctest::Approx(0.6));
  CHECK(k.m == 2);
}

TEST_CASE("ks_distance calibration: m = 1e4 draws from the model") {
  int below = 0;
  const int reps = 200;
  for (int r = 0; r < reps; ++r) {
    Rng rng = make_rng(42, r);
    std::vector<double> x(10000);
    for (double& v : x) v = uniform01(rng);
    if (ks_distance(x, uniform_cdf).d < 0.025) ++below;
  }
  CHECK(below >= reps * 99 / 100);
  CHECK(dkw_radius(10000, 0.01) < 0.025);
  CHECK(dkw_radius(10000, 0.01) == doctest::Approx(std::sqrt(std::log(2.0 / 0.01) / 20000.0)));
}

TEST_CASE("two-sample KS") {
  CHECK(ks_two_sample({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(ks_two_sample({1, 2}, {5, 6}) == 1.0);
  CHECK(ks_two_sample({1, 2, 3, 4}, {2.5, 10}) == doctest::Approx(0.5));
}

TEST_CASE("mean_std and checks") {
  auto s = mean_std({1.0, 2.0, 3.0, 4.0});
  CHECK(s.mean == 2.5);
  CHECK(s.variance == doctest::Approx(5.0 / 3.0));
  CHECK(check_close("a", 1.0, 1.05, 0.1).pass);
  CHECK_FALSE(check_close("a", 1.0, 1.2, 0.1).pass);
  CHECK(check_below("b", 0.01, 0.05).pass);
  Report r;
  r.add(check_below("b", 0.01, 0.05));
  r.add(check_below("c", 1.0, 0.05));
  CHECK_FALSE(r.pass);
  CHECK(r.to_json()["checks"].size() == 2);
}

TEST_CASE("experiment config parsing") {
  auto cfg = parse_experiment(json::parse(R"({"experiment":"semicircle-ks","seed":5,"params":{"n":50}})"));
  CHECK(cfg.id == "semicircle-ks");
  CHECK(cfg.seed == 5);
  CHECK(cfg.params["n"] == 50);
  CHECK(code_of([] { parse_experiment(json::parse(R"({"seed":5})")); }) == Errc::config);
  CHECK(code_of([] { parse_experiment(json::parse(R"({"experiment":"x","bogus":1})")); }) == Errc::config);
  CHECK(code_of([] { parse_experiment(json::parse(R"({"experiment":"x","seed":"five"})")); }) == Errc::config);
  CHECK(code_of([] { parse_experiment(json::parse("[1,2]")); }) == Errc::config);

  CHECK(experiment_ids().size() == 11);
  ExperimentConfig unknown;
  unknown.id = "no-such-experiment";
  CHECK(code_of([&] { run_experiment(unknown); }) == Errc::config);
  CHECK(code_of([] { run_command("no-such-command", json::object()); }) == Errc::config);
  CHECK(code_of([] { run_command("tw-cdf", json{{"bogus", 1}}); }) == Errc::config);
  CHECK(code_of([] { run_command("bethe", json{{"N", "two"}, {"L", 4}}); }) == Errc::config);
}

TEST_CASE("semicircle-ks with n = 500 reports D and passes") {
  ExperimentConfig cfg;
  cfg.id = "semicircle-ks";
  auto r = run_experiment(cfg);
  CHECK(r.pass);
  REQUIRE(!r.checks.empty());
  CHECK(r.checks[0].value < 0.05);
  CHECK(r.checks[0].tolerance == 0.05);
}

TEST_CASE("single-worker runs are byte-identical") {
  fs::path base = fs::temp_directory_path() / "kpzlab_determinism";
  fs::remove_all(base);
  for (const char* id : {"semicircle-ks", "coulomb-ks"}) {
    for (const char* run : {"a", "b"}) {
      ExperimentConfig cfg;
      cfg.id = id;
      cfg.seed = 777;
      cfg.workers = 1;
      cfg.out_dir = (base / run).string();
      if (std::string(id) == "coulomb-ks") cfg.params = {{"sweeps", 2000}, {"matrices", 200}};
      run_experiment(cfg);
    }
    std::string name = std::string(id) + ".csv";
    std::string a = slurp(base / "a" / name);
    CHECK(!a.empty());
    CHECK(a == slurp(base / "b" / name));
    auto manifest = json::parse(slurp(base / "a" / (std::string(id) + ".json")));
    CHECK(manifest.contains("build"));
  }
  fs::remove_all(base);
}

TEST_CASE("output writer") {
  fs::path dir = fs::temp_directory_path() / "kpzlab_output_test";
  fs::remove_all(dir);
  Output out(dir.string());
  auto path = out.csv("t", {"a", "b"}, {{1.0, 0.1}, {2.0, 1.0 / 3.0}});
  CHECK(slurp(path).rfind("a,b\n1,0.10000000000000001\n", 0) == 0);
  auto m = json::parse(slurp(out.manifest("t", {{"k", 1}})));
  CHECK(m["build"] == git_describe());
  Output none("");
  CHECK_FALSE(none.enabled());
  CHECK(none.csv("t", {"a"}, {{1.0}}).empty());
  fs::remove_all(dir);
}
