// kpzlab command-line front end. Everything goes through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kpzlab/kpzlab.h"

namespace {

using json = nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitStatistical = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct Flag {
  std::string key;
  std::string text;  // raw command-line text, parsed as JSON when possible
};

json parse_value(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception&) {
    return text;
  }
}

// "1,2,3" -> [1,2,3]
json parse_list(const std::string& text) {
  json arr = json::array();
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, ',')) {
    if (!item.empty()) arr.push_back(parse_value(item));
  }
  return arr;
}

bool usage_status(kpz_status s) {
  return s == KPZ_E_CONFIG || s == KPZ_E_INVALID_ARGUMENT || s == KPZ_E_INVALID_ORDERING ||
         s == KPZ_E_OUT_OF_RANGE || s == KPZ_E_WINDOW_TOO_SMALL || s == KPZ_E_STATE_SPACE_TOO_LARGE;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kpzlab: ASEP, random-matrix and Tracy-Widom numerics"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(kpz_version()));

  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::string out_dir, config_path;
  std::vector<std::string> sets;
  app.add_option("--seed", seed, "Root seed");
  app.add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "Output directory for CSV and JSON artifacts");
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--set", sets, "Extra parameter key=value (value parsed as JSON)");

  std::vector<Flag> flags;
  std::vector<std::pair<std::string, bool*>> switches;
  auto value = [&](CLI::App* sub, const std::string& name, const std::string& key, const std::string& help) {
    flags.push_back(Flag{key, {}});
    sub->add_option_function<std::string>(name, [&flags, key](const std::string& v) {
      for (auto& fl : flags)
        if (fl.key == key) fl.text = v;
    }, help);
  };
  flags.reserve(64);

  auto* simulate = app.add_subcommand("simulate-asep", "Simulate ASEP trajectories and export heights");
  value(simulate, "--p", "p", "Left-jump probability");
  value(simulate, "--t", "t", "Final time");
  value(simulate, "--trajectories", "trajectories", "Number of trajectories");
  value(simulate, "--lattice", "lattice", "window or ring");
  value(simulate, "--initial", "initial", "step, bernoulli or explicit");
  value(simulate, "--L", "L", "Ring length");
  value(simulate, "--density", "density", "Bernoulli density");
  value(simulate, "--sites", "sites", "Explicit sites, comma separated");
  value(simulate, "--x-halfwidth", "x_halfwidth", "Height output range");
  bool one_point = false;
  simulate->add_flag("--one-point", one_point, "Export the rescaled one-point statistic");

  auto* exact = app.add_subcommand("exact-prob", "Contour-integral transition probability");
  value(exact, "--y", "y", "Initial sites, comma separated");
  value(exact, "--x", "x", "Final sites, comma separated");
  value(exact, "--t", "t", "Time");
  value(exact, "--p", "p", "Left-jump probability");
  value(exact, "--radius", "radius", "Contour radius");
  value(exact, "--nodes", "nodes", "Quadrature nodes");
  bool oracle = false;
  exact->add_flag("--oracle", oracle, "Compare with uniformization");

  auto* bethe = app.add_subcommand("bethe", "Bethe roots and eigenpairs on a ring");
  value(bethe, "--N", "N", "Particles");
  value(bethe, "--L", "L", "Ring length");
  value(bethe, "--p", "p", "Left-jump probability");
  value(bethe, "--quantum-numbers", "quantum_numbers", "Quantum numbers, comma separated");

  auto* gue = app.add_subcommand("gue-spectrum", "GUE spectra, ESD and edge statistics");
  value(gue, "--n", "n", "Matrix size");
  value(gue, "--samples", "samples", "Number of matrices");
  value(gue, "--bins", "bins", "Histogram bins");

  auto* coulomb = app.add_subcommand("coulomb-mcmc", "Metropolis chain for the beta = 2 Coulomb gas");
  value(coulomb, "--n", "n", "Particles");
  value(coulomb, "--sweeps", "sweeps", "Sweeps of n single-coordinate steps");
  value(coulomb, "--sigma", "sigma", "Initial proposal scale");

  auto* moments = app.add_subcommand("trace-moments", "Monte Carlo E[Tr M^j] against the exact polynomials");
  value(moments, "--n", "n", "Matrix sizes, comma separated");
  value(moments, "--j", "j", "Orders, comma separated");
  value(moments, "--samples", "samples", "Draws per estimate");

  auto* tw = app.add_subcommand("tw-cdf", "Tracy-Widom F2 table and values");
  value(tw, "--s", "s", "Evaluation points, comma separated");

  auto* toprec = app.add_subcommand("toprec", "Topological recursion W_{g,k}");
  value(toprec, "--g", "g", "Genus");
  value(toprec, "--k", "k", "Number of points");
  value(toprec, "--expand-order", "expand_order", "Expansion order");
  bool check_residues = false;
  toprec->add_flag("--check-residues", check_residues, "Cross-check residues numerically");

  auto* experiment = app.add_subcommand("run-experiment", "Run a named acceptance experiment");
  std::string experiment_id;
  experiment->add_option("id", experiment_id, "Experiment id");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  const std::vector<std::string> list_keys{"sites", "y", "x", "quantum_numbers", "s", "j"};

  json params = json::object();
  try {
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      params = json::parse(is);
      if (!params.is_object()) throw std::runtime_error("config must be a JSON object");
    }
    json& target = name == "run-experiment" ? params["params"] : params;
    if (target.is_null()) target = json::object();
    for (const auto& f : flags) {
      if (f.text.empty()) continue;
      bool is_list = std::find(list_keys.begin(), list_keys.end(), f.key) != list_keys.end() ||
                     (f.key == "n" && name == "trace-moments");
      target[f.key] = is_list ? parse_list(f.text) : parse_value(f.text);
    }
    for (const auto& s : sets) {
      auto eq = s.find('=');
      if (eq == std::string::npos || eq == 0) throw std::runtime_error("--set expects key=value, got '" + s + "'");
      target[s.substr(0, eq)] = parse_value(s.substr(eq + 1));
    }
    if (one_point) target["one_point"] = true;
    if (oracle) target["oracle"] = true;
    if (check_residues) target["check_residues"] = true;
    if (!experiment_id.empty()) params["experiment"] = experiment_id;
  } catch (const std::exception& e) {
    std::cerr << "kpzlab: " << e.what() << "\n";
    return kExitUsage;
  }
  if (seed) params["seed"] = *seed;
  if (workers) params["workers"] = *workers;
  if (!out_dir.empty()) params["out"] = out_dir;

  char* report = nullptr;
  const kpz_status status = kpz_run_command(name.c_str(), params.dump().c_str(), &report);
  if (status != KPZ_OK) {
    std::cerr << "kpzlab: " << kpz_status_name(status) << ": " << kpz_last_error() << "\n";
    return usage_status(status) ? kExitUsage : kExitRuntime;
  }
  json r = json::parse(report);
  kpz_string_free(report);
  std::cout << r.dump(2) << "\n";
  if (!out_dir.empty()) {
    std::ofstream os(out_dir + "/report-" + name + ".json");
    os << r.dump(2) << "\n";
  }
  return r.value("pass", false) ? kExitPass : kExitStatistical;
}
