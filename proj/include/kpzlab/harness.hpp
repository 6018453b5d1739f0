#pragma once

// Statistics helpers, artifact output and the named acceptance experiments.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace kpz::harness {

using json = nlohmann::json;

/// Empirical CDF, F(s) = #{x_i <= s} / m.
class Ecdf {
 public:
  explicit Ecdf(std::vector<double> sample);
  double operator()(double s) const;
  std::size_t size() const { return x_.size(); }
  const std::vector<double>& sorted() const { return x_; }

 private:
  std::vector<double> x_;
};

struct KsStatistic {
  double d = 0.0;
  std::size_t m = 0;
};

/// sup_s |F_m(s) - F(s)|, attained at the sample points. Throws empty_sample.
KsStatistic ks_distance(const std::vector<double>& sample, const std::function<double(double)>& cdf);
/// sup_s |F_a(s) - F_b(s)| for two samples.
double ks_two_sample(const std::vector<double>& a, const std::vector<double>& b);
/// Dvoretzky-Kiefer-Wolfowitz radius: P(D > eps) <= alpha.
double dkw_radius(std::size_t m, double alpha);

struct MeanStd {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double stderr_ = 0.0;
};
MeanStd mean_std(const std::vector<double>& x);

/// One measured quantity against its tolerance.
struct Check {
  std::string name;
  double value = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// |value - target| < tolerance
Check check_close(std::string name, double value, double target, double tolerance);
/// value < bound
Check check_below(std::string name, double value, double bound);

struct Report {
  std::string id;
  bool pass = true;
  std::vector<Check> checks;
  json details = json::object();
  std::vector<std::string> artifacts;
  double seconds = 0.0;

  void add(Check c) {
    pass = pass && c.pass;
    checks.push_back(std::move(c));
  }
  json to_json() const;
};

/// Build identification baked in at configure time.
const char* git_describe() noexcept;

/// Artifact directory; created on first write. An empty path disables output.
class Output {
 public:
  explicit Output(std::string dir) : dir_(std::move(dir)) {}
  bool enabled() const { return !dir_.empty(); }
  /// Writes a CSV file and returns its path (empty if disabled).
  std::string csv(const std::string& name, const std::vector<std::string>& header,
                  const std::vector<std::vector<double>>& rows) const;
  /// Writes name.json with git_describe added under "build".
  std::string manifest(const std::string& name, json body) const;
  std::string text(const std::string& name, const std::string& content) const;

 private:
  std::string dir_;
};

struct ExperimentConfig {
  std::string id;
  json params = json::object();
  std::uint64_t seed = 20240601;
  unsigned workers = 1;
  std::string out_dir;
};

/// Parses {"experiment": id, "params": {...}, "seed": .., "workers": .., "out": ..}.
/// Throws config on schema violations.
ExperimentConfig parse_experiment(const json& j);

/// Names accepted by run_experiment, in criterion order.
const std::vector<std::string>& experiment_ids();

/// Runs one named experiment; unknown ids throw config.
Report run_experiment(const ExperimentConfig& cfg);

/// Dispatches a CLI subcommand with its merged JSON parameters. Global keys
/// seed, workers and out are read from the same object.
Report run_command(const std::string& name, const json& params);

}  // namespace kpz::harness
