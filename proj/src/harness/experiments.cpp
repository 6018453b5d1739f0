#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>

#include "kpzlab/asep.hpp"
#include "kpzlab/error.hpp"
#include "kpzlab/exact.hpp"
#include "kpzlab/harness.hpp"
#include "kpzlab/parallel.hpp"
#include "kpzlab/random.hpp"
#include "kpzlab/rmt.hpp"
#include "kpzlab/toprec.hpp"
#include "kpzlab/tracy_widom.hpp"
#include "params.hpp"

namespace kpz::harness {

namespace {

using detail::Params;

constexpr double kTwMean = -1.771086807411;
constexpr double kTwVariance = 0.8131947928329;

struct Context {
  Params params;
  std::uint64_t seed;
  unsigned workers;
  Output out;
};

Report semicircle_ks(const Context& c) {
  c.params.allow({"n"});
  const int n = c.params.get<int>("n", 500);
  require(n >= 2, Errc::config, "semicircle-ks: n must be >= 2");
  Report r;
  auto mu = rmt::esd(rmt::eigenvalues(rmt::sample_gue(n, c.seed)));
  KsStatistic ks = ks_distance(mu.atoms, rmt::semicircle_cdf);
  r.add(check_below("ks_distance", ks.d, 0.05));
  r.details["n"] = n;
  std::vector<std::vector<double>> rows;
  std::vector<double> x = mu.atoms;
  std::sort(x.begin(), x.end());
  for (std::size_t i = 0; i < x.size(); ++i)
    rows.push_back({x[i], static_cast<double>(i + 1) / static_cast<double>(x.size()), rmt::semicircle_cdf(x[i])});
  r.artifacts.push_back(c.out.csv("semicircle-ks.csv", {"x", "ecdf", "semicircle_cdf"}, rows));
  return r;
}

Report tw_edge(const Context& c) {
  c.params.allow({"n", "samples"});
  const int n = c.params.get<int>("n", 100);
  const auto samples = c.params.get<std::size_t>("samples", 4000);
  require(n >= 2 && samples >= 2, Errc::config, "tw-edge: need n >= 2 and samples >= 2");
  auto edge = parallel_map<double>(samples, c.workers, [&](std::size_t i) {
    return rmt::edge_rescale(rmt::eigenvalues(rmt::sample_gue(n, substream_seed(c.seed, i))));
  });
  MeanStd ms = mean_std(edge);
  Report r;
  r.add(check_close("mean", ms.mean, kTwMean, 0.1));
  r.add(check_close("variance", ms.variance, kTwVariance, 0.1));
  r.details["std"] = std::sqrt(ms.variance);
  r.details["std_reference"] = std::sqrt(kTwVariance);
  r.details["ks_to_f2"] = ks_distance(edge, [](double s) { return tw::default_tracy_widom().cdf(s); }).d;
  r.details["substreams"] = {0, samples};
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < edge.size(); ++i) rows.push_back({static_cast<double>(i), edge[i]});
  r.artifacts.push_back(c.out.csv("tw-edge.csv", {"substream", "edge_statistic"}, rows));
  return r;
}

Report painleve_moments(const Context& c) {
  c.params.allow({});
  const auto& tw = tw::default_tracy_widom();
  const auto& m = tw.moments();
  Report r;
  r.add(check_close("mean", m.mean, -1.7710868, 1e-4));
  r.add(check_close("variance", m.variance, 0.8131948, 1e-4));
  r.details["std"] = m.std;
  r.details["mass"] = m.mass;
  r.details["painleve_residual"] = tw.solution().max_residual();
  if (c.out.enabled()) {
    std::vector<std::vector<double>> rows;
    const auto& sol = tw.solution();
    for (std::size_t i = 0; i < sol.size(); ++i)
      rows.push_back({sol.s[i], sol.q[i], tw::f2_cdf(sol, sol.s[i]), tw::f2_pdf(sol, sol.s[i])});
    r.artifacts.push_back(c.out.csv("painleve-moments.csv", {"s", "q", "F2", "pdf"}, rows));
  }
  return r;
}

Report exact_asep(const Context& c) {
  c.params.allow({"cases_per_n", "margin"});
  const int cases = c.params.get<int>("cases_per_n", 20);
  const long margin = c.params.get<long>("margin", 14);
  require(cases >= 1 && margin >= 4, Errc::config, "exact-asep: need cases_per_n >= 1, margin >= 4");
  Rng rng = make_rng(c.seed);
  const double ps[] = {0.0, 0.25, 0.5};
  double worst = 0.0, worst_norm = 0.0;
  std::vector<std::vector<double>> rows;
  for (int n = 1; n <= 3; ++n) {
    for (int k = 0; k < cases; ++k) {
      const double p = ps[static_cast<std::size_t>(uniform01(rng) * 3.0) % 3];
      const double t = 0.1 + 1.9 * uniform01(rng);
      exact::State y, x;
      while (true) {
        y.clear();
        x.clear();
        long pos = -2 + static_cast<long>(uniform01(rng) * 3.0);
        for (int i = 0; i < n; ++i) {
          y.push_back(pos);
          pos += 1 + static_cast<long>(uniform01(rng) * 3.0);
        }
        for (int i = 0; i < n; ++i) x.push_back(y[static_cast<std::size_t>(i)] + static_cast<long>(uniform01(rng) * 5.0) - 2);
        if (std::is_sorted(x.begin(), x.end()) && std::adjacent_find(x.begin(), x.end()) == x.end()) break;
      }
      const auto rates = asep::Rates::from_left(p);
      const long lo = std::min(y.front(), x.front()) - margin;
      const long hi = std::max(y.back(), x.back()) + margin + 1;
      exact::GeneratorMatrix g = exact::window_generator(n, lo, hi, rates);
      Eigen::VectorXd law = exact::master_evolve(g, exact::delta_distribution(g, y), t);
      const double oracle = law[static_cast<Eigen::Index>(g.find(x))];
      const double norm = law.sum();
      const auto contour = exact::transition_probability(y, x, t, rates);
      const double diff = std::abs(contour.value - oracle);
      worst = std::max(worst, diff);
      worst_norm = std::max(worst_norm, std::abs(norm - 1.0));
      std::vector<double> row{static_cast<double>(n), p, t};
      for (int i = 0; i < 3; ++i) row.push_back(i < n ? static_cast<double>(y[static_cast<std::size_t>(i)]) : NAN);
      for (int i = 0; i < 3; ++i) row.push_back(i < n ? static_cast<double>(x[static_cast<std::size_t>(i)]) : NAN);
      row.insert(row.end(), {contour.value, oracle, diff, norm, contour.radius, static_cast<double>(contour.nodes)});
      rows.push_back(row);
    }
  }
  Report r;
  r.add(check_below("max_abs_difference", worst, 1e-8));
  r.add(check_below("window_normalization_defect", worst_norm, 1e-6));
  r.details["cases"] = rows.size();
  r.artifacts.push_back(c.out.csv("exact-asep.csv",
                                  {"N", "p", "t", "y1", "y2", "y3", "x1", "x2", "x3", "contour", "uniformization",
                                   "abs_diff", "window_mass", "radius", "nodes"},
                                  rows));
  return r;
}

Report bethe_spectrum(const Context& c) {
  c.params.allow({});
  double worst_res = 0.0, worst_mismatch = 0.0;
  std::vector<std::vector<double>> rows;
  json coverage = json::array();
  for (long L : {4L, 5L, 6L}) {
    for (double p : {0.3, 0.5}) {
      auto spec = exact::bethe_spectrum(2, L, asep::Rates::from_left(p));
      worst_mismatch = std::max(worst_mismatch, spec.max_eigenvalue_mismatch);
      for (const auto& pair : spec.pairs) {
        worst_res = std::max(worst_res, pair.generator_residual);
        rows.push_back({static_cast<double>(L), p, pair.energy.real(), pair.energy.imag(), pair.generator_residual,
                        pair.periodic_residual});
      }
      coverage.push_back({{"L", L}, {"p", p}, {"coverage", spec.coverage}, {"accepted", spec.accepted.size()},
                          {"failed", spec.failed}, {"duplicates", spec.duplicates}});
    }
  }
  Report r;
  r.add(check_below("max_generator_residual", worst_res, 1e-8));
  r.add(check_below("max_eigenvalue_mismatch", worst_mismatch, 1e-9));
  r.details["coverage"] = coverage;
  r.artifacts.push_back(c.out.csv("bethe-spectrum.csv",
                                  {"L", "p", "energy_re", "energy_im", "generator_residual", "periodic_residual"}, rows));
  return r;
}

Report stationarity(const Context& c) {
  c.params.allow({});
  double worst = 0.0;
  std::vector<std::vector<double>> rows;
  for (auto [n, L] : {std::pair{2, 5L}, std::pair{3, 7L}}) {
    for (double p : {0.0, 0.3, 0.5, 1.0}) {
      auto g = exact::generator(n, L, asep::Rates::from_left(p));
      Eigen::VectorXd pi = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(g.size()), 1.0 / static_cast<double>(g.size()));
      Eigen::VectorXd flux = g.A.transpose() * pi;
      const double v = flux.cwiseAbs().maxCoeff();
      worst = std::max(worst, v);
      rows.push_back({static_cast<double>(n), static_cast<double>(L), p, v});
    }
  }
  Report r;
  r.add(check_below("max_abs_flux", worst, 1e-12));
  r.artifacts.push_back(c.out.csv("stationarity.csv", {"N", "L", "p", "max_abs_flux"}, rows));
  return r;
}

Report limit_shape(const Context& c) {
  c.params.allow({"t", "seeds", "max_slope"});
  const double t = c.params.get<double>("t", 200.0);
  const auto seeds = c.params.get<std::size_t>("seeds", 500);
  const double slope = c.params.get<double>("max_slope", 0.8);
  require(t > 0 && seeds >= 1 && slope > 0 && slope < 1, Errc::config, "limit-shape: bad t/seeds/max_slope");
  const auto rates = asep::Rates::tasep();
  const auto window = asep::step_window(t, rates);
  const auto init = asep::build_initial(window, asep::Step{});
  const long xmax = static_cast<long>(std::floor(slope * t));
  auto profiles = parallel_map<std::vector<double>>(seeds, c.workers, [&](std::size_t i) {
    auto fin = asep::simulate_final(init, rates, t, substream_seed(c.seed, i));
    auto h = asep::height_field(fin.config, fin.anchor, t);
    std::vector<double> v;
    for (long x = -xmax; x <= xmax; ++x) v.push_back(static_cast<double>(h.value(x)));
    return v;
  });
  std::vector<std::vector<double>> rows;
  double worst = 0.0, worst_x = 0.0;
  for (long x = -xmax; x <= xmax; ++x) {
    const auto idx = static_cast<std::size_t>(x + xmax);
    double mean = 0.0;
    for (const auto& prof : profiles) mean += prof[idx];
    mean /= static_cast<double>(seeds);
    const double shape = t / 2.0 + static_cast<double>(x * x) / (2.0 * t);
    const double rel = std::abs(mean - shape) / shape;
    if (rel > worst) {
      worst = rel;
      worst_x = static_cast<double>(x);
    }
    rows.push_back({static_cast<double>(x), mean, shape, rel});
  }
  Report r;
  r.add(check_below("max_relative_error", worst, 0.02));
  r.details["worst_x"] = worst_x;
  r.details["relative_error_at_origin"] = rows[static_cast<std::size_t>(xmax)][3];
  r.details["substreams"] = {0, seeds};
  r.artifacts.push_back(c.out.csv("limit-shape.csv", {"x", "mean_height", "limit_shape", "relative_error"}, rows));
  return r;
}

Report one_point_f2(const Context& c) {
  c.params.allow({"t", "samples"});
  const double t = c.params.get<double>("t", 1000.0);
  const auto samples = c.params.get<std::size_t>("samples", 5000);
  require(t > 0 && samples >= 1, Errc::config, "one-point-f2: bad t/samples");
  auto s = asep::one_point_rescaled(asep::Rates::tasep(), t, samples, c.seed, c.workers);
  // P(statistic >= -s) -> F2(s): compare the law of -statistic with F2.
  std::vector<double> neg_raw, neg_deq;
  for (double v : s.statistic) neg_raw.push_back(-v);
  for (double v : s.dequantized) neg_deq.push_back(-v);
  const auto& tw = tw::default_tracy_widom();
  auto f2 = [&](double x) { return tw.cdf(x); };
  const double d = ks_distance(neg_deq, f2).d;
  const double d_raw = ks_distance(neg_raw, f2).d;
  MeanStd ms = mean_std(neg_raw);
  Report r;
  r.add(check_below("ks_distance", d, 0.06));
  r.details["ks_distance_lattice_valued"] = d_raw;
  r.details["mean_of_negated_statistic"] = ms.mean;
  r.details["variance_of_negated_statistic"] = ms.variance;
  r.details["substreams"] = {0, samples};
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < samples; ++i)
    rows.push_back({static_cast<double>(i), t, 0.0, static_cast<double>(s.heights[i]), s.statistic[i], s.dequantized[i]});
  r.artifacts.push_back(
      c.out.csv("one-point-f2.csv", {"seed", "t", "x", "value", "statistic", "dequantized"}, rows));
  return r;
}

Report catalan_bridge(const Context& c) {
  c.params.allow({});
  auto [w01, w02] = toprec::base_cases();
  auto coeffs = toprec::expansion_coeffs(w01, 11);
  auto cat = toprec::catalan(6);
  int exact_mismatches = 0;
  double worst_moment = 0.0;
  std::vector<std::vector<double>> rows;
  for (int k = 0; k < 6; ++k) {
    const auto& even = coeffs[static_cast<std::size_t>(2 * k)];
    const auto& odd = coeffs[static_cast<std::size_t>(2 * k + 1)];
    if (even != cat[static_cast<std::size_t>(k)] || odd != 0) ++exact_mismatches;
    const double mom = rmt::semicircle_moment(2 * k);
    worst_moment = std::max(worst_moment, std::abs(mom - cat[static_cast<std::size_t>(k)].get_d()));
    rows.push_back({static_cast<double>(k), even.get_d(), cat[static_cast<std::size_t>(k)].get_d(), mom});
  }
  Report r;
  r.add(check_below("exact_coefficient_mismatches", exact_mismatches, 0.5));
  r.add(check_below("max_moment_error", worst_moment, 1e-8));
  r.artifacts.push_back(c.out.csv("catalan-bridge.csv", {"k", "w01_coefficient", "catalan", "semicircle_moment"}, rows));
  return r;
}

Report genus_wick(const Context& c) {
  c.params.allow({"samples"});
  const auto samples = c.params.get<std::size_t>("samples", 20000);
  require(samples >= 2, Errc::config, "genus-wick: samples must be >= 2");
  std::vector<std::vector<double>> rows;
  double worst_sigma = 0.0;
  std::uint64_t stream = 0;
  for (int n : {2, 4, 8}) {
    for (int j = 0; j <= 4; ++j) {
      auto est = rmt::trace_moment(n, j, samples, substream_seed(c.seed, stream++), c.workers);
      const double exact = rmt::exact_trace_moment(n, j);
      const double dev = std::abs(est.mean - exact);
      const double z = est.stderr_ > 0 ? dev / est.stderr_ : (dev == 0 ? 0.0 : HUGE_VAL);
      worst_sigma = std::max(worst_sigma, z);
      rows.push_back({static_cast<double>(n), static_cast<double>(j), est.mean, est.stderr_, exact, z});
    }
  }
  // Sum_g n^{1-2g} c_{2j}(W_{g,1}) against n^{-j} E[Tr M^{2j}], exactly.
  toprec::Recursion rec;
  std::vector<std::vector<toprec::Rational>> coeff(3);
  coeff[0] = toprec::expansion_coeffs(toprec::base_cases().first, 8);
  coeff[1] = toprec::expansion_coeffs(rec.get(1, 1), 8);
  coeff[2] = toprec::expansion_coeffs(rec.get(2, 1), 8);
  int mismatches = 0;
  json identity = json::array();
  for (int j = 0; j <= 4; ++j) {
    auto hz = rmt::harer_zagier(j);
    for (int n = 1; n <= 6; ++n) {
      toprec::Rational lhs = 0;
      for (int g = 0; g <= 2; ++g) {
        toprec::Rational w = 1;
        for (int e = 0; e < 2 * g - 1; ++e) w /= n;
        if (g == 0) w = n;
        lhs += w * coeff[static_cast<std::size_t>(g)][static_cast<std::size_t>(2 * j)];
      }
      toprec::Rational rhs = 0;
      for (auto [power, value] : hz) {
        toprec::Rational term = static_cast<long>(value);
        for (int e = 0; e < power; ++e) term *= n;
        rhs += term;
      }
      for (int e = 0; e < j; ++e) rhs /= n;
      if (lhs != rhs) ++mismatches;
      identity.push_back({{"j", j}, {"n", n}, {"genus_sum", lhs.get_str()}, {"wick", rhs.get_str()}});
    }
  }
  Report r;
  r.add(check_below("max_deviation_in_stderr", worst_sigma, 3.0 + 1e-12));
  r.add(check_below("polynomial_identity_mismatches", mismatches, 0.5));
  r.details["identity"] = identity;
  r.artifacts.push_back(c.out.csv("genus-wick.csv", {"n", "j", "mc_mean", "mc_stderr", "exact", "deviation_sigma"}, rows));
  return r;
}

Report coulomb_ks(const Context& c) {
  c.params.allow({"n", "sweeps", "matrices", "sigma"});
  const int n = c.params.get<int>("n", 20);
  const auto sweeps = c.params.get<std::size_t>("sweeps", 40000);
  const auto matrices = c.params.get<std::size_t>("matrices", 4000);
  const double sigma = c.params.get<double>("sigma", 1.0);
  require(n >= 2 && sweeps >= 10 && matrices >= 1, Errc::config, "coulomb-ks: bad n/sweeps/matrices");
  auto chain = rmt::metropolis_sample(n, sweeps * static_cast<std::size_t>(n), sigma, substream_seed(c.seed, 0));
  std::vector<double> mcmc;
  for (const auto& st : chain.states) mcmc.insert(mcmc.end(), st.begin(), st.end());
  auto spectra = parallel_map<std::vector<double>>(matrices, c.workers, [&](std::size_t i) {
    return rmt::eigenvalues(rmt::sample_gue(n, substream_seed(c.seed, i + 1))).eigenvalues;
  });
  std::vector<double> direct;
  for (const auto& s : spectra) direct.insert(direct.end(), s.begin(), s.end());
  const double d = ks_two_sample(mcmc, direct);
  Report r;
  r.add(check_below("two_sample_ks", d, 0.05));
  r.details["acceptance"] = chain.acceptance;
  r.details["sigma"] = chain.sigma;
  r.details["recorded_states"] = chain.states.size();
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < chain.states.size(); i += std::max<std::size_t>(1, chain.states.size() / 2000)) {
    const auto& st = chain.states[i];
    double sum2 = 0.0;
    for (double v : st) sum2 += v * v;
    rows.push_back({static_cast<double>(i), *std::max_element(st.begin(), st.end()), sum2 / n});
  }
  r.artifacts.push_back(c.out.csv("coulomb-ks.csv", {"state", "max_eigenvalue", "mean_square"}, rows));
  return r;
}

using Runner = std::function<Report(const Context&)>;

const std::vector<std::pair<std::string, Runner>>& registry() {
  static const std::vector<std::pair<std::string, Runner>> r = {
      {"semicircle-ks", semicircle_ks}, {"tw-edge", tw_edge},           {"painleve-moments", painleve_moments},
      {"exact-asep", exact_asep},       {"bethe-spectrum", bethe_spectrum}, {"stationarity", stationarity},
      {"limit-shape", limit_shape},     {"one-point-f2", one_point_f2}, {"catalan-bridge", catalan_bridge},
      {"genus-wick", genus_wick},       {"coulomb-ks", coulomb_ks},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& [id, fn] : registry()) v.push_back(id);
    return v;
  }();
  return ids;
}

ExperimentConfig parse_experiment(const json& j) {
  Params p(j, "experiment config");
  p.allow({"experiment", "params", "seed", "workers", "out"});
  ExperimentConfig cfg;
  cfg.id = p.need<std::string>("experiment");
  if (p.has("params")) {
    require(j.at("params").is_object(), Errc::config, "experiment config: 'params' must be an object");
    cfg.params = j.at("params");
  }
  cfg.seed = p.get<std::uint64_t>("seed", cfg.seed);
  cfg.workers = p.get<unsigned>("workers", 1);
  cfg.out_dir = p.get<std::string>("out", "");
  require(cfg.workers >= 1, Errc::config, "experiment config: workers must be >= 1");
  return cfg;
}

Report run_experiment(const ExperimentConfig& cfg) {
  for (const auto& [id, fn] : registry()) {
    if (id != cfg.id) continue;
    const auto start = std::chrono::steady_clock::now();
    Context ctx{Params(cfg.params, cfg.id), cfg.seed, cfg.workers, Output(cfg.out_dir)};
    Report r = fn(ctx);
    r.id = cfg.id;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.artifacts.erase(std::remove(r.artifacts.begin(), r.artifacts.end(), std::string()), r.artifacts.end());
    if (ctx.out.enabled()) {
      json m = r.to_json();
      m["params"] = cfg.params;
      m["seed_root"] = cfg.seed;
      m["workers"] = cfg.workers;
      r.artifacts.push_back(ctx.out.manifest(cfg.id, m));
    }
    return r;
  }
  fail(Errc::config, "unknown experiment '" + cfg.id + "'");
}

}  // namespace kpz::harness
