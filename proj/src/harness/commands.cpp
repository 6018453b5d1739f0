#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

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

struct Globals {
  std::uint64_t seed = 20240601;
  unsigned workers = 1;
  std::string out;
};

Globals globals(const Params& p) {
  Globals g;
  g.seed = p.get<std::uint64_t>("seed", g.seed);
  g.workers = p.get<unsigned>("workers", 1);
  g.out = p.get<std::string>("out", "");
  require(g.workers >= 1, Errc::config, "workers must be >= 1");
  return g;
}

template <class T>
std::vector<T> list(const Params& p, const char* key) {
  const json& v = p.raw().at(key);
  require(v.is_array(), Errc::config, std::string("'") + key + "' must be an array");
  std::vector<T> out;
  for (const auto& e : v) {
    require(e.is_number(), Errc::config, std::string("'") + key + "' must hold numbers");
    out.push_back(e.get<T>());
  }
  return out;
}

json config_json(const asep::ParticleConfig& cfg) {
  json j;
  j["sites"] = cfg.sites;
  if (cfg.on_ring()) {
    j["lattice"] = {{"kind", "ring"}, {"L", std::get<asep::Ring>(cfg.lattice).length}};
  } else {
    const auto& w = std::get<asep::InfiniteWindow>(cfg.lattice);
    j["lattice"] = {{"kind", "window"}, {"lo", w.lo}, {"hi", w.hi}};
  }
  j["left_reservoir"] = cfg.left_reservoir;
  return j;
}

Report simulate_asep(const Params& p, const Globals& g) {
  p.allow({"seed", "workers", "out", "lattice", "initial", "p", "t", "trajectories", "L", "lo", "hi", "density", "sites",
           "x_halfwidth", "one_point"});
  const double left = p.get<double>("p", 0.0);
  const double t = p.get<double>("t", 10.0);
  const auto count = p.get<std::size_t>("trajectories", 1);
  const auto lattice_kind = p.get<std::string>("lattice", "window");
  const auto initial_kind = p.get<std::string>("initial", "step");
  const long half = p.get<long>("x_halfwidth", 20);
  require(t >= 0 && count >= 1 && half >= 0, Errc::config, "simulate-asep: need t >= 0, trajectories >= 1");
  const auto rates = asep::Rates::from_left(left);

  asep::LatticeKind lattice;
  if (lattice_kind == "ring") {
    lattice = asep::Ring{p.need<long>("L")};
  } else if (lattice_kind == "window") {
    if (p.has("lo") || p.has("hi")) lattice = asep::InfiniteWindow{p.need<long>("lo"), p.need<long>("hi")};
    else lattice = asep::step_window(t, rates);
  } else {
    fail(Errc::config, "simulate-asep: lattice must be 'ring' or 'window'");
  }
  asep::InitialSpec spec;
  if (initial_kind == "step") spec = asep::Step{};
  else if (initial_kind == "bernoulli") spec = asep::Bernoulli{p.need<double>("density"), substream_seed(g.seed, 1u << 30)};
  else if (initial_kind == "explicit") spec = asep::Explicit{list<long>(p, "sites")};
  else fail(Errc::config, "simulate-asep: initial must be 'step', 'bernoulli' or 'explicit'");
  const auto init = asep::build_initial(lattice, spec);

  Report r;
  Output out(g.out);
  if (p.get<bool>("one_point", false)) {
    require(initial_kind == "step" && lattice_kind == "window" && !p.has("lo"), Errc::config,
            "simulate-asep: one_point uses the default step window");
    auto s = asep::one_point_rescaled(rates, t, count, g.seed, g.workers);
    std::vector<std::vector<double>> rows;
    std::vector<double> neg;
    for (std::size_t i = 0; i < count; ++i) {
      rows.push_back({static_cast<double>(i), t, 0.0, static_cast<double>(s.heights[i]), s.statistic[i], s.dequantized[i]});
      neg.push_back(-s.dequantized[i]);
    }
    const auto& tw = tw::default_tracy_widom();
    r.details["ks_to_f2"] = ks_distance(neg, [&](double x) { return tw.cdf(x); }).d;
    r.details["dkw_radius_99"] = dkw_radius(count, 0.01);
    r.artifacts.push_back(out.csv("one-point.csv", {"seed", "t", "x", "value", "statistic", "dequantized"}, rows));
  } else {
    auto fields = parallel_map<std::vector<std::vector<double>>>(count, g.workers, [&](std::size_t i) {
      auto fin = asep::simulate_final(init, rates, t, substream_seed(g.seed, i));
      std::vector<std::vector<double>> rows;
      if (init.on_ring()) {
        auto occ = asep::occupation(fin.config);
        for (std::size_t k = 0; k < occ.eta.size(); ++k)
          rows.push_back({static_cast<double>(i), t, static_cast<double>(occ.first + static_cast<long>(k)),
                          static_cast<double>(occ.eta[k])});
      } else {
        auto h = asep::height_field(fin.config, fin.anchor, t);
        for (long x = std::max(h.x_lo, -half); x <= std::min(h.x_hi, half); ++x)
          rows.push_back({static_cast<double>(i), t, static_cast<double>(x), static_cast<double>(h.value(x))});
      }
      return rows;
    });
    std::vector<std::vector<double>> rows;
    for (auto& f : fields) rows.insert(rows.end(), f.begin(), f.end());
    r.details["observable"] = init.on_ring() ? "occupation" : "height";
    r.artifacts.push_back(out.csv("trajectories.csv", {"seed", "t", "x", "value"}, rows));
  }
  r.details["trajectories"] = count;
  r.details["substreams"] = {0, count};
  json manifest = {{"rates", {{"p", rates.p}, {"q", rates.q}}}, {"initial", initial_kind}, {"config", config_json(init)},
                   {"t", t}, {"seed_root", g.seed}, {"workers", g.workers}, {"details", r.details}};
  r.artifacts.push_back(out.manifest("simulate-asep", manifest));
  return r;
}

Report exact_prob(const Params& p, const Globals& g) {
  p.allow({"seed", "workers", "out", "y", "x", "t", "p", "radius", "nodes", "oracle", "margin"});
  const auto y = list<long>(p, "y");
  const auto x = list<long>(p, "x");
  const double t = p.need<double>("t");
  const auto rates = asep::Rates::from_left(p.get<double>("p", 0.5));
  exact::ContourSpec spec;
  spec.radius = p.get<double>("radius", spec.radius);
  spec.nodes = p.get<int>("nodes", spec.nodes);
  auto res = exact::transition_probability(y, x, t, rates, spec);
  json rec = {{"N", y.size()}, {"p", rates.p}, {"t", t}, {"y", y}, {"x", x}, {"value", res.value},
              {"imag", res.imag},  {"M", res.nodes}, {"r", res.radius}, {"residuals", {{"doubling_change", res.doubling_change}}}};
  Report r;
  if (p.get<bool>("oracle", false)) {
    const long margin = p.get<long>("margin", 14);
    const long lo = std::min(y.front(), x.front()) - margin;
    const long hi = std::max(y.back(), x.back()) + margin + 1;
    const double oracle = exact::uniformization_probability(y, x, t, rates, lo, hi);
    rec["window"] = {lo, hi};
    rec["uniformization"] = oracle;
    r.add(check_close("contour_vs_uniformization", res.value, oracle, 1e-8));
  }
  r.details = rec;
  Output out(g.out);
  r.artifacts.push_back(out.manifest("exact-prob", rec));
  return r;
}

json roots_json(const exact::BetheRoots& b) {
  json z = json::array();
  for (const auto& v : b.z) z.push_back({v.real(), v.imag()});
  return {{"N", b.z.size()}, {"L", b.length}, {"p", b.rates.p}, {"quantum_numbers", b.quantum_numbers}, {"z", z},
          {"energy", {b.energy.real(), b.energy.imag()}}, {"residuals", {{"bethe", b.residual}}}};
}

Report bethe(const Params& p, const Globals& g) {
  p.allow({"seed", "workers", "out", "N", "L", "p", "quantum_numbers"});
  const int n = p.need<int>("N");
  const long L = p.need<long>("L");
  const auto rates = asep::Rates::from_left(p.get<double>("p", 0.5));
  Report r;
  json records = json::array();
  if (p.has("quantum_numbers")) {
    auto roots = exact::bethe_solve(n, L, rates, list<int>(p, "quantum_numbers"));
    auto pair = exact::bethe_eigenpair(roots);
    json rec = roots_json(roots);
    rec["residuals"]["generator"] = pair.generator_residual;
    rec["residuals"]["periodic"] = pair.periodic_residual;
    records.push_back(rec);
    r.add(check_below("generator_residual", pair.generator_residual, 1e-8));
  } else {
    auto spec = exact::bethe_spectrum(n, L, rates);
    double worst = 0.0;
    for (std::size_t i = 0; i < spec.accepted.size(); ++i) {
      json rec = roots_json(spec.accepted[i]);
      rec["residuals"]["generator"] = spec.pairs[i].generator_residual;
      rec["residuals"]["periodic"] = spec.pairs[i].periodic_residual;
      records.push_back(rec);
      worst = std::max(worst, spec.pairs[i].generator_residual);
    }
    r.add(check_below("max_generator_residual", worst, 1e-8));
    r.add(check_below("max_eigenvalue_mismatch", spec.max_eigenvalue_mismatch, 1e-9));
    r.details["coverage"] = spec.coverage;
    r.details["attempted"] = spec.attempted;
    r.details["failed"] = spec.failed;
    r.details["duplicates"] = spec.duplicates;
  }
  r.details["roots"] = records;
  Output out(g.out);
  r.artifacts.push_back(out.manifest("bethe", r.details));
  return r;
}

Report gue_spectrum(const Params& p, const Globals& g) {
  p.allow({"seed", "workers", "out", "n", "samples", "bins"});
  const int n = p.get<int>("n", 500);
  const auto samples = p.get<std::size_t>("samples", 1);
  const int bins = p.get<int>("bins", 50);
  require(n >= 2 && samples >= 1 && bins >= 1, Errc::config, "gue-spectrum: need n >= 2, samples >= 1, bins >= 1");
  auto spectra = parallel_map<rmt::SpectralSample>(samples, g.workers, [&](std::size_t i) {
    return rmt::eigenvalues(rmt::sample_gue(n, substream_seed(g.seed, i)));
  });
  std::vector<std::vector<double>> spec_rows, edge_rows, hist_rows;
  std::vector<double> atoms;
  std::vector<long> hist(static_cast<std::size_t>(bins), 0);
  for (std::size_t i = 0; i < samples; ++i) {
    auto mu = rmt::esd(spectra[i]);
    for (std::size_t k = 0; k < spectra[i].eigenvalues.size(); ++k)
      spec_rows.push_back({static_cast<double>(i), static_cast<double>(k), spectra[i].eigenvalues[k]});
    edge_rows.push_back({static_cast<double>(i), rmt::edge_rescale(spectra[i])});
    for (double a : mu.atoms) {
      atoms.push_back(a);
      const int b = static_cast<int>(std::floor((a + 2.5) / 5.0 * bins));
      if (b >= 0 && b < bins) ++hist[static_cast<std::size_t>(b)];
    }
  }
  const double width = 5.0 / bins;
  for (int b = 0; b < bins; ++b) {
    const double mid = -2.5 + (b + 0.5) * width;
    hist_rows.push_back({mid, static_cast<double>(hist[static_cast<std::size_t>(b)]) / (static_cast<double>(atoms.size()) * width),
                         rmt::semicircle(mid)});
  }
  Report r;
  r.add(check_below("ks_distance", ks_distance(atoms, rmt::semicircle_cdf).d, 0.05));
  Output out(g.out);
  r.artifacts.push_back(out.csv("spectrum.csv", {"sample", "index", "eigenvalue"}, spec_rows));
  r.artifacts.push_back(out.csv("esd-histogram.csv", {"x", "density", "semicircle"}, hist_rows));
  r.artifacts.push_back(out.csv("edge.csv", {"sample", "edge_statistic"}, edge_rows));
  r.details["n"] = n;
  r.details["samples"] = samples;
  r.artifacts.push_back(out.manifest("gue-spectrum", {{"n", n}, {"samples", samples}, {"seed_root", g.seed},
                                                      {"tolerances", {{"ks_distance", 0.05}}}}));
  return r;
}

Report coulomb_mcmc(const Params& p, const Globals& g) {
  p.allow({"seed", "workers", "out", "n", "sweeps", "sigma", "burn_in"});
  const int n = p.get<int>("n", 20);
  const auto sweeps = p.get<std::size_t>("sweeps", 10000);
  const double sigma = p.get<double>("sigma", 1.0);
  rmt::MetropolisOptions opt;
  opt.burn_in_fraction = p.get<double>("burn_in", opt.burn_in_fraction);
  require(n >= 1 && sweeps >= 1, Errc::config, "coulomb-mcmc: need n >= 1, sweeps >= 1");
  auto res = rmt::metropolis_sample(n, sweeps * static_cast<std::size_t>(n), sigma, g.seed, opt);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < res.states.size(); ++i) {
    std::vector<double> row{static_cast<double>(i), rmt::coulomb_log_density(res.states[i])};
    row.insert(row.end(), res.states[i].begin(), res.states[i].end());
    rows.push_back(row);
  }
  std::vector<std::string> header{"state", "log_density"};
  for (int k = 0; k < n; ++k) header.push_back("y" + std::to_string(k));
  Report r;
  r.details = {{"acceptance", res.acceptance}, {"sigma", res.sigma}, {"states", res.states.size()},
               {"coincident_rejections", res.coincident_rejections}};
  Output out(g.out);
  r.artifacts.push_back(out.csv("chain.csv", header, rows));
  r.artifacts.push_back(out.manifest("coulomb-mcmc", {{"n", n}, {"sweeps", sweeps}, {"seed", g.seed}, {"details", r.details}}));
  return r;
}

Report trace_moments(const Params& p, const Globals& g) {
  p.allow({"seed", "workers", "out", "n", "j", "samples"});
  std::vector<int> ns = p.has("n") && p.raw().at("n").is_array() ? list<int>(p, "n") : std::vector<int>{p.get<int>("n", 4)};
  std::vector<int> js = p.has("j") ? list<int>(p, "j") : std::vector<int>{0, 1, 2, 3, 4};
  const auto samples = p.get<std::size_t>("samples", 20000);
  std::vector<std::vector<double>> rows;
  double worst = 0.0;
  std::uint64_t stream = 0;
  for (int n : ns) {
    for (int j : js) {
      auto est = rmt::trace_moment(n, j, samples, substream_seed(g.seed, stream++), g.workers);
      const double exact = rmt::exact_trace_moment(n, j);
      const double dev = std::abs(est.mean - exact);
      const double z = est.stderr_ > 0 ? dev / est.stderr_ : (dev == 0 ? 0.0 : HUGE_VAL);
      worst = std::max(worst, z);
      rows.push_back({static_cast<double>(n), static_cast<double>(j), est.mean, est.stderr_, exact, z});
    }
  }
  Report r;
  r.add(check_below("max_deviation_in_stderr", worst, 3.0 + 1e-12));
  Output out(g.out);
  r.artifacts.push_back(out.csv("trace-moments.csv", {"n", "j", "mc_mean", "mc_stderr", "exact", "deviation_sigma"}, rows));
  r.artifacts.push_back(out.manifest("trace-moments", {{"samples", samples}, {"seed_root", g.seed}}));
  return r;
}

Report tw_cdf(const Params& p, const Globals& g) {
  p.allow({"seed", "workers", "out", "s"});
  const auto& tw = tw::default_tracy_widom();
  Report r;
  if (p.has("s")) {
    json values = json::array();
    for (double s : list<double>(p, "s")) values.push_back({{"s", s}, {"F2", tw.cdf(s)}, {"pdf", tw.pdf(s)}});
    r.details["values"] = values;
  }
  const auto& m = tw.moments();
  r.details["mean"] = m.mean;
  r.details["variance"] = m.variance;
  r.details["std"] = m.std;
  r.details["painleve_residual"] = tw.solution().max_residual();
  r.add(check_close("pdf_mass", m.mass, 1.0, 1e-6));
  Output out(g.out);
  if (out.enabled()) {
    std::vector<std::vector<double>> rows;
    const auto& sol = tw.solution();
    for (std::size_t i = 0; i < sol.size(); ++i)
      rows.push_back({sol.s[i], sol.q[i], tw::f2_cdf(sol, sol.s[i]), tw::f2_pdf(sol, sol.s[i])});
    r.artifacts.push_back(out.csv("tw-table.csv", {"s", "q", "F2", "pdf"}, rows));
    r.artifacts.push_back(out.manifest("tw-cdf", r.details));
  }
  return r;
}

Report toprec_cmd(const Params& p, const Globals& g) {
  p.allow({"seed", "workers", "out", "g", "k", "expand_order", "check_residues"});
  const int gg = p.need<int>("g");
  const int k = p.need<int>("k");
  const int order = p.get<int>("expand_order", 8);
  toprec::Recursion rec(p.get<bool>("check_residues", false));
  const auto& w = rec.get(gg, k);
  Report r;
  r.details["w"] = json::parse(toprec::to_json(w));
  Output out(g.out);
  if (!(gg == 0 && k == 2)) {
    std::vector<std::vector<double>> rows;
    json exact = json::array();
    if (w.is_base()) {
      auto c = toprec::expansion_coeffs(w, order);
      for (std::size_t m = 0; m < c.size(); ++m) {
        rows.push_back({static_cast<double>(m), c[m].get_d()});
        exact.push_back({{"m", {m}}, {"c", c[m].get_str()}});
      }
    } else {
      for (const auto& [m, c] : toprec::expansion_all(w, order)) {
        std::vector<double> row(m.begin(), m.end());
        row.push_back(c.get_d());
        rows.push_back(row);
        exact.push_back({{"m", m}, {"c", c.get_str()}});
      }
    }
    std::vector<std::string> header;
    for (int i = 0; i < k; ++i) header.push_back("m" + std::to_string(i + 1));
    header.push_back("coefficient");
    r.details["expansion"] = exact;
    r.artifacts.push_back(out.csv("toprec-expansion.csv", header, rows));
  }
  if (k == 1) {
    std::vector<std::vector<double>> rows;
    for (int i = -9; i <= 9; ++i) {
      if (i == 0) continue;
      const toprec::Rational t(i, 10);
      rows.push_back({t.get_d(), w.evaluate(std::vector<toprec::Rational>{t}).get_d()});
    }
    r.artifacts.push_back(out.csv("toprec-samples.csv", {"t", "value"}, rows));
  }
  if (p.get<bool>("check_residues", false)) {
    double worst = 0.0;
    for (const auto& s : rec.stats()) worst = std::max(worst, s.max_residue_check);
    r.add(check_below("residue_check", worst, 1e-9));
  }
  r.artifacts.push_back(out.manifest("toprec", r.details));
  return r;
}

}  // namespace

Report run_command(const std::string& name, const json& params) {
  const auto start = std::chrono::steady_clock::now();
  Params p(params, name);
  Globals g = globals(p);
  Report r;
  if (name == "simulate-asep") r = simulate_asep(p, g);
  else if (name == "exact-prob") r = exact_prob(p, g);
  else if (name == "bethe") r = bethe(p, g);
  else if (name == "gue-spectrum") r = gue_spectrum(p, g);
  else if (name == "coulomb-mcmc") r = coulomb_mcmc(p, g);
  else if (name == "trace-moments") r = trace_moments(p, g);
  else if (name == "tw-cdf") r = tw_cdf(p, g);
  else if (name == "toprec") r = toprec_cmd(p, g);
  else if (name == "run-experiment") {
    r = run_experiment(parse_experiment(params));
    return r;
  } else {
    fail(Errc::config, "unknown command '" + name + "'");
  }
  r.id = name;
  r.artifacts.erase(std::remove(r.artifacts.begin(), r.artifacts.end(), std::string()), r.artifacts.end());
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace kpz::harness
