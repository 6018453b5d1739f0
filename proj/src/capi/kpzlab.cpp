#include "kpzlab/kpzlab.h"

#include <cstring>
#include <new>
#include <string>

#include "kpzlab/asep.hpp"
#include "kpzlab/error.hpp"
#include "kpzlab/exact.hpp"
#include "kpzlab/harness.hpp"
#include "kpzlab/rmt.hpp"
#include "kpzlab/toprec.hpp"
#include "kpzlab/tracy_widom.hpp"

struct kpz_tw {
  kpz::tw::TracyWidom table;
};

struct kpz_trajectory {
  kpz::asep::TrajectorySample sample;
};

struct kpz_recursion {
  kpz::toprec::Recursion rec;
};

namespace {

thread_local std::string last_error;

template <class Fn>
kpz_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return KPZ_OK;
  } catch (const kpz::Error& e) {
    last_error = e.what();
    return static_cast<kpz_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return KPZ_E_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return KPZ_E_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  kpz::require(p != nullptr, kpz::Errc::invalid_argument, std::string(what) + " is null");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* kpz_version(void) { return kpz::harness::git_describe(); }

const char* kpz_last_error(void) { return last_error.c_str(); }

const char* kpz_status_name(kpz_status status) {
  if (status == KPZ_OK) return "ok";
  if (status == KPZ_E_INTERNAL) return "internal";
  return kpz::errc_name(static_cast<kpz::Errc>(status));
}

void kpz_string_free(char* s) { std::free(s); }

kpz_status kpz_run_command(const char* name, const char* params_json, char** report_json) {
  return guarded([&] {
    need(name, "name");
    need(report_json, "report_json");
    kpz::harness::json params = kpz::harness::json::object();
    if (params_json && *params_json) {
      try {
        params = kpz::harness::json::parse(params_json);
      } catch (const kpz::harness::json::exception& e) {
        kpz::fail(kpz::Errc::config, std::string("malformed JSON: ") + e.what());
      }
    }
    auto report = kpz::harness::run_command(name, params);
    *report_json = dup(report.to_json().dump());
  });
}

kpz_status kpz_tw_create(double s_min, double s_max, double step, kpz_tw** out) {
  return guarded([&] {
    need(out, "out");
    kpz::tw::PainleveOptions opt;
    opt.s_min = s_min;
    opt.s_max = s_max;
    opt.step = step;
    *out = new kpz_tw{kpz::tw::TracyWidom(opt)};
  });
}

kpz_status kpz_tw_cdf(const kpz_tw* tw, double s, double* out) {
  return guarded([&] {
    need(tw, "tw");
    need(out, "out");
    *out = tw->table.cdf(s);
  });
}

kpz_status kpz_tw_pdf(const kpz_tw* tw, double s, double* out) {
  return guarded([&] {
    need(tw, "tw");
    need(out, "out");
    *out = tw->table.pdf(s);
  });
}

kpz_status kpz_tw_moments(const kpz_tw* tw, double* mean, double* variance) {
  return guarded([&] {
    need(tw, "tw");
    need(mean, "mean");
    need(variance, "variance");
    *mean = tw->table.moments().mean;
    *variance = tw->table.moments().variance;
  });
}

void kpz_tw_destroy(kpz_tw* tw) { delete tw; }

kpz_status kpz_simulate_step(double p, double t_end, uint64_t seed, kpz_trajectory** out) {
  return guarded([&] {
    need(out, "out");
    const auto rates = kpz::asep::Rates::from_left(p);
    const auto init = kpz::asep::build_initial(kpz::asep::step_window(t_end, rates), kpz::asep::Step{});
    *out = new kpz_trajectory{kpz::asep::simulate(init, rates, t_end, seed)};
  });
}

kpz_status kpz_simulate_ring(const long* sites, size_t n, long length, double p, double t_end, uint64_t seed,
                             kpz_trajectory** out) {
  return guarded([&] {
    need(out, "out");
    need(sites, "sites");
    const auto init = kpz::asep::build_initial(kpz::asep::Ring{length},
                                               kpz::asep::Explicit{std::vector<long>(sites, sites + n)});
    *out = new kpz_trajectory{kpz::asep::simulate(init, kpz::asep::Rates::from_left(p), t_end, seed)};
  });
}

kpz_status kpz_trajectory_events(const kpz_trajectory* traj, size_t* count) {
  return guarded([&] {
    need(traj, "traj");
    need(count, "count");
    *count = traj->sample.events.size();
  });
}

kpz_status kpz_trajectory_height(const kpz_trajectory* traj, double t, long x, long* out) {
  return guarded([&] {
    need(traj, "traj");
    need(out, "out");
    kpz::require(!traj->sample.initial.on_ring(), kpz::Errc::invalid_argument, "height needs a window trajectory");
    auto h = kpz::asep::height(traj->sample, t);
    kpz::require(h.contains(x), kpz::Errc::out_of_range, "x outside the height window");
    *out = h.value(x);
  });
}

void kpz_trajectory_destroy(kpz_trajectory* traj) { delete traj; }

kpz_status kpz_transition_probability(const long* y, const long* x, size_t n, double t, double p, double* out) {
  return guarded([&] {
    need(y, "y");
    need(x, "x");
    need(out, "out");
    kpz::exact::State ys(y, y + n), xs(x, x + n);
    *out = kpz::exact::transition_probability(ys, xs, t, kpz::asep::Rates::from_left(p)).value;
  });
}

kpz_status kpz_gue_eigenvalues(int n, uint64_t seed, double* out) {
  return guarded([&] {
    need(out, "out");
    kpz::require(n >= 1, kpz::Errc::invalid_argument, "n must be positive");
    auto s = kpz::rmt::eigenvalues(kpz::rmt::sample_gue(n, seed));
    std::copy(s.eigenvalues.begin(), s.eigenvalues.end(), out);
  });
}

kpz_status kpz_recursion_create(kpz_recursion** out) {
  return guarded([&] {
    need(out, "out");
    *out = new kpz_recursion{kpz::toprec::Recursion()};
  });
}

kpz_status kpz_recursion_json(kpz_recursion* rec, int g, int k, char** out) {
  return guarded([&] {
    need(rec, "rec");
    need(out, "out");
    *out = dup(kpz::toprec::to_json(rec->rec.get(g, k)));
  });
}

kpz_status kpz_recursion_expand(kpz_recursion* rec, int g, int order, double* out) {
  return guarded([&] {
    need(rec, "rec");
    need(out, "out");
    auto c = kpz::toprec::expansion_coeffs(rec->rec.get(g, 1), order);
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i].get_d();
  });
}

void kpz_recursion_destroy(kpz_recursion* rec) { delete rec; }

}  // extern "C"
