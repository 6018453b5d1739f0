// Runs the eleven acceptance experiments with their default parameters and
// prints one PASS/FAIL line per criterion. Optional arguments select ids;
// KPZ_ACCEPTANCE_OUT names an artifact directory.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "kpzlab/error.hpp"
#include "kpzlab/harness.hpp"

using namespace kpz::harness;

int main(int argc, char** argv) {
  std::vector<std::string> wanted(argv + 1, argv + argc);
  const char* out = std::getenv("KPZ_ACCEPTANCE_OUT");
  const auto& ids = experiment_ids();
  int failures = 0;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), ids[i]) == wanted.end()) continue;
    ExperimentConfig cfg;
    cfg.id = ids[i];
    if (out) cfg.out_dir = out;
    std::string line;
    bool pass = false;
    try {
      Report r = run_experiment(cfg);
      pass = r.pass;
      for (const auto& c : r.checks) {
        char buf[256];
        std::snprintf(buf, sizeof buf, " %s=%.6g(tol %.3g)", c.name.c_str(), c.value, c.tolerance);
        line += buf;
      }
      char tbuf[64];
      std::snprintf(tbuf, sizeof tbuf, " [%.1fs]", r.seconds);
      line += tbuf;
    } catch (const kpz::Error& e) {
      line = std::string(" error ") + kpz::errc_name(e.code()) + ": " + e.what();
    }
    if (!pass) ++failures;
    std::printf("%s %zu %s%s\n", pass ? "PASS" : "FAIL", i + 1, ids[i].c_str(), line.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
