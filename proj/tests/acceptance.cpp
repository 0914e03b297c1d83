// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.
// A criterion passes when every case in it passes and it finishes within its
// time budget. Exit status is the number of failing criteria.

#include "acx/suites.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

namespace {

using namespace acx;

struct Criterion {
  int id;
  std::string title;
  double budget_ms;
  std::function<void(Report&, const SuiteOptions&)> run;
};

std::vector<Criterion> criteria() {
  namespace s = suites;
  return {
      {1, "dimension N(3,4) = 46", 1000.0,
       [](Report& r, const SuiteOptions& o) {
         SuiteOptions q = o;
         q.n = 3;
         q.k = 4;
         s::dims_cases(r, q);
       }},
      {2, "torsion closed form vs bracket oracle", 1000.0,
       [](Report& r, const SuiteOptions& o) { s::torsion_frame_cases(r, o); }},
      {3, "torsion transport vs finite-difference bracket", 10000.0,
       [](Report& r, const SuiteOptions& o) { s::torsion_transport_cases(r, o); }},
      {4, "stabilizer criterion and transitivity witness", 5000.0,
       [](Report& r, const SuiteOptions& o) { s::group_cases(r, o); }},
      {5, "theta linearity, rank and kernel", 10000.0, [](Report& r, const SuiteOptions& o) { s::theta_cases(r, o); }},
      {6, "affine fiber free and transitive", 2000.0, [](Report& r, const SuiteOptions& o) { s::fiber_cases(r, o); }},
      {7, "S6 embedding: real point, transversality, dpi identity", 30000.0,
       [](Report& r, const SuiteOptions& o) { s::embed_cases(r, o); }},
      {8, "Nijenhuis tensor equals 4 theta on the lift", 60000.0,
       [](Report& r, const SuiteOptions& o) { s::four_theta_cases(r, o); }},
      {9, "Chern class identities and c3 vanishing on S6", 1000.0,
       [](Report& r, const SuiteOptions& o) { s::chern_builtin_cases(r, o); }},
      {10, "chart encode/decode round trip", 2000.0, [](Report& r, const SuiteOptions& o) { s::chart_cases(r, o); }},
  };
}

}  // namespace

int main() {
  SuiteOptions opt;
  opt.seed = 7;
  opt.h = 1e-5;
  int failed = 0;
  for (const Criterion& c : criteria()) {
    Report r;
    r.suite = "acceptance-" + std::to_string(c.id);
    std::string why;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(r, opt);
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (why.empty() && !r.ok()) {
      for (const auto& k : r.cases)
        if (!k.pass) {
          why = k.id + " residual " + std::to_string(k.residual) + " > " + std::to_string(k.tolerance);
          break;
        }
    }
    if (why.empty() && ms > c.budget_ms) why = "over time budget";
    const bool pass = why.empty();
    failed += !pass;
    std::printf("%s %2d %-55s cases=%zu max_residual=%.2e time=%.0fms/%.0fms%s%s\n", pass ? "PASS" : "FAIL", c.id,
                c.title.c_str(), r.cases.size(), r.max_residual(), ms, c.budget_ms, pass ? "" : "  ", why.c_str());
  }
  return failed;
}
