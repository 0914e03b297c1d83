// acx — run a verification suite and print its JSON report.
//
//   acx [run] <suite> [--seed S] [--tol T] [--h H] [--samples N] [--out PATH] [--quiet]
//                     [--n N --k K] [--expr E --bundle DECL... --dim D --expect-zero J]
//
// Exit status: 0 all cases pass, 1 a case failed or the computation broke,
// 2 usage error.

#include "acx/suites.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

std::string suite_list() {
  std::string s;
  for (const auto& [name, fn] : acx::suites::registry()) s += (s.empty() ? "" : ", ") + name;
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (!args.empty() && args.front() == "run") args.erase(args.begin());

  CLI::App app{"Verification suites for almost complex flag geometry.\nSuites: " + suite_list(), "acx"};
  app.set_help_flag("--help", "print this help");  // -h would clash with --h
  acx::SuiteOptions opt;
  std::string suite, out;
  bool quiet = false;
  double tol = 0.0;
  int samples = 0, expect_zero = 0;

  app.add_option("suite", suite, "suite to run")->required();
  app.add_option("--seed", opt.seed, "random seed")->envname("ACX_SEED");
  auto* tol_opt = app.add_option("--tol", tol, "replace every case tolerance");
  app.add_option("--h", opt.h, "finite-difference step")->check(CLI::PositiveNumber);
  auto* samples_opt = app.add_option("--samples", samples, "sample count")->check(CLI::PositiveNumber);
  app.add_option("--out", out, "write the report here instead of stdout");
  app.add_flag("--quiet", quiet, "do not print the report");
  app.add_option("--n", opt.n, "n for dims");
  app.add_option("--k", opt.k, "k for dims");
  app.add_option("--expr", opt.expr, "bundle expression for chern");
  app.add_option("--bundle", opt.bundles, "bundle declaration NAME:rank=R[,c=[...]]");
  app.add_option("--dim", opt.dim, "truncation degree for chern")->check(CLI::NonNegativeNumber);
  auto* ez_opt = app.add_option("--expect-zero", expect_zero, "require c_J of the result to vanish");

  std::reverse(args.begin(), args.end());  // CLI11 consumes a reversed vector
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (!acx::suites::find_suite(suite)) {
    std::cerr << "acx: unknown suite '" << suite << "'\n" << app.help();
    return 2;
  }
  if (*tol_opt) opt.tol = tol;
  if (*samples_opt) opt.samples = samples;
  if (*ez_opt) opt.expect_zero = expect_zero;
  if (suite == "chern" && opt.expr.empty() && (!opt.bundles.empty() || opt.expect_zero)) {
    std::cerr << "acx: --bundle/--expect-zero need --expr\n";
    return 2;
  }

  acx::Report report;
  try {
    report = acx::run_suite(suite, opt);
  } catch (const acx::ChernError& e) {
    std::cerr << "acx: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "acx: " << suite << " aborted: " << e.what() << '\n';
    return 1;
  }

  const std::string text = report.to_json().dump(2) + "\n";
  if (!out.empty()) {
    std::ofstream f(out);
    if (!f) {
      std::cerr << "acx: cannot write " << out << '\n';
      return 1;
    }
    f << text;
  } else if (!quiet) {
    std::cout << text;
  }
  for (const auto& c : report.cases) {
    if (!c.pass) {
      std::cerr << "FAIL " << report.suite << '/' << c.id << ": residual " << c.residual << " > tolerance "
                << c.tolerance << " (observed " << c.observed.dump() << ")\n";
    }
  }
  return report.ok() ? 0 : 1;
}
