#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cdress/suites.hpp"

namespace {

enum Exit { kPass = 0, kFail = 1, kInput = 2, kDegenerate = 3 };

#ifndef CDRESS_SCENARIO_DIR
#define CDRESS_SCENARIO_DIR "scenarios"
#endif

/// A bare name like "minkowski" also resolves against the bundled scenarios.
std::string resolveScenario(const std::string& arg) {
  namespace fs = std::filesystem;
  if (fs::exists(arg)) return arg;
  const fs::path bundled = fs::path(CDRESS_SCENARIO_DIR) / (arg + ".json");
  if (arg.find('/') == std::string::npos && fs::exists(bundled)) return bundled.string();
  return arg;
}

void writeReport(const std::string& path, const std::string& body) {
  if (path == "-") {
    std::cout << body << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw cdress::ParseError(path + ": cannot write report");
  out << body << "\n";
}

struct Common {
  std::string scenario;
  std::string report;
  std::optional<std::uint64_t> seed;
  std::optional<int> points;
  std::optional<double> tol;
  unsigned threads = 0;
  double corruptP = 0.0;

  cdress::RunOptions options() const {
    cdress::RunOptions o;
    o.seed = seed;
    o.points = points;
    o.tolerance = tol;
    o.threads = threads;
    o.corruptP = corruptP;
    return o;
  }
};

void addCommon(CLI::App* cmd, Common& c) {
  cmd->add_option("scenario", c.scenario, "scenario JSON file or bundled scenario name")->required();
  cmd->add_option("--seed", c.seed, "override the scenario sampling seed");
  cmd->add_option("--points", c.points, "override the number of sample points")->check(CLI::PositiveNumber);
  cmd->add_option("--tol", c.tol, "override every tolerance")->check(CLI::NonNegativeNumber);
  cmd->add_option("--report", c.report, "write the JSON report to this file ('-' for stdout)");
  cmd->add_option("--threads", c.threads, "worker threads (default: CARTAN_DRESS_THREADS or hardware)");
  cmd->add_option("--corrupt-p", c.corruptP, "add this offset to the Schouten block of a normal connection");
}

int runVerify(const Common& c, const std::vector<std::string>& suites) {
  const cdress::Scenario s = cdress::loadScenario(resolveScenario(c.scenario));
  cdress::RunOptions o = c.options();
  o.suites = suites;
  const cdress::Report r = cdress::runSuites(s, o);
  std::cout << "scenario " << r.scenario << "  seed " << r.seed << "  points " << r.points << "\n";
  for (const auto& x : r.suites) {
    std::cout << std::left << std::setw(5) << (x.verdict == cdress::Verdict::Pass ? "PASS" : x.verdict == cdress::Verdict::Fail ? "FAIL" : "SKIP")
              << std::setw(22) << x.name;
    if (x.verdict == cdress::Verdict::Skipped) {
      std::cout << x.note << "\n";
      continue;
    }
    std::cout << std::scientific << std::setprecision(3) << "max " << x.maxResidual << "  tol " << x.tolerance;
    if (x.witness) std::cout << "  witness " << *x.witness << " > " << *x.witnessThreshold;
    std::cout << std::defaultfloat << "\n";
  }
  std::cout << (r.passed() ? "overall PASS" : "overall FAIL") << "\n";
  if (!c.report.empty()) writeReport(c.report, cdress::reportJson(r, true));
  return r.passed() ? kPass : kFail;
}

int runLagrangian(const Common& c) {
  const cdress::Scenario s = cdress::loadScenario(resolveScenario(c.scenario));
  const cdress::LagrangianReport r = cdress::runLagrangian(s, c.options());
  std::cout << "scenario " << r.scenario << "  alpha " << r.params.alpha << "  beta " << r.params.beta << "\n";
  std::cout << "vacuum shell <phi,phi> = " << r.vacuum.shell;
  if (r.vacuum.mass)
    std::cout << "  mass " << *r.vacuum.mass << "\n";
  else
    std::cout << "  no mass (alpha >= 0)\n";
  std::cout << std::scientific << std::setprecision(6);
  for (const auto& p : r.points) {
    const auto& b = p.densities.bare;
    std::cout << "x = (" << p.x[0] << ", " << p.x[1] << ", " << p.x[2] << ", " << p.x[3] << ")  YM " << b.yangMills << "  kin " << b.kinetic
              << "  V " << b.potential << "  dirac " << b.dirac.real() << (b.dirac.imag() < 0 ? " - " : " + ") << std::abs(b.dirac.imag())
              << "i  yuk " << b.yukawa << "  total " << b.total() << "  stage delta " << p.densities.maxStageDelta() << "\n";
  }
  std::cout << "max stage delta " << r.maxStageDelta() << "  tol " << r.tolerance << std::defaultfloat << "\n";
  std::cout << (r.passed() ? "overall PASS" : "overall FAIL") << "\n";
  if (!c.report.empty()) writeReport(c.report, cdress::lagrangianJson(r, true));
  return r.passed() ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of dressed conformal Cartan geometry"};
  app.require_subcommand(1);

  Common verifyArgs;
  std::vector<std::string> suites;
  auto* verify = app.add_subcommand("verify", "run verification suites on a scenario");
  addCommon(verify, verifyArgs);
  verify->add_option("--suite", suites, "run only this suite (repeatable)");

  Common lagArgs;
  auto* lag = app.add_subcommand("lagrangian", "evaluate the Lagrangian density at every stage");
  addCommon(lag, lagArgs);

  auto* list = app.add_subcommand("list-suites", "list suites with default tolerances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInput;
  }

  try {
    if (*list) {
      for (const auto& s : cdress::suiteCatalog())
        std::cout << std::left << std::setw(22) << s.name << std::scientific << std::setprecision(0) << s.defaultTolerance << "  " << s.law
                  << "\n";
      return kPass;
    }
    if (*verify) return runVerify(verifyArgs, suites);
    return runLagrangian(lagArgs);
  } catch (const cdress::DegenerateField& e) {
    std::cerr << "degenerate field: " << e.what() << "\n";
    return kDegenerate;
  } catch (const cdress::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  }
}
