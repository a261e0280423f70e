#ifndef CDRESS_SUITES_HPP
#define CDRESS_SUITES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cdress/scenario.hpp"

namespace cdress {

/// Jet order used by every suite. Two orders are lost to the dressing field
/// and two more to the Weyl twist, which leaves curvature values at order 4.
inline constexpr int kSuiteOrder = 4;

struct SuiteInfo {
  std::string name;
  double defaultTolerance;
  std::string law;
};

const std::vector<SuiteInfo>& suiteCatalog();
const SuiteInfo& suiteInfo(const std::string& name);  // throws std::invalid_argument

enum class Verdict { Pass, Fail, Skipped };
const char* verdictName(Verdict v);

struct SuiteResult {
  std::string name;
  std::string law;
  double maxResidual = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::Skipped;
  int points = 0;
  std::uint64_t seed = 0;
  std::optional<double> witness;           // lower bound that must be exceeded, when the suite has one
  std::optional<double> witnessThreshold;
  std::string note;
};

struct RunOptions {
  std::vector<std::string> suites;  // empty: all
  std::optional<std::uint64_t> seed;
  std::optional<int> points;
  std::optional<double> tolerance;  // overrides every suite tolerance
  double corruptP = 0.0;
  unsigned threads = 0;             // 0: take CARTAN_DRESS_THREADS / hardware
};

struct Report {
  std::string scenario;
  std::uint64_t seed = 0;
  int points = 0;
  double corruptP = 0.0;
  std::vector<SuiteResult> suites;
  bool passed() const;
};

/// Worker count: CARTAN_DRESS_THREADS if set and positive, capped by the hardware.
unsigned threadCap();

/// Runs the selected suites in catalogue order. DegenerateField propagates.
Report runSuites(const Scenario& scenario, const RunOptions& options);

/// JSON text of the report with sorted keys; the timestamp is only added on request.
std::string reportJson(const Report& report, bool withTimestamp);

/// Per-point Lagrangian densities for every stage.
struct LagrangianPoint {
  ChartPoint x;
  StageDensities densities;
};

struct LagrangianReport {
  std::string scenario;
  LagrangianParams params;
  PotentialReport vacuum;
  std::vector<LagrangianPoint> points;
  double tolerance = 0.0;
  double maxStageDelta() const;
  bool passed() const { return maxStageDelta() <= tolerance; }
};

LagrangianReport runLagrangian(const Scenario& scenario, const RunOptions& options);
std::string lagrangianJson(const LagrangianReport& report, bool withTimestamp);

}  // namespace cdress

#endif  // CDRESS_SUITES_HPP
