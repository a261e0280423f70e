#ifndef CDRESS_SCENARIO_HPP
#define CDRESS_SCENARIO_HPP

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cdress/dressing.hpp"
#include "cdress/lagrangian.hpp"

namespace cdress {

struct ChartBox {
  std::array<double, 4> lower{-0.3, -0.3, -0.3, -0.3};
  std::array<double, 4> upper{0.3, 0.3, 0.3, 0.3};
};

enum class TetradPreset { Minkowski, ConformalFactor, Perturbed };
enum class ConnectionKind { Normal, ExplicitBlocks };

/// Gauge parameters fixed by a scenario file (the Weyl entry is the positive field z).
struct ScenarioGauge {
  Expr weyl;
  std::array<Expr, 6> lorentz;
  std::array<Expr, 4> k1;

  GaugeParams params() const { return {log(weyl), lorentz, k1}; }
};

struct Scenario {
  std::string name;
  ChartBox box;
  int numPoints = 100;
  std::uint64_t seed = 1;

  TetradPreset tetradPreset = TetradPreset::Minkowski;
  Expr conformalFactor = Expr::constant(1.0);
  std::array<std::array<Expr, 4>, 4> perturbation;
  double amplitude = 0.0;

  ConnectionKind connectionKind = ConnectionKind::Normal;
  ConnectionExprs blocks;  // explicit a, A, P; e is filled from the tetrad preset

  std::array<Expr, 6> tractor;                      // rho, l^0..l^3, sigma
  std::array<std::pair<Expr, Expr>, 4> twistor;     // (re, im) per component
  std::optional<ScenarioGauge> gauge;
  LagrangianParams lagrangian{-2.0, 1.0};
  std::map<std::string, double> tolerances;

  /// e^a_mu as expressions for the chosen preset.
  std::array<std::array<Expr, 4>, 4> tetradExprs() const;
  bool conformallyFlat() const { return tetradPreset != TetradPreset::Perturbed; }
};

/// Throws ParseError on malformed input and DegenerateField when sigma
/// vanishes on the check grid over the chart box.
Scenario parseScenario(const std::string& jsonText, const std::string& origin = "<string>");
Scenario loadScenario(const std::string& path);

/// Uniform samples in the chart box.
std::vector<ChartPoint> samplePoints(const ChartBox& box, int count, std::uint64_t seed);

template <int N>
Tetrad<N> scenarioTetrad(const Scenario& s) {
  const auto e = s.tetradExprs();
  return Tetrad<N>([e](const ChartPoint& p) {
    Mat<RJet<N>> m(4, 4);
    for (int a = 0; a < 4; ++a)
      for (int mu = 0; mu < 4; ++mu) m(a, mu) = e[a][mu].evaluate<double, N>(p);
    return m;
  });
}

template <int N>
CartanConnection<N> scenarioConnection(const Scenario& s, double corruptP = 0.0) {
  if (s.connectionKind == ConnectionKind::Normal) return buildNormalConnection(scenarioTetrad<N>(s), corruptP);
  ConnectionExprs c = s.blocks;
  c.e = s.tetradExprs();
  return connectionFromExprs<N>(c);
}

template <int N>
FieldSet<N> scenarioFields(const Scenario& s, double corruptP = 0.0) {
  return FieldSet<N>(Stage::Bare, scenarioConnection<N>(s, corruptP), tractorFromExprs<N>(s.tractor),
                     twistorFromExprs<N>(s.twistor));
}

}  // namespace cdress

#endif  // CDRESS_SCENARIO_HPP
