#include "cdress/scenario.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "json.hpp"

namespace cdress {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) { throw ParseError(origin + ": " + what); }

const json& require(const json& j, const char* key, const std::string& origin, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail(origin, "missing key '" + std::string(key) + "' in " + where);
  return j.at(key);
}

Expr exprOf(const json& j, const std::string& origin, const std::string& where) {
  if (j.is_number()) return Expr::constant(j.get<double>());
  if (!j.is_string()) fail(origin, where + " must be an expression string or a number");
  try {
    return Expr::parse(j.get<std::string>());
  } catch (const ParseError& e) {
    fail(origin, where + ": " + e.what());
  }
}

template <std::size_t K>
std::array<Expr, K> exprArray(const json& j, const std::string& origin, const std::string& where) {
  if (!j.is_array() || j.size() != K) fail(origin, where + " must be an array of " + std::to_string(K) + " expressions");
  std::array<Expr, K> out;
  for (std::size_t i = 0; i < K; ++i) out[i] = exprOf(j[i], origin, where + "[" + std::to_string(i) + "]");
  return out;
}

template <std::size_t R, std::size_t C>
std::array<std::array<Expr, C>, R> exprMatrix(const json& j, const std::string& origin, const std::string& where) {
  if (!j.is_array() || j.size() != R) fail(origin, where + " must have " + std::to_string(R) + " rows");
  std::array<std::array<Expr, C>, R> out;
  for (std::size_t i = 0; i < R; ++i) out[i] = exprArray<C>(j[i], origin, where + "[" + std::to_string(i) + "]");
  return out;
}

double number(const json& j, const std::string& origin, const std::string& where) {
  if (!j.is_number()) fail(origin, where + " must be a number");
  return j.get<double>();
}

std::array<double, 4> point4(const json& j, const std::string& origin, const std::string& where) {
  if (!j.is_array() || j.size() != 4) fail(origin, where + " must be an array of 4 numbers");
  std::array<double, 4> out{};
  for (int i = 0; i < 4; ++i) out[i] = number(j[i], origin, where);
  return out;
}

void parseChart(const json& j, Scenario& s, const std::string& origin) {
  s.box.lower = point4(require(j, "lower", origin, "chart"), origin, "chart.lower");
  s.box.upper = point4(require(j, "upper", origin, "chart"), origin, "chart.upper");
  for (int i = 0; i < 4; ++i)
    if (!(s.box.lower[i] < s.box.upper[i])) fail(origin, "chart box is empty along x" + std::to_string(i));
  if (j.contains("numPoints")) {
    if (!j["numPoints"].is_number_integer() || j["numPoints"].get<int>() < 1) fail(origin, "chart.numPoints must be a positive integer");
    s.numPoints = j["numPoints"].get<int>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail(origin, "chart.seed must be a non-negative integer");
    s.seed = j["seed"].get<std::uint64_t>();
  }
}

void parseTetrad(const json& j, Scenario& s, const std::string& origin) {
  const std::string preset = require(j, "preset", origin, "tetrad").get<std::string>();
  if (preset == "minkowski") {
    s.tetradPreset = TetradPreset::Minkowski;
  } else if (preset == "conformalFactor") {
    s.tetradPreset = TetradPreset::ConformalFactor;
    s.conformalFactor = exprOf(require(j, "factor", origin, "tetrad"), origin, "tetrad.factor");
  } else if (preset == "perturbed") {
    s.tetradPreset = TetradPreset::Perturbed;
    s.amplitude = number(require(j, "amplitude", origin, "tetrad"), origin, "tetrad.amplitude");
    s.perturbation = exprMatrix<4, 4>(require(j, "h", origin, "tetrad"), origin, "tetrad.h");
  } else {
    fail(origin, "unknown tetrad preset '" + preset + "'");
  }
}

void parseConnection(const json& j, Scenario& s, const std::string& origin) {
  const std::string kind = require(j, "kind", origin, "connection").get<std::string>();
  if (kind == "normal") {
    s.connectionKind = ConnectionKind::Normal;
  } else if (kind == "explicitBlocks") {
    s.connectionKind = ConnectionKind::ExplicitBlocks;
    s.blocks.a = exprArray<4>(require(j, "a", origin, "connection"), origin, "connection.a");
    s.blocks.A = exprMatrix<6, 4>(require(j, "A", origin, "connection"), origin, "connection.A");
    s.blocks.P = exprMatrix<4, 4>(require(j, "P", origin, "connection"), origin, "connection.P");
  } else {
    fail(origin, "unknown connection kind '" + kind + "'");
  }
}

/// sigma must keep one sign on a 3^4 grid covering the box.
void checkSigma(const Scenario& s) {
  int sign = 0;
  for (int k = 0; k < 81; ++k) {
    ChartPoint p;
    int r = k;
    for (int mu = 0; mu < 4; ++mu, r /= 3) p.x[mu] = s.box.lower[mu] + 0.5 * (r % 3) * (s.box.upper[mu] - s.box.lower[mu]);
    const double sigma = s.tractor[5](p);
    if (std::abs(sigma) < 1e-14) throw DegenerateField("tractor sigma component vanishes", p.x);
    const int here = sigma > 0 ? 1 : -1;
    if (sign != 0 && here != sign) throw DegenerateField("tractor sigma component changes sign in the chart box", p.x);
    sign = here;
  }
}

}  // namespace

std::array<std::array<Expr, 4>, 4> Scenario::tetradExprs() const {
  std::array<std::array<Expr, 4>, 4> e;
  for (int a = 0; a < 4; ++a)
    for (int mu = 0; mu < 4; ++mu) {
      const double delta = a == mu ? 1.0 : 0.0;
      switch (tetradPreset) {
        case TetradPreset::Minkowski:
          e[a][mu] = Expr::constant(delta);
          break;
        case TetradPreset::ConformalFactor:
          e[a][mu] = a == mu ? conformalFactor : Expr::constant(0.0);
          break;
        case TetradPreset::Perturbed:
          e[a][mu] = Expr::constant(delta) + Expr::constant(amplitude) * perturbation[a][mu];
          break;
      }
    }
  return e;
}

Scenario parseScenario(const std::string& jsonText, const std::string& origin) {
  json j;
  try {
    j = json::parse(jsonText);
  } catch (const json::parse_error& e) {
    fail(origin, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) fail(origin, "top level must be an object");

  Scenario s;
  try {
    s.name = j.value("name", std::string("unnamed"));
    parseChart(require(j, "chart", origin, "scenario"), s, origin);
    parseTetrad(require(j, "tetrad", origin, "scenario"), s, origin);
    parseConnection(require(j, "connection", origin, "scenario"), s, origin);

    const json& t = require(j, "tractor", origin, "scenario");
    s.tractor[0] = exprOf(require(t, "rho", origin, "tractor"), origin, "tractor.rho");
    const auto l = exprArray<4>(require(t, "l", origin, "tractor"), origin, "tractor.l");
    for (int a = 0; a < 4; ++a) s.tractor[a + 1] = l[a];
    s.tractor[5] = exprOf(require(t, "sigma", origin, "tractor"), origin, "tractor.sigma");

    const json& w = require(j, "twistor", origin, "scenario");
    if (!w.is_array() || w.size() != 4) fail(origin, "twistor must be an array of 4 components");
    for (int i = 0; i < 4; ++i) {
      const std::string where = "twistor[" + std::to_string(i) + "]";
      s.twistor[i] = {exprOf(require(w[i], "re", origin, where), origin, where + ".re"),
                      exprOf(require(w[i], "im", origin, where), origin, where + ".im")};
    }

    if (j.contains("gauge")) {
      const json& g = j["gauge"];
      ScenarioGauge sg;
      sg.weyl = exprOf(require(g, "weyl", origin, "gauge"), origin, "gauge.weyl");
      sg.lorentz = exprArray<6>(require(g, "lorentz", origin, "gauge"), origin, "gauge.lorentz");
      sg.k1 = exprArray<4>(require(g, "k1", origin, "gauge"), origin, "gauge.k1");
      s.gauge = sg;
    }

    if (j.contains("lagrangian")) {
      const json& lg = j["lagrangian"];
      s.lagrangian.alpha = number(require(lg, "alpha", origin, "lagrangian"), origin, "lagrangian.alpha");
      s.lagrangian.beta = number(require(lg, "beta", origin, "lagrangian"), origin, "lagrangian.beta");
      if (!(s.lagrangian.beta > 0)) fail(origin, "lagrangian.beta must be positive");
    }

    if (j.contains("tolerances")) {
      if (!j["tolerances"].is_object()) fail(origin, "tolerances must be an object");
      for (const auto& [k, v] : j["tolerances"].items()) {
        const double tol = number(v, origin, "tolerances." + k);
        if (!(tol >= 0)) fail(origin, "tolerances." + k + " must be non-negative");
        s.tolerances[k] = tol;
      }
    }
  } catch (const json::exception& e) {
    fail(origin, e.what());
  }
  checkSigma(s);
  return s;
}

Scenario loadScenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open scenario file");
  std::ostringstream text;
  text << in.rdbuf();
  return parseScenario(text.str(), path);
}

std::vector<ChartPoint> samplePoints(const ChartBox& box, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<ChartPoint> out(static_cast<std::size_t>(count));
  for (auto& p : out)
    for (int mu = 0; mu < 4; ++mu) p.x[mu] = std::uniform_real_distribution<double>(box.lower[mu], box.upper[mu])(rng);
  return out;
}

}  // namespace cdress
