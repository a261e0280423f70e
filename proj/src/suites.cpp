#include "cdress/suites.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <functional>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace cdress {

namespace {

constexpr int kN = kSuiteOrder;
using RJ = RJet<kN>;
using CJ = CJet<kN>;

using nlohmann::json;

double clean(double r) { return std::isnan(r) ? std::numeric_limits<double>::infinity() : r; }

/// max_i f(i, points[i]) over a small thread pool. Errors are rethrown for the
/// lowest failing index so the outcome does not depend on scheduling.
double maxOverPoints(const std::vector<ChartPoint>& pts, unsigned threads, const std::function<double(std::size_t, const ChartPoint&)>& f) {
  const std::size_t n = pts.size();
  std::vector<double> res(n, 0.0);
  std::vector<std::exception_ptr> errs(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        res[i] = clean(f(i, pts[i]));
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (count == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errs)
    if (e) std::rethrow_exception(e);
  double worst = 0.0;
  for (double r : res) worst = std::max(worst, r);
  return worst;
}

std::uint64_t nameHash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ull;
  return h;
}

struct Context {
  const Scenario& scenario;
  std::vector<ChartPoint> points;
  std::uint64_t seed;
  unsigned threads;
  double corruptP;
  FieldSet<kN> fields;
  CartanConnection<kN> connection;

  std::mt19937_64 rngFor(const std::string& suite) const {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(nameHash(suite)), static_cast<std::uint32_t>(nameHash(suite) >> 32)};
    return std::mt19937_64(seq);
  }

  double over(const std::function<double(std::size_t, const ChartPoint&)>& f) const { return maxOverPoints(points, threads, f); }

  /// Gauge parameter pool; the scenario's own parameters come first.
  std::vector<GaugeParams> gaugePool(std::mt19937_64& rng, std::size_t size) const {
    std::vector<GaugeParams> pool;
    if (scenario.gauge) pool.push_back(scenario.gauge->params());
    while (pool.size() < size) pool.push_back(GaugeParams::random(rng, 0.3, 2));
    return pool;
  }
};

double normDiff(const FormJet<RJ>& a, const FormJet<RJ>& b) { return maxAbsDifference(a, b); }

template <typename S>
FormJet<S> conjugated(const FormJet<S>& w, const Mat<S>& gInverse, const Mat<S>& g) {
  return leftMultiply(gInverse, rightMultiply(w, g));
}

Matrix2c randomSpin(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  std::array<cplx, 3> b, w;
  for (int k = 0; k < 3; ++k) {
    b[k] = u(rng);
    w[k] = u(rng);
  }
  return Matrix2c(spinFromParameters<cplx>(b, w));
}

LieElement randomLie(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  LieElement x;
  x.epsilon = u(rng);
  for (const auto& [a, b] : lorentzPairs()) x.s += u(rng) * lorentzGenerator(a, b);
  for (int a = 0; a < 4; ++a) {
    x.iota(a) = u(rng);
    x.tau(a) = u(rng);
  }
  return x;
}

// ---------------------------------------------------------------------------
// Suites. Each returns the worst residual over the sample points.

using SuiteFn = std::function<double(const Context&, SuiteResult&)>;

double structureEquation(const Context& c, SuiteResult&) {
  const auto plain = scenarioConnection<2>(c.scenario, c.corruptP);
  const double h = 1e-4;
  return c.over([&](std::size_t, const ChartPoint& p) {
    const auto omega = curvatureOf(c.connection(p)).omega;
    auto component = [&](int dir, double step, int mu) {
      ChartPoint q = p;
      q.x[dir] += step;
      return Mat<double>(valuesOf(plain(q)[mu]));
    };
    double worst = 0.0;
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = mu + 1; nu < 4; ++nu) {
        const Mat<double> dNu = (component(mu, h, nu) - component(mu, -h, nu)) / (2 * h);
        const Mat<double> dMu = (component(nu, h, mu) - component(nu, -h, mu)) / (2 * h);
        const Mat<double> a = component(0, 0.0, mu), b = component(0, 0.0, nu);
        const Mat<double> expected = dNu - dMu + a * b - b * a;
        worst = std::max(worst, (Mat<double>(valuesOf(omega.byMask((1 << mu) | (1 << nu)))) - expected).cwiseAbs().maxCoeff());
      }
    return worst;
  });
}

double bianchi(const Context& c, SuiteResult&) {
  return c.over([&](std::size_t, const ChartPoint& p) {
    const auto w = c.connection(p);
    const auto om = curvatureOf(w).omega;
    return maxAbsValue(exteriorDerivative(om) + wedge(w, om) - wedge(om, w));
  });
}

double gaugeCovariance(const Context& c, SuiteResult& r) {
  auto rng = c.rngFor(r.name);
  const auto pool = c.gaugePool(rng, 5);
  constexpr std::array<Subgroup, 4> subs{Subgroup::K1, Subgroup::Weyl, Subgroup::Lorentz, Subgroup::General};
  return c.over([&](std::size_t i, const ChartPoint& p) {
    const GroupPair<RJ> g = gaugeFor<kN>(subs[i % 4], pool[(i / 4) % pool.size()])(p);
    const GroupPair<RJ> gi = g.inverse();
    const FieldValues<kN> v = c.fields(p);
    const FieldValues<kN> m = transportValues<kN>(v, g);
    const double om = normDiff(curvatureOf(m.connection).omega, conjugated(curvatureOf(v.connection).omega, gi.real, g.real));
    const double dphi = normDiff(covariantDerivative(m.tractor, m.connection), leftMultiply(gi.real, covariantDerivative(v.tractor, v.connection)));
    const double dpsi = maxAbsDifference(covariantDerivative(m.twistor, complexConnection(m.connection)),
                                         leftMultiply(gi.complex, covariantDerivative(v.twistor, complexConnection(v.connection))));
    return std::max({om, dphi, dpsi});
  });
}

double k1Invariance(const Context& c, SuiteResult& r) {
  auto rng = c.rngFor(r.name);
  std::vector<std::array<Expr, 4>> pool;
  if (c.scenario.gauge) pool.push_back(c.scenario.gauge->k1);
  while (pool.size() < 20) {
    std::array<Expr, 4> k;
    for (auto& e : k) e = randomPolynomial(rng, 2, 0.3);
    pool.push_back(k);
  }
  const auto dressing = k1DressingGauge<kN>();
  return c.over([&](std::size_t i, const ChartPoint& p) {
    const GroupPair<RJ> g = boostGauge<kN>(pool[i % pool.size()])(p);
    const FieldValues<kN> v = c.fields(p);
    const FieldValues<kN> m = transportValues<kN>(v, g);
    const GroupPair<RJ> u = dressing(v, p), um = dressing(m, p);
    const GroupPair<RJ> expected = g.inverse() * u;
    const FieldValues<kN> dressed = transportValues<kN>(v, u);
    return std::max({fieldDifference<kN>(dressed, transportValues<kN>(m, um)), maxAbsDifference(um.real, expected.real),
                     maxAbsDifference(um.complex, expected.complex), maxAbsValue(blocksOf(dressed.connection).a)});
  });
}

double twistingMap(const Context& c, SuiteResult& r) {
  auto rng = c.rngFor(r.name);
  std::vector<std::pair<Expr, Expr>> pool;  // (log z, log z')
  while (pool.size() < 10) pool.emplace_back(randomPolynomial(rng, 2, 0.4), randomPolynomial(rng, 2, 0.4));
  if (c.scenario.gauge) pool[0].first = log(c.scenario.gauge->weyl);
  std::vector<double> witness(c.points.size(), 0.0);
  const double worst = c.over([&](std::size_t i, const ChartPoint& p) {
    const auto& [a, b] = pool[i % pool.size()];
    const Mat<RJ> E = inverse(c.connection.tetrad(p));
    const RJ z = exp(a.evaluate<double, kN>(p)), zp = exp(b.evaluate<double, kN>(p));
    const GroupPair<RJ> cz = twistingMatrices<kN>(z, E), czp = twistingMatrices<kN>(zp, E), czpz = twistingMatrices<kN>(RJ(zp * z), E);
    const GroupPair<RJ> Z = weylGauge<kN>(b)(p);
    const GroupPair<RJ> rhs = czp * Z.inverse() * cz * Z;
    witness[i] = maxAbsDifference((czp * cz).real, czpz.real);
    return std::max(maxAbsDifference(czpz.real, rhs.real), maxAbsDifference(czpz.complex, rhs.complex));
  });
  r.witness = *std::max_element(witness.begin(), witness.end());
  r.witnessThreshold = 1e-3;
  return worst;
}

double residualLaws(const Context& c, SuiteResult& r) {
  auto rng = c.rngFor(r.name);
  const auto pool = c.gaugePool(rng, 5);
  struct Case {
    Stage stage;
    Subgroup subgroup;
  };
  constexpr std::array<Case, 3> cases{Case{Stage::K1Dressed, Subgroup::Lorentz}, Case{Stage::K1Dressed, Subgroup::Weyl},
                                      Case{Stage::WeylDressed, Subgroup::Lorentz}};
  return c.over([&](std::size_t i, const ChartPoint& p) {
    const Case cs = cases[i % 3];
    const GaugeParams& gp = pool[(i / 3) % pool.size()];
    return residualLaw<kN>(cs.stage, cs.subgroup, c.fields, gaugeFor<kN>(cs.subgroup, gp), gp.logZ, {p});
  });
}

double weylErasure(const Context& c, SuiteResult& r) {
  auto rng = c.rngFor(r.name);
  const FieldSet<kN> k1 = dressK1(c.fields);
  const FieldSet<kN> bs = dressWeyl(k1);
  std::vector<FieldSet<kN>> moved;
  for (int k = 0; k < 10; ++k) {
    Expr logZ = randomPolynomial(rng, 2, 0.3);
    if (k == 0 && c.scenario.gauge) logZ = log(c.scenario.gauge->weyl);
    moved.push_back(dressWeyl(twistedTransport<kN>(k1, scalarField<kN>(exp(logZ)))));
  }
  return c.over([&](std::size_t i, const ChartPoint& p) { return fieldDifference(moved[i % moved.size()], bs, p); });
}

double invariantMetric(const Context& c, SuiteResult&) {
  const FieldSet<kN> bs = dressWeyl(dressK1(c.fields));
  return c.over([&](std::size_t, const ChartPoint& p) {
    const FieldValues<kN> v = c.fields(p);
    const FieldValues<kN> b = bs(p);
    const double phi = 1.0 / v.tractor(5, 0).value();
    const Mat<double> g = valuesOf(Tetrad<kN>::inducedMetricOf(CartanConnection<kN>::tetradOf(v.connection, p)));
    const Mat<double> gb = valuesOf(Tetrad<kN>::inducedMetricOf(CartanConnection<kN>::tetradOf(b.connection, p)));
    return std::max((gb - phi * phi * g).cwiseAbs().maxCoeff(), std::abs(b.tractor(5, 0).value() - 1.0));
  });
}

double dressedBlocks(const Context& c, SuiteResult&) {
  const FieldSet<kN> k1 = dressK1(c.fields);
  return c.over([&](std::size_t, const ChartPoint& p) {
    const FieldValues<kN> v1 = k1(p);
    const RJ phi = dilatonOf<kN>(v1.tractor, p);
    const Mat<RJ> E = inverse(CartanConnection<kN>::tetradOf(v1.connection, p));
    const auto formula = explicitWeylDressedBlocks<kN>(v1.connection, phi, upsilonOf<kN>(phi, E));
    const FieldSet<kN> one(Stage::K1Dressed, [v1](const ChartPoint&) { return v1; });
    const auto built = blocksOf(dressWeyl(one)(p).connection);
    return std::max({maxAbsValue(built.a), normDiff(built.theta, formula.theta), normDiff(built.A, formula.A), normDiff(built.P, formula.P)});
  });
}

bool skipUnlessNormal(const Context& c, SuiteResult& r) {
  if (c.scenario.connectionKind == ConnectionKind::Normal) return false;
  r.verdict = Verdict::Skipped;
  r.note = "connection is not the normal one";
  return true;
}

double normalityTorsion(const Context& c, SuiteResult& r) {
  if (skipUnlessNormal(c, r)) return 0.0;
  return c.over([&](std::size_t, const ChartPoint& p) {
    const auto curv = curvatureOf(c.connection(p));
    return std::max(maxAbsValue(curv.Theta()), maxAbsValue(curv.f()));
  });
}

double normalityTrace(const Context& c, SuiteResult& r) {
  if (skipUnlessNormal(c, r)) return 0.0;
  return c.over([&](std::size_t, const ChartPoint& p) {
    const auto w = c.connection(p);
    const Mat<RJ> E = inverse(CartanConnection<kN>::tetradOf(w, p));
    return maxAbsValue(ricciTrace(curvatureOf(w).W(), E));
  });
}

double conformalFlatness(const Context& c, SuiteResult& r) {
  if (skipUnlessNormal(c, r)) return 0.0;
  if (!c.scenario.conformallyFlat()) {
    r.verdict = Verdict::Skipped;
    r.note = "tetrad is not conformally flat";
    return 0.0;
  }
  return c.over([&](std::size_t, const ChartPoint& p) { return maxAbsValue(curvatureOf(c.connection(p)).W()); });
}

double clifford(const Context& c, SuiteResult& r) {
  auto rng = c.rngFor(r.name);
  double table = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      table = std::max(table, (gamma(a) * gamma(b) + gamma(b) * gamma(a) - 2.0 * minkowski()(a, b) * Matrix4c::Identity()).cwiseAbs().maxCoeff());
  std::vector<Matrix2c> spins(c.points.size());
  for (auto& s : spins) s = randomSpin(rng);
  const double worst = c.over([&](std::size_t i, const ChartPoint& p) {
    const Matrix4c L = complexLorentzMatrix<cplx>(Mat<cplx>(spins[i]));
    const Matrix4c Li = L.inverse();
    const Eigen::Matrix4d sInv = spinToLorentz(spins[i]).inverse();
    double w = 0.0;
    for (int a = 0; a < 4; ++a) {
      Matrix4c rhs = Matrix4c::Zero();
      for (int b = 0; b < 4; ++b) rhs += sInv(b, a) * gamma(b);
      w = std::max(w, (Li * gamma(a) * L - rhs).cwiseAbs().maxCoeff());
    }
    const Mat<RJ> e = c.connection.tetrad(p);
    const Mat<double> g = valuesOf(Tetrad<kN>::inducedMetricOf(e));
    const auto gam = curvedGamma<kN>(e);
    for (int mu = 0; mu < 4; ++mu)
      for (int nu = 0; nu < 4; ++nu) {
        const Matrix4c x = valuesOf(gam[mu]), y = valuesOf(gam[nu]);
        w = std::max(w, (x * y + y * x - 2.0 * g(mu, nu) * Matrix4c::Identity()).cwiseAbs().maxCoeff());
      }
    return w;
  });
  return std::max(table, worst);
}

double lieIso(const Context& c, SuiteResult& r) {
  auto rng = c.rngFor(r.name);
  std::vector<std::pair<LieElement, LieElement>> pairs(c.points.size());
  for (auto& pr : pairs) pr = {randomLie(rng), randomLie(rng)};
  return c.over([&](std::size_t i, const ChartPoint&) {
    const auto& [x, y] = pairs[i];
    const Matrix4c a = algebraIso(x), b = algebraIso(y);
    return std::max((algebraIso(bracket(x, y)) - (a * b - b * a)).cwiseAbs().maxCoeff(), su22Residual(a));
  });
}

double spinCover(const Context& c, SuiteResult& r) {
  auto rng = c.rngFor(r.name);
  std::vector<std::pair<Matrix2c, Matrix2c>> pairs(c.points.size());
  for (auto& pr : pairs) pr = {randomSpin(rng), randomSpin(rng)};
  const double kernel = (spinToLorentz(Matrix2c(-Matrix2c::Identity())) - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff();
  return std::max(kernel, c.over([&](std::size_t i, const ChartPoint&) {
    const auto& [a, b] = pairs[i];
    const Eigen::Matrix4d la = spinToLorentz(a);
    return std::max({(spinToLorentz(Matrix2c(a * b)) - la * spinToLorentz(b)).cwiseAbs().maxCoeff(),
                     (spinToLorentz(Matrix2c(-a)) - la).cwiseAbs().maxCoeff(),
                     (la.transpose() * minkowski() * la - minkowski()).cwiseAbs().maxCoeff()});
  }));
}

double lagrangianStagesSuite(const Context& c, SuiteResult&) {
  return c.over([&](std::size_t, const ChartPoint& p) { return lagrangianStages(c.fields, c.scenario.lagrangian, p).maxStageDelta(); });
}

double potentialVev(const Context& c, SuiteResult& r) {
  const auto vac = vevMass(c.scenario.lagrangian);
  const double base = potentialDifferential(vac.representative, c.scenario.lagrangian).cwiseAbs().maxCoeff();
  if (!vac.mass) r.note = "alpha >= 0: no positive shell, mass check not applicable";
  return std::max(base, c.over([&](std::size_t, const ChartPoint& p) {
    // Project the scenario tractor onto the shell along rho.
    Tractor6 v;
    for (int i = 0; i < 6; ++i) v(i) = c.scenario.tractor[i](p);
    v(0) = (v(1) * v(1) - v(2) * v(2) - v(3) * v(3) - v(4) * v(4) - vac.shell) / (2 * v(5));
    double w = potentialDifferential(v, c.scenario.lagrangian).cwiseAbs().maxCoeff();
    if (vac.mass) {
      Eigen::Vector4cd psi;
      for (int i = 0; i < 4; ++i) psi(i) = cplx(c.scenario.twistor[i].first(p), c.scenario.twistor[i].second(p));
      const double pairing = (diracAdjoint(psi) * psi)(0, 0).real();
      w = std::max(w, std::abs(yukawaTerm(vac.representative, psi, 1.0, p) + *vac.mass * pairing));
    }
    return w;
  }));
}

double potentialGradient(const Context& c, SuiteResult&) {
  const double h = 1e-5;
  return c.over([&](std::size_t, const ChartPoint& p) {
    Tractor6 v;
    for (int i = 0; i < 6; ++i) v(i) = c.scenario.tractor[i](p);
    const auto dv = potentialDifferential(v, c.scenario.lagrangian);
    double w = 0.0;
    for (int k = 0; k < 6; ++k) {
      Tractor6 a = v, b = v;
      a(k) += h;
      b(k) -= h;
      w = std::max(w, std::abs(dv(k) - (potential(a, c.scenario.lagrangian) - potential(b, c.scenario.lagrangian)) / (2 * h)));
    }
    return w;
  });
}

struct SuiteEntry {
  SuiteInfo info;
  SuiteFn run;
};

const std::vector<SuiteEntry>& registry() {
  static const std::vector<SuiteEntry> r{
      {{"structure-equation", 1e-6, "Omega = d varpi + varpi ^ varpi, jet curvature against central differences of varpi"}, structureEquation},
      {{"bianchi", 1e-8, "d Omega + varpi ^ Omega - Omega ^ varpi = 0"}, bianchi},
      {{"gauge-covariance", 1e-8,
        "Omega, D phi and Dbar psi transform by g^-1 (.) g, g^-1 and gbar^-1 for g in K1, W, Lorentz and H"},
       gaugeCovariance},
      {{"k1-invariance", 1e-8, "u1 -> g1^-1 u1 under K1; K1-dressed fields unchanged; a-block of the dressed connection vanishes"},
       k1Invariance},
      {{"twisting-map", 1e-9, "C(z'z) = C(z') Z'^-1 C(z) Z' with |C(z') C(z) - C(z'z)| above the witness threshold"}, twistingMap},
      {{"residual-laws", 1e-8, "K1-dressed fields: standard Lorentz law, Weyl law twisted by C(z); Weyl-dressed fields: standard Lorentz law"},
       residualLaws},
      {{"weyl-erasure", 1e-7, "Weyl-dressed fields unchanged under twisted Weyl transforms of the K1-dressed fields"}, weylErasure},
      {{"invariant-metric", 1e-11, "dressed metric equals phi^2 g; dressed tractor has sigma = 1"}, invariantMetric},
      {{"dressed-blocks", 1e-8,
        "theta -> phi theta, A -> A1 + theta Y - Y^t theta^t, P -> (P1 + dY - Y A1 - (Y theta) Y + Y^2 theta^t / 2) / phi, a -> 0"},
       dressedBlocks},
      {{"normality-torsion", 1e-8, "normal connection: Theta = 0 and f = 0"}, normalityTorsion},
      {{"normality-trace", 1e-7, "normal connection: Ricci trace of W vanishes"}, normalityTrace},
      {{"conformal-flatness", 1e-7, "normal connection of a conformally flat tetrad: W = 0"}, conformalFlatness},
      {{"clifford", 1e-11, "gamma_a gamma_b + gamma_b gamma_a = 2 eta_ab; Lbar^-1 gamma_a Lbar = (S^-1)_ba gamma_b; curved gammas square to g"},
       clifford},
      {{"lie-iso", 1e-12, "so(2,4) -> su(2,2) preserves brackets and lands in su(2,2)"}, lieIso},
      {{"spin-cover", 1e-10, "Spin(1,3) -> SO(1,3) is a homomorphism with kernel {1, -1} preserving eta"}, spinCover},
      {{"lagrangian-stages", 1e-7, "bare, K1-dressed and Weyl-dressed Lagrangian densities agree"}, lagrangianStagesSuite},
      {{"potential-vev", 1e-9, "dV = 0 on the shell <phi,phi> = -alpha / (2 beta); Yukawa term at the vacuum equals -m psibar psi"},
       potentialVev},
      {{"potential-gradient", 1e-6, "analytic dV against central differences of V"}, potentialGradient},
  };
  return r;
}

json resultJson(const SuiteResult& s) {
  json j;
  j["name"] = s.name;
  j["law"] = s.law;
  j["maxResidual"] = s.maxResidual;
  j["tolerance"] = s.tolerance;
  j["verdict"] = verdictName(s.verdict);
  j["points"] = s.points;
  j["seed"] = s.seed;
  if (s.witness) {
    j["witness"] = *s.witness;
    j["witnessThreshold"] = *s.witnessThreshold;
  }
  if (!s.note.empty()) j["note"] = s.note;
  return j;
}

std::string timestampNow() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

json conventionsJson() {
  json j;
  j["signature"] = "eta = diag(1, -1, -1, -1)";
  j["hodgeStar"] = "orientation dx0^dx1^dx2^dx3, alpha ^ *beta = <alpha, beta>_g vol_g";
  j["hodgeMetric"] = "dressed metric phi^2 g at every stage";
  j["schouten"] = "P = -(Ric - R g / 6) / 2";
  j["yangMillsTrace"] = "1/2 tr(Omega ^ *Omega)";
  j["diracTerm"] = "real part summed into the total, imaginary part reported";
  j["jetOrder"] = kSuiteOrder;
  return j;
}

}  // namespace

const std::vector<SuiteInfo>& suiteCatalog() {
  static const std::vector<SuiteInfo> c = [] {
    std::vector<SuiteInfo> out;
    for (const auto& e : registry()) out.push_back(e.info);
    return out;
  }();
  return c;
}

const SuiteInfo& suiteInfo(const std::string& name) {
  for (const auto& s : suiteCatalog())
    if (s.name == name) return s;
  throw std::invalid_argument("unknown suite '" + name + "'");
}

const char* verdictName(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Skipped:
      return "skipped";
  }
  return "?";
}

bool Report::passed() const {
  return std::none_of(suites.begin(), suites.end(), [](const SuiteResult& s) { return s.verdict == Verdict::Fail; });
}

unsigned threadCap() {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CARTAN_DRESS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return std::min<unsigned>(hw, static_cast<unsigned>(v));
  }
  return hw;
}

Report runSuites(const Scenario& scenario, const RunOptions& options) {
  std::vector<std::string> selected = options.suites;
  for (const auto& name : selected) suiteInfo(name);
  for (const auto& [name, tol] : scenario.tolerances) {
    (void)tol;
    suiteInfo(name);
  }

  Report report;
  report.scenario = scenario.name;
  report.seed = options.seed.value_or(scenario.seed);
  report.points = options.points.value_or(scenario.numPoints);
  report.corruptP = options.corruptP;
  if (report.points < 1) throw std::invalid_argument("number of points must be positive");

  const FieldSet<kN> fields = scenarioFields<kN>(scenario, options.corruptP);
  const Context ctx{scenario, samplePoints(scenario.box, report.points, report.seed), report.seed,
                    options.threads > 0 ? options.threads : threadCap(), options.corruptP, fields, fields.connection()};

  for (const auto& entry : registry()) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), entry.info.name) == selected.end()) continue;
    SuiteResult r;
    r.name = entry.info.name;
    r.law = entry.info.law;
    r.seed = report.seed;
    r.points = report.points;
    r.tolerance = entry.info.defaultTolerance;
    if (auto it = scenario.tolerances.find(r.name); it != scenario.tolerances.end()) r.tolerance = it->second;
    if (options.tolerance) r.tolerance = *options.tolerance;
    r.verdict = Verdict::Pass;
    r.maxResidual = entry.run(ctx, r);
    if (r.verdict == Verdict::Skipped) {
      r.points = 0;
    } else {
      const bool witnessOk = !r.witness || *r.witness > *r.witnessThreshold;
      r.verdict = (r.maxResidual <= r.tolerance && witnessOk) ? Verdict::Pass : Verdict::Fail;
    }
    report.suites.push_back(r);
  }
  return report;
}

std::string reportJson(const Report& report, bool withTimestamp) {
  json j;
  j["scenario"] = report.scenario;
  j["seed"] = report.seed;
  j["points"] = report.points;
  j["corruptP"] = report.corruptP;
  j["conventions"] = conventionsJson();
  j["suites"] = json::array();
  for (const auto& s : report.suites) j["suites"].push_back(resultJson(s));
  j["verdict"] = report.passed() ? "pass" : "fail";
  if (withTimestamp) j["timestamp"] = timestampNow();
  return j.dump(2);
}

double LagrangianReport::maxStageDelta() const {
  double d = 0.0;
  for (const auto& p : points) d = std::max(d, clean(p.densities.maxStageDelta()));
  return d;
}

LagrangianReport runLagrangian(const Scenario& scenario, const RunOptions& options) {
  LagrangianReport r;
  r.scenario = scenario.name;
  r.params = scenario.lagrangian;
  r.vacuum = vevMass(scenario.lagrangian);
  r.tolerance = options.tolerance.value_or(suiteInfo("lagrangian-stages").defaultTolerance);
  if (auto it = scenario.tolerances.find("lagrangian-stages"); it != scenario.tolerances.end() && !options.tolerance) r.tolerance = it->second;
  const int count = options.points.value_or(scenario.numPoints);
  if (count < 1) throw std::invalid_argument("number of points must be positive");
  const auto pts = samplePoints(scenario.box, count, options.seed.value_or(scenario.seed));
  const FieldSet<kN> fields = scenarioFields<kN>(scenario, options.corruptP);
  r.points.resize(pts.size());
  maxOverPoints(pts, options.threads > 0 ? options.threads : threadCap(), [&](std::size_t i, const ChartPoint& p) {
    r.points[i] = {p, lagrangianStages(fields, scenario.lagrangian, p)};
    return 0.0;
  });
  return r;
}

std::string lagrangianJson(const LagrangianReport& report, bool withTimestamp) {
  auto terms = [](const DensityTerms& t) {
    json j;
    j["yangMills"] = t.yangMills;
    j["kinetic"] = t.kinetic;
    j["potential"] = t.potential;
    j["diracRe"] = t.dirac.real();
    j["diracIm"] = t.dirac.imag();
    j["yukawa"] = t.yukawa;
    j["total"] = t.total();
    return j;
  };
  json j;
  j["scenario"] = report.scenario;
  j["alpha"] = report.params.alpha;
  j["beta"] = report.params.beta;
  j["conventions"] = conventionsJson();
  json vac;
  vac["shell"] = report.vacuum.shell;
  vac["minimumValue"] = report.vacuum.minimumValue;
  vac["mass"] = report.vacuum.mass ? json(*report.vacuum.mass) : json(nullptr);
  j["vacuum"] = vac;
  j["points"] = json::array();
  for (const auto& p : report.points) {
    json e;
    e["x"] = p.x.x;
    e["bare"] = terms(p.densities.bare);
    e["k1Dressed"] = terms(p.densities.k1);
    e["weylDressed"] = terms(p.densities.weyl);
    e["maxStageDelta"] = p.densities.maxStageDelta();
    j["points"].push_back(e);
  }
  j["maxStageDelta"] = report.maxStageDelta();
  j["tolerance"] = report.tolerance;
  j["verdict"] = report.passed() ? "pass" : "fail";
  if (withTimestamp) j["timestamp"] = timestampNow();
  return j.dump(2);
}

}  // namespace cdress
