#include "bcov/assembly.hpp"

#include <cmath>
#include <string>

#include "bcov/orbifold.hpp"

namespace bcov {

BcovCase select_case(int r, int delta) {
  if (r == 10 && delta == 0) return BcovCase::TenZero;
  if (r == 2 && delta == 0) return BcovCase::TwoZero;
  return BcovCase::Generic;
}

CaseExponents case_exponents(int r, int delta, int g) {
  if (g < 0 || g > 20) fail(ErrorCode::InvalidArgument, "genus out of range");
  CaseExponents ce;
  ce.kase = select_case(r, delta);
  ce.g = g;
  const std::int64_t p = std::int64_t{1} << g;
  if (ce.kase == BcovCase::Generic) {
    ce.alpha = Rational(p, 2);
    ce.tauMExponent = p * (p + 1);
    ce.bcovExponent = p * (p + 1) / 2;
    ce.etaExponent = p * (p + 1);
    return ce;
  }
  if (g < 1) fail(ErrorCode::InvalidArgument, "cases (10,0) and (2,0) need g >= 1");
  ce.upsilon = true;
  ce.tauMExponent = (p - 1) * (p + 2);
  ce.bcovExponent = (p / 2 + 1) * (p - 1);
  ce.etaExponent = 2 * ce.bcovExponent;
  if (ce.kase == BcovCase::TenZero) {
    ce.alpha = Rational(p / 2 + 1);
  } else {
    ce.alpha = Rational(p / 2);
    ce.addsSpecial = true;
  }
  return ce;
}

ProductSpec input_form_spec(const BVEvaluation& ev, const CaseExponents& ce) {
  ProductSpec s = ev.productSpec;
  if (ce.addsSpecial) {
    if (!ev.specialTable) fail(ErrorCode::InvalidArgument, "case (2,0) needs the f_Lambda table");
    if (ev.specialWeyl.size() != s.weylVector.size()) fail(ErrorCode::SizeMismatch, "f_Lambda Weyl vector dimension");
    s.table = add(scale(s.table, ce.alpha), *ev.specialTable);
    s.weylVector = boost::rational_cast<double>(ce.alpha) * s.weylVector + ev.specialWeyl;
    s.alpha = 1;
  } else if (ce.alpha.denominator() == 1) {
    s.alpha = ce.alpha.numerator();
  } else {
    s.table = scale(s.table, ce.alpha);
    s.weylVector *= boost::rational_cast<double>(ce.alpha);
    s.alpha = 1;
  }
  return s;
}

RhsComponents rhs_components(const BVEvaluation& ev) {
  const int g = ev.inv.g.value_or(ev.inv.genus_formula());
  RhsComponents c;
  c.exps = case_exponents(ev.inv.r, ev.inv.delta, g);
  if (ev.omega.genus() != g)
    fail(ErrorCode::SizeMismatch, "Siegel point has genus " + std::to_string(ev.omega.genus()) + ", expected " +
                                      std::to_string(g));
  const auto psi = petersson_norm_psi(input_form_spec(ev, c.exps), ev.z);
  c.logPsi = 0.5 * psi.logNormSq;
  c.tailBound = psi.tailBound;
  c.logSiegel = c.exps.upsilon ? log_upsilon_g_norm(ev.omega) : log_chi_g_norm(ev.omega);
  c.logEta = log_petersson_norm_eta_power(ev.tauT, 24);
  return c;
}

RhsValue tau_m_power_rhs(const RhsComponents& c) {
  return {c.logPsi + c.logSiegel, c.exps.tauMExponent, true};
}

RhsValue tau_bcov_power_rhs(const RhsComponents& c) {
  return {2 * c.logPsi + 2 * c.logSiegel + double(c.exps.etaExponent) * c.logEta, c.exps.bcovExponent, true};
}

double composed_bcov_log(const RhsComponents& c) {
  const Rational power(4 * c.exps.bcovExponent, c.exps.tauMExponent);
  return boost::rational_cast<double>(power) * tau_m_power_rhs(c).logValue +
         2.0 * double(c.exps.bcovExponent) * c.logEta;
}

double bcov_ratio_log(const RhsComponents& c) { return tau_bcov_power_rhs(c).logValue - composed_bcov_log(c); }

int theorem82_rho(const Lattice& M) { return two_elementary_invariants(M, true).r + 1; }

double theorem82_constant(const Lattice& M) {
  const auto inv = two_elementary_invariants(M, true);
  const int rho = inv.r + 1;
  return std::ldexp(std::pow(2 * M_PI, 2 * rho), 14 - inv.l);
}

CovolumeResult covolume_check(const Lattice& M, const Eigen::VectorXd& p, double N, double volS) {
  const auto inv = two_elementary_invariants(M, true);
  const Eigen::Index r = M.rank();
  if (p.size() != r) fail(ErrorCode::SizeMismatch, "one pairing per basis vector of M");
  if (!(N > 0) || !(volS > 0)) fail(ErrorCode::NonPositiveKaehler, "Kaehler class must have positive square");
  const Eigen::MatrixXd E = M.gram_d();
  const double implied = p.dot(E.fullPivLu().solve(p));
  const double tol = 1e-9 * std::max(1.0, N);
  if (std::abs(implied - N) > tol)
    fail(ErrorCode::InconsistentKaehler, "pairings imply <g,g> = " + std::to_string(implied));
  const double twoPi = 2 * M_PI;
  if (std::abs(N - 2 * twoPi * twoPi * volS) > tol)
    fail(ErrorCode::InconsistentKaehler, "<g,g> must equal 2 (2 pi)^2 Vol(S)");

  CovolumeResult out;
  out.gram = Eigen::MatrixXd::Zero(r + 1, r + 1);
  out.gram.topLeftCorner(r, r) = std::pow(twoPi, -3) * (p * p.transpose() / N - 0.5 * E);
  out.gram(r, r) = N / (std::pow(twoPi, 3) * 4);
  out.generic = out.gram.fullPivLu().determinant();
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(out.gram).singularValues();
  if (!(sv.minCoeff() > 1e-13 * sv.maxCoeff())) fail(ErrorCode::SingularGram, "L2 Gram matrix is singular");
  const int rho = static_cast<int>(r) + 1;
  out.closed = std::pow(twoPi, -3 * rho + 2) * std::ldexp(1.0, -rho + inv.l) * volS;
  return out;
}

double vol_x(double volS) {
  if (!(volS > 0)) fail(ErrorCode::InvalidArgument, "volume must be positive");
  return volS / (4 * M_PI);
}

HodgeAudit hodge_audit(int r, int l, int delta) {
  if (!valid_k3_triple(r, l, delta)) fail(ErrorCode::InvalidTriple, "not the invariant of a K3 involution");
  int curves = 0, genus = 0;
  if (r == 10 && l == 10 && delta == 0) {
  } else if (r == 10 && l == 8 && delta == 0) {
    curves = 2, genus = 2;
  } else {
    curves = (r - l) / 2 + 1, genus = (22 - r - l) / 2;
  }
  HodgeAudit h;
  h.h11 = 1 + r + 4 * curves;
  h.h21 = 1 + (20 - r) + 4 * genus;
  h.g = 11 - (r + l) / 2;
  h.identityHolds = h.h21 - 4 * h.g == 21 - r;
  h.eulerHolds = 2 * (h.h11 - h.h21) == 12 * (r - 10);
  return h;
}

Lattice random_two_elementary_lorentzian(std::mt19937_64& rng, int maxRank) {
  if (maxRank < 1) fail(ErrorCode::InvalidArgument, "rank must be positive");
  auto uni = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };
  std::vector<Lattice> parts;
  IntMatrix two(1, 1);
  two(0, 0) = 2;
  const int head = maxRank >= 2 ? uni(0, 2) : 2;
  parts.push_back(head == 0 ? standard("U") : head == 1 ? standard("U(2)") : make_lattice(two, "<2>"));
  int rank = static_cast<int>(parts.back().rank());
  const std::vector<Lattice> blocks{standard("A_1"), standard("D_4"), standard("E_7"), standard("E_8"),
                                    rescale(standard("E_8"), 2)};
  for (int tries = 0; tries < 6; ++tries) {
    const auto& b = blocks[uni(0, int(blocks.size()) - 1)];
    if (rank + b.rank() > maxRank) continue;
    parts.push_back(b);
    rank += static_cast<int>(b.rank());
  }
  return direct_sum(parts);
}

SiegelPoint random_siegel_point(int g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  for (;;) {
    Eigen::MatrixXd X(g, g), Y(g, g);
    for (int i = 0; i < g; ++i)
      for (int j = i; j < g; ++j) {
        X(i, j) = X(j, i) = 0.5 * u(rng);
        Y(i, j) = Y(j, i) = i == j ? 3.0 + 0.2 * u(rng) : 0.8 * u(rng);
      }
    if (g > 0 && Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Y).eigenvalues().minCoeff() < 1.0) continue;
    Eigen::MatrixXcd om(g, g);
    om.real() = X;
    om.imag() = Y;
    return SiegelPoint(om);
  }
}

namespace {

struct CaseFixture {
  ProductSpec spec;
  std::optional<FourierTable> special;
  double yMin = 0, yMax = 0;
};

CaseFixture case_fixture(BcovCase kase) {
  CaseFixture f;
  if (kase == BcovCase::Generic) {
    f.spec.L = standard("U");
    f.spec.table = f_lambda_table(direct_sum(standard("U"), standard("U")));
    f.spec.weylVector = Eigen::Vector2d(5, 4);
    f.spec.chamberRef = Eigen::Vector2d(2, 1);
    f.spec.truncation = 5.5;
    f.yMin = 2.2, f.yMax = 3.0;
  } else if (kase == BcovCase::TenZero) {
    f.spec.L = direct_sum(standard("U(2)"), rescale(standard("E_8"), 2));
    f.spec.table = f_lambda_table(direct_sum(standard("U"), f.spec.L));
    f.spec.truncation = 3.5;
    f.yMin = 3.0;
  } else {
    f.spec.L = direct_sum({standard("U(2)"), standard("E_8"), standard("E_8")});
    f.spec.table = f_lambda_table(special_f_lattice("U(2)"));
    f.special = special_f_lambda("U(2)", 3);
    f.spec.truncation = 3.0;
    f.yMin = 5.0;
  }
  if (kase != BcovCase::Generic) f.spec.weylVector = Eigen::VectorXd::Zero(f.spec.L.rank());
  return f;
}

Eigen::VectorXd base_y(Eigen::Index n, double Y) {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  y[0] = Y;
  y[1] = 1.1 * Y;
  for (Eigen::Index i = 2; i < n; ++i) y[i] = 0.01 * double(i + 1) * (i % 3 == 0 ? -1 : 1);
  return y;
}

}  // namespace

Lattice sample_m(BcovCase kase) {
  switch (kase) {
    case BcovCase::Generic:
      return direct_sum({standard("U"), standard("E_8"), standard("E_8")});
    case BcovCase::TenZero:
      return direct_sum(standard("U(2)"), rescale(standard("E_8"), 2));
    case BcovCase::TwoZero:
      return standard("U(2)");
  }
  fail(ErrorCode::UnknownCase, "unknown case");
}

std::vector<BVEvaluation> bcov_samples(BcovCase kase, int count, std::uint64_t seed) {
  const auto f = case_fixture(kase);
  const Lattice M = sample_m(kase);
  const auto inv = two_elementary_invariants(M, true);
  const int g = inv.g.value_or(inv.genus_formula());
  const auto n = f.spec.L.rank();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<BVEvaluation> out;
  for (int i = 0; i < count; ++i) {
    Eigen::VectorXd x(n), y(n);
    for (Eigen::Index k = 0; k < n; ++k) x[k] = u(rng) - 0.5;
    ProductSpec spec = f.spec;
    if (kase == BcovCase::Generic) {
      y[1] = f.yMin + (f.yMax - f.yMin) * u(rng) * 0.5;
      y[0] = y[1] + 0.3 + 0.2 * u(rng);
    } else {
      // common scaling keeps y[1]/y[0] near 1.1, away from the walls of norm -4
      spec.chamberRef = base_y(n, f.yMin);
      y = spec.chamberRef;
      const double s = 1 + 0.2 * u(rng);
      y[0] *= s;
      y[1] *= s * (1 + 0.02 * (u(rng) - 0.5));
    }
    const Complex tauT(u(rng) - 0.5, 0.8 + u(rng));
    auto omega = random_siegel_point(g, rng);
    out.push_back(BVEvaluation{M, inv, TubePoint(spec.L, x, y), std::move(omega), UpperHalfPoint(tauT), spec,
                               f.special, f.special ? Eigen::VectorXd::Zero(n) : Eigen::VectorXd()});
  }
  return out;
}

}  // namespace bcov
