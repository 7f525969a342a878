#include "doctest.h"

#include <cmath>
#include <random>

#include "bcov/assembly.hpp"
#include "bcov/orbifold.hpp"

using namespace bcov;

namespace {

bool throws_code(ErrorCode code, auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

Lattice e8_2() { return rescale(standard("E_8"), 2); }

void check_ratio_constancy(BcovCase kase) {
  std::vector<double> ratios;
  for (const auto& ev : bcov_samples(kase, 5, 7)) {
    const auto c = rhs_components(ev);
    CHECK(c.exps.kase == kase);
    CHECK(std::isfinite(tau_m_power_rhs(c).logValue));
    CHECK(std::isfinite(tau_bcov_power_rhs(c).logValue));
    CHECK(c.tailBound < 1e-6);
    ratios.push_back(bcov_ratio_log(c));
  }
  for (double r : ratios) CHECK(std::abs(std::expm1(r - ratios.front())) < 1e-10);
}

}  // namespace

TEST_CASE("case selection and exponents") {
  CHECK(select_case(10, 0) == BcovCase::TenZero);
  CHECK(select_case(2, 0) == BcovCase::TwoZero);
  CHECK(select_case(10, 1) == BcovCase::Generic);
  CHECK(select_case(18, 0) == BcovCase::Generic);

  for (int g = 0; g <= 10; ++g) {
    const auto c = case_exponents(18, 0, g);
    const std::int64_t p = std::int64_t{1} << g;
    CHECK(c.tauMExponent == p * (p + 1));
    CHECK(2 * c.bcovExponent == c.tauMExponent);
    CHECK(c.etaExponent == p * (p + 1));
    CHECK(c.alpha == Rational(p, 2));
    CHECK(!c.upsilon);
  }
  for (int g = 1; g <= 10; ++g) {
    const std::int64_t p = std::int64_t{1} << g;
    const auto c2 = case_exponents(10, 0, g), c3 = case_exponents(2, 0, g);
    CHECK(c2.tauMExponent == (p - 1) * (p + 2));
    CHECK(c2.bcovExponent == (p / 2 + 1) * (p - 1));
    CHECK(c2.etaExponent == 2 * (p / 2 + 1) * (p - 1));
    // tau_BCOV = tau_M^{-4} ||eta^24||^2 with exponent ratio 4 e_B / e_M = 2
    CHECK(4 * c2.bcovExponent == 2 * c2.tauMExponent);
    CHECK(c2.alpha == Rational(p / 2 + 1));
    CHECK(c3.alpha == Rational(p / 2));
    CHECK(c3.addsSpecial);
    CHECK(c2.upsilon);
    CHECK(c3.upsilon);
  }
  CHECK(throws_code(ErrorCode::InvalidArgument, [] { case_exponents(10, 0, 0); }));
}

TEST_CASE("degenerate table with g = 0") {
  ProductSpec s;
  s.L = standard("U");
  s.table.form = discriminant_form(direct_sum({standard("U"), standard("U")}));
  s.table.coeffs.assign(1, {});
  s.table.kmax = Rational(1000);
  s.weylVector = Eigen::Vector2d::Zero();
  s.chamberRef = Eigen::Vector2d(1, 1);
  TwoElemInvariants inv;
  inv.r = 20;
  inv.l = 2;
  inv.delta = 1;
  inv.g = 0;
  const UpperHalfPoint tauT(Complex(0.1, 1.2));
  const BVEvaluation ev{standard("U"),
                        inv,
                        TubePoint(s.L, Eigen::Vector2d(0.1, 0.2), Eigen::Vector2d(1.0, 1.5)),
                        SiegelPoint(Eigen::MatrixXcd(0, 0)),
                        tauT,
                        s,
                        std::nullopt,
                        {}};
  const auto c = rhs_components(ev);
  CHECK(c.exps.alpha == Rational(1, 2));
  CHECK(tau_m_power_rhs(c).value() == doctest::Approx(1.0));
  CHECK(tau_m_power_rhs(c).exponent == 2);
  CHECK(tau_bcov_power_rhs(c).exponent == 1);
  CHECK(tau_bcov_power_rhs(c).logValue == doctest::Approx(2 * log_petersson_norm_eta_power(tauT, 24)));
}

TEST_CASE("genus mismatch and missing f_Lambda") {
  std::mt19937_64 rng(3);
  auto ev = bcov_samples(BcovCase::Generic, 1, 3).front();
  ev.omega = random_siegel_point(3, rng);
  CHECK(throws_code(ErrorCode::SizeMismatch, [&] { rhs_components(ev); }));

  auto ev3 = bcov_samples(BcovCase::TwoZero, 1, 3).front();
  ev3.specialTable.reset();
  CHECK(throws_code(ErrorCode::InvalidArgument, [&] { rhs_components(ev3); }));
}

TEST_CASE("exponent audits: BCOV side equals tau_M side composed with eta") {
  const auto c = rhs_components(bcov_samples(BcovCase::Generic, 1, 11).front());
  const auto m = tau_m_power_rhs(c), b = tau_bcov_power_rhs(c);
  const std::int64_t p = 4;  // g = 2
  CHECK(b.logValue == doctest::Approx(2 * m.logValue + double(p * (p + 1)) * c.logEta).epsilon(1e-14));
  CHECK(m.exponent == 20);
  CHECK(b.exponent == 10);
}

TEST_CASE("sample lattices have the expected invariants") {
  const auto a = two_elementary_invariants(sample_m(BcovCase::Generic), true);
  CHECK((a.r == 18 && a.l == 0 && a.delta == 0 && a.g == 2));
  const auto b = two_elementary_invariants(sample_m(BcovCase::TenZero), true);
  CHECK((b.r == 10 && b.l == 10 && b.delta == 0 && b.genus_formula() == 1));
  const auto c = two_elementary_invariants(sample_m(BcovCase::TwoZero), true);
  CHECK((c.r == 2 && c.l == 2 && c.delta == 0 && c.g == 9));
}

TEST_CASE("ratio constancy, generic case") { check_ratio_constancy(BcovCase::Generic); }
TEST_CASE("ratio constancy, (10,0)") { check_ratio_constancy(BcovCase::TenZero); }
TEST_CASE("ratio constancy, (2,0)") { check_ratio_constancy(BcovCase::TwoZero); }

TEST_CASE("constant 2^14 (2 pi)^{2 rho} / |A_M|") {
  const double twoPi = 2 * M_PI;
  CHECK(theorem82_constant(standard("U")) == doctest::Approx(16384 * std::pow(twoPi, 6)).epsilon(1e-14));
  CHECK(theorem82_constant(direct_sum({standard("U(2)"), e8_2()})) ==
        doctest::Approx(16 * std::pow(twoPi, 22)).epsilon(1e-14));
  CHECK(theorem82_constant(direct_sum({standard("U"), e8_2()})) ==
        doctest::Approx(64 * std::pow(twoPi, 22)).epsilon(1e-14));
  for (const auto& M : {standard("U"), direct_sum({standard("U"), e8_2()}), direct_sum({standard("U"), standard("A_1")})})
    CHECK(theorem82_rho(M) == M.rank() + 1);
  IntMatrix six(1, 1);
  six(0, 0) = 6;
  CHECK(throws_code(ErrorCode::NotTwoElementary, [&] { theorem82_constant(make_lattice(six)); }));
}

TEST_CASE("covolume closed form") {
  const double twoPi = 2 * M_PI;
  const auto u = covolume_check(standard("U"), Eigen::Vector2d(twoPi, twoPi), 2 * twoPi * twoPi, 1.0);
  CHECK(std::abs(u.generic / u.closed - 1) < 1e-12);

  // Rank 1, M = <2>: det = N / (4 (2 pi)^6) by hand.
  IntMatrix two(1, 1);
  two(0, 0) = 2;
  const double N = 2 * twoPi * twoPi * 0.7;
  const auto r1 = covolume_check(make_lattice(two), Eigen::VectorXd::Constant(1, std::sqrt(2 * N)), N, 0.7);
  CHECK(r1.generic == doctest::Approx(N / (4 * std::pow(twoPi, 6))).epsilon(1e-12));
  CHECK(r1.closed == doctest::Approx(r1.generic).epsilon(1e-12));

  // Pairings (1,1) force <g,g> = 2, which contradicts Vol(S) = 1.
  CHECK(throws_code(ErrorCode::InconsistentKaehler,
                    [&] { covolume_check(standard("U"), Eigen::Vector2d(1, 1), 2 * twoPi * twoPi, 1.0); }));
  CHECK(throws_code(ErrorCode::NonPositiveKaehler,
                    [&] { covolume_check(standard("U"), Eigen::Vector2d(1, -1), -2.0, 1.0); }));

  std::mt19937_64 rng(42);
  std::normal_distribution<double> nd;
  for (int i = 0; i < 20; ++i) {
    const auto M = random_two_elementary_lorentzian(rng, 10);
    const Eigen::MatrixXd E = M.gram_d();
    Eigen::VectorXd c(M.rank());
    double n2 = -1;
    while (n2 <= 0) {
      for (Eigen::Index k = 0; k < c.size(); ++k) c[k] = nd(rng);
      c[0] = std::abs(c[0]) + 3;
      if (M.rank() > 1) c[1] = std::abs(c[1]) + 3;
      n2 = c.dot(E * c);
    }
    const double vol = n2 / (2 * twoPi * twoPi);
    const auto res = covolume_check(M, E * c, n2, vol);
    CHECK(std::abs(res.generic / res.closed - 1) < 1e-10);
  }
}

TEST_CASE("vol_x") {
  CHECK(vol_x(4 * M_PI) == doctest::Approx(1.0));
  CHECK(vol_x(1.0) == doctest::Approx(1 / (4 * M_PI)));
  // Vol(X) = Vol(S) Vol(T) / 2 with Vol(T) = (2 pi)^{-1}
  CHECK(vol_x(2.5) == doctest::Approx(2.5 * (1 / (2 * M_PI)) / 2));
}

TEST_CASE("Hodge audit over all triples") {
  for (const auto& [r, l, d] : k3_triples()) {
    const auto h = hodge_audit(r, l, d);
    const bool enriques = r == 10 && l == 10 && d == 0;
    CHECK(h.eulerHolds);
    if (!enriques) {
      CHECK(h.identityHolds);
      CHECK(h.h11 == 5 + 3 * r - 2 * l);
      CHECK(h.h21 == 65 - 3 * r - 2 * l);
      CHECK(21 - r >= 0);
    } else {
      CHECK(h.h11 == 11);
      CHECK(h.h21 == 11);
    }
    CHECK(chi_orb(borcea_voisin_fixture(r, l, d)) == Rational(2 * (h.h11 - h.h21)));
  }
}
