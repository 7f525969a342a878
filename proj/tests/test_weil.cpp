#include "doctest.h"

#include <cmath>
#include <random>

#include "bcov/weil.hpp"

using namespace bcov;

namespace {

const Complex I(0, 1);

Lattice lam(std::vector<std::string> names) {
  std::vector<Lattice> parts;
  for (const auto& n : names) parts.push_back(standard(n));
  return direct_sum(parts);
}

MetaplecticWord random_word(std::mt19937& rng, int maxLen) {
  std::uniform_int_distribution<int> len(0, maxLen), letter(0, 2);
  std::vector<Gen> w;
  for (int i = len(rng); i > 0; --i) w.push_back(static_cast<Gen>(letter(rng)));
  return MetaplecticWord(w);
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("metaplectic words: matrices, action and branch") {
  auto w = MetaplecticWord::parse("STtSTT");
  Mat2 expect = Mat2::Identity();
  Mat2 s, t, ti;
  s << 0, -1, 1, 0;
  t << 1, 1, 0, 1;
  ti << 1, -1, 0, 1;
  for (Mat2 m : {s, t, ti, s, t, t}) expect = expect * m;
  CHECK(w.matrix() == expect);
  CHECK(w.matrix().determinant() == 1);
  CHECK(w.str() == "STtSTT");

  const Complex tau(0.31, 0.77);
  const Mat2& m = w.matrix();
  const Complex ctd = double(m(1, 0)) * tau + double(m(1, 1));
  const Complex phi = w.branch(tau);
  CHECK(std::abs(phi * phi - ctd) < 1e-12);
  CHECK(std::abs(w.act(tau) - (double(m(0, 0)) * tau + double(m(0, 1))) / ctd) < 1e-12);

  // S^2 = (-I, i); S^8 = identity with trivial branch.
  auto s2 = MetaplecticWord::parse("SS");
  CHECK(std::abs(s2.branch(tau) - I) < 1e-14);
  auto s8 = MetaplecticWord::parse("SSSSSSSS");
  CHECK(s8.matrix() == Mat2::Identity());
  CHECK(std::abs(s8.branch(tau) - 1.0) < 1e-14);

  // The inverse cancels both matrix and branch.
  auto prod = w * w.inverse();
  CHECK(prod.matrix() == Mat2::Identity());
  CHECK(std::abs(prod.branch(tau) - 1.0) < 1e-12);
}

TEST_CASE("Weil generators: trivial form, unitarity, relations") {
  // Trivial A: rho(S) is the scalar e((b- - b+)/8).
  auto [t0, s0] = weil_generators(discriminant_form(lam({"U", "U"})), {2, 2});
  REQUIRE(s0.rows() == 1);
  CHECK(std::abs(t0(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(s0(0, 0) - 1.0) < 1e-15);
  auto [t1, s1] = weil_generators(discriminant_form(lam({"U", "U", "E8"})), {2, 10});
  CHECK(std::abs(s1(0, 0) - std::exp(I * 2.0 * M_PI * 8.0 / 8.0)) < 1e-14);
  auto [t2, s2] = weil_generators(discriminant_form(lam({"U", "U", "A1"})), {2, 3});
  CHECK(std::abs(s2(0, 0) * std::sqrt(2.0) - std::exp(I * 2.0 * M_PI / 8.0)) < 1e-14);

  for (auto names : {std::vector<std::string>{"A1"}, {"U(2)"}, {"D4"}, {"A2"}, {"U(3)", "A1"}}) {
    const Lattice L = lam(names);
    const auto sig = signature(L);
    WeilRepresentation rho(discriminant_form(L), sig);
    const Eigen::MatrixXcd S = rho.matrix(MetaplecticWord::parse("S"));
    const Eigen::MatrixXcd T = rho.matrix(MetaplecticWord::parse("T"));
    const auto n = S.rows();
    const Eigen::MatrixXcd Id = Eigen::MatrixXcd::Identity(n, n);
    CHECK(max_abs(S * S.adjoint() - Id) < 1e-12);
    CHECK(max_abs(T * T.adjoint() - Id) < 1e-12);
    // (ST)^3 = S^2
    const Eigen::MatrixXcd ST = S * T;
    CHECK(max_abs(ST * ST * ST - S * S) < 1e-12);
    // S^2 = e((b- - b+)/4) (gamma -> -gamma); S^8 = 1
    const Eigen::MatrixXcd S2 = S * S;
    const Complex z = std::exp(I * 2.0 * M_PI * double(sig.second - sig.first) / 4.0);
    const auto& df = rho.form();
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index d = 0; d < n; ++d) {
        const Complex want = static_cast<std::size_t>(d) == df.neg(a) ? z : Complex(0);
        CHECK(std::abs(S2(d, a) - want) < 1e-12);
      }
    const Eigen::MatrixXcd S4 = S2 * S2;
    CHECK(max_abs(S4 * S4 - Id) < 1e-12);
  }
}

TEST_CASE("Weil representation: random word products") {
  std::mt19937 rng(2024);
  for (auto names : {std::vector<std::string>{"U(2)"}, {"A1", "A1", "A1"}, {"U(4)"}}) {
    const Lattice L = lam(names);
    WeilRepresentation rho(discriminant_form(L), signature(L));
    for (int trial = 0; trial < 20; ++trial) {
      auto w1 = random_word(rng, 6), w2 = random_word(rng, 6);
      CHECK(max_abs(rho.matrix(w1) * rho.matrix(w2) - rho.matrix(w1 * w2)) < 1e-10);
    }
  }
}

TEST_CASE("coset representatives of Gamma0(4)") {
  const auto reps = coset_reps_gamma0_4();
  REQUIRE(reps.size() == 6);
  CHECK(reps[0].word().empty());
  int pairs = 0;
  for (std::size_t i = 0; i < reps.size(); ++i)
    for (std::size_t j = i + 1; j < reps.size(); ++j) {
      const Mat2& a = reps[i].matrix();
      const Mat2& b = reps[j].matrix();
      Mat2 binv;
      binv << b(1, 1), -b(0, 1), -b(1, 0), b(0, 0);
      CHECK_FALSE(in_gamma0(a * binv, 4));
      ++pairs;
    }
  CHECK(pairs == 15);
  // Saturation: every generator multiple lands in a known coset.
  for (const auto& r : reps)
    for (const char* g : {"S", "T", "t"}) {
      const Mat2 m = (r * MetaplecticWord::parse(g)).matrix();
      int hits = 0;
      for (const auto& s : reps) {
        const Mat2& b = s.matrix();
        Mat2 binv;
        binv << b(1, 1), -b(0, 1), -b(1, 0), b(0, 0);
        hits += in_gamma0(m * binv, 4);
      }
      CHECK(hits == 1);
    }
}

TEST_CASE("F_Lambda evaluator is modular of weight (4 - r)/2") {
  const Complex taus[] = {Complex(0.3, 1.5), Complex(-0.21, 0.93), Complex(0.11, 1.13)};
  for (auto names : {std::vector<std::string>{"U", "U"}, {"U", "U", "E8"}, {"U", "U", "A1"}, {"U", "U(2)", "A1"},
                     {"U", "U(2)", "D4"}}) {
    FLambdaEvaluator F(lam(names));
    for (Complex tau : taus) {
      const double scale = std::max(1.0, F(tau).cwiseAbs().maxCoeff());
      CHECK(verify_vvmf(F, MetaplecticWord(), tau) == 0.0);
      CHECK(verify_vvmf(F, MetaplecticWord::parse("T"), tau) / scale < 1e-8);
      CHECK(verify_vvmf(F, MetaplecticWord::parse("S"), tau) / scale < 1e-6);
      CHECK(verify_vvmf(F, MetaplecticWord::parse("STtS"), tau) / scale < 1e-6);
    }
  }
}

namespace {

Lattice enriques_lambda() { return direct_sum({standard("U(2)"), standard("U"), rescale(standard("E8"), 2)}); }

double coeff(const FourierTable& t, std::size_t g, std::int64_t num, std::int64_t den) {
  return t.coeff(g, Rational(num, den)).real();
}

}  // namespace

TEST_CASE("F_Lambda table for U+U: integrality, reality, regression values") {
  const auto t = f_lambda_table(lam({"U", "U"}));
  REQUIRE(t.components() == 1);
  CHECK(t.alpha == 2);
  CHECK(t.max_imag < 1e-6);
  CHECK(integrality_residual(t, Rational(t.alpha)) < 1e-6);
  // q^{-1} + 120 + 196884 q + ... (j - 624)
  CHECK(coeff(t, 0, -1, 1) == doctest::Approx(1).epsilon(1e-12));
  CHECK(coeff(t, 0, 0, 1) == doctest::Approx(120).epsilon(1e-12));
  CHECK(coeff(t, 0, 1, 1) == doctest::Approx(196884).epsilon(1e-12));
  CHECK(coeff(t, 0, 2, 1) == doctest::Approx(21493760).epsilon(1e-12));
  CHECK(coeff(t, 0, 6, 1) == doctest::Approx(4252023300096.0).epsilon(1e-12));
  CHECK(t.weight_w() == doctest::Approx(60));
  for (const auto& [k, b] : t.bounds[0]) CHECK(b < 1e-8);
  CHECK_THROWS_AS(t.coeff(0, Rational(7)), Error);
}

TEST_CASE("F_Lambda table for U+U+A1 (odd rank)") {
  const auto t = f_lambda_table(lam({"U", "U", "A1"}));
  REQUIRE(t.components() == 2);
  CHECK(t.max_imag < 1e-6);
  CHECK(integrality_residual(t, Rational(t.alpha)) < 1e-6);
  CHECK(coeff(t, 0, -1, 1) == doctest::Approx(1));
  CHECK(coeff(t, 0, 0, 1) == doctest::Approx(110));
  CHECK(coeff(t, 0, 1, 1) == doctest::Approx(132408));
  CHECK(coeff(t, 1, -1, 4) == doctest::Approx(4));
  CHECK(coeff(t, 1, 3, 4) == doctest::Approx(32128));
  CHECK(coeff(t, 1, 7, 4) == doctest::Approx(4449276));
  // Supported exponents lie in Z + q(gamma)/2.
  for (std::size_t g = 0; g < t.components(); ++g)
    for (const auto& [k, c] : t.coeffs[g]) {
      const Rational d = k - t.form.q(g) / Rational(2);
      CHECK(d.denominator() == 1);
    }
}

TEST_CASE("Enriques F_Lambda: weight 4") {
  const auto t = f_lambda_table(enriques_lambda());
  REQUIRE(t.components() == 1024);
  CHECK(t.alpha == 1);
  CHECK(t.max_imag < 1e-6);
  CHECK(integrality_residual(t, Rational(t.alpha)) < 1e-6);
  CHECK(coeff(t, 0, 0, 1) == doctest::Approx(8));
  CHECK(t.alpha * t.weight_w() == doctest::Approx(4.0 * t.alpha));
}

TEST_CASE("F_Lambda extraction is stable across horocycles and sample counts") {
  const Lattice L = lam({"U", "U", "A1"});
  FLambdaOptions a, b, c;
  a.kMax = Rational(4);
  b.kMax = Rational(4);
  b.sampleY = 3.0;
  c.kMax = Rational(4);
  c.nSamples = 512;
  const auto ta = f_lambda_table(L, a), tb = f_lambda_table(L, b), tc = f_lambda_table(L, c);
  for (std::size_t g = 0; g < ta.components(); ++g)
    for (const auto& [k, x] : ta.coeffs[g]) {
      const double tol = ta.bounds[g].at(k) + tb.bounds[g].at(k) + 1e-9 * std::max(1.0, std::abs(x.real()));
      CHECK(std::abs(x - tb.coeff(g, k)) <= tol);
      CHECK(std::abs(x - tc.coeff(g, k)) <= tol);
    }
}

TEST_CASE("F_Lambda rejects lattices of level not dividing 4") {
  CHECK_THROWS_AS(FLambdaEvaluator(lam({"U", "U(3)"})), Error);
  CHECK_THROWS_AS(f_lambda_table(lam({"U", "U(3)"})), Error);
  CHECK_THROWS_AS(f_lambda_table(lam({"U", "A1"})), Error);
}

TEST_CASE("principal part depth is one for small lattices") {
  for (auto L : {lam({"U", "U"}), lam({"U", "U", "A1"}), lam({"U", "U(4)"})}) {
    FLambdaOptions opt;
    opt.principalDepth = 4;
    opt.nSamples = 64;
    opt.sampleY = 1.5;
    opt.kMax = Rational(3);
    const auto t = f_lambda_table(L, opt);
    for (std::size_t g = 0; g < t.components(); ++g)
      for (const auto& [k, c] : t.coeffs[g])
        if (k < Rational(-1)) CHECK(std::abs(c) < 1e-8);
    CHECK(std::abs(t.coeff(0, Rational(-1)) - 1.0) < 1e-8);
  }
}

TEST_CASE("rank-20 Lambda has a q^-2 term") {
  FLambdaOptions opt;
  opt.kMax = Rational(2);
  const auto t = f_lambda_table(lam({"U", "U", "E8", "E8"}), opt);
  CHECK(t.alpha == 512);
  CHECK(coeff(t, 0, -2, 1) == doctest::Approx(-1.0 / 16).epsilon(1e-10));
  CHECK(coeff(t, 0, -1, 1) == doctest::Approx(1).epsilon(1e-10));
  CHECK(coeff(t, 0, 0, 1) == doctest::Approx(-8200.5).epsilon(1e-10));
  CHECK(integrality_residual(t, Rational(t.alpha)) < 1e-6);
}

TEST_CASE("symmetry c(gamma) = c(-gamma) and modularity of the truncated table") {
  const Lattice L = lam({"U", "U(4)"});
  const auto t = f_lambda_table(L);
  REQUIRE(t.components() == 16);
  for (std::size_t g = 0; g < 16; ++g)
    for (const auto& [k, c] : t.coeffs[g]) CHECK(std::abs(c - t.coeff(t.form.neg(g), k)) < 1e-8 * std::max(1.0, std::abs(c)));
  CHECK(t.max_imag < 1e-6);

  FLambdaOptions opt;
  opt.kMax = Rational(10);
  const auto uu = f_lambda_table(lam({"U", "U"}), opt);
  WeilRepresentation rho(uu.form, {2, 2});
  CHECK(verify_vvmf(uu, rho, MetaplecticWord(), Complex(0.2, 1.1), 0.0) == 0.0);
  CHECK(verify_vvmf(uu, rho, MetaplecticWord::parse("T"), Complex(0.3, 1.5), 0.0) < 1e-8);
  CHECK(verify_vvmf(uu, rho, MetaplecticWord::parse("S"), I, 0.0) < 1e-6);
}

TEST_CASE("F_Lambda does not depend on the coset representatives") {
  for (auto L : {lam({"U", "U", "A1"}), lam({"U", "U(4)"})}) {
    FLambdaEvaluator F(L), G(L);
    std::vector<MetaplecticWord> alt;
    const auto h1 = MetaplecticWord::parse("T"), h2 = MetaplecticWord::parse("STTTTS"), h3 = MetaplecticWord::parse("tt");
    int i = 0;
    for (const auto& c : F.cosets()) {
      const auto& h = (i % 3 == 0) ? h1 : (i % 3 == 1) ? h2 : h3;
      alt.push_back(h * c);
      ++i;
    }
    G.set_cosets(alt);
    for (Complex tau : {Complex(0.1, 1.2), Complex(-0.4, 0.8)}) {
      const double diff = (F(tau) - G(tau)).cwiseAbs().maxCoeff();
      CHECK(diff < 1e-9 * std::max(1.0, F(tau).cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("explicit f for M = U and M = U(2)") {
  const auto fu = special_f_lambda("U", 2);
  REQUIRE(fu.components() == 1);
  CHECK(coeff(fu, 0, -1, 1) == doctest::Approx(1));
  CHECK(coeff(fu, 0, 0, 1) == doctest::Approx(264));
  CHECK_THROWS_AS(special_f_lambda("E8", 2), Error);

  const auto f2 = special_f_lambda("U(2)", 3);
  REQUIRE(f2.components() == 4);
  // e_0 has the extra q^{-1} A(q) term; the other q = 0 classes do not.
  std::size_t other = 0;
  for (std::size_t g = 1; g < 4; ++g)
    if (f2.form.q(g).numerator() == 0) other = g;
  REQUIRE(other != 0);
  CHECK(coeff(f2, 0, -1, 1) == doctest::Approx(1));
  CHECK(coeff(f2, other, -1, 1) == doctest::Approx(0));
  CHECK(coeff(f2, 0, 0, 1) - coeff(f2, other, 0, 1) == doctest::Approx(8));
  CHECK(coeff(f2, other, 0, 1) == doctest::Approx(128));

  // Both are modular of weight -8 for the Weil representation of Lambda.
  for (const char* which : {"U", "U(2)"}) {
    const auto f = special_f_lambda(which, 40);
    const Lattice L = special_f_lattice(which);
    WeilRepresentation rho(f.form, signature(L));
    for (Complex tau : {Complex(0.05, 1.05), Complex(-0.3, 1.2)}) {
      const double scale = f.eval(tau).cwiseAbs().maxCoeff();
      CHECK(verify_vvmf(f, rho, MetaplecticWord::parse("T"), tau, -8) / scale < 1e-10);
      CHECK(verify_vvmf(f, rho, MetaplecticWord::parse("S"), tau, -8) / scale < 1e-8);
    }
  }
}
