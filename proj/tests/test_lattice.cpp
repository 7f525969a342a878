#include "doctest.h"

#include <random>

#include "bcov/lattice.hpp"

using namespace bcov;

namespace {

// Independent oracle: floating eigenvalue signs.
std::pair<int, int> eigen_signature(const Lattice& L) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L.gram_d());
  int p = 0, n = 0;
  for (double v : es.eigenvalues()) (v > 0 ? p : n)++;
  return {p, n};
}

Lattice random_even_lattice(std::mt19937& rng, int n) {
  std::uniform_int_distribution<int> off(-3, 3), diag(-3, 3);
  for (;;) {
    IntMatrix g(n, n);
    for (int i = 0; i < n; ++i) {
      g(i, i) = 2 * diag(rng);
      for (int j = i + 1; j < n; ++j) g(i, j) = g(j, i) = off(rng);
    }
    try {
      return make_lattice(g);
    } catch (const Error&) {
    }
  }
}

}  // namespace

TEST_CASE("make_lattice validation") {
  IntMatrix u(2, 2);
  u << 0, 1, 1, 0;
  CHECK(make_lattice(u).rank() == 2);
  IntMatrix one(1, 1);
  one << 2;
  CHECK(make_lattice(one).rank() == 1);
  IntMatrix deg(2, 2);
  deg << 1, 1, 1, 1;
  CHECK_THROWS_AS(make_lattice(deg), Error);
  try {
    make_lattice(deg);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Degenerate);
  }
  IntMatrix ns(2, 2);
  ns << 0, 1, 2, 0;
  try {
    make_lattice(ns);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotSymmetric);
  }
  Eigen::MatrixXd frac(1, 1);
  frac << 0.5;
  try {
    make_lattice(frac);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonInteger);
  }
}

TEST_CASE("standard lattices") {
  const Lattice e8 = standard("E8");
  CHECK(e8.rank() == 8);
  CHECK(determinant(e8) == 1);
  CHECK(signature(e8) == std::make_pair(0, 8));
  const Lattice k3 = standard("K3");
  CHECK(k3.rank() == 22);
  CHECK(signature(k3) == std::make_pair(3, 19));
  CHECK(eigen_signature(k3) == std::make_pair(3, 19));
  CHECK(standard("A_1").gram(0, 0) == -2);
  CHECK(determinant(standard("A_4")) == 5);
  CHECK(std::abs(determinant(standard("D_6"))) == 4);
  CHECK(std::abs(determinant(standard("E_6"))) == 3);
  CHECK(std::abs(determinant(standard("E_7"))) == 2);
  CHECK(standard("U(3)").gram(0, 1) == 3);
  CHECK_THROWS_AS(standard("F4"), Error);
}

TEST_CASE("rescale and direct sum") {
  const Lattice u = standard("U");
  const Lattice u2 = rescale(u, 2);
  CHECK(u2.gram(0, 1) == 2);
  CHECK(u2.gram(0, 0) == 0);
  CHECK_THROWS_AS(rescale(u, 0), Error);
  const Lattice ue8 = direct_sum(u, standard("E8"));
  CHECK(ue8.rank() == 10);
  CHECK(signature(ue8) == std::make_pair(1, 9));
  const Lattice enriques = direct_sum(rescale(standard("E8"), 2), u2);
  CHECK(std::abs(determinant(enriques)) == 1024);
  const Lattice big = direct_sum({u, u, standard("E8"), standard("E8")});
  CHECK(signature(big) == std::make_pair(2, 18));
  CHECK(eigen_signature(big) == std::make_pair(2, 18));
}

TEST_CASE("discriminant forms") {
  CHECK(discriminant_form(standard("E8")).size() == 1);
  const auto du2 = discriminant_form(standard("U(2)"));
  CHECK(du2.divisors() == std::vector<std::int64_t>{2, 2});
  for (std::size_t i = 0; i < du2.size(); ++i) CHECK(du2.q(i).denominator() == 1);
  const auto da1 = discriminant_form(standard("A1"));
  REQUIRE(da1.size() == 2);
  CHECK(da1.q(1) == Rational(3, 2));  // -1/2 mod 2
  IntMatrix odd(1, 1);
  odd << 1;
  CHECK_THROWS_AS(discriminant_form(make_lattice(odd)), Error);
}

TEST_CASE("discriminant form properties on random even lattices") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 5;
    const Lattice L = random_even_lattice(rng, n);
    const auto df = discriminant_form(L);
    CHECK(static_cast<std::int64_t>(df.size()) == std::abs(determinant(L)));
    for (std::size_t i = 1; i < df.divisors().size(); ++i) CHECK(df.divisors()[i] % df.divisors()[i - 1] == 0);
    CHECK(signature(L) == eigen_signature(L));
    if (df.size() > 400) continue;
    for (std::size_t a = 0; a < df.size(); ++a) {
      CHECK(df.q(a) == df.q(df.neg(a)));
      // q is the norm of the lift
      const auto x = df.lift(a);
      Rational s = 0;
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) s += x[r] * x[c] * L.gram(r, c);
      CHECK(mod_rational(s, 2) == df.q(a));
      for (std::size_t c = 0; c < df.size(); c += 3) {
        const Rational lhs = df.b(a, c);
        const Rational rhs = mod_rational((df.q(df.add(a, c)) - df.q(a) - df.q(c)) / 2, 1);
        CHECK(lhs == rhs);
        CHECK(df.b(a, c) == df.b(c, a));
      }
    }
    // L(-1) negates q
    const auto dn = discriminant_form(rescale(L, -1));
    CHECK(dn.size() == df.size());
    const auto neg = negate(df);
    for (std::size_t a = 0; a < std::min<std::size_t>(df.size(), 50); ++a) CHECK(neg.q(a) == mod_rational(-df.q(a), 2));
  }
}

TEST_CASE("direct sum signature additivity and associativity") {
  std::mt19937 rng(11);
  for (int t = 0; t < 10; ++t) {
    Lattice a = random_even_lattice(rng, 2), b = random_even_lattice(rng, 3), c = random_even_lattice(rng, 1);
    auto sa = signature(a), sb = signature(b);
    auto sab = signature(direct_sum(a, b));
    CHECK(sab.first == sa.first + sb.first);
    CHECK(sab.second == sa.second + sb.second);
    CHECK(direct_sum(direct_sum(a, b), c).gram == direct_sum(a, direct_sum(b, c)).gram);
  }
}

TEST_CASE("two-elementary invariants") {
  const Lattice u = standard("U");
  auto iu = two_elementary_invariants(u, true);
  CHECK(iu.r == 2);
  CHECK(iu.l == 0);
  CHECK(iu.delta == 0);
  CHECK(iu.g == 10);
  CHECK(iu.k == 1);

  const Lattice e82 = rescale(standard("E8"), 2);
  auto i2 = two_elementary_invariants(direct_sum(u, e82), true);
  CHECK(i2.r == 10);
  CHECK(i2.l == 8);
  CHECK(i2.delta == 0);
  CHECK(i2.g == 2);
  CHECK(i2.exceptional == Exceptional::TwoElliptic);

  auto ie = two_elementary_invariants(direct_sum(standard("U(2)"), e82), true);
  CHECK(ie.r == 10);
  CHECK(ie.l == 10);
  CHECK(ie.delta == 0);
  CHECK(ie.exceptional == Exceptional::Enriques);
  CHECK(!ie.g.has_value());
  CHECK(!ie.k.has_value());

  auto ia = two_elementary_invariants(direct_sum(u, standard("A1")), true);
  CHECK(ia.delta == 1);
  CHECK(ia.l == 1);

  CHECK_THROWS_AS(two_elementary_invariants(standard("A2")), Error);
  CHECK_THROWS_AS(two_elementary_invariants(standard("E8"), true), Error);  // signature (0,8)
}

TEST_CASE("fixed-locus arithmetic identities") {
  const Lattice u = standard("U"), a1 = standard("A1"), e8 = standard("E8");
  std::vector<Lattice> ms = {u, direct_sum(u, a1), direct_sum({u, a1, a1}), direct_sum(u, e8),
                             direct_sum({u, e8, a1}), direct_sum({u, e8, e8}), standard("U(2)")};
  for (const auto& m : ms) {
    auto inv = two_elementary_invariants(m, true);
    if (inv.exceptional != Exceptional::None) continue;
    REQUIRE(inv.g.has_value());
    CHECK(*inv.g + *inv.k == 11 - inv.l);
    CHECK(2 * (1 - *inv.g) + 2 * *inv.k == 2 * inv.r - 20);
  }
}
