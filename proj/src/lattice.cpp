#include "bcov/lattice.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include <boost/multiprecision/cpp_int.hpp>

namespace bcov {

using BigInt = mp::cpp_int;
using BigRat = mp::cpp_rational;

namespace {

std::vector<std::vector<BigInt>> to_big(const IntMatrix& g) {
  std::vector<std::vector<BigInt>> a(g.rows(), std::vector<BigInt>(g.cols()));
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) a[i][j] = g(i, j);
  return a;
}

IntMatrix cartan_negative(const std::vector<std::pair<int, int>>& edges, int n) {
  IntMatrix g = IntMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) g(i, i) = -2;
  for (auto [a, b] : edges) g(a, b) = g(b, a) = 1;
  return g;
}

std::vector<std::pair<int, int>> chain(int n) {
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return e;
}

std::string normalize_name(std::string_view name) {
  std::string s;
  for (char c : name)
    if (c != '_' && c != ' ') s.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  return s;
}

}  // namespace

Rational mod_rational(const Rational& x, std::int64_t m) {
  // x mod m into [0, m)
  const std::int64_t den = x.denominator();
  std::int64_t num = x.numerator() % (m * den);
  if (num < 0) num += m * den;
  return Rational(num, den);
}

bool Lattice::is_even() const {
  for (Eigen::Index i = 0; i < gram.rows(); ++i)
    if (gram(i, i) % 2 != 0) return false;
  return true;
}

Lattice make_lattice(const IntMatrix& gram, std::string label) {
  if (gram.rows() != gram.cols()) fail(ErrorCode::InvalidArgument, "Gram matrix must be square");
  if (gram != gram.transpose()) fail(ErrorCode::NotSymmetric, "Gram matrix is not symmetric");
  Lattice L{gram, std::move(label)};
  if (gram.rows() > 0 && determinant(L) == 0) fail(ErrorCode::Degenerate, "Gram matrix is degenerate");
  return L;
}

Lattice make_lattice(const Eigen::MatrixXd& gram, std::string label) {
  IntMatrix g(gram.rows(), gram.cols());
  for (Eigen::Index i = 0; i < gram.rows(); ++i)
    for (Eigen::Index j = 0; j < gram.cols(); ++j) {
      double v = gram(i, j);
      if (!std::isfinite(v) || v != std::round(v)) fail(ErrorCode::NonInteger, "Gram entries must be integers");
      g(i, j) = static_cast<std::int64_t>(v);
    }
  return make_lattice(g, std::move(label));
}

Lattice standard(std::string_view name, int param) {
  std::string s = normalize_name(name);
  // Accept forms like U(2), A1, D4, E8.
  if (s.size() > 3 && s[0] == 'U' && s[1] == '(' && s.back() == ')') {
    param = std::stoi(s.substr(2, s.size() - 3));
    s = "UN";
  } else if (s.size() > 1 && (s[0] == 'A' || s[0] == 'D' || s[0] == 'E') &&
             std::all_of(s.begin() + 1, s.end(), ::isdigit)) {
    param = std::stoi(s.substr(1));
    s = s.substr(0, 1);
  }
  IntMatrix g;
  if (s == "U") {
    g.resize(2, 2);
    g << 0, 1, 1, 0;
    return make_lattice(g, "U");
  }
  if (s == "UN") {
    if (param == 0) fail(ErrorCode::ZeroScale, "U(N) needs N != 0");
    g.resize(2, 2);
    g << 0, param, param, 0;
    return make_lattice(g, "U(" + std::to_string(param) + ")");
  }
  if (s == "A" && param >= 1) return make_lattice(cartan_negative(chain(param), param), "A_" + std::to_string(param));
  if (s == "D" && param >= 4) {
    auto e = chain(param - 1);
    e.emplace_back(param - 3, param - 1);
    return make_lattice(cartan_negative(e, param), "D_" + std::to_string(param));
  }
  if (s == "E" && param >= 6 && param <= 8) {
    // Bourbaki labelling: 1-3-4-5-...; 2 attached to 4.
    std::vector<std::pair<int, int>> e{{0, 2}, {1, 3}, {2, 3}};
    for (int i = 3; i + 1 < param; ++i) e.emplace_back(i, i + 1);
    return make_lattice(cartan_negative(e, param), "E_" + std::to_string(param));
  }
  if (s == "K3") {
    Lattice u = standard("U"), e8 = standard("E8");
    Lattice k3 = direct_sum({u, u, u, e8, e8});
    k3.label = "K3";
    return k3;
  }
  fail(ErrorCode::UnknownName, "unknown lattice name: " + std::string(name));
}

Lattice rescale(const Lattice& L, std::int64_t k) {
  if (k == 0) fail(ErrorCode::ZeroScale, "rescale factor must be nonzero");
  return Lattice{L.gram * k, L.label.empty() ? std::string{} : L.label + "(" + std::to_string(k) + ")"};
}

Lattice direct_sum(const Lattice& a, const Lattice& b) {
  const Eigen::Index n = a.rank(), m = b.rank();
  IntMatrix g = IntMatrix::Zero(n + m, n + m);
  g.topLeftCorner(n, n) = a.gram;
  g.bottomRightCorner(m, m) = b.gram;
  std::string label = a.label.empty() || b.label.empty() ? std::string{} : a.label + "+" + b.label;
  return Lattice{g, label};
}

Lattice direct_sum(const std::vector<Lattice>& parts) {
  if (parts.empty()) return Lattice{IntMatrix(0, 0), {}};
  Lattice acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = direct_sum(acc, parts[i]);
  return acc;
}

std::int64_t determinant(const Lattice& L) {
  // Bareiss fraction-free elimination.
  auto a = to_big(L.gram);
  const std::size_t n = a.size();
  if (n == 0) return 1;
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  BigInt d = a[n - 1][n - 1] * sign;
  return d.convert_to<std::int64_t>();
}

std::pair<int, int> signature(const Lattice& L) {
  const std::size_t n = static_cast<std::size_t>(L.rank());
  std::vector<std::vector<BigRat>> a(n, std::vector<BigRat>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = BigRat(L.gram(i, j));
  int pos = 0, neg = 0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a[p][p] == 0) ++p;
    if (p == n) {
      // All remaining diagonal entries vanish: replace e_i by e_i + e_j.
      std::size_t i = n, j = n;
      for (std::size_t r = k; r < n && i == n; ++r)
        for (std::size_t c = r + 1; c < n; ++c)
          if (a[r][c] != 0) {
            i = r;
            j = c;
            break;
          }
      if (i == n) break;  // degenerate remainder; excluded by construction
      for (std::size_t c = 0; c < n; ++c) a[i][c] += a[j][c];
      for (std::size_t r = 0; r < n; ++r) a[r][i] += a[r][j];
      p = i;
    }
    if (p != k) {
      std::swap(a[p], a[k]);
      for (auto& row : a) std::swap(row[p], row[k]);
    }
    const BigRat piv = a[k][k];
    (piv > 0 ? pos : neg)++;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a[i][k] == 0) continue;
      const BigRat f = a[i][k] / piv;
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
    }
    for (std::size_t j = k + 1; j < n; ++j) a[k][j] = 0;
    for (std::size_t i = k + 1; i < n; ++i) a[i][k] = 0;
  }
  return {pos, neg};
}

DiscriminantForm::DiscriminantForm(std::vector<std::int64_t> divisors, std::vector<RationalVector> lifts,
                                   std::vector<RationalVector> gen_gram)
    : divisors_(std::move(divisors)), lifts_(std::move(lifts)), gen_gram_(std::move(gen_gram)) {
  size_ = 1;
  for (auto d : divisors_) size_ *= static_cast<std::size_t>(d);
}

std::vector<std::int64_t> DiscriminantForm::element(std::size_t index) const {
  std::vector<std::int64_t> a(divisors_.size());
  for (std::size_t i = 0; i < divisors_.size(); ++i) {
    a[i] = static_cast<std::int64_t>(index % divisors_[i]);
    index /= divisors_[i];
  }
  return a;
}

std::size_t DiscriminantForm::index(const std::vector<std::int64_t>& coeffs) const {
  if (coeffs.size() != divisors_.size()) fail(ErrorCode::SizeMismatch, "coefficient vector length");
  std::size_t idx = 0, radix = 1;
  for (std::size_t i = 0; i < divisors_.size(); ++i) {
    std::int64_t a = coeffs[i] % divisors_[i];
    if (a < 0) a += divisors_[i];
    idx += static_cast<std::size_t>(a) * radix;
    radix *= divisors_[i];
  }
  return idx;
}

std::size_t DiscriminantForm::add(std::size_t a, std::size_t c) const {
  auto x = element(a), y = element(c);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
  return index(x);
}

std::size_t DiscriminantForm::neg(std::size_t a) const {
  auto x = element(a);
  for (auto& v : x) v = -v;
  return index(x);
}

Rational DiscriminantForm::q(std::size_t a) const {
  auto x = element(a);
  Rational s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!x[i]) continue;
    s += gen_gram_[i][i] * (x[i] * x[i]);
    for (std::size_t j = i + 1; j < x.size(); ++j)
      if (x[j]) s += gen_gram_[i][j] * (2 * x[i] * x[j]);
    s = mod_rational(s, 2);
  }
  return mod_rational(s, 2);
}

Rational DiscriminantForm::b(std::size_t a, std::size_t c) const {
  auto x = element(a), y = element(c);
  Rational s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!x[i]) continue;
    for (std::size_t j = 0; j < y.size(); ++j)
      if (y[j]) s = mod_rational(s + gen_gram_[i][j] * (x[i] * y[j]), 1);
  }
  return mod_rational(s, 1);
}

RationalVector DiscriminantForm::lift(std::size_t a) const {
  auto x = element(a);
  const std::size_t n = lifts_.empty() ? 0 : lifts_.front().size();
  RationalVector v(n, Rational(0));
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t c = 0; c < n; ++c) v[c] += lifts_[i][c] * x[i];
  return v;
}

DiscriminantForm discriminant_form(const Lattice& L) {
  if (!L.is_even()) fail(ErrorCode::OddLattice, "discriminant form needs an even lattice");
  const std::size_t n = static_cast<std::size_t>(L.rank());
  auto a = to_big(L.gram);
  std::vector<std::vector<BigInt>> v(n, std::vector<BigInt>(n, 0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1;

  auto col_op = [&](std::size_t dst, std::size_t src, const BigInt& f) {  // col dst -= f * col src
    for (std::size_t r = 0; r < n; ++r) {
      a[r][dst] -= f * a[r][src];
      v[r][dst] -= f * v[r][src];
    }
  };
  auto col_swap = [&](std::size_t i, std::size_t j) {
    for (std::size_t r = 0; r < n; ++r) {
      std::swap(a[r][i], a[r][j]);
      std::swap(v[r][i], v[r][j]);
    }
  };

  for (std::size_t t = 0; t < n; ++t) {
    for (;;) {
      // Smallest nonzero entry of the trailing block becomes the pivot.
      std::size_t pr = n, pc = n;
      for (std::size_t r = t; r < n; ++r)
        for (std::size_t c = t; c < n; ++c)
          if (a[r][c] != 0 && (pr == n || abs(a[r][c]) < abs(a[pr][pc]))) {
            pr = r;
            pc = c;
          }
      if (pr == n) break;
      std::swap(a[t], a[pr]);
      col_swap(t, pc);
      bool clean = true;
      for (std::size_t r = t + 1; r < n; ++r) {
        if (a[r][t] == 0) continue;
        BigInt f = a[r][t] / a[t][t];
        for (std::size_t c = t; c < n; ++c) a[r][c] -= f * a[t][c];
        if (a[r][t] != 0) clean = false;
      }
      for (std::size_t c = t + 1; c < n; ++c) {
        if (a[t][c] == 0) continue;
        BigInt f = a[t][c] / a[t][t];
        col_op(c, t, f);
        if (a[t][c] != 0) clean = false;
      }
      if (!clean) continue;
      // Divisibility: fold an offending row into row t and retry.
      std::size_t bad = n;
      for (std::size_t r = t + 1; r < n && bad == n; ++r)
        for (std::size_t c = t + 1; c < n; ++c)
          if (a[r][c] % a[t][t] != 0) {
            bad = r;
            break;
          }
      if (bad == n) break;
      for (std::size_t c = t; c < n; ++c) a[t][c] += a[bad][c];
    }
  }

  std::vector<std::int64_t> divisors;
  std::vector<RationalVector> lifts;
  for (std::size_t t = 0; t < n; ++t) {
    BigInt d = abs(a[t][t]);
    if (d == 0) fail(ErrorCode::Degenerate, "degenerate lattice");
    if (d == 1) continue;
    const auto di = d.convert_to<std::int64_t>();
    RationalVector x(n);
    for (std::size_t r = 0; r < n; ++r) x[r] = Rational(v[r][t].convert_to<std::int64_t>(), di);
    divisors.push_back(di);
    lifts.push_back(std::move(x));
  }
  // Smith order d_1 | d_2 | ...
  std::vector<std::size_t> order(divisors.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return divisors[i] < divisors[j]; });
  std::vector<std::int64_t> ds;
  std::vector<RationalVector> ls;
  for (auto i : order) {
    ds.push_back(divisors[i]);
    ls.push_back(lifts[i]);
  }
  const std::size_t m = ds.size();
  std::vector<RationalVector> gg(m, RationalVector(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      Rational s = 0;
      for (std::size_t r = 0; r < n; ++r) {
        if (ls[i][r].numerator() == 0) continue;
        for (std::size_t c = 0; c < n; ++c)
          if (ls[j][c].numerator() != 0 && L.gram(r, c) != 0) s += ls[i][r] * ls[j][c] * L.gram(r, c);
      }
      gg[i][j] = i == j ? mod_rational(s, 2) : mod_rational(s, 1);
    }
  return DiscriminantForm(std::move(ds), std::move(ls), std::move(gg));
}

DiscriminantForm negate(const DiscriminantForm& df) {
  auto gg = df.generator_gram();
  for (std::size_t i = 0; i < gg.size(); ++i)
    for (std::size_t j = 0; j < gg.size(); ++j) gg[i][j] = mod_rational(-gg[i][j], i == j ? 2 : 1);
  return DiscriminantForm(df.divisors(), df.generator_lifts(), gg);
}

TwoElemInvariants two_elementary_invariants(const Lattice& L, bool m_role) {
  const auto df = discriminant_form(L);
  for (auto d : df.divisors())
    if (d != 2) fail(ErrorCode::NotTwoElementary, "discriminant group is not 2-elementary");
  TwoElemInvariants inv;
  inv.r = static_cast<int>(L.rank());
  inv.l = static_cast<int>(df.num_generators());
  inv.sig = signature(L);
  inv.delta = 0;
  for (std::size_t i = 0; i < df.num_generators(); ++i)
    if (df.generator_gram()[i][i].denominator() != 1) inv.delta = 1;
  if (inv.r == 10 && inv.l == 10 && inv.delta == 0) inv.exceptional = Exceptional::Enriques;
  if (inv.r == 10 && inv.l == 8 && inv.delta == 0) inv.exceptional = Exceptional::TwoElliptic;
  if (m_role) {
    if (inv.sig.first != 1) fail(ErrorCode::WrongSignature, "M must have signature (1, r-1)");
    if (inv.exceptional == Exceptional::None) {
      inv.g = inv.genus_formula();
      inv.k = (inv.r - inv.l) / 2;
    } else if (inv.exceptional == Exceptional::TwoElliptic) {
      inv.g = inv.genus_formula();
    }
  }
  return inv;
}

}  // namespace bcov
