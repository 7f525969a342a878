#include "bcov/orbifold.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <set>
#include <string>

namespace bcov {

namespace {

Rational frac(const Rational& x) {
  const auto d = x.denominator();
  auto n = x.numerator() % d;
  if (n < 0) n += d;
  return Rational(n, d);
}

bool is_zero(const Rational& x) { return x.numerator() == 0; }

std::string rot_str(const Rotation& r) {
  std::string s = "(";
  for (int i = 0; i < 3; ++i) {
    if (i) s += ",";
    s += std::to_string(r[i].numerator()) + "/" + std::to_string(r[i].denominator());
  }
  return s + ")";
}

}  // namespace

Rotation normalize_rotation(const Rotation& r) {
  Rotation out{frac(r[0]), frac(r[1]), frac(r[2])};
  if ((out[0] + out[1] + out[2]).denominator() != 1) fail(ErrorCode::NotDetOne, "rotation " + rot_str(r) + " has det != 1");
  return out;
}

Rotation rotation_from_ints(std::int64_t a1, std::int64_t a2, std::int64_t a3, std::int64_t n) {
  if (n <= 0) fail(ErrorCode::InvalidArgument, "rotation denominator must be positive");
  return normalize_rotation({Rational(a1, n), Rational(a2, n), Rational(a3, n)});
}

Rotation add_rotations(const Rotation& a, const Rotation& b) {
  return {frac(a[0] + b[0]), frac(a[1] + b[1]), frac(a[2] + b[2])};
}

bool is_identity(const Rotation& r) { return is_zero(r[0]) && is_zero(r[1]) && is_zero(r[2]); }

AbelianSL3Group::AbelianSL3Group() : elements_{Rotation{}} {}

AbelianSL3Group::AbelianSL3Group(std::vector<Rotation> elements) : elements_(std::move(elements)) {
  for (auto& e : elements_) e = normalize_rotation(e);
  std::sort(elements_.begin(), elements_.end());
  if (std::adjacent_find(elements_.begin(), elements_.end()) != elements_.end())
    fail(ErrorCode::InvalidArgument, "group elements must be distinct");
  if (elements_.empty() || !is_identity(elements_.front())) fail(ErrorCode::InvalidArgument, "group lacks the identity");
  const std::set<Rotation> all(elements_.begin(), elements_.end());
  for (const auto& a : elements_)
    for (const auto& b : elements_)
      if (!all.count(add_rotations(a, b))) fail(ErrorCode::InvalidArgument, "element set is not closed");
}

std::size_t AbelianSL3Group::ker_order(int k) const {
  return std::count_if(elements_.begin(), elements_.end(), [k](const Rotation& r) { return is_zero(r[k]); });
}

std::size_t AbelianSL3Group::image_order(int k) const { return order() / ker_order(k); }

bool AbelianSL3Group::has_common_fixed_axis() const {
  for (int k = 0; k < 3; ++k)
    if (ker_order(k) == order()) return true;
  return false;
}

AbelianSL3Group make_group(const std::vector<Rotation>& generators, std::size_t cap) {
  std::vector<Rotation> gens;
  for (const auto& g : generators) gens.push_back(normalize_rotation(g));
  std::set<Rotation> seen{Rotation{}};
  std::vector<Rotation> queue{Rotation{}};
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (const auto& g : gens) {
      auto x = add_rotations(queue[i], g);
      if (seen.insert(x).second) {
        if (seen.size() > cap) fail(ErrorCode::TooLarge, "group closure exceeds " + std::to_string(cap) + " elements");
        queue.push_back(x);
      }
    }
  }
  return AbelianSL3Group(std::vector<Rotation>(seen.begin(), seen.end()));
}

AbelianSL3Group klein_group() {
  return make_group({rotation_from_ints(1, 1, 0, 2), rotation_from_ints(1, 0, 1, 2)});
}

std::vector<std::size_t> gamma0(const AbelianSL3Group& G) {
  std::vector<std::size_t> out;
  const auto& el = G.elements();
  for (std::size_t i = 0; i < el.size(); ++i)
    if (!is_zero(el[i][0]) && !is_zero(el[i][1]) && !is_zero(el[i][2])) out.push_back(i);
  return out;
}

double delta_k_numeric(const AbelianSL3Group& G, int k) {
  if (k < 0 || k > 2) fail(ErrorCode::InvalidArgument, "character index must be 0, 1 or 2");
  using LC = std::complex<long double>;
  const long double twoPi = 2 * std::acos(-1.0L);
  LC sum = 0;
  for (auto i : gamma0(G)) {
    const auto& a = G.elements()[i][k];
    const LC z = std::polar(1.0L, twoPi * a.numerator() / a.denominator());
    sum += z / ((1.0L - z) * (1.0L - z));
  }
  return static_cast<double>(sum.real());
}

Rational delta_k(const AbelianSL3Group& G, int k) {
  const double x = delta_k_numeric(G, k);
  const auto D = static_cast<std::int64_t>(12 * G.order() * G.order());
  const auto n = std::llround(x * D);
  if (std::abs(x - double(n) / D) > 1e-9 * std::max(1.0, std::abs(x)))
    fail(ErrorCode::PrecisionLoss, "delta_k is not a rational with denominator dividing 12|G|^2");
  return Rational(n, D);
}

namespace {

Rational epsilon_correction(const AbelianSL3Group& G, int k) {
  const auto n = static_cast<std::int64_t>(G.ker_order(k));
  const auto nu = static_cast<std::int64_t>(G.image_order(k));
  return Rational((n - 1) * (nu * nu - 1), 12 * nu);
}

}  // namespace

double epsilon_k_numeric(const AbelianSL3Group& G, int k) {
  return delta_k_numeric(G, k) / double(G.order()) - boost::rational_cast<double>(epsilon_correction(G, k));
}

Rational epsilon_k(const AbelianSL3Group& G, int k) {
  return delta_k(G, k) / static_cast<std::int64_t>(G.order()) - epsilon_correction(G, k);
}

Rational epsilon_closed(const AbelianSL3Group& G) {
  if (G.has_common_fixed_axis()) fail(ErrorCode::CommonFixedAxis, "group fixes a coordinate axis");
  const auto N = static_cast<std::int64_t>(G.order());
  std::int64_t s = 0;
  for (int k = 0; k < 3; ++k) s += static_cast<std::int64_t>(G.ker_order(k) * G.ker_order(k));
  return Rational(-(N * N + 2 - s), 12 * N);
}

bool check_lemma_4_6(const AbelianSL3Group& G) {
  if (G.has_common_fixed_axis() || !gamma0(G).empty()) return true;
  return G == klein_group();
}

std::vector<AbelianSL3Group> scan_groups(int maxDenominator, int maxGenerators) {
  if (maxGenerators < 0 || maxGenerators > 2) fail(ErrorCode::InvalidArgument, "scan supports at most 2 generators");
  std::set<Rotation> triples;
  for (int n = 1; n <= maxDenominator; ++n)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) triples.insert(rotation_from_ints(a, b, -a - b, n));
  const std::vector<Rotation> t(triples.begin(), triples.end());
  std::set<std::vector<Rotation>> seen;
  std::vector<AbelianSL3Group> out;
  auto push = [&](const std::vector<Rotation>& gens) {
    auto G = make_group(gens);
    if (seen.insert(G.elements()).second) out.push_back(std::move(G));
  };
  push({});
  if (maxGenerators >= 1)
    for (const auto& a : t) push({a});
  if (maxGenerators >= 2)
    for (std::size_t i = 0; i < t.size(); ++i)
      for (std::size_t j = i + 1; j < t.size(); ++j) push({t[i], t[j]});
  return out;
}

double dedekind_sum_check(std::int64_t n, std::int64_t m) {
  if (n < 2) fail(ErrorCode::InvalidArgument, "n must be at least 2");
  if (std::gcd(n, m) != 1) fail(ErrorCode::NotCoprime, "m and n must be coprime");
  using LC = std::complex<long double>;
  const long double twoPi = 2 * std::acos(-1.0L);
  LC sum = 0;
  for (std::int64_t k = 1; k < n; ++k) {
    const LC z = std::polar(1.0L, twoPi * static_cast<long double>((k * m) % n) / n);
    sum += z / ((1.0L - z) * (1.0L - z));
  }
  sum += static_cast<long double>(n * n - 1) / 12;
  return static_cast<double>(std::abs(sum));
}

namespace {

[[noreturn]] void invalid(const std::string& what) { fail(ErrorCode::InvalidData, what); }

// Returns the axis fixed by every fixer, checking that fixers plus the
// identity form a subgroup.
int curve_axis(const FixedCurve& c, std::size_t idx) {
  const std::string tag = "curve " + std::to_string(idx) + ": ";
  if (c.fixers.empty()) invalid(tag + "no fixing elements");
  std::set<Rotation> group{Rotation{}};
  int axis = -1;
  for (const auto& raw : c.fixers) {
    Rotation f;
    try {
      f = normalize_rotation(raw);
    } catch (const Error&) {
      invalid(tag + "fixer with det != 1");
    }
    int zeros = 0, ax = -1;
    for (int k = 0; k < 3; ++k)
      if (is_zero(f[k])) ++zeros, ax = k;
    if (zeros != 1) invalid(tag + "fixer must have exactly one trivial character");
    if (axis >= 0 && ax != axis) invalid(tag + "fixers do not share an axis");
    axis = ax;
    if (!group.insert(f).second) invalid(tag + "repeated fixer");
  }
  for (const auto& a : group)
    for (const auto& b : group)
      if (!group.count(add_rotations(a, b))) invalid(tag + "fixers are not a subgroup");
  return axis;
}

std::int64_t isolated_pairs(const FixedPoint& p) {
  const auto& el = p.stabilizer.elements();
  std::int64_t count = 0;
  for (const auto& g : el)
    for (const auto& h : el) {
      if (is_identity(g) && is_identity(h)) continue;
      bool onCurve = false;
      for (const auto& inc : p.throughCurves)
        if (is_zero(g[inc.axis]) && is_zero(h[inc.axis])) onCurve = true;
      if (!onCurve) ++count;
    }
  return count;
}

}  // namespace

void validate(const FixedPointData& data) {
  if (data.groupOrder < 1) invalid("group order must be positive");
  std::vector<std::int64_t> curveOrder;
  for (std::size_t i = 0; i < data.curves.size(); ++i) {
    curve_axis(data.curves[i], i);
    const auto n = static_cast<std::int64_t>(data.curves[i].fixers.size()) + 1;
    if (data.groupOrder % n) invalid("curve " + std::to_string(i) + ": stabilizer order does not divide |G|");
    curveOrder.push_back(n);
  }
  for (std::size_t i = 0; i < data.points.size(); ++i) {
    const auto& p = data.points[i];
    const std::string tag = "point " + std::to_string(i) + ": ";
    const auto N = static_cast<std::int64_t>(p.stabilizer.order());
    if (N < 2) invalid(tag + "trivial stabilizer");
    if (data.groupOrder % N) invalid(tag + "stabilizer order does not divide |G|");
    if (p.stabilizer.has_common_fixed_axis()) invalid(tag + "stabilizer fixes an axis, point is not isolated");
    std::array<bool, 3> hit{false, false, false};
    for (const auto& inc : p.throughCurves) {
      if (inc.axis < 0 || inc.axis > 2) invalid(tag + "axis out of range");
      if (inc.curve >= data.curves.size()) invalid(tag + "unknown curve id");
      if (hit[inc.axis]) invalid(tag + "two curves on one axis");
      hit[inc.axis] = true;
      if (curveOrder[inc.curve] != static_cast<std::int64_t>(p.stabilizer.ker_order(inc.axis)))
        invalid(tag + "curve stabilizer order differs from |ker chi_k|");
    }
    for (int k = 0; k < 3; ++k)
      if (hit[k] != (p.stabilizer.ker_order(k) > 1)) invalid(tag + "curves through the point do not match the kernels");
  }
}

Rational chi_orb(const FixedPointData& data) {
  validate(data);
  std::int64_t s = data.chiAmbient;
  for (const auto& c : data.curves) {
    const auto n = static_cast<std::int64_t>(c.fixers.size()) + 1;
    s += (n * n - 1) * c.chi;
  }
  for (const auto& p : data.points) {
    const auto N = static_cast<std::int64_t>(p.stabilizer.order());
    std::int64_t t = N * N - 1;
    for (int k = 0; k < 3; ++k) {
      const auto n = static_cast<std::int64_t>(p.stabilizer.ker_order(k));
      t -= n * n - 1;
    }
    s += t;
  }
  return Rational(s, data.groupOrder);
}

Rational roan_chi(const FixedPointData& data) {
  validate(data);
  std::int64_t s = data.chiAmbient;
  for (const auto& c : data.curves) {
    std::vector<Rotation> G_C{Rotation{}};
    for (const auto& f : c.fixers) G_C.push_back(normalize_rotation(f));
    std::int64_t pairs = 0;
    for (const auto& g : G_C)
      for (const auto& h : G_C)
        if (!(is_identity(g) && is_identity(h))) ++pairs;
    s += pairs * c.chi;
  }
  for (const auto& p : data.points) s += isolated_pairs(p);
  return Rational(s, data.groupOrder);
}

namespace {

// Nikulin's existence conditions for an even 2-elementary lattice.
bool two_elementary_exists(int rank, int sig, int a, int delta) {
  auto mod8 = [](int x) { return ((x % 8) + 8) % 8; };
  if (a < 0 || a > rank || (rank - a) % 2) return false;
  if (delta == 0 && mod8(sig) % 4) return false;
  if (a == 0 && (delta != 0 || mod8(sig) != 0)) return false;
  if (a == 1 && mod8(sig) != 1 && mod8(sig) != 7) return false;
  if (a == 2 && mod8(sig) == 4 && delta != 0) return false;
  if (delta == 0 && a == rank && mod8(sig) != 0) return false;
  return true;
}

}  // namespace

bool valid_k3_triple(int r, int l, int delta) {
  if (r < 1 || r > 20 || (delta != 0 && delta != 1) || r + l > 22) return false;
  return two_elementary_exists(r, 2 - r, l, delta) && two_elementary_exists(22 - r, r - 18, l, delta);
}

std::vector<std::array<int, 3>> k3_triples() {
  std::vector<std::array<int, 3>> out;
  for (int r = 1; r <= 20; ++r)
    for (int l = 0; l <= 22 - r; ++l)
      for (int d = 0; d <= 1; ++d)
        if (valid_k3_triple(r, l, d)) out.push_back({r, l, d});
  return out;
}

FixedPointData borcea_voisin_fixture(int r, int l, int delta) {
  if (!valid_k3_triple(r, l, delta))
    fail(ErrorCode::InvalidTriple, "(" + std::to_string(r) + "," + std::to_string(l) + "," + std::to_string(delta) +
                                       ") is not the invariant of a K3 involution");
  std::vector<std::int64_t> chis;
  if (r == 10 && l == 10 && delta == 0) {
  } else if (r == 10 && l == 8 && delta == 0) {
    chis = {0, 0};
  } else {
    const int g = (22 - r - l) / 2, k = (r - l) / 2;
    chis.push_back(2 - 2 * g);
    chis.insert(chis.end(), k, 2);
  }
  FixedPointData d;
  d.groupOrder = 2;
  d.chiAmbient = 0;  // chi(S x T) = 24 * 0
  const Rotation flip = rotation_from_ints(0, 1, 1, 2);
  for (int t = 0; t < 4; ++t)
    for (auto c : chis) d.curves.push_back({c, {flip}});
  return d;
}

FixedPointData random_fixed_point_data(std::mt19937_64& rng) {
  static const std::vector<AbelianSL3Group> pool = [] {
    std::vector<AbelianSL3Group> out;
    for (auto& G : scan_groups(6, 2))
      if (!G.has_common_fixed_axis() && G.order() <= 36) out.push_back(G);
    return out;
  }();
  auto uni = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };
  FixedPointData d;
  std::int64_t order = 1;
  auto absorb = [&](std::int64_t n) { order = std::lcm(order, n); };

  const int nPoints = uni(0, 3);
  for (int i = 0; i < nPoints; ++i) {
    FixedPoint p;
    p.stabilizer = pool[uni(0, int(pool.size()) - 1)];
    absorb(static_cast<std::int64_t>(p.stabilizer.order()));
    for (int k = 0; k < 3; ++k) {
      const auto n = p.stabilizer.ker_order(k);
      if (n < 2) continue;
      std::vector<std::size_t> compatible;
      for (std::size_t c = 0; c < d.curves.size(); ++c)
        if (d.curves[c].fixers.size() + 1 == n) compatible.push_back(c);
      if (!compatible.empty() && uni(0, 1)) {
        p.throughCurves.push_back({compatible[uni(0, int(compatible.size()) - 1)], k});
        continue;
      }
      FixedCurve c;
      c.chi = uni(-10, 4);
      for (const auto& e : p.stabilizer.elements())
        if (is_zero(e[k]) && !is_identity(e)) c.fixers.push_back(e);
      d.curves.push_back(std::move(c));
      p.throughCurves.push_back({d.curves.size() - 1, k});
    }
    d.points.push_back(std::move(p));
  }
  const int nFree = uni(0, 2);
  for (int i = 0; i < nFree; ++i) {
    const int n = uni(2, 6), axis = uni(0, 2);
    FixedCurve c;
    c.chi = uni(-10, 4);
    for (int j = 1; j < n; ++j) {
      std::array<std::int64_t, 3> a{};
      a[(axis + 1) % 3] = j;
      a[(axis + 2) % 3] = -j;
      c.fixers.push_back(rotation_from_ints(a[0], a[1], a[2], n));
    }
    absorb(n);
    d.curves.push_back(std::move(c));
  }
  d.groupOrder = order * uni(1, 3);
  d.chiAmbient = uni(-200, 200);
  return d;
}

}  // namespace bcov
