#include "bcov/borcherds.hpp"

#include <cmath>
#include <map>

#include "bcov/short_vectors.hpp"

namespace bcov {

TubePoint::TubePoint(Lattice lat, Eigen::VectorXd re, Eigen::VectorXd im, std::int64_t n)
    : L(std::move(lat)), x(std::move(re)), y(std::move(im)), N(n) {
  const auto r = static_cast<Eigen::Index>(L.rank());
  if (x.size() != r || y.size() != r) fail(ErrorCode::SizeMismatch, "tube point dimension differs from rank(L)");
  if (N < 1) fail(ErrorCode::InvalidArgument, "N must be positive");
  if (!(y_norm() > 0)) fail(ErrorCode::NotPositiveCone, "Im z must lie in the positive cone");
}

double TubePoint::y_norm() const { return y.dot(L.gram_d() * y); }

namespace {

// Finds lambda + L in A_{U+L} from the pairings with the generator lifts.
class ClassLocator {
 public:
  ClassLocator(const Lattice& L, const FourierTable& table) : rankL_(L.rank()) {
    const DiscriminantForm df = discriminant_form(direct_sum(standard("U"), L));
    if (df.divisors() != table.form.divisors() || df.generator_lifts() != table.form.generator_lifts())
      fail(ErrorCode::InvalidArgument, "table must be built on U + L");
    lifts_ = df.generator_lifts();
    e_ = df.exponent();
    std::vector<std::size_t> gens;
    for (std::size_t j = 0; j < df.num_generators(); ++j) {
      std::vector<std::int64_t> c(df.num_generators(), 0);
      c[j] = 1;
      gens.push_back(df.index(c));
    }
    for (std::size_t a = 0; a < df.size(); ++a) {
      std::vector<std::int64_t> key;
      for (std::size_t g : gens) key.push_back((df.b(a, g) * Rational(e_)).numerator());
      map_[key] = a;
    }
  }

  std::size_t locate(const IntVector& m) const {
    std::vector<std::int64_t> key;
    for (const auto& lift : lifts_) {
      Rational s(0);
      for (std::size_t i = 0; i < rankL_; ++i) s += Rational(m[i]) * lift[2 + i];
      s = mod_rational(s, 1) * Rational(e_);
      key.push_back(s.numerator());
    }
    auto it = map_.find(key);
    if (it == map_.end()) fail(ErrorCode::InvalidArgument, "dual vector not found in discriminant form");
    return it->second;
  }

 private:
  std::size_t rankL_;
  std::vector<RationalVector> lifts_;
  std::int64_t e_ = 1;
  std::map<std::vector<std::int64_t>, std::size_t> map_;
};

Rational min_exponent(const FourierTable& t) {
  Rational lo(0);
  for (const auto& comp : t.coeffs)
    for (const auto& [k, c] : comp)
      if (std::abs(c) > 1e-9 && k < lo) lo = k;
  return lo;
}

struct Enumeration {
  std::vector<ProductFactor> inner, band;
};

Enumeration enumerate(const ProductSpec& spec, const Eigen::VectorXd& y, double bound, double bandBound) {
  const Lattice& L = spec.L;
  const auto r = static_cast<Eigen::Index>(L.rank());
  if (spec.chamberRef.size() != r || y.size() != r) fail(ErrorCode::SizeMismatch, "vector dimension differs from rank(L)");
  const Eigen::MatrixXd G = L.gram_d();
  if (!(spec.chamberRef.dot(G * spec.chamberRef) > 0))
    fail(ErrorCode::NotPositiveCone, "chamber reference must lie in the positive cone");
  const double yy = y.dot(G * y);
  if (!(yy > 0)) fail(ErrorCode::NotPositiveCone, "Im z must lie in the positive cone");
  const auto sig = signature(L);
  if (sig.first != 1) fail(ErrorCode::WrongSignature, "L must be Lorentzian");

  const std::int64_t det = determinant(L);
  const Eigen::MatrixXd Ginv = G.inverse();
  IntMatrix adj(r, r);  // det * G^{-1}
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < r; ++j) adj(i, j) = std::llround(Ginv(i, j) * double(det));

  ClassLocator locator(L, spec.table);
  const double P = -boost::rational_cast<double>(min_exponent(spec.table));
  // Q_y(lambda) = 2 <lambda,y>^2 / <y,y> - lambda^2 is positive definite.
  const Eigen::MatrixXd Q = 2.0 * y * y.transpose() / yy - Ginv;
  const double qbound = 2 * bandBound * bandBound / yy + 2 * P + 1e-9;

  Enumeration out;
  enumerate_ellipsoid(Q, Eigen::VectorXd::Zero(r), qbound, [&](const IntVector& m) {
    if (m.isZero()) return;
    const Eigen::VectorXd md = m.cast<double>();
    if (!(md.dot(spec.chamberRef) > 0)) return;
    const std::int64_t num = m.dot(adj * m);
    const Rational norm(num, det);
    const Rational k = norm / Rational(2);
    if (k < -Rational(static_cast<std::int64_t>(std::ceil(P)))) return;
    const double t = md.dot(y);
    if (t > bandBound) return;
    const std::size_t cls = locator.locate(m);
    const Complex c = spec.table.coeff(cls, k);
    const double ec = double(spec.alpha) * c.real();
    if (std::abs(ec) < 1e-9) return;
    const double re = std::round(ec);
    if (std::abs(ec - re) > 1e-6) fail(ErrorCode::NonIntegralExponent, "alpha c(lambda^2/2) is not an integer");
    if (t <= 0) fail(ErrorCode::InvalidArgument, "Im z is not in the Weyl chamber of chamberRef");
    ProductFactor f{m, norm, cls, static_cast<std::int64_t>(re), t};
    (t <= bound ? out.inner : out.band).push_back(std::move(f));
  });
  return out;
}

}  // namespace

std::vector<ProductFactor> product_factors(const ProductSpec& spec, const Eigen::VectorXd& y, double bound) {
  return enumerate(spec, y, bound, bound).inner;
}

ProductValue borcherds_log_product(const ProductSpec& spec, const TubePoint& z) {
  if (spec.weylVector.size() != z.x.size()) fail(ErrorCode::SizeMismatch, "Weyl vector dimension differs from rank(L)");
  const double B = spec.truncation;
  if (!(B > 0)) fail(ErrorCode::InvalidArgument, "truncation must be positive");
  const auto en = enumerate(spec, z.y, B, 2 * B);
  const Eigen::MatrixXd G = spec.L.gram_d();
  ProductValue v;
  // e^{2 pi i <alpha rho, z>}
  const double a = double(spec.alpha);
  v.logAbs = -2 * M_PI * a * spec.weylVector.dot(G * z.y);
  double arg = 2 * M_PI * a * spec.weylVector.dot(G * z.x);
  for (const auto& f : en.inner) {
    const Eigen::VectorXd md = f.m.cast<double>();
    const Complex w = std::exp(Complex(0, 2 * M_PI) * Complex(md.dot(z.x), md.dot(z.y)));
    const Complex lg = double(f.exponent) * std::log(1.0 - w);
    v.logAbs += lg.real();
    arg += lg.imag();
  }
  v.arg = std::remainder(arg, 2 * M_PI);
  if (v.arg < 0) v.arg += 2 * M_PI;
  v.factors = en.inner.size();
  // Band (B, 2B] terms bound the tail; doubled for everything beyond 2B.
  double band = 0;
  for (const auto& f : en.band) {
    const double q = std::exp(-2 * M_PI * f.pairing);
    band += std::abs(double(f.exponent)) * q / (1 - q);
  }
  v.tailBound = 2 * band;
  if (v.tailBound > spec.tolerance) fail(ErrorCode::TailTooLarge, "truncation tail exceeds tolerance");
  return v;
}

PeterssonPsi petersson_norm_psi(const ProductSpec& spec, const TubePoint& z) {
  const auto v = borcherds_log_product(spec, z);
  PeterssonPsi p;
  const double w = spec.table.weight_w();
  p.logNormSq = double(spec.alpha) * w * std::log(z.y_norm()) + 2 * v.logAbs;
  p.logNormSqRoot = p.logNormSq / double(spec.alpha);
  p.tailBound = 2 * v.tailBound;
  return p;
}

}  // namespace bcov
