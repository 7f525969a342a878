#include "bcov/spectral.hpp"

#include <array>
#include <cmath>

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "bcov/short_vectors.hpp"

namespace bcov {

void SpectrumMultiset::add(const std::string& label, double value, std::int64_t mult) {
  if (!(value > 0)) fail(ErrorCode::InvalidArgument, "eigenvalue entries must be positive");
  auto& e = entries_[label];
  e.value = value;
  e.mult += mult;
  if (e.mult == 0) entries_.erase(label);
}

std::int64_t SpectrumMultiset::total() const {
  std::int64_t t = zeroModes_;
  for (const auto& [l, e] : entries_) t += e.mult;
  return t;
}

SpectrumMultiset& SpectrumMultiset::operator+=(const SpectrumMultiset& o) {
  for (const auto& [l, e] : o.entries_) add(l, e.value, e.mult);
  zeroModes_ += o.zeroModes_;
  return *this;
}

SpectrumMultiset operator+(SpectrumMultiset a, const SpectrumMultiset& b) { return a += b; }

SpectrumMultiset SpectrumMultiset::scaled(std::int64_t k) const {
  SpectrumMultiset r;
  if (k == 0) return r;
  for (const auto& [l, e] : entries_) r.add(l, e.value, e.mult * k);
  r.zeroModes_ = zeroModes_ * k;
  return r;
}

bool SpectrumMultiset::same_positive_part(const SpectrumMultiset& o) const {
  if (entries_.size() != o.entries_.size()) return false;
  for (auto a = entries_.begin(), b = o.entries_.begin(); a != entries_.end(); ++a, ++b)
    if (a->first != b->first || a->second.mult != b->second.mult) return false;
  return true;
}

bool SpectrumMultiset::operator==(const SpectrumMultiset& o) const {
  return zeroModes_ == o.zeroModes_ && same_positive_part(o);
}

std::complex<double> SpectrumMultiset::zeta(std::complex<double> s) const {
  std::complex<double> z(0);
  for (const auto& [l, e] : entries_) z += double(e.mult) * std::exp(-s * std::log(e.value));
  return z;
}

SpectrumMultiset tensor_sum(const SpectrumMultiset& a, const SpectrumMultiset& b) {
  SpectrumMultiset r;
  r.add_zero(a.zero_modes() * b.zero_modes());
  for (const auto& [l, e] : a.entries()) {
    if (b.zero_modes()) r.add(l, e.value, e.mult * b.zero_modes());
    for (const auto& [m, f] : b.entries()) r.add(l + "+" + m, e.value + f.value, e.mult * f.mult);
  }
  if (a.zero_modes())
    for (const auto& [m, f] : b.entries()) r.add(m, f.value, f.mult * a.zero_modes());
  return r;
}

double torus_eigenvalue(Complex tau, std::int64_t m, std::int64_t n) {
  return 2 * M_PI * M_PI * std::norm(double(m) * tau + double(n)) / tau.imag();
}

SpectrumMultiset torus_eigenvalues(Complex tau, double cutoff, bool modSign) {
  require_upper_half(tau);
  if (!(cutoff > 0)) fail(ErrorCode::InvalidArgument, "cutoff must be positive");
  const double y = tau.imag();
  const double R2 = cutoff * y / (2 * M_PI * M_PI);  // |m tau + n|^2 <= R2
  const auto mmax = static_cast<std::int64_t>(std::floor(std::sqrt(R2) / y));
  SpectrumMultiset out;
  for (std::int64_t m = -mmax; m <= mmax; ++m) {
    const double rem = R2 - double(m) * double(m) * y * y;
    if (rem < 0) continue;
    const double c = -double(m) * tau.real();
    const auto lo = static_cast<std::int64_t>(std::ceil(c - std::sqrt(rem)));
    const auto hi = static_cast<std::int64_t>(std::floor(c + std::sqrt(rem)));
    for (std::int64_t n = lo; n <= hi; ++n) {
      if (m == 0 && n == 0) continue;
      if (modSign && (m < 0 || (m == 0 && n < 0))) continue;
      const double v = torus_eigenvalue(tau, m, n);
      if (v > cutoff) continue;
      out.add("nu_{" + std::to_string(m) + "," + std::to_string(n) + "}", v);
    }
  }
  return out;
}

namespace {

// Forms Q(m,n) = |m tau + n|^2 / y and its inverse, both of determinant 1.
std::pair<Eigen::Matrix2d, Eigen::Matrix2d> epstein_forms(Complex tau) {
  const double x = tau.real(), y = tau.imag();
  Eigen::Matrix2d A, B;
  A << std::norm(tau) / y, x / y, x / y, 1 / y;
  B << 1 / y, -x / y, -x / y, std::norm(tau) / y;
  return {A, B};
}

// Upper incomplete gamma for any real a, x > 0.
double upper_gamma(double a, double x) {
  if (a > 0) return boost::math::tgamma(a, x);
  if (a == 0) return boost::math::expint(1, x);
  return (upper_gamma(a + 1, x) - std::pow(x, a) * std::exp(-x)) / a;
}

constexpr double kSplitCut = 60.0;  // pi Q beyond this is below e^{-60}

template <class F>
double lattice_sum(const Eigen::Matrix2d& Q, F&& f) {
  double s = 0;
  enumerate_ellipsoid(Q, Eigen::Vector2d::Zero(), kSplitCut / M_PI, [&](const IntVector& v) {
    if (v.isZero()) return;
    const Eigen::Vector2d d = v.cast<double>();
    s += f(d.dot(Q * d));
  });
  return s;
}

}  // namespace

EpsteinValue epstein_zeta(Complex tau, double s) {
  require_upper_half(tau);
  if (s == 0 || s == 1) fail(ErrorCode::InvalidArgument, "epstein_zeta needs s not in {0, 1}");
  const auto [A, B] = epstein_forms(tau);
  // pi^{-s} Gamma(s) Z(s) = sum' Gamma(s, pi Q)(pi Q)^{-s} + sum' Gamma(1-s, pi Q*)(pi Q*)^{s-1} - 1/s - 1/(1-s)
  const double s1 = lattice_sum(A, [&](double q) { return upper_gamma(s, M_PI * q) * std::pow(M_PI * q, -s); });
  const double s2 = lattice_sum(B, [&](double q) { return upper_gamma(1 - s, M_PI * q) * std::pow(M_PI * q, s - 1); });
  const double lam = s1 + s2 - 1 / s - 1 / (1 - s);
  const double Z = std::pow(M_PI, s) * lam / std::tgamma(s);
  const double zeta = std::pow(2 * M_PI * M_PI, -s) * Z;
  return {zeta, 1e-20 * std::max(1.0, std::abs(zeta)) + 1e-15};
}

double epstein_zeta_direct(Complex tau, double s, double radius) {
  const auto [A, B] = epstein_forms(tau);
  double sum = 0;
  const double R2 = radius * radius;
  enumerate_ellipsoid(A, Eigen::Vector2d::Zero(), R2, [&](const IntVector& v) {
    if (v.isZero()) return;
    const Eigen::Vector2d d = v.cast<double>();
    sum += std::pow(d.dot(A * d), -s);
  });
  // Area density 1: tail ~ int_{r > R} r^{-2s} 2 pi r dr.
  sum += M_PI * std::pow(R2, 1 - s) / (s - 1);
  return std::pow(2 * M_PI * M_PI, -s) * sum;
}

EpsteinValue epstein_zeta_deriv0(Complex tau) {
  require_upper_half(tau);
  const auto [A, B] = epstein_forms(tau);
  // Z'(0) = -log pi - gamma + sum' E1(pi Q) + sum' e^{-pi Q*}/(pi Q*) - 1; zeta = (2 pi^2)^{-s} Z
  const double e1 = lattice_sum(A, [](double q) { return boost::math::expint(1, M_PI * q); });
  const double e2 = lattice_sum(B, [](double q) { return std::exp(-M_PI * q) / (M_PI * q); });
  const double zp = -std::log(M_PI) - boost::math::constants::euler<double>() + e1 + e2 - 1;
  return {std::log(2 * M_PI * M_PI) + zp, 1e-14};
}

TauEll tau_ell(Complex tau) {
  require_upper_half(tau);
  TauEll t;
  t.eta_route = 1 / (4 * M_PI * petersson_norm_eta_power(UpperHalfPoint(tau), 4));
  t.zeta_route = std::exp(epstein_zeta_deriv0(tau).value) / (2 * M_PI);
  return t;
}

double kronecker_residual(Complex tau) {
  return std::abs(epstein_zeta_deriv0(tau).value + std::log(2 * petersson_norm_eta_power(UpperHalfPoint(tau), 4)));
}

SectorSpectra k3_sector_spectra(const SpectrumMultiset& plus, const SpectrumMultiset& minus, int h11plus,
                                int h11minus) {
  if (h11plus < 0 || h11minus < 0 || h11plus + h11minus != 20)
    fail(ErrorCode::BadHodgeSplit, "h11+ + h11- must equal 20");
  if (plus.zero_modes() || minus.zero_modes())
    fail(ErrorCode::InvalidArgument, "K3 inputs must be the positive eigenvalues");
  SectorSpectra out;
  SpectrumMultiset s00p = plus;
  s00p.add_zero();
  out[{0, 0, true}] = s00p;
  out[{0, 0, false}] = minus;
  const SpectrumMultiset both = plus + minus;
  for (bool sgn : {true, false}) {
    out[{1, 0, sgn}] = both;
    out[{0, 1, sgn}] = both;
    SpectrumMultiset s11 = both.scaled(2);
    s11.add_zero(sgn ? h11plus : h11minus);
    out[{1, 1, sgn}] = s11;
  }
  return out;
}

SectorSpectra torus_sector_spectra(const SpectrumMultiset& nu) {
  if (nu.zero_modes()) fail(ErrorCode::InvalidArgument, "torus input must be the positive eigenvalues");
  SpectrumMultiset withZero = nu;
  withZero.add_zero();
  SectorSpectra out;
  for (Sector s : {Sector{0, 0, true}, Sector{1, 0, false}, Sector{0, 1, false}, Sector{1, 1, true}}) out[s] = withZero;
  for (Sector s : {Sector{0, 0, false}, Sector{1, 0, true}, Sector{0, 1, true}, Sector{1, 1, false}}) out[s] = nu;
  return out;
}

SpectrumMultiset orbifold_spectrum(int p, int q, const SectorSpectra& torus, const SectorSpectra& k3) {
  if (p < 0 || q < 0 || p > 1 || q > 1) fail(ErrorCode::InvalidArgument, "orbifold_spectrum needs p, q in {0, 1}");
  SpectrumMultiset out;
  for (int pt = 0; pt <= p; ++pt)
    for (int qt = 0; qt <= q; ++qt)
      for (bool sgn : {true, false})
        out += tensor_sum(torus.at({pt, qt, sgn}), k3.at({p - pt, q - qt, sgn}));
  return out;
}

std::array<int, 3> bcov_weight_reduction() {
  // zeta_{p,q} = zeta_{p,3-q} = zeta_{q,p}: reduce to (0,0), (1,0), (1,1).
  std::array<int, 3> c{0, 0, 0};
  for (int p = 0; p <= 3; ++p)
    for (int q = 0; q <= 3; ++q) {
      const int a = std::min(p, 3 - p), b = std::min(q, 3 - q);
      const int cls = a + b;  // 0, 1 or 2
      c[cls] += ((p + q) % 2 ? -1 : 1) * p * q;
    }
  return c;
}

double BvZetaReport::max_residual() const {
  double m = 0;
  for (const auto* v : {&lemma00, &lemma10, &lemma11, &combination, &bcov})
    for (double x : *v) m = std::max(m, x);
  return m;
}

BvZetaReport bv_zeta_combination(const SpectrumMultiset& plus, const SpectrumMultiset& minus,
                                 const SpectrumMultiset& nu, int h11plus,
                                 const std::vector<std::complex<double>>& sValues) {
  const auto T = torus_sector_spectra(nu);
  const auto S = k3_sector_spectra(plus, minus, h11plus, 20 - h11plus);
  const auto z00 = orbifold_spectrum(0, 0, T, S), z10 = orbifold_spectrum(1, 0, T, S), z11 = orbifold_spectrum(1, 1, T, S);
  // Harvey-Moore sums, built directly.
  SpectrumMultiset muP, muM;
  for (const auto& [ln, n] : nu.entries()) {
    for (const auto& [l, e] : plus.entries()) muP.add(ln + "+" + l, n.value + e.value, n.mult * e.mult);
    for (const auto& [l, e] : minus.entries()) muM.add(ln + "+" + l, n.value + e.value, n.mult * e.mult);
  }
  const auto red = bcov_weight_reduction();
  BvZetaReport r;
  r.s = sValues;
  auto rel = [](std::complex<double> a, std::complex<double> b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
  for (auto s : sValues) {
    const auto zt = nu.zeta(s), zp = plus.zeta(s), zm = minus.zeta(s), mp = muP.zeta(s), mm = muM.zeta(s);
    const auto a = z00.zeta(s), b = z10.zeta(s), c = z11.zeta(s);
    r.lemma00.push_back(rel(a, zt + zp + mp + mm));
    r.lemma10.push_back(rel(b, zt + zp + 2.0 * zm + 3.0 * mp + 3.0 * mm));
    r.lemma11.push_back(rel(c, 21.0 * zt + 5.0 * zp + 4.0 * zm + 9.0 * mp + 9.0 * mm));
    const auto lhs = double(red[0]) * a + double(red[1]) * b + double(red[2]) * c;
    r.bcov.push_back(rel(lhs, 9.0 * a - 6.0 * b + c));
    r.combination.push_back(rel(9.0 * a - 6.0 * b + c, 24.0 * zt + 8.0 * (zp - zm)));
  }
  const auto lhs = z00.scaled(9) + z10.scaled(-6) + z11;
  const auto rhs = nu.scaled(24) + plus.scaled(8) + minus.scaled(-8);
  r.multisetIdentity = lhs.same_positive_part(rhs);
  return r;
}

}  // namespace bcov
