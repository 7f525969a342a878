#include "bcov/qseries.hpp"

#include <algorithm>
#include <bit>

#include <boost/multiprecision/cpp_int.hpp>

#include "bcov/lattice.hpp"
#include "bcov/short_vectors.hpp"

namespace bcov {

namespace {

constexpr double kThetaMargin = 13.2;  // e^{-pi * margin} ~ 1e-18

double sigma3(long n) {
  double s = 0;
  for (long d = 1; d <= n; ++d)
    if (n % d == 0) s += static_cast<double>(d) * d * d;
  return s;
}

Eigen::MatrixXd imag_part(const SiegelPoint& om) { return om.omega.imag(); }

// Upper bound for sum_{||v||^2 > R2} e^{-pi ||v||^2} over a shifted lattice in
// dimension g with smallest eigenvalue lmin.
double theta_tail(double R2, double lmin, int g) {
  double tail = 0;
  for (int j = 0; j < 4000; ++j) {
    const double t = R2 + j + 1;
    const double count = std::pow(2 * std::sqrt(t / lmin) + 1, g);
    const double term = count * std::exp(-M_PI * (R2 + j));
    tail += term;
    if (term < 1e-300 || (j > 10 && term < 1e-20 * tail)) break;
  }
  return tail;
}

Eigen::VectorXd half_vector(const std::vector<int>& bits) {
  Eigen::VectorXd v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) v(i) = 0.5 * bits[i];
  return v;
}

}  // namespace

SeriesValue<Complex> lattice_theta_e8(Complex tau, double normBound) {
  require_upper_half(tau);
  const Lattice e8 = standard("E8");
  const auto vecs = short_vectors(e8, false, normBound);
  // Shells: norm 2n holds N_n vectors.
  std::vector<double> shell;
  for (const auto& v : vecs) {
    const long n = std::abs(v.norm.numerator()) / 2;
    if (static_cast<long>(shell.size()) <= n) shell.resize(n + 1, 0.0);
    shell[n] += 1;
  }
  const Complex q = std::exp(Complex(0, 2 * M_PI) * tau);
  Complex sum = 0, qn = 1;
  for (std::size_t n = 0; n < shell.size(); ++n) {
    sum += shell[n] * qn;
    qn *= q;
  }
  const double aq = std::abs(q);
  double tail = 0;
  for (long n = static_cast<long>(std::floor(normBound / 2)) + 1; n < 100000; ++n) {
    const double term = 240 * sigma3(n) * std::pow(aq, n);
    tail += term;
    if (term < 1e-30 * std::max(tail, 1e-300) || term == 0) break;
  }
  return {sum, tail};
}

std::vector<double> e8_theta_coefficients(int depth) {
  std::vector<double> c(depth + 1, 0.0);
  c[0] = 1;
  for (int n = 1; n <= depth; ++n) c[n] = 240 * sigma3(n);
  return c;
}

std::vector<double> inverse_eta_power_coefficients(int power, int depth, int step) {
  using BigInt = mp::cpp_int;
  std::vector<BigInt> c(depth + 1, 0);
  c[0] = 1;
  for (int m = step; m <= depth; m += step)
    for (int rep = 0; rep < power; ++rep)
      for (int j = m; j <= depth; ++j) c[j] += c[j - m];
  std::vector<double> out(depth + 1);
  for (int j = 0; j <= depth; ++j) out[j] = c[j].convert_to<double>();
  return out;
}

SiegelPoint::SiegelPoint(Eigen::MatrixXcd om) : omega(std::move(om)) {
  if (omega.rows() != omega.cols()) fail(ErrorCode::NotSiegel, "Omega must be square");
  if ((omega - omega.transpose()).norm() > 1e-12 * std::max(1.0, omega.norm()))
    fail(ErrorCode::NotSiegel, "Omega must be symmetric");
  if (omega.rows() > 0) {
    Eigen::LLT<Eigen::MatrixXd> llt(omega.imag());
    if (llt.info() != Eigen::Success) fail(ErrorCode::NotSiegel, "Im(Omega) must be positive definite");
  }
}

bool ThetaCharacteristic::even() const {
  int s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s % 2 == 0;
}

std::vector<ThetaCharacteristic> all_characteristics(int g) {
  std::vector<ThetaCharacteristic> out;
  for (unsigned A = 0; A < (1u << g); ++A)
    for (unsigned B = 0; B < (1u << g); ++B) {
      ThetaCharacteristic ch;
      for (int i = 0; i < g; ++i) {
        ch.a.push_back((A >> i) & 1);
        ch.b.push_back((B >> i) & 1);
      }
      out.push_back(std::move(ch));
    }
  return out;
}

std::vector<ThetaCharacteristic> even_characteristics(int g) {
  auto all = all_characteristics(g);
  std::vector<ThetaCharacteristic> out;
  for (auto& ch : all)
    if (ch.even()) out.push_back(std::move(ch));
  return out;
}

SeriesValue<Complex> riemann_theta_raw(const ThetaCharacteristic& ch, const SiegelPoint& om, double cutoff) {
  const int g = om.genus();
  if (static_cast<int>(ch.a.size()) != g || static_cast<int>(ch.b.size()) != g)
    fail(ErrorCode::SizeMismatch, "characteristic length differs from genus");
  if (g == 0) return {Complex(1), 0.0};
  const Eigen::MatrixXd Y = imag_part(om);
  const Eigen::VectorXd a = half_vector(ch.a), b = half_vector(ch.b);
  Complex sum = 0;
  enumerate_ellipsoid(Y, -a, cutoff * cutoff, [&](const IntVector& n) {
    const Eigen::VectorXcd v = (n.cast<double>() + a).cast<Complex>();
    const Complex quad = v.transpose() * om.omega * v;
    const double lin = v.real().dot(b);
    sum += std::exp(Complex(0, M_PI) * quad + Complex(0, 2 * M_PI * lin));
  });
  const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Y).eigenvalues().minCoeff();
  return {sum, theta_tail(cutoff * cutoff, lmin, g)};
}

SeriesValue<Complex> riemann_theta_constant(const ThetaCharacteristic& ch, const SiegelPoint& om, double cutoff) {
  if (!ch.even()) fail(ErrorCode::OddCharacteristic, "odd theta constants vanish identically");
  return riemann_theta_raw(ch, om, cutoff);
}

SeriesValue<Complex> riemann_theta_constant(const ThetaCharacteristic& ch, const SiegelPoint& om) {
  const Eigen::VectorXd a = half_vector(ch.a);
  const double base = a.dot(imag_part(om) * a);
  return riemann_theta_constant(ch, om, std::sqrt(base + kThetaMargin));
}

std::vector<Complex> theta_nulls(const SiegelPoint& om) {
  const int g = om.genus();
  if (g == 0) return {Complex(1)};
  if (g > 16) fail(ErrorCode::InvalidArgument, "genus too large");
  const Eigen::MatrixXd Y = imag_part(om);
  const std::size_t N = std::size_t{1} << g;
  std::vector<Complex> out;
  out.reserve((N * (N + 1)) / 2);
  const Eigen::MatrixXd X = om.omega.real();
  std::vector<Complex> S(N);
  Eigen::VectorXd v(g);
  for (std::size_t A = 0; A < N; ++A) {
    Eigen::VectorXd a(g);
    for (int i = 0; i < g; ++i) a(i) = 0.5 * ((A >> i) & 1);
    std::fill(S.begin(), S.end(), Complex(0));
    const double bound = a.dot(Y * a) + kThetaMargin;
    enumerate_ellipsoid(Y, -a, bound, [&](const IntVector& n) {
      std::size_t p = 0;
      for (int i = 0; i < g; ++i) {
        v(i) = static_cast<double>(n(i)) + a(i);
        if (n(i) & 1) p |= std::size_t{1} << i;
      }
      double re = 0, im = 0;
      for (int i = 0; i < g; ++i) {
        double xr = 0, yr = 0;
        for (int j = 0; j < g; ++j) {
          xr += X(i, j) * v(j);
          yr += Y(i, j) * v(j);
        }
        re += v(i) * xr;
        im += v(i) * yr;
      }
      S[p] += std::polar(std::exp(-M_PI * im), M_PI * re);
    });
    // Walsh-Hadamard: W[B] = sum_p S[p] (-1)^{popcount(p & B)}
    for (std::size_t h = 1; h < N; h <<= 1)
      for (std::size_t i = 0; i < N; i += h << 1)
        for (std::size_t j = i; j < i + h; ++j) {
          const Complex x = S[j], y = S[j + h];
          S[j] = x + y;
          S[j + h] = x - y;
        }
    for (std::size_t B = 0; B < N; ++B) {
      const int ab = std::popcount(A & B);
      if (ab % 2) continue;
      // phase i^{a.b} with a.b even is (-1)^{ab/2}
      out.push_back((ab / 2) % 2 ? -S[B] : S[B]);
    }
  }
  return out;
}

double log_chi_g_norm(const SiegelPoint& om) {
  const int g = om.genus();
  if (g == 0) return 0.0;
  const auto th = theta_nulls(om);
  double s = 0;
  for (const auto& t : th) {
    const double m = std::abs(t);
    if (m == 0) return -std::numeric_limits<double>::infinity();
    s += std::log(m);
  }
  const double w = std::ldexp(1.0, g + 1) * (std::ldexp(1.0, g) + 1);
  const double logdet = std::log(Eigen::MatrixXd(om.omega.imag()).determinant());
  return 0.5 * w * logdet + 8 * s;
}

double log_upsilon_g_norm(const SiegelPoint& om) {
  const int g = om.genus();
  if (g == 0) return 0.0;
  const auto th = theta_nulls(om);
  double s = 0, mmax = -std::numeric_limits<double>::infinity();
  for (const auto& t : th) {
    const double m = std::abs(t);
    if (m < kThetaZeroThreshold) fail(ErrorCode::ThetaZeroDivision, "theta constant below threshold");
    s += std::log(m);
    mmax = std::max(mmax, -8 * std::log(m));
  }
  Complex acc = 0;
  for (const auto& t : th) {
    const Complex lt = std::log(t);
    acc += std::exp(-8.0 * lt - mmax);
  }
  const double logsum = mmax + std::log(std::abs(acc));
  const double w = 2 * (std::ldexp(1.0, g) - 1) * (std::ldexp(1.0, g) + 2);
  const double logdet = std::log(Eigen::MatrixXd(om.omega.imag()).determinant());
  return 0.5 * w * logdet + 8 * s + logsum;
}

}  // namespace bcov
