#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "bcov/error.hpp"
#include "bcov/scalar.hpp"

namespace bcov {

struct UpperHalfPoint {
  Complex tau;
  explicit UpperHalfPoint(Complex t) : tau(t) {
    if (!(t.imag() > 0)) fail(ErrorCode::NotUpperHalf, "Im(tau) must be positive");
  }
};

template <class C>
struct SeriesValue {
  C value;
  double tail;  // bound on the discarded terms
};

template <class Real>
inline int working_digits() {
  if constexpr (std::is_same_v<Real, double>) return 17;
  else return static_cast<int>(MpReal::default_precision());
}

template <class C>
inline void require_upper_half(const C& tau) {
  if (!(tau.imag() > 0)) fail(ErrorCode::NotUpperHalf, "Im(tau) must be positive");
}

template <class C>
C ipow(C base, long long e) {
  if (e < 0) {
    base = C(1) / base;
    e = -e;
  }
  C r(1);
  while (e) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

// eta(tau) = q^{1/24} prod_{n=1}^{nterms} (1 - q^n), q = e^{2 pi i tau}.
template <class C>
SeriesValue<C> eta(const C& tau, int nterms) {
  using Real = real_t<C>;
  using std::exp;
  require_upper_half(tau);
  if (nterms < 1) fail(ErrorCode::InvalidArgument, "nterms must be >= 1");
  const C i2pi(Real(0), two_pi<Real>());
  const C q = exp(i2pi * tau);
  C prod(1), qn(1);
  for (int n = 1; n <= nterms; ++n) {
    qn *= q;
    prod *= C(1) - qn;
  }
  const double aq = std::exp(-2 * M_PI * to_double(tau.imag()));
  // |log prod_{n>N}(1-q^n)| <= |q|^{N+1} / (1-|q|)^2
  const double tail = std::pow(aq, nterms + 1) / ((1 - aq) * (1 - aq));
  return {exp(i2pi * tau / Real(24)) * prod, tail};
}

// eta with modular reduction into the fundamental domain and adaptive length.
template <class C>
C eta(const C& tau) {
  using Real = real_t<C>;
  using std::exp;
  using std::sqrt;
  require_upper_half(tau);
  C t = tau;
  C mult(1);
  const C i(Real(0), Real(1));
  for (int guard = 0; guard < 10000; ++guard) {
    const double shift = std::round(to_double(t.real()));
    if (shift != 0) {
      t -= C(Real(shift));
      // eta(t + n) = e^{pi i n / 12} eta(t)
      mult *= expi<C>(pi<Real>() * Real(shift) / Real(12));
    }
    if (to_double(abs(t)) < 1.0 - 1e-12) {
      // eta(t) = eta(-1/t) / sqrt(-i t)
      mult /= sqrt(-i * t);
      t = C(-1) / t;
    } else {
      break;
    }
  }
  const double y = to_double(t.imag());
  const double digits = working_digits<Real>() + 3;
  const int nterms = std::max(2, static_cast<int>(std::ceil(digits * std::log(10.0) / (2 * M_PI * y))) + 1);
  return mult * eta(t, nterms).value;
}

// Petersson norm ||eta^p|| = (Im tau)^{p/4} |eta(tau)|^p.
inline double petersson_norm_eta_power(const UpperHalfPoint& p_tau, int p) {
  const double y = p_tau.tau.imag();
  return std::pow(y, p / 4.0) * std::pow(std::abs(eta(p_tau.tau)), p);
}
inline double log_petersson_norm_eta_power(const UpperHalfPoint& p_tau, int p) {
  return p / 4.0 * std::log(p_tau.tau.imag()) + p * std::log(std::abs(eta(p_tau.tau)));
}

// sum over n with |n + k/2| <= cutoff of e^{2 pi i (n + k/2)^2 tau}
template <class C>
SeriesValue<C> theta_a1(const C& tau, int k, double cutoff) {
  using Real = real_t<C>;
  using std::exp;
  require_upper_half(tau);
  if (k != 0 && k != 1) fail(ErrorCode::InvalidArgument, "theta_a1 index must be 0 or 1");
  const C i2pi(Real(0), two_pi<Real>());
  const C q = exp(i2pi * tau);
  C sum(0);
  if (k == 0) {
    // q^{n^2}, ratio q^{2n+1}
    sum = C(1);
    C term(1), ratio = q;
    const C q2 = q * q;
    for (long n = 1; n <= static_cast<long>(std::floor(cutoff)); ++n) {
      term *= ratio;
      ratio *= q2;
      sum += Real(2) * term;
    }
  } else {
    // 2 sum_{m>=0, m+1/2<=cutoff} q^{(m+1/2)^2}
    C term = exp(i2pi * tau / Real(4));
    C ratio = q * q;  // q^{(m+3/2)^2 - (m+1/2)^2} = q^{2m+2}
    const C q2 = q * q;
    for (long m = 0; m + 0.5 <= cutoff; ++m) {
      sum += Real(2) * term;
      term *= ratio;
      ratio *= q2;
    }
  }
  const double y = to_double(tau.imag());
  const double r = std::floor(cutoff - 0.5 * k) + 1 + 0.5 * k;  // first omitted |n + k/2|
  const double first = std::exp(-2 * M_PI * r * r * y);
  const double tail = 2 * first / (1 - std::exp(-4 * M_PI * r * y));
  return {sum, tail};
}

template <class C>
C theta_a1(const C& tau, int k = 0) {
  using Real = real_t<C>;
  const double y = to_double(tau.imag());
  const double digits = working_digits<Real>() + 3;
  const double cutoff = std::sqrt(digits * std::log(10.0) / (2 * M_PI * y)) + 1;
  return theta_a1(tau, k, cutoff).value;
}

// phi(tau) = eta(tau)^-8 eta(2tau)^8 eta(4tau)^-8 theta_{A1}(tau)^{12-r}
template <class C>
C phi_lambda(const C& tau, int r) {
  using Real = real_t<C>;
  const C e1 = eta(tau), e2 = eta(Real(2) * tau), e4 = eta(Real(4) * tau);
  const C ratio = e2 / (e1 * e4);
  return ipow(ratio, 8) * ipow(theta_a1(tau, 0), 12 - r);
}

// Theta series of E8 with the positive form, vectors of norm <= normBound.
SeriesValue<Complex> lattice_theta_e8(Complex tau, double normBound);

// Formal q-series helpers (integer coefficients, exact).
std::vector<double> e8_theta_coefficients(int depth);  // via 240 sigma_3
// prod_{n>=1} (1 - q^{step n})^{-power} up to q^depth
std::vector<double> inverse_eta_power_coefficients(int power, int depth, int step = 1);

// --- Siegel theta constants -------------------------------------------------

struct SiegelPoint {
  Eigen::MatrixXcd omega;
  explicit SiegelPoint(Eigen::MatrixXcd om);
  int genus() const { return static_cast<int>(omega.rows()); }
};

struct ThetaCharacteristic {
  std::vector<int> a;  // entries 0 or 1, meaning 0 or 1/2
  std::vector<int> b;
  bool even() const;
};

std::vector<ThetaCharacteristic> even_characteristics(int g);
std::vector<ThetaCharacteristic> all_characteristics(int g);

// Sum over n in Z^g with ||n + a||_{Im Omega} <= cutoff.
SeriesValue<Complex> riemann_theta_constant(const ThetaCharacteristic& ch, const SiegelPoint& om, double cutoff);
// Same sum without rejecting odd characteristics.
SeriesValue<Complex> riemann_theta_raw(const ThetaCharacteristic& ch, const SiegelPoint& om, double cutoff);
// Cutoff chosen so that the tail is below tol relative to the leading term.
SeriesValue<Complex> riemann_theta_constant(const ThetaCharacteristic& ch, const SiegelPoint& om);

// All even theta constants, ordered as even_characteristics(g).  Terms are
// bucketed by the parity of n and the b-dependence is resolved by a
// Walsh-Hadamard transform, so the cost is ~2^g lattice enumerations.
std::vector<Complex> theta_nulls(const SiegelPoint& om);

// log ||chi_g^8|| and log ||Upsilon_g|| (not squared).
double log_chi_g_norm(const SiegelPoint& om);
double log_upsilon_g_norm(const SiegelPoint& om);
inline double chi_g_norm(const SiegelPoint& om) { return std::exp(log_chi_g_norm(om)); }
inline double upsilon_g_norm(const SiegelPoint& om) { return std::exp(log_upsilon_g_norm(om)); }

constexpr double kThetaZeroThreshold = 1e-30;

}  // namespace bcov
