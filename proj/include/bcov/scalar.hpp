#pragma once

#include <complex>
#include <cstdint>
#include <mutex>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/complex_adaptor.hpp>
#include <boost/multiprecision/mpfr.hpp>
#include <boost/rational.hpp>

namespace bcov {

namespace mp = boost::multiprecision;

using Complex = std::complex<double>;
using MpReal = mp::number<mp::mpfr_float_backend<0>, mp::et_off>;
using MpComplex = mp::number<mp::complex_adaptor<mp::mpfr_float_backend<0>>, mp::et_off>;
using Rational = boost::rational<std::int64_t>;

template <class Real> struct complex_of;
template <> struct complex_of<double> { using type = std::complex<double>; };
template <> struct complex_of<MpReal> { using type = MpComplex; };
template <class Real> using complex_t = typename complex_of<Real>::type;

template <class C> struct real_of;
template <> struct real_of<std::complex<double>> { using type = double; };
template <> struct real_of<MpComplex> { using type = MpReal; };
template <class C> using real_t = typename real_of<C>::type;

template <class Real> inline Real pi() { return boost::math::constants::pi<Real>(); }
template <class Real> inline Real two_pi() { return boost::math::constants::two_pi<Real>(); }

template <class C> inline C expi(const real_t<C>& theta) {
  using std::cos;
  using std::sin;
  return C(cos(theta), sin(theta));
}

inline double to_double(double x) { return x; }
inline double to_double(const MpReal& x) { return x.convert_to<double>(); }
inline Complex to_complex(const Complex& z) { return z; }
inline Complex to_complex(const MpComplex& z) { return {to_double(z.real()), to_double(z.imag())}; }

// Boost 1.74 keeps the MPFR default precision in a process-wide static, so
// changes are serialized.  Worker threads spawned while a guard is alive
// inherit its precision.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned digits10);
  ~PrecisionGuard();
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  std::unique_lock<std::recursive_mutex> lock_;
  unsigned saved_;
};

// Worker count for internal loops; BCOV_KIT_THREADS caps it.
unsigned thread_count();

}  // namespace bcov
