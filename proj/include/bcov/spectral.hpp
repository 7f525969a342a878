#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "bcov/qseries.hpp"

namespace bcov {

// Signed multiset of labelled positive eigenvalues plus a count of zero modes.
class SpectrumMultiset {
 public:
  struct Entry {
    double value = 0;
    std::int64_t mult = 0;
  };

  void add(const std::string& label, double value, std::int64_t mult = 1);
  void add_zero(std::int64_t mult = 1) { zeroModes_ += mult; }

  const std::map<std::string, Entry>& entries() const { return entries_; }
  std::int64_t zero_modes() const { return zeroModes_; }
  std::int64_t total() const;  // sum of multiplicities including zero modes

  SpectrumMultiset& operator+=(const SpectrumMultiset& o);
  SpectrumMultiset scaled(std::int64_t k) const;
  bool operator==(const SpectrumMultiset& o) const;  // same labels and multiplicities, zero modes included
  bool same_positive_part(const SpectrumMultiset& o) const;

  std::complex<double> zeta(std::complex<double> s) const;  // sum mult * value^{-s}

 private:
  std::map<std::string, Entry> entries_;
  std::int64_t zeroModes_ = 0;
};

SpectrumMultiset operator+(SpectrumMultiset a, const SpectrumMultiset& b);

// {a + b}: labels "la+lb"; zero modes act as the empty label.
SpectrumMultiset tensor_sum(const SpectrumMultiset& a, const SpectrumMultiset& b);

// nu_{m,n} = 2 pi^2 |m tau + n|^2 / Im tau <= cutoff over (Z^2)^*, or over (Z^2)^*/{+-1}.
SpectrumMultiset torus_eigenvalues(Complex tau, double cutoff, bool modSign = false);
double torus_eigenvalue(Complex tau, std::int64_t m, std::int64_t n);

struct EpsteinValue {
  double value = 0;
  double tolerance = 0;
};

// zeta_{0,0}(s) = sum' nu_{m,n}^{-s} for real s not in {0, 1}.
EpsteinValue epstein_zeta(Complex tau, double s);
// Direct partial sum over Q <= radius^2 with the integral tail added.
double epstein_zeta_direct(Complex tau, double s, double radius);
EpsteinValue epstein_zeta_deriv0(Complex tau);

struct TauEll {
  double eta_route = 0;   // (4 pi ||eta^4||)^{-1}
  double zeta_route = 0;  // (2 pi)^{-1} exp(zeta'(0))
};
TauEll tau_ell(Complex tau);
double kronecker_residual(Complex tau);  // |zeta'(0) + log(2 Im tau |eta|^4)|

struct Sector {
  int p = 0, q = 0;
  bool plus = true;
  bool operator<(const Sector& o) const { return std::tie(p, q, plus) < std::tie(o.p, o.q, o.plus); }
};
using SectorSpectra = std::map<Sector, SpectrumMultiset>;

SectorSpectra k3_sector_spectra(const SpectrumMultiset& plus, const SpectrumMultiset& minus, int h11plus,
                                int h11minus);
SectorSpectra torus_sector_spectra(const SpectrumMultiset& nu);

// sigma(box_{p,q}) on the orbifold (S x T)/(theta x -1) for p, q <= 1 from tensor sums.
SpectrumMultiset orbifold_spectrum(int p, int q, const SectorSpectra& torus, const SectorSpectra& k3);

struct BvZetaReport {
  std::vector<std::complex<double>> s;
  std::vector<double> lemma00, lemma10, lemma11, combination, bcov;  // relative residuals per s
  bool multisetIdentity = false;
  double max_residual() const;
};

BvZetaReport bv_zeta_combination(const SpectrumMultiset& plus, const SpectrumMultiset& minus,
                                 const SpectrumMultiset& nu, int h11plus,
                                 const std::vector<std::complex<double>>& sValues);

// Coefficients of zeta_00, zeta_10, zeta_11 in sum (-1)^{p+q} p q zeta_{p,q} for a threefold.
std::array<int, 3> bcov_weight_reduction();

}  // namespace bcov
