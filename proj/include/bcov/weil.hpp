#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "bcov/lattice.hpp"
#include "bcov/qseries.hpp"

namespace bcov {

enum class Gen { S, T, Tinv };

using Mat2 = Eigen::Matrix<std::int64_t, 2, 2>;

// Word g_1 g_2 ... g_m in Mp2(Z) with the lifts (S, sqrt(tau)) and (T, 1).
class MetaplecticWord {
 public:
  MetaplecticWord() = default;
  explicit MetaplecticWord(std::vector<Gen> word);
  // Letters S, T and t (= T^{-1}); other characters are ignored.
  static MetaplecticWord parse(std::string_view letters);

  const std::vector<Gen>& word() const { return word_; }
  const Mat2& matrix() const { return matrix_; }
  std::string str() const;

  MetaplecticWord operator*(const MetaplecticWord& other) const;
  // Inverse word; S^{-1} is spelled S^7.
  MetaplecticWord inverse() const;

  template <class C>
  C act(const C& tau) const {
    using Real = real_t<C>;
    const C num = C(Real(matrix_(0, 0))) * tau + C(Real(matrix_(0, 1)));
    const C den = C(Real(matrix_(1, 0))) * tau + C(Real(matrix_(1, 1)));
    return num / den;
  }

  // Composite branch phi(tau) with phi^2 = c tau + d, tracked letter by letter.
  template <class C>
  C branch(const C& tau) const {
    using std::sqrt;
    C t = tau, phi(1);
    for (auto it = word_.rbegin(); it != word_.rend(); ++it) {
      if (*it == Gen::S) {
        phi *= sqrt(t);
        t = C(-1) / t;
      } else if (*it == Gen::T) {
        t += C(1);
      } else {
        t -= C(1);
      }
    }
    return phi;
  }

 private:
  std::vector<Gen> word_;
  Mat2 matrix_ = Mat2::Identity();
};

bool in_gamma0(const Mat2& m, std::int64_t N);

// Six words, pairwise inequivalent modulo Gamma0(4) on the left.
std::vector<MetaplecticWord> coset_reps_gamma0_4();

// Weil representation rho on C[A] for a discriminant form of signature sig.
class WeilRepresentation {
 public:
  WeilRepresentation(DiscriminantForm df, std::pair<int, int> sig);

  const DiscriminantForm& form() const { return df_; }
  std::size_t size() const { return df_.size(); }
  std::int64_t level() const { return level_; }  // N with e(q/2), e(b) in mu_N
  std::int64_t t_exponent(std::size_t g) const { return texp_[g]; }
  std::int64_t s_prefactor_exponent() const { return sexp_; }
  std::int64_t b_exponent(std::size_t g, std::size_t d) const;  // e(-b(g,d)) = zeta^{result}

  // rho(gen) v and rho(gen)^{-1} v for generic complex scalar.
  template <class C>
  std::vector<C> apply(Gen g, const std::vector<C>& v, bool inverse, const std::vector<C>& roots) const;
  template <class C>
  std::vector<C> apply(const MetaplecticWord& w, std::vector<C> v, const std::vector<C>& roots) const;
  template <class C>
  std::vector<C> apply_inverse(const MetaplecticWord& w, std::vector<C> v, const std::vector<C>& roots) const;

  std::vector<Complex> roots() const { return roots_of_unity<Complex>(); }
  template <class C>
  std::vector<C> roots_of_unity() const;

  Eigen::MatrixXcd matrix(const MetaplecticWord& w) const;

 private:
  DiscriminantForm df_;
  std::pair<int, int> sig_;
  std::int64_t level_ = 1;
  std::int64_t sexp_ = 0;
  std::vector<std::int64_t> texp_;
  std::vector<std::vector<std::int64_t>> brow_;  // per element, b with generators (times level)
};

// (rhoT, rhoS) as dense matrices.
std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> weil_generators(const DiscriminantForm& df, std::pair<int, int> sig);

struct FourierTable {
  DiscriminantForm form;
  std::int64_t alpha = 1;
  Rational kmax{0};
  std::vector<std::map<Rational, Complex>> coeffs;  // per element
  std::vector<std::map<Rational, double>> bounds;   // per-coefficient error bound
  double max_imag = 0;                              // before zeroing

  std::size_t components() const { return coeffs.size(); }
  // Missing k <= kmax means zero; k > kmax throws MissingCoefficient.
  Complex coeff(std::size_t gamma, const Rational& k) const;
  double weight_w() const { return 0.5 * coeff(0, Rational(0)).real(); }  // c_0(0)/2
  Eigen::VectorXcd eval(Complex tau) const;
};

FourierTable scale(const FourierTable& t, const Rational& s);
FourierTable add(const FourierTable& a, const FourierTable& b);
double integrality_residual(const FourierTable& t, const Rational& factor);
FourierTable rounded(const FourierTable& t, const Rational& factor);  // round(factor*c)/factor

// F = sum over cosets of phi|c rho(c^{-1}) e_0, evaluated pointwise.
class FLambdaEvaluator {
 public:
  explicit FLambdaEvaluator(const Lattice& L);
  const WeilRepresentation& weil() const { return weil_; }
  const std::vector<MetaplecticWord>& cosets() const { return cosets_; }
  int rank() const { return rank_; }
  double weight() const { return (4.0 - rank_) / 2.0; }
  // Custom coset representatives (for independence checks).
  void set_cosets(std::vector<MetaplecticWord> reps);

  Eigen::VectorXcd operator()(Complex tau) const;

 private:
  int rank_;
  WeilRepresentation weil_;
  std::vector<MetaplecticWord> cosets_;
  std::vector<std::vector<Complex>> vectors_;  // rho(c)^{-1} e_0
};

struct FLambdaOptions {
  double sampleY = 2.0;
  int nSamples = 256;
  Rational kMax{6};
  int principalDepth = 3;
  double tolerance = 1e-8;
  int extraDigits = 30;
};

FourierTable f_lambda_table(const Lattice& L, const FLambdaOptions& opt = {});

// Explicit f for M = U ("U") or M = U(2) ("U(2)").
FourierTable special_f_lambda(std::string_view which, int depth);
Lattice special_f_lattice(std::string_view which);

// ||F(g tau) - branch(tau)^{2w} rho(g) F(tau)||_inf
double verify_vvmf(const FLambdaEvaluator& F, const MetaplecticWord& g, Complex tau);
double verify_vvmf(const FourierTable& F, const WeilRepresentation& rho, const MetaplecticWord& g, Complex tau,
                   double weight);

}  // namespace bcov

#include "bcov/weil_impl.hpp"
