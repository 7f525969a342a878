#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "bcov/error.hpp"
#include "bcov/scalar.hpp"

namespace bcov {

using IntMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
using RationalVector = std::vector<Rational>;

struct Lattice {
  IntMatrix gram;
  std::string label;

  Eigen::Index rank() const { return gram.rows(); }
  bool is_even() const;
  Eigen::MatrixXd gram_d() const { return gram.cast<double>(); }
};

Lattice make_lattice(const IntMatrix& gram, std::string label = {});
// Entry point for parsed input; rejects non-integral entries.
Lattice make_lattice(const Eigen::MatrixXd& gram, std::string label = {});

// Names: U, U(N), A_n, D_n, E_6, E_7, E_8, K3 (underscore optional).
Lattice standard(std::string_view name, int param = 0);
Lattice rescale(const Lattice& L, std::int64_t k);
Lattice direct_sum(const Lattice& a, const Lattice& b);
Lattice direct_sum(const std::vector<Lattice>& parts);

std::int64_t determinant(const Lattice& L);
std::pair<int, int> signature(const Lattice& L);

// Finite quadratic module L^v/L in the Smith basis.  Element i has
// coefficients a_j in [0, d_j) with generator j varying fastest.
class DiscriminantForm {
 public:
  DiscriminantForm() = default;
  DiscriminantForm(std::vector<std::int64_t> divisors, std::vector<RationalVector> lifts,
                   std::vector<RationalVector> gen_gram);

  const std::vector<std::int64_t>& divisors() const { return divisors_; }
  std::size_t size() const { return size_; }
  std::size_t num_generators() const { return divisors_.size(); }
  std::int64_t exponent() const { return divisors_.empty() ? 1 : divisors_.back(); }

  std::vector<std::int64_t> element(std::size_t index) const;
  std::size_t index(const std::vector<std::int64_t>& coeffs) const;
  std::size_t add(std::size_t a, std::size_t b) const;
  std::size_t neg(std::size_t a) const;

  Rational q(std::size_t a) const;             // in [0, 2)
  Rational b(std::size_t a, std::size_t c) const;  // in [0, 1)
  RationalVector lift(std::size_t a) const;    // coordinates in the basis of L

  const std::vector<RationalVector>& generator_lifts() const { return lifts_; }
  const std::vector<RationalVector>& generator_gram() const { return gen_gram_; }

 private:
  std::vector<std::int64_t> divisors_;
  std::vector<RationalVector> lifts_;
  std::vector<RationalVector> gen_gram_;
  std::size_t size_ = 1;
};

DiscriminantForm discriminant_form(const Lattice& L);

// Negated form, as for L(-1).
DiscriminantForm negate(const DiscriminantForm& df);

enum class Exceptional { None, Enriques, TwoElliptic };

struct TwoElemInvariants {
  int r = 0;
  int l = 0;
  int delta = 0;
  std::pair<int, int> sig{0, 0};
  std::optional<int> g;
  std::optional<int> k;
  Exceptional exceptional = Exceptional::None;

  // 11 - (r+l)/2 regardless of exceptional flags.
  int genus_formula() const { return 11 - (r + l) / 2; }
};

// m_role: L plays the part of M (signature (1, r-1)); populates g and k.
TwoElemInvariants two_elementary_invariants(const Lattice& L, bool m_role = false);

Rational mod_rational(const Rational& x, std::int64_t m);

}  // namespace bcov
