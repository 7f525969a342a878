#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bcov/lattice.hpp"
#include "bcov/weil.hpp"

namespace bcov {

// z = x + i y in L (x) R + i C_L, realizing Omega_Lambda for Lambda = U(N) + L.
struct TubePoint {
  Lattice L;
  Eigen::VectorXd x, y;
  std::int64_t N = 1;

  TubePoint(Lattice lat, Eigen::VectorXd re, Eigen::VectorXd im, std::int64_t n = 1);
  double y_norm() const;  // <y, y>_L
};

// Product data for Lambda = U + L; the table must be built on direct_sum(U, L).
struct ProductSpec {
  Lattice L;
  FourierTable table;
  Eigen::VectorXd weylVector;  // rho in L (x) Q, basis of L
  Eigen::VectorXd chamberRef;  // lambda . W > 0 means <lambda, chamberRef> > 0
  double truncation = 8.0;     // keep <lambda, y> <= truncation
  std::int64_t alpha = 1;
  double tolerance = 1e-6;     // on the tail bound
};

struct ProductFactor {
  IntVector m;        // lambda = G^{-1} m
  Rational norm;      // <lambda, lambda>
  std::size_t cls;    // lambda + L in the table's form
  std::int64_t exponent;  // alpha c(lambda^2/2)
  double pairing;     // <lambda, y>
};

struct ProductValue {
  double logAbs = 0;
  double arg = 0;  // mod 2 pi
  double tailBound = 0;
  std::size_t factors = 0;
};

// Nonzero factors with 0 < <lambda, y> <= bound, in deterministic order.
std::vector<ProductFactor> product_factors(const ProductSpec& spec, const Eigen::VectorXd& y, double bound);

ProductValue borcherds_log_product(const ProductSpec& spec, const TubePoint& z);

struct PeterssonPsi {
  double logNormSq = 0;      // log ||Psi(z, alpha F)||^2
  double logNormSqRoot = 0;  // log ||Psi(z, F)||^2 = logNormSq / alpha
  double tailBound = 0;
  double normSq() const { return std::exp(logNormSq); }
};

PeterssonPsi petersson_norm_psi(const ProductSpec& spec, const TubePoint& z);

}  // namespace bcov
