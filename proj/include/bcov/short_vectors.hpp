#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "bcov/lattice.hpp"

namespace bcov {

// Calls visit(x) for every integer x with (x - c)^T Q (x - c) <= bound, Q
// positive definite.  Points are visited in a fixed lexicographic order.
void enumerate_ellipsoid(const Eigen::MatrixXd& Q, const Eigen::VectorXd& center, double bound,
                         const std::function<void(const IntVector&)>& visit);

struct ShortVector {
  IntVector coords;  // in the basis of L, or of L^v when dual
  Rational norm;     // <lambda, lambda>
};

// Vectors of a definite lattice (or its dual) with |<lambda,lambda>| <= bound.
std::vector<ShortVector> short_vectors(const Lattice& L, bool dual, double bound);

}  // namespace bcov
