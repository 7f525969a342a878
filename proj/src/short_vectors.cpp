#include "bcov/short_vectors.hpp"

#include <cmath>

namespace bcov {

void enumerate_ellipsoid(const Eigen::MatrixXd& Q, const Eigen::VectorXd& center, double bound,
                         const std::function<void(const IntVector&)>& visit) {
  const Eigen::Index n = Q.rows();
  if (bound < 0) return;
  if (n == 0) {
    visit(IntVector(0));
    return;
  }
  // Fincke-Pohst quadratic completion: Q(x) = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2.
  Eigen::MatrixXd q = Q;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(q(i, i) > 0)) fail(ErrorCode::IndefiniteUnbounded, "ellipsoid form is not positive definite");
    for (Eigen::Index j = i + 1; j < n; ++j) {
      q(j, i) = q(i, j);
      q(i, j) /= q(i, i);
    }
    for (Eigen::Index k = i + 1; k < n; ++k)
      for (Eigen::Index l = k; l < n; ++l) q(k, l) -= q(k, i) * q(i, l);
  }
  const double slack = 1e-9 * std::max(1.0, bound);
  IntVector x(n);
  Eigen::VectorXd budget(n + 1), mid(n);
  std::vector<long long> hi(n);
  budget(n) = bound + slack;

  auto setup = [&](Eigen::Index i) {
    double s = 0;
    for (Eigen::Index j = i + 1; j < n; ++j) s += q(i, j) * (static_cast<double>(x(j)) - center(j));
    mid(i) = center(i) - s;
    const double r = std::sqrt(std::max(0.0, budget(i + 1)) / q(i, i));
    x(i) = static_cast<std::int64_t>(std::ceil(mid(i) - r));
    hi[i] = static_cast<long long>(std::floor(mid(i) + r));
  };

  Eigen::Index i = n - 1;
  setup(i);
  for (;;) {
    if (x(i) > hi[i]) {
      if (++i == n) return;
      ++x(i);
      continue;
    }
    const double d = static_cast<double>(x(i)) - mid(i);
    budget(i) = budget(i + 1) - q(i, i) * d * d;
    if (budget(i) < 0) {
      ++x(i);
      continue;
    }
    if (i == 0) {
      visit(x);
      ++x(0);
    } else {
      setup(--i);
    }
  }
}

std::vector<ShortVector> short_vectors(const Lattice& L, bool dual, double bound) {
  const auto sig = signature(L);
  if (sig.first != 0 && sig.second != 0)
    fail(ErrorCode::IndefiniteUnbounded, "short_vectors needs a definite lattice");
  const double s = sig.first > 0 ? 1.0 : -1.0;
  Eigen::MatrixXd G = L.gram_d();
  Eigen::MatrixXd Q = dual ? Eigen::MatrixXd(G.inverse() * s) : Eigen::MatrixXd(G * s);
  const Eigen::Index n = L.rank();
  std::vector<ShortVector> out;
  const std::int64_t det = determinant(L);
  enumerate_ellipsoid(Q, Eigen::VectorXd::Zero(n), bound, [&](const IntVector& x) {
    Rational nrm;
    if (!dual) {
      std::int64_t v = x.dot(L.gram * x);
      nrm = Rational(v);
    } else {
      // <G^{-1}m, G^{-1}m> = m^T G^{-1} m computed exactly via the adjugate.
      Eigen::VectorXd y = G.fullPivLu().solve(x.cast<double>());
      double v = x.cast<double>().dot(y) * static_cast<double>(det);
      nrm = Rational(static_cast<std::int64_t>(std::llround(v)), det);
    }
    if (std::abs(boost::rational_cast<double>(nrm)) <= bound) out.push_back({x, nrm});
  });
  return out;
}

}  // namespace bcov
