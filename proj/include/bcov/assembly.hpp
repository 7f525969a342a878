#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "bcov/borcherds.hpp"
#include "bcov/lattice.hpp"
#include "bcov/qseries.hpp"
#include "bcov/weil.hpp"

namespace bcov {

enum class BcovCase {
  Generic = 1,  // (r, delta) not (2,0) or (10,0)
  TenZero = 2,  // (r, delta) = (10,0)
  TwoZero = 3,  // (r, delta) = (2,0), M = U or U(2)
};

BcovCase select_case(int r, int delta);

struct CaseExponents {
  BcovCase kase = BcovCase::Generic;
  int g = 0;
  Rational alpha{1};              // multiple of F_Lambda in the input form
  bool addsSpecial = false;       // input form also adds f_Lambda
  bool upsilon = false;           // Siegel factor is Upsilon_g instead of chi_g^8
  std::int64_t tauMExponent = 0;  // RHS equals tau_M^{-e}
  std::int64_t bcovExponent = 0;  // RHS equals tau_BCOV^{e}
  std::int64_t etaExponent = 0;   // power of ||eta^24|| in the BCOV formula
};

CaseExponents case_exponents(int r, int delta, int g);

struct BVEvaluation {
  Lattice M;
  TwoElemInvariants inv;
  TubePoint z;                    // on the tube model of M^perp = U + L
  SiegelPoint omega;              // genus g(M)
  UpperHalfPoint tauT;
  ProductSpec productSpec;        // F_Lambda table, its Weyl vector and chamber
  std::optional<FourierTable> specialTable;  // f_Lambda for (r, delta) = (2,0)
  Eigen::VectorXd specialWeyl;    // Weyl vector of f_Lambda
};

// Spec of Psi(., input form) for the case of ev.
ProductSpec input_form_spec(const BVEvaluation& ev, const CaseExponents& ce);

struct RhsComponents {
  CaseExponents exps;
  double logPsi = 0;     // log ||Psi(z, input form)||
  double logSiegel = 0;  // log ||chi_g^8|| or log ||Upsilon_g||
  double logEta = 0;     // log ||eta(tau_T)^24||
  double tailBound = 0;
};

RhsComponents rhs_components(const BVEvaluation& ev);

// Right-hand sides up to the constant C_M, in log form.
struct RhsValue {
  double logValue = 0;
  std::int64_t exponent = 0;
  bool upToConstant = true;
  double value() const { return std::exp(logValue); }
};

RhsValue tau_m_power_rhs(const RhsComponents& c);
RhsValue tau_bcov_power_rhs(const RhsComponents& c);
inline RhsValue tau_m_power_rhs(const BVEvaluation& ev) { return tau_m_power_rhs(rhs_components(ev)); }
inline RhsValue tau_bcov_power_rhs(const BVEvaluation& ev) { return tau_bcov_power_rhs(rhs_components(ev)); }

// log of the BCOV side rebuilt from tau_M via tau_BCOV = tau_M^{-4} ||eta^24||^2.
double composed_bcov_log(const RhsComponents& c);
// log(tau_bcov_power_rhs / composed); independent of the sample point.
double bcov_ratio_log(const RhsComponents& c);

// 2^14 (2 pi)^{2 rho} / |A_M| with rho = r + 1.
double theorem82_constant(const Lattice& M);
int theorem82_rho(const Lattice& M);

struct CovolumeResult {
  double generic = 0;
  double closed = 0;
  Eigen::MatrixXd gram;  // (r+1) x (r+1) L2 Gram matrix
};

CovolumeResult covolume_check(const Lattice& M, const Eigen::VectorXd& pairingsWithKaehler, double kaehlerNormSq,
                              double volS);

double vol_x(double volS);

struct HodgeAudit {
  int h11 = 0;
  int h21 = 0;
  int g = 0;
  bool identityHolds = false;  // h21 - 4g = 21 - r (non-exceptional)
  bool eulerHolds = false;     // 2(h11 - h21) = 12(r - 10)
};

// Hodge numbers of the resolved Borcea-Voisin threefold from its fixed curves.
HodgeAudit hodge_audit(int r, int l, int delta);

// Random Lorentzian 2-elementary lattice of rank <= maxRank.
Lattice random_two_elementary_lorentzian(std::mt19937_64& rng, int maxRank);

// Well-conditioned sample point of the Siegel upper half space.
SiegelPoint random_siegel_point(int g, std::mt19937_64& rng);

// Sample lattice M for each case: U + E8 + E8, U(2) + E8(2) and U(2).
Lattice sample_m(BcovCase kase);
// Random evaluation points for sample_m(kase) with zero Weyl vectors in the
// (10,0) and (2,0) cases and the chamber of Im sigma > Im tau for U + U.
std::vector<BVEvaluation> bcov_samples(BcovCase kase, int count, std::uint64_t seed);

}  // namespace bcov
