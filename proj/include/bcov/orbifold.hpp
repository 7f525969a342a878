#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "bcov/error.hpp"
#include "bcov/scalar.hpp"

namespace bcov {

// Rotation numbers (a1, a2, a3) in [0,1): g = diag(e(a1), e(a2), e(a3)).
using Rotation = std::array<Rational, 3>;

// Reduces each entry into [0,1); throws NotDetOne unless the sum is integral.
Rotation normalize_rotation(const Rotation& r);
Rotation rotation_from_ints(std::int64_t a1, std::int64_t a2, std::int64_t a3, std::int64_t n);
Rotation add_rotations(const Rotation& a, const Rotation& b);
bool is_identity(const Rotation& r);

// Finite diagonal abelian subgroup of SL(3,C).  Elements are sorted and
// elements[0] is the identity.
class AbelianSL3Group {
 public:
  AbelianSL3Group();
  explicit AbelianSL3Group(std::vector<Rotation> elements);

  const std::vector<Rotation>& elements() const { return elements_; }
  std::size_t order() const { return elements_.size(); }
  std::size_t ker_order(int k) const;    // |ker chi_k|, k in {0,1,2}
  std::size_t image_order(int k) const;  // |Im chi_k|
  // (C^3)^{G*} != {0}; true for the trivial group.
  bool has_common_fixed_axis() const;
  bool operator==(const AbelianSL3Group& o) const { return elements_ == o.elements_; }

 private:
  std::vector<Rotation> elements_;
};

AbelianSL3Group make_group(const std::vector<Rotation>& generators, std::size_t cap = 10000);
// The Klein four-group {1, diag(-1,-1,1), diag(-1,1,-1), diag(1,-1,-1)}.
AbelianSL3Group klein_group();

// Indices of nontrivial elements with no eigenvalue 1.
std::vector<std::size_t> gamma0(const AbelianSL3Group& G);

// Floating sum of chi/(1-chi)^2 over gamma0, and its rational rounding with
// denominator dividing 12|G|^2 (PrecisionLoss if that fails).
double delta_k_numeric(const AbelianSL3Group& G, int k);
Rational delta_k(const AbelianSL3Group& G, int k);
double epsilon_k_numeric(const AbelianSL3Group& G, int k);
Rational epsilon_k(const AbelianSL3Group& G, int k);
Rational epsilon_closed(const AbelianSL3Group& G);

// False only for a group with no common fixed axis and empty gamma0 that is
// not the Klein group.
bool check_lemma_4_6(const AbelianSL3Group& G);

// Distinct groups generated by up to maxGenerators rotations with
// denominators <= maxDenominator.
std::vector<AbelianSL3Group> scan_groups(int maxDenominator, int maxGenerators);

// |sum_{k=1}^{n-1} z^k/(1-z^k)^2 + (n^2-1)/12| with z = e(m/n).
double dedekind_sum_check(std::int64_t n, std::int64_t m);

struct FixedCurve {
  std::int64_t chi = 0;
  std::vector<Rotation> fixers;  // nontrivial elements fixing the curve pointwise
};

struct CurveIncidence {
  std::size_t curve = 0;
  int axis = 0;  // coordinate axis of the point chart along which the curve runs
};

struct FixedPoint {
  AbelianSL3Group stabilizer;
  std::vector<CurveIncidence> throughCurves;
};

struct FixedPointData {
  std::int64_t groupOrder = 1;
  std::int64_t chiAmbient = 0;
  std::vector<FixedCurve> curves;
  std::vector<FixedPoint> points;
};

// Throws InvalidData on any inconsistency.
void validate(const FixedPointData& data);
Rational chi_orb(const FixedPointData& data);
// Pair enumeration over fixed curves and isolated fixed points.
Rational roan_chi(const FixedPointData& data);

// Existence conditions for the 2-elementary invariants of a K3 involution.
bool valid_k3_triple(int r, int l, int delta);
std::vector<std::array<int, 3>> k3_triples();
FixedPointData borcea_voisin_fixture(int r, int l, int delta);

// Random consistent data built from small groups without a common axis.
FixedPointData random_fixed_point_data(std::mt19937_64& rng);

}  // namespace bcov
