#pragma once

// Exact arithmetic on short Weierstrass cubics over prime fields F_ell.

#include <cstdint>
#include <vector>

#include "dstab/integer.hpp"

namespace dstab::ff {

/// Legendre symbol (a/ell) for an odd prime ell, via quadratic reciprocity.
/// Primality of ell is verified (deterministic for 64-bit ell).
int legendre(i128 a, u64 ell);

/// Immutable table of (x/ell) for x in [0, ell). Shareable across threads.
class LegendreTable {
 public:
  explicit LegendreTable(u64 ell);

  u64 ell() const { return ell_; }
  int operator()(u64 residue) const { return symbol_[residue]; }

 private:
  u64 ell_;
  std::vector<std::int8_t> symbol_;
};

/// y^2 = x^3 + a x + b over F_ell, coefficients as least residues.
struct FpCurve {
  u64 ell = 0;
  u64 a = 0;
  u64 b = 0;

  /// Reduces integer coefficients mod ell; ell must be prime.
  static FpCurve reduce(i128 a, i128 b, u64 ell);

  /// 4a^3 + 27b^2 != 0 in F_ell.
  bool nonsingular() const;

  /// The twist by -1: y^2 = x^3 + a x - b.
  FpCurve twist_minus_one() const;
};

/// #E(F_ell) including the point at infinity. Legendre-sum for ell >= 5,
/// exhaustive enumeration for ell in {2, 3}. Throws InputError if singular.
u64 point_count(const FpCurve& c);
/// Same, using a precomputed table for c.ell.
u64 point_count(const FpCurve& c, const LegendreTable& table);

/// Exhaustive (x, y) enumeration; the independent oracle for point_count.
u64 point_count_exhaustive(const FpCurve& c);

/// a_ell = ell + 1 - #E(F_ell).
i64 trace(const FpCurve& c);

/// True iff E(F_ell)[p] = 0, i.e. p does not divide #E(F_ell).
bool p_torsion_trivial(const FpCurve& c, u64 p);

/// Number of nonsingular points (plus infinity) on a singular cubic:
/// ell - 1 (split node), ell + 1 (nonsplit node) or ell (cusp). The zero
/// curve (0, 0) is the cusp y^2 = x^3. Throws InputError if nonsingular.
u64 smooth_point_count(const FpCurve& c);

/// Number of distinct roots in F_ell of T^3 + b T^2 + c T + d. Enumeration
/// below 1000, gcd(T^ell - T, f) by polynomial arithmetic above.
int cubic_root_count(u64 b, u64 c, u64 d, u64 ell);

/// Discrete log of x to base g modulo prime q by exhaustive search.
/// Throws InputError for q above 10^6 or when g is not a primitive root.
u64 dlog(u64 q, u64 g, u64 x);

/// Least g >= 2 of multiplicative order q - 1.
u64 smallest_primitive_root(u64 q);

/// True iff g has order q - 1 modulo the prime q.
bool is_primitive_root(u64 q, u64 g);

}  // namespace dstab::ff
