#pragma once

// Integral short Weierstrass pairs (A, B) over Q: y^2 = x^3 + A x + B.
//
// Width contract: all quantities are exact signed 128-bit integers.
// Discriminants of pairs with height up to 10^24 fit comfortably; any
// operation that would overflow throws OverflowError instead of wrapping.

#include <cstdint>
#include <vector>

#include "dstab/integer.hpp"

namespace dstab {

struct WeierstrassPair {
  i128 a = 0;
  i128 b = 0;

  friend bool operator==(const WeierstrassPair&, const WeierstrassPair&) = default;
};

/// Height cutoff X >= 1.
class HeightBound {
 public:
  explicit HeightBound(i128 x);
  i128 x() const { return x_; }

 private:
  i128 x_;
};

struct PrimePower {
  u64 prime = 0;
  int exponent = 0;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Sorted by prime, ascending.
using Factorization = std::vector<PrimePower>;

/// 4a^3 + 27b^2.
i128 disc_core(const WeierstrassPair& e);

/// -16 (4a^3 + 27b^2).
i128 discriminant(const WeierstrassPair& e);

/// 2^8 3^3 a^3 / (4a^3 + 27b^2), reduced. Throws InputError if singular.
Rational j_invariant(const WeierstrassPair& e);

/// max(|a|^3, b^2).
i128 height(const WeierstrassPair& e);

/// No prime ell has ell^4 | a and ell^6 | b. (0, 0) is not minimal.
bool is_globally_minimal(const WeierstrassPair& e, std::uint64_t seed = 0);

/// Divides out every ell^4, ell^6 pair, giving the minimal short model.
WeierstrassPair minimal_short_model(const WeierstrassPair& e, std::uint64_t seed = 0);

/// (a, -b).
WeierstrassPair twist_minus_one(const WeierstrassPair& e);

/// |n| / 2^{v_2(n)}; throws InputError for n = 0.
i128 odd_positive_part(i128 n);

/// Exact factorization of |n|: trial division, then Pollard rho (Brent)
/// seeded from `seed`, with deterministic Miller-Rabin on every cofactor.
/// Always succeeds for |n| < 2^64; above that, the cofactor left after trial
/// division by primes below 2^16 must fit in 64 bits, else IndeterminateError.
/// n = 0 throws InputError; n = +-1 gives the empty factorization.
Factorization factor(i128 n, std::uint64_t seed = 0);

/// True iff no prime square divides n (n != 0).
bool is_squarefree(i128 n, std::uint64_t seed = 0);

}  // namespace dstab
