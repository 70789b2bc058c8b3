#pragma once

// Height-ordered enumeration of minimal short Weierstrass pairs, the
// congruence families F and E, empirical densities and the tail defect.

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "dstab/integer.hpp"
#include "dstab/ratcurve.hpp"

namespace dstab::sieve {

enum class Predicate {
  disc_unit_mod_square,      // ell^2 does not divide Delta
  disc_unit,                 // ell does not divide Delta (ell = p)
  torsion_free_both_twists,  // ell prime to Delta, p prime to #E and #E^-1 mod ell
  two_adic_class,            // a = 756 mod 1024, b = +-16 mod 4096 (ell = 2)
};

std::string to_string(Predicate pr);

struct Condition {
  u64 ell = 0;
  Predicate predicate = Predicate::disc_unit_mod_square;
};

/// The family F attached to p and a ramified set Z. `conditions` holds one
/// entry per prime of T = Z u {2, p}, ascending; every other prime carries
/// disc_unit_mod_square implicitly.
struct CongruenceFamily {
  u64 p = 3;
  std::vector<u64> ramified;
  std::vector<Condition> conditions;

  /// Validates p in {3, 5} and Z (distinct primes, none equal to 2 or p).
  static CongruenceFamily make(u64 p, std::vector<u64> ramified);

  bool in_t(u64 ell) const;
};

/// The single-prime condition at c.ell, for a pair with nonzero discriminant.
bool condition_holds(const WeierstrassPair& e, const Condition& c, u64 p);

/// a = 756 (mod 1024) and b = +-16 (mod 4096).
bool two_adic_class(const WeierstrassPair& e);

// ---- enumeration -----------------------------------------------------------

/// Visits every globally minimal pair with nonzero discriminant and height
/// <= x, ordered by a ascending, then b ascending. Returns the count.
/// Box corners whose discriminant overflows throw OverflowError.
u64 enumerate_minimal(const HeightBound& x,
                      const std::function<void(const WeierstrassPair&)>& visit);

/// Count only, split into `workers` contiguous a-stripes.
u64 count_minimal(const HeightBound& x, unsigned workers = 1);

struct Zeta10 {
  long double lo = 0;
  long double hi = 0;
};

/// Partial sum of n^-10 for n <= terms, plus the tail bound terms^-9 / 9.
Zeta10 zeta10(unsigned terms = 50);

/// 4 x^(5/6) / zeta(10), with zeta(10) the enclosure midpoint. The enclosure
/// width at 50 terms is below 1e-16, so the result carries long double
/// precision (relative error around 1e-18).
long double brumer_reference(const HeightBound& x);

// ---- membership ------------------------------------------------------------

enum class Verdict { pass, fail, indeterminate };

std::string to_string(Verdict v);

struct Membership {
  Verdict verdict = Verdict::pass;
  std::string reason;  // empty on pass
  u64 ell = 0;         // prime responsible for a rejection, 0 if none

  bool passed() const { return verdict == Verdict::pass; }
};

/// Membership in F. Conditions are checked 2-adic first, then p, then Z,
/// then ell^2 | Delta for odd ell outside T (by factoring Delta').
/// Requires a globally minimal pair with Delta != 0 (InputError otherwise).
Membership member_F(const WeierstrassPair& e, const CongruenceFamily& fam, std::uint64_t seed = 0);

/// Membership in the larger family E: good reduction at p; good reduction and
/// both-twist p-torsion vanishing at every ell in z; Delta' squarefree and
/// = 1 (mod 4); additive at 2 with the input minimal there, for the pair and
/// its twist; v_2(j) = 0.
Membership member_E(const WeierstrassPair& e, u64 p, const std::vector<u64>& z,
                    std::uint64_t seed = 0);

// ---- family counts ---------------------------------------------------------

struct SieveReport {
  i128 cutoff = 0;
  u64 total_minimal = 0;
  u64 family_count = 0;
  /// Marginal failures: for each profiled prime, the number of pairs that
  /// fail its condition (regardless of the other conditions).
  std::map<u64, u64> rejections;
  /// Generic primes profiled in addition to T, and the number of pairs
  /// passing all of their conditions simultaneously.
  std::vector<u64> generic_profile;
  u64 generic_joint_pass = 0;
  Rational empirical_density;  // family_count / total_minimal
  u64 indeterminate = 0;
};

/// Counts F up to height x with per-condition profiling. `generic_profile`
/// primes inside T are ignored. The result does not depend on `workers`.
SieveReport family_count(const HeightBound& x, const CongruenceFamily& fam,
                         const std::vector<u64>& generic_profile = {3, 5, 7, 11, 13},
                         unsigned workers = 1, std::uint64_t seed = 0);

struct MembersReport {
  i128 cutoff = 0;
  u64 candidates = 0;  // minimal, nonsingular pairs in the 2-adic classes
  std::vector<WeierstrassPair> members;  // a ascending, then b ascending
  std::map<std::string, u64> rejections;  // by reason
  u64 indeterminate = 0;
};

/// F-members of height <= x found by walking the arithmetic progressions
/// a = 756 (mod 1024), b = +-16 (mod 4096) directly.
MembersReport two_adic_members(const HeightBound& x, const CongruenceFamily& fam,
                               std::uint64_t seed = 0);

// ---- tail defect -----------------------------------------------------------

struct TailClasses {
  bool b1 = false;  // some ell > z divides both a and b
  bool b2 = false;  // Delta != 0 and some ell > z, not dividing both, has ell^2 | Delta
  bool b3 = false;  // Delta = 0
  bool any() const { return b1 || b2 || b3; }
};

/// Classification of a single pair; z >= 3. Wide discriminants are factored
/// and may throw IndeterminateError.
TailClasses tail_classes(const WeierstrassPair& e, u64 z, std::uint64_t seed = 0);

struct TailDefect {
  u64 z = 0;
  i128 cutoff = 0;
  u64 total = 0;  // size of the union
  u64 b1 = 0;
  u64 b2 = 0;
  u64 b3 = 0;
  u64 indeterminate = 0;
};

/// Over globally minimal pairs (singular ones included) of height <= x.
/// Requires z >= 5.
TailDefect tail_defect(u64 z, const HeightBound& x, unsigned workers = 1, std::uint64_t seed = 0);

/// Upper bound for the sum of ell^-2 over primes ell > z: the exact partial
/// sum to 10^6 plus 10^-6 for the rest.
long double prime_inverse_square_tail(u64 z);

}  // namespace dstab::sieve
