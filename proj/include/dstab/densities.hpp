#pragma once

// Exact local densities, ramified-prime curve counts, Howe bounds and the
// assembled lower bound eta_p * prod delta_ell.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dstab/integer.hpp"

namespace dstab::dens {

enum class Role { generic, ramified, at_p, at_two };

std::string to_string(Role r);
/// "generic" | "ramified" | "at_p" | "at_two"; throws InputError otherwise.
Role parse_role(const std::string& s);

struct LocalDensity {
  u64 ell = 0;
  Role role = Role::generic;
  int n_ell = 1;         // residues taken mod ell^n_ell
  mpz_class count;       // admissible residue pairs
  Rational value;        // count / ell^(2 n_ell), canonical
  std::string provenance;  // "closed-form" or "brute-force"
};

/// Largest ell accepted by afrak (the count is O(ell^3)).
inline constexpr u64 kAfrakMaxEll = 2000;

/// Number of (A, B) mod ell with 4A^3 + 27B^2 != 0 and p dividing neither
/// #E_{A,B}(F_ell) nor #E_{A,-B}(F_ell). p in {3, 5}; ell prime, not 2 or p.
/// `workers` splits the A-residues across threads; the result does not depend on it.
u64 afrak(u64 ell, u64 p, unsigned workers = 1);

/// Same count with the twisted condition dropped (only p ∤ #E_{A,B}(F_ell)).
u64 afrak_untwisted(u64 ell, u64 p, unsigned workers = 1);

/// Closed forms: generic 1 - 2/ell^2 + 1/ell^3 (2/3 at ell = 3), at_p 1 - 1/ell,
/// at_two 1/2^21, ramified afrak(ell, p)/ell^2.
LocalDensity delta_closed(u64 ell, Role role, u64 p, unsigned workers = 1);

/// Residue-grid enumeration: (Z/ell^2)^2 for generic, (Z/ell)^2 for at_p and
/// ramified (ramified counts points by exhaustive (x, y) enumeration).
/// at_two is rejected; grids above the documented caps are rejected.
LocalDensity delta_bruteforce(u64 ell, Role role, u64 p);

/// Howe-type lower bound on afrak(ell, p), exact. Empty when vacuous (<= 0).
/// p = 3 needs ell = 1 mod 4: (ell^2 - ell)/2 (1 - 15.18/sqrt(ell));
/// p = 5: ell^2 - ell - (1/2)(ell^2 - ell)(1 + 2.53*30/sqrt(ell)).
/// sqrt(ell) is replaced by a rational lower bound, so the value is a lower bound.
std::optional<Rational> howe_bound(u64 ell, u64 p);

/// 1/4 for p = 3, 3/8 for p = 5.
Rational eta(u64 p);

struct ProductInterval {
  Rational lo;
  Rational hi;
};

/// hi = prod(special) * prod_{ell <= cutoff, ell prime, ell not in excluded or {2, p}}
/// delta_closed(ell, generic, p); lo = hi (1 - 2/cutoff).
/// Needs cutoff >= 100 and cutoff >= max(excluded).
ProductInterval euler_product(u64 p, const std::vector<u64>& excluded, u64 cutoff,
                              const std::vector<Rational>& special = {});

struct DensityBound {
  u64 p = 0;
  Rational eta;
  std::vector<LocalDensity> per_prime;  // at_two, at_p, then ramified ascending
  u64 truncation_cutoff = 0;
  ProductInterval generic;   // the truncated generic product alone
  Rational prefactor;        // eta * product of per_prime values
  ProductInterval product_interval;  // prefactor * generic
  Rational lower_bound() const { return product_interval.lo; }
};

/// Assembles eta_p * delta_2 * delta_p * prod (afrak/ell^2) * generic interval.
/// ram: (ell, afrak value) with ell = 1 mod p. A zero afrak value throws
/// HypothesisError (hypothesis (2) of the theorem fails).
DensityBound theorem_bound(u64 p, const std::vector<std::pair<u64, u64>>& ram, u64 cutoff);

}  // namespace dstab::dens
