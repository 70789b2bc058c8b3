#pragma once

// Local reduction data: Tate's algorithm, Kodaira symbols, Tamagawa
// numbers, split/nonsplit classification and local root numbers.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dstab/integer.hpp"
#include "dstab/ratcurve.hpp"

namespace dstab::localred {

enum class ReductionType { good, split_multiplicative, nonsplit_multiplicative, additive };

std::string to_string(ReductionType t);

enum class KodairaFamily { I, I_star, II, III, IV, II_star, III_star, IV_star };

struct Kodaira {
  KodairaFamily family = KodairaFamily::I;
  int n = 0;  // subscript for I_n and I_n*, otherwise 0

  /// "I0", "I5", "I0*", "I2*", "II", "III*", ...
  std::string symbol() const;

  friend bool operator==(const Kodaira&, const Kodaira&) = default;
};

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over Z.
struct LongModel {
  mpz_class a1, a2, a3, a4, a6;

  static LongModel from_short(const WeierstrassPair& e);

  mpz_class b2() const;
  mpz_class b4() const;
  mpz_class b6() const;
  mpz_class b8() const;
  mpz_class c4() const;
  mpz_class c6() const;
  mpz_class discriminant() const;

  /// Substitution x = x' + r, y = y' + s x' + t.
  LongModel rst(const mpz_class& r, const mpz_class& s, const mpz_class& t) const;

  friend bool operator==(const LongModel&, const LongModel&) = default;
};

struct ReductionData {
  u64 ell = 0;
  ReductionType type = ReductionType::good;
  Kodaira kodaira;
  int v_delta_min = 0;
  int conductor_exponent = 0;
  int tamagawa = 1;
  bool was_minimal = true;
  /// +1 / -1; empty (undetermined) at additive primes.
  std::optional<int> local_root;
  /// A model minimal at ell, integral, reached by the algorithm.
  LongModel minimal_model;
};

/// Tate's algorithm at the prime ell on the short model (a, b).
/// Throws InputError on a singular pair or non-prime ell.
ReductionData tate(const WeierstrassPair& e, u64 ell);
/// Tate's algorithm on an arbitrary integral long model.
ReductionData tate(const LongModel& model, u64 ell);

/// Reduction type at ell. For ell >= 5 the multiplicative case is split
/// iff (6b/ell) = +1 on the ell-minimal short model; ell in {2, 3} uses tate.
ReductionType reduction_type(const WeierstrassPair& e, u64 ell);

/// -1 iff split multiplicative at the odd prime ell; +1 for good or
/// nonsplit. Additive reduction throws AdditiveReductionError.
int local_root_factor(const WeierstrassPair& e, u64 ell);

struct OddRootSign {
  int sign = 1;
  std::vector<std::pair<u64, int>> factors;  // (ell, local root), ell ascending
};

/// -prod over odd ell | Delta_min of local_root_factor(e, ell).
/// Throws AdditiveReductionError if some odd prime is additive.
OddRootSign odd_root_sign(const WeierstrassPair& e, std::uint64_t seed = 0);

/// Good reduction at p and p does not divide the trace of Frobenius.
/// Throws InputError when reduction at p is bad.
bool ordinary_at(const WeierstrassPair& e, u64 p);

/// #E~(F_ell) of the reduction of an integral long model by enumeration.
u64 long_model_point_count(const LongModel& m, u64 ell);

}  // namespace dstab::localred
