#pragma once

// Fixed-width exact integer helpers shared by all modules.

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace dstab {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

using Rational = mpq_class;

std::string to_string(i128 v);
std::string to_string(u128 v);

/// Parses a decimal integer (optional leading '-'); throws InputError.
i128 parse_i128(const std::string& text);

i128 checked_add(i128 a, i128 b);
i128 checked_mul(i128 a, i128 b);

inline i128 abs128(i128 v) { return v < 0 ? -v : v; }

mpz_class to_mpz(i128 v);
/// Throws OverflowError when the value does not fit.
i128 to_i128(const mpz_class& v);

/// Least nonnegative residue.
u64 mod_u64(i128 a, u64 m);

u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 base, u64 exp, u64 m);

/// Deterministic for all 64-bit inputs (Miller-Rabin, first 12 prime bases).
bool is_prime(u64 n);

/// v_p(n) for n != 0.
int valuation(i128 n, u64 p);
int valuation(const mpz_class& n, u64 p);

i128 gcd128(i128 a, i128 b);

/// Largest r with r*r <= n.
u64 isqrt(u128 n);
/// Largest r with r*r*r <= n.
u64 icbrt(u128 n);

/// Eratosthenes; primes <= n ascending.
std::vector<u64> primes_up_to(u64 n);

}  // namespace dstab
