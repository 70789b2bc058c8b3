#include "dstab/ratcurve.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "dstab/errors.hpp"

namespace dstab {

namespace {

constexpr u64 kTrialBound = 1u << 16;
constexpr int kRhoRounds = 64;
constexpr std::size_t kQuickTrialPrimes = 168;  // primes below 1000

// Brent's variant of Pollard rho. Returns a nontrivial factor or 0.
u64 rho_factor(u64 n, std::mt19937_64& rng) {
  if (n % 2 == 0) return 2;
  for (int round = 0; round < kRhoRounds; ++round) {
    const u64 c = rng() % (n - 1) + 1;
    u64 y = rng() % n;
    u64 m = 128, g = 1, r = 1, q = 1, x = 0, ys = 0;
    auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r <<= 1;
    } while (g == 1 && r < (u64{1} << 40));
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n && g != 1) return g;
  }
  return 0;
}

void factor_u64(u64 n, std::mt19937_64& rng, std::map<u64, int>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  const u64 d = rho_factor(n, rng);
  if (d == 0) throw IndeterminateError("factor: Pollard rho failed on " + std::to_string(n));
  factor_u64(d, rng, out);
  factor_u64(n / d, rng, out);
}

bool power_divides(i128 value, u64 prime, int k) {
  if (value == 0) return true;
  i128 pk = 1;
  for (int i = 0; i < k; ++i) {
    if (__builtin_mul_overflow(pk, static_cast<i128>(prime), &pk)) return false;
  }
  return value % pk == 0;
}

}  // namespace

HeightBound::HeightBound(i128 x) : x_(x) {
  if (x < 1) throw InputError("height bound must be >= 1");
}

i128 disc_core(const WeierstrassPair& e) {
  const i128 a3 = checked_mul(checked_mul(e.a, e.a), e.a);
  const i128 b2 = checked_mul(e.b, e.b);
  return checked_add(checked_mul(4, a3), checked_mul(27, b2));
}

i128 discriminant(const WeierstrassPair& e) { return checked_mul(-16, disc_core(e)); }

Rational j_invariant(const WeierstrassPair& e) {
  const i128 d = disc_core(e);
  if (d == 0) throw InputError("j-invariant of a singular pair");
  const mpz_class num = mpz_class(6912) * to_mpz(e.a) * to_mpz(e.a) * to_mpz(e.a);
  Rational j(num, to_mpz(d));
  j.canonicalize();
  return j;
}

i128 height(const WeierstrassPair& e) {
  const i128 a = abs128(e.a);
  const i128 a3 = checked_mul(checked_mul(a, a), a);
  const i128 b2 = checked_mul(e.b, e.b);
  return std::max(a3, b2);
}

bool is_globally_minimal(const WeierstrassPair& e, std::uint64_t seed) {
  if (e.a == 0 && e.b == 0) return false;
  // Any offending prime divides gcd(a, b) (or the nonzero coefficient).
  const i128 g = gcd128(e.a, e.b);
  if (g == 1) return true;
  for (const auto& [prime, exp] : factor(g, seed)) {
    (void)exp;
    if (power_divides(e.a, prime, 4) && power_divides(e.b, prime, 6)) return false;
  }
  return true;
}

WeierstrassPair minimal_short_model(const WeierstrassPair& e, std::uint64_t seed) {
  if (e.a == 0 && e.b == 0) throw InputError("minimal model of the zero pair");
  WeierstrassPair m = e;
  const i128 g = gcd128(e.a, e.b);
  if (g == 1) return m;
  for (const auto& [prime, exp] : factor(g, seed)) {
    (void)exp;
    const i128 p = prime;
    while (power_divides(m.a, prime, 4) && power_divides(m.b, prime, 6)) {
      m.a /= p * p * p * p;
      m.b /= p * p * p * p * p * p;
    }
  }
  return m;
}

WeierstrassPair twist_minus_one(const WeierstrassPair& e) { return {e.a, -e.b}; }

i128 odd_positive_part(i128 n) {
  if (n == 0) throw InputError("odd part of zero");
  n = abs128(n);
  while ((n & 1) == 0) n >>= 1;
  return n;
}

Factorization factor(i128 n, std::uint64_t seed) {
  if (n == 0) throw InputError("factor: zero has no factorization");
  static const std::vector<u64> small_primes = [] {
    std::vector<u64> ps;
    std::vector<bool> composite(kTrialBound, false);
    for (u64 i = 2; i < kTrialBound; ++i) {
      if (composite[i]) continue;
      ps.push_back(i);
      for (u64 j = i * i; j < kTrialBound; j += i) composite[j] = true;
    }
    return ps;
  }();
  u128 wide = static_cast<u128>(abs128(n));
  std::map<u64, int> found;
  std::size_t idx = 0;
  // Wide values: trial-divide until the cofactor fits in 64 bits.
  for (; (wide >> 64) != 0 && idx < small_primes.size(); ++idx) {
    const u64 d = small_primes[idx];
    while (wide % d == 0) {
      ++found[d];
      wide /= d;
    }
  }
  if (wide >> 64) {
    throw IndeterminateError("factor: cofactor " + to_string(wide) + " exceeds 64 bits");
  }
  u64 m = static_cast<u64>(wide);
  for (; idx < small_primes.size() && idx < kQuickTrialPrimes; ++idx) {
    const u64 d = small_primes[idx];
    if (d * d > m) break;
    while (m % d == 0) {
      ++found[d];
      m /= d;
    }
  }
  if (m > 1) {
    std::mt19937_64 rng(seed);
    factor_u64(m, rng, found);
  }
  Factorization out;
  out.reserve(found.size());
  for (const auto& [p, e] : found) out.push_back({p, e});
  return out;
}

bool is_squarefree(i128 n, std::uint64_t seed) {
  for (const auto& pp : factor(n, seed)) {
    if (pp.exponent > 1) return false;
  }
  return true;
}

}  // namespace dstab
