#include "dstab/integer.hpp"

#include <algorithm>

#include "dstab/errors.hpp"

namespace dstab {

std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v > 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::string to_string(i128 v) {
  if (v < 0) return "-" + to_string(static_cast<u128>(0) - static_cast<u128>(v));
  return to_string(static_cast<u128>(v));
}

i128 parse_i128(const std::string& text) {
  if (text.empty()) throw InputError("empty integer literal");
  std::size_t pos = 0;
  bool negative = false;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  if (pos == text.size()) throw InputError("malformed integer: " + text);
  // Accept scientific shorthand such as 1e9 for integer powers of ten.
  const auto epos = text.find_first_of("eE", pos);
  if (epos != std::string::npos) {
    const i128 mant = parse_i128(text.substr(pos, epos - pos));
    const i128 ex = parse_i128(text.substr(epos + 1));
    if (ex < 0 || ex > 36) throw InputError("exponent out of range: " + text);
    i128 v = mant;
    for (i128 i = 0; i < ex; ++i) v = checked_mul(v, 10);
    return negative ? -v : v;
  }
  i128 v = 0;
  for (; pos < text.size(); ++pos) {
    const char c = text[pos];
    if (c < '0' || c > '9') throw InputError("malformed integer: " + text);
    v = checked_add(checked_mul(v, 10), c - '0');
  }
  return negative ? -v : v;
}

i128 checked_add(i128 a, i128 b) {
  i128 r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("128-bit addition overflow");
  return r;
}

i128 checked_mul(i128 a, i128 b) {
  i128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("128-bit multiplication overflow");
  return r;
}

mpz_class to_mpz(i128 v) {
  const bool neg = v < 0;
  u128 m = neg ? static_cast<u128>(0) - static_cast<u128>(v) : static_cast<u128>(v);
  mpz_class hi(static_cast<unsigned long>(static_cast<u64>(m >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<u64>(m)));
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}

i128 to_i128(const mpz_class& v) {
  if (mpz_sizeinbase(v.get_mpz_t(), 2) > 126) throw OverflowError("value exceeds 126 bits");
  mpz_class m = abs(v);
  const mpz_class lo_mask = (mpz_class(1) << 64) - 1;
  mpz_class lo = m & lo_mask;
  mpz_class hi = m >> 64;
  u128 r = (static_cast<u128>(mpz_get_ui(hi.get_mpz_t())) << 64) |
           static_cast<u128>(mpz_get_ui(lo.get_mpz_t()));
  return v < 0 ? -static_cast<i128>(r) : static_cast<i128>(r);
}

u64 mod_u64(i128 a, u64 m) {
  i128 r = a % static_cast<i128>(m);
  if (r < 0) r += m;
  return static_cast<u64>(r);
}

u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 powmod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  static constexpr u64 kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 p : kBases) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : kBases) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

int valuation(i128 n, u64 p) {
  if (n == 0) throw InputError("valuation of zero");
  int v = 0;
  while (n % static_cast<i128>(p) == 0) {
    n /= static_cast<i128>(p);
    ++v;
  }
  return v;
}

int valuation(const mpz_class& n, u64 p) {
  if (n == 0) throw InputError("valuation of zero");
  mpz_class pp(static_cast<unsigned long>(p));
  mpz_class rest;
  return static_cast<int>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), pp.get_mpz_t()));
}

i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

u64 isqrt(u128 n) {
  if (n == 0) return 0;
  u64 r = static_cast<u64>(__builtin_sqrtl(static_cast<long double>(n)));
  while (static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

u64 icbrt(u128 n) {
  if (n == 0) return 0;
  u64 r = static_cast<u64>(__builtin_cbrtl(static_cast<long double>(n)));
  auto cube = [](u64 x) { return static_cast<u128>(x) * x * x; };
  while (r > 0 && cube(r) > n) --r;
  while (cube(r + 1) <= n) ++r;
  return r;
}

std::vector<u64> primes_up_to(u64 n) {
  std::vector<bool> composite(n + 1, false);
  std::vector<u64> out;
  for (u64 i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (u64 j = i * i; j <= n; j += i) composite[j] = true;
  }
  return out;
}

}  // namespace dstab
