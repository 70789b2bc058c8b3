#include "dstab/ffcurve.hpp"

#include <algorithm>
#include <string>

#include "dstab/errors.hpp"

namespace dstab::ff {

namespace {

constexpr u64 kDlogLimit = 1'000'000;

void require_prime(u64 ell) {
  if (!is_prime(ell)) throw InputError("not a prime: " + std::to_string(ell));
}

// Jacobi symbol (a/n) for odd n > 0 and 0 <= a < n.
int jacobi(u64 a, u64 n) {
  int result = 1;
  while (a != 0) {
    while ((a & 1) == 0) {
      a >>= 1;
      const u64 r = n & 7;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if ((a & 3) == 3 && (n & 3) == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

u64 cubic_rhs(u64 x, u64 a, u64 b, u64 ell) {
  const u64 x2 = mulmod(x, x, ell);
  return (mulmod(x2, x, ell) + mulmod(a, x, ell) + b) % ell;
}

std::vector<u64> distinct_prime_factors(u64 n) {
  std::vector<u64> out;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

int legendre(i128 a, u64 ell) {
  if (ell == 2) throw InputError("legendre symbol needs an odd prime");
  require_prime(ell);
  return jacobi(mod_u64(a, ell), ell);
}

LegendreTable::LegendreTable(u64 ell) : ell_(ell), symbol_(ell, -1) {
  if (ell == 2) throw InputError("legendre table needs an odd prime");
  require_prime(ell);
  symbol_[0] = 0;
  for (u64 y = 1; y <= ell / 2; ++y) symbol_[mulmod(y, y, ell)] = 1;
}

FpCurve FpCurve::reduce(i128 a, i128 b, u64 ell) {
  require_prime(ell);
  return FpCurve{ell, mod_u64(a, ell), mod_u64(b, ell)};
}

bool FpCurve::nonsingular() const {
  const u64 a3 = mulmod(mulmod(a, a, ell), a, ell);
  const u64 b2 = mulmod(b, b, ell);
  return (mulmod(4 % ell, a3, ell) + mulmod(27 % ell, b2, ell)) % ell != 0;
}

FpCurve FpCurve::twist_minus_one() const { return FpCurve{ell, a, (ell - b) % ell}; }

u64 point_count_exhaustive(const FpCurve& c) {
  if (!c.nonsingular()) throw InputError("point count of a singular curve");
  u64 n = 1;
  for (u64 x = 0; x < c.ell; ++x) {
    const u64 rhs = cubic_rhs(x, c.a, c.b, c.ell);
    for (u64 y = 0; y < c.ell; ++y) {
      if (mulmod(y, y, c.ell) == rhs) ++n;
    }
  }
  return n;
}

u64 point_count(const FpCurve& c) {
  if (c.ell <= 3) return point_count_exhaustive(c);
  if (!c.nonsingular()) throw InputError("point count of a singular curve");
  i64 sum = 0;
  for (u64 x = 0; x < c.ell; ++x) sum += jacobi(cubic_rhs(x, c.a, c.b, c.ell), c.ell);
  return static_cast<u64>(static_cast<i64>(c.ell) + 1 + sum);
}

u64 point_count(const FpCurve& c, const LegendreTable& table) {
  if (table.ell() != c.ell) throw InputError("legendre table for a different prime");
  if (c.ell <= 3) return point_count_exhaustive(c);
  if (!c.nonsingular()) throw InputError("point count of a singular curve");
  i64 sum = 0;
  for (u64 x = 0; x < c.ell; ++x) sum += table(cubic_rhs(x, c.a, c.b, c.ell));
  return static_cast<u64>(static_cast<i64>(c.ell) + 1 + sum);
}

i64 trace(const FpCurve& c) {
  return static_cast<i64>(c.ell) + 1 - static_cast<i64>(point_count(c));
}

bool p_torsion_trivial(const FpCurve& c, u64 p) { return point_count(c) % p != 0; }

u64 smooth_point_count(const FpCurve& c) {
  if (c.nonsingular()) throw InputError("smooth_point_count needs a singular cubic");
  const u64 ell = c.ell;
  // Affine point (x, y) is singular iff F = F_x = F_y = 0 for
  // F = y^2 - x^3 - a x - b; F_x = -(3x^2 + a), F_y = 2y.
  auto singular_at = [&](u64 x, u64 y) {
    const u64 fx = (mulmod(3 % ell, mulmod(x, x, ell), ell) + c.a) % ell;
    return fx == 0 && mulmod(2 % ell, y, ell) == 0;
  };
  u64 smooth = 1;  // point at infinity
  if (ell <= 3) {
    for (u64 x = 0; x < ell; ++x) {
      const u64 rhs = cubic_rhs(x, c.a, c.b, ell);
      for (u64 y = 0; y < ell; ++y) {
        if (mulmod(y, y, ell) == rhs && !singular_at(x, y)) ++smooth;
      }
    }
    return smooth;
  }
  for (u64 x = 0; x < ell; ++x) {
    const u64 rhs = cubic_rhs(x, c.a, c.b, ell);
    const int chi = jacobi(rhs, ell);
    smooth += static_cast<u64>(1 + chi);
    // A singular point has y = 0, so it sits on a column with rhs = 0.
    if (rhs == 0 && singular_at(x, 0)) --smooth;
  }
  return smooth;
}

namespace {

using Poly = std::vector<u64>;  // coefficients, constant term first

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

// r mod g over F_ell, g nonzero.
Poly poly_rem(Poly r, const Poly& g, u64 ell) {
  trim(r);
  const u64 lead_inv = powmod(g.back(), ell - 2, ell);
  while (r.size() >= g.size()) {
    const u64 coef = mulmod(r.back(), lead_inv, ell);
    const std::size_t shift = r.size() - g.size();
    for (std::size_t i = 0; i < g.size(); ++i) {
      r[shift + i] = (r[shift + i] + ell - mulmod(coef, g[i], ell)) % ell;
    }
    trim(r);
  }
  return r;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, u64 ell) {
  if (a.empty() || b.empty()) return {};
  Poly prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      prod[i + j] = (prod[i + j] + mulmod(a[i], b[j], ell)) % ell;
    }
  }
  return poly_rem(std::move(prod), f, ell);
}

}  // namespace

int cubic_root_count(u64 b, u64 c, u64 d, u64 ell) {
  require_prime(ell);
  b %= ell;
  c %= ell;
  d %= ell;
  if (ell < 1000) {
    int roots = 0;
    for (u64 t = 0; t < ell; ++t) {
      if ((cubic_rhs(t, c, d, ell) + mulmod(b, mulmod(t, t, ell), ell)) % ell == 0) ++roots;
    }
    return roots;
  }
  const Poly f{d, c, b, 1};
  // T^ell mod f by square-and-multiply.
  Poly result{1};
  Poly base{0, 1};
  for (u64 e = ell; e > 0; e >>= 1) {
    if (e & 1) result = poly_mulmod(result, base, f, ell);
    base = poly_mulmod(base, base, f, ell);
  }
  result.resize(std::max<std::size_t>(result.size(), 2), 0);
  result[1] = (result[1] + ell - 1) % ell;
  trim(result);
  // gcd(f, T^ell - T) has degree equal to the number of distinct roots.
  Poly g = f;
  Poly h = result;
  while (!h.empty()) {
    Poly r = poly_rem(g, h, ell);
    g = std::move(h);
    h = std::move(r);
  }
  return static_cast<int>(g.size()) - 1;
}

bool is_primitive_root(u64 q, u64 g) {
  if (g % q == 0) return false;
  for (u64 f : distinct_prime_factors(q - 1)) {
    if (powmod(g, (q - 1) / f, q) == 1) return false;
  }
  return true;
}

u64 smallest_primitive_root(u64 q) {
  require_prime(q);
  if (q == 2) return 1;
  for (u64 g = 2; g < q; ++g) {
    if (is_primitive_root(q, g)) return g;
  }
  throw InputError("no primitive root found");  // unreachable for primes
}

u64 dlog(u64 q, u64 g, u64 x) {
  if (q > kDlogLimit) throw InputError("dlog: modulus above 10^6 is not supported");
  require_prime(q);
  g %= q;
  x %= q;
  if (x == 0 || g == 0) throw InputError("dlog: arguments must be units");
  u64 power = 1;
  for (u64 k = 0; k + 1 < q; ++k) {
    if (power == x) {
      // Uniqueness in [0, q-2] holds only when g is primitive.
      if (!is_primitive_root(q, g)) throw InputError("dlog: base is not a primitive root");
      return k;
    }
    power = mulmod(power, g, q);
  }
  throw InputError("dlog: base is not a primitive root");
}

}  // namespace dstab::ff
