#include "dstab/localred.hpp"

#include "dstab/errors.hpp"
#include "dstab/ffcurve.hpp"

namespace dstab::localred {

namespace {

constexpr int kInfinite = 1 << 20;

u64 residue(const mpz_class& x, u64 p) { return mpz_fdiv_ui(x.get_mpz_t(), p); }
bool divides(u64 p, const mpz_class& x) { return residue(x, p) == 0; }
int val(const mpz_class& x, u64 p) { return x == 0 ? kInfinite : valuation(x, p); }
u64 inv_mod(u64 a, u64 p) { return powmod(a % p, p - 2, p); }
mpz_class z(u64 v) { return mpz_class(static_cast<unsigned long>(v)); }

mpz_class exact_div(const mpz_class& x, const mpz_class& d) {
  mpz_class q;
  mpz_divexact(q.get_mpz_t(), x.get_mpz_t(), d.get_mpz_t());
  return q;
}

// Does a X^2 + b X + c have a root mod p?
bool quadroots(const mpz_class& a, const mpz_class& b, const mpz_class& c, u64 p) {
  const u64 ra = residue(a, p), rb = residue(b, p), rc = residue(c, p);
  if (p == 2) {
    if (rc == 0) return true;
    return (ra + rb + rc) % 2 == 0;
  }
  if (ra == 0) return rb != 0 || rc == 0;
  const u64 disc = (mulmod(rb, rb, p) + p - mulmod(mulmod(4 % p, ra, p), rc, p)) % p;
  return ff::legendre(static_cast<i128>(disc), p) != -1;
}

ReductionData finish(u64 p, ReductionType type, Kodaira k, int n, int f, int c, bool minimal,
                     const LongModel& m) {
  ReductionData d;
  d.ell = p;
  d.type = type;
  d.kodaira = k;
  d.v_delta_min = n;
  d.conductor_exponent = f;
  d.tamagawa = c;
  d.was_minimal = minimal;
  if (type == ReductionType::good || type == ReductionType::nonsplit_multiplicative) {
    d.local_root = 1;
  } else if (type == ReductionType::split_multiplicative) {
    d.local_root = -1;
  }
  d.minimal_model = m;
  return d;
}

ReductionData additive(u64 p, KodairaFamily fam, int sub, int n, int f, int c, bool minimal,
                       const LongModel& m) {
  return finish(p, ReductionType::additive, Kodaira{fam, sub}, n, f, c, minimal, m);
}

}  // namespace

std::string to_string(ReductionType t) {
  switch (t) {
    case ReductionType::good: return "good";
    case ReductionType::split_multiplicative: return "split_multiplicative";
    case ReductionType::nonsplit_multiplicative: return "nonsplit_multiplicative";
    case ReductionType::additive: return "additive";
  }
  return "?";
}

std::string Kodaira::symbol() const {
  switch (family) {
    case KodairaFamily::I: return "I" + std::to_string(n);
    case KodairaFamily::I_star: return "I" + std::to_string(n) + "*";
    case KodairaFamily::II: return "II";
    case KodairaFamily::III: return "III";
    case KodairaFamily::IV: return "IV";
    case KodairaFamily::II_star: return "II*";
    case KodairaFamily::III_star: return "III*";
    case KodairaFamily::IV_star: return "IV*";
  }
  return "?";
}

LongModel LongModel::from_short(const WeierstrassPair& e) {
  return LongModel{0, 0, 0, to_mpz(e.a), to_mpz(e.b)};
}

mpz_class LongModel::b2() const { return a1 * a1 + 4 * a2; }
mpz_class LongModel::b4() const { return 2 * a4 + a1 * a3; }
mpz_class LongModel::b6() const { return a3 * a3 + 4 * a6; }
mpz_class LongModel::b8() const {
  return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
}
mpz_class LongModel::c4() const { return b2() * b2() - 24 * b4(); }
mpz_class LongModel::c6() const {
  const mpz_class x2 = b2();
  return -x2 * x2 * x2 + 36 * x2 * b4() - 216 * b6();
}
mpz_class LongModel::discriminant() const {
  const mpz_class x2 = b2(), x4 = b4(), x6 = b6(), x8 = b8();
  return -x2 * x2 * x8 - 8 * x4 * x4 * x4 - 27 * x6 * x6 + 9 * x2 * x4 * x6;
}

LongModel LongModel::rst(const mpz_class& r, const mpz_class& s, const mpz_class& t) const {
  LongModel m;
  m.a1 = a1 + 2 * s;
  m.a2 = a2 - s * a1 + 3 * r - s * s;
  m.a3 = a3 + r * a1 + 2 * t;
  m.a4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t;
  m.a6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
  return m;
}

ReductionData tate(const WeierstrassPair& e, u64 ell) {
  if (disc_core(e) == 0) throw InputError("tate: singular pair");
  return tate(LongModel::from_short(e), ell);
}

ReductionData tate(const LongModel& model, u64 p) {
  if (!is_prime(p)) throw InputError("tate: not a prime: " + std::to_string(p));
  if (model.discriminant() == 0) throw InputError("tate: singular model");
  const mpz_class P = z(p), P2 = P * P, P3 = P2 * P, P4 = P3 * P;
  const u64 half = (p + 1) / 2;  // inverse of 2 mod odd p
  LongModel C = model;
  bool minimal = true;

  for (;;) {
    const int n = val(C.discriminant(), p);
    if (n == 0) {
      return finish(p, ReductionType::good, Kodaira{KodairaFamily::I, 0}, 0, 0, 1, minimal, C);
    }

    // Move the singular point of the reduction to (0, 0).
    mpz_class r, t;
    if (p == 2) {
      if (divides(2, C.b2())) {
        r = residue(C.a4, 2);
        t = residue(r * (1 + C.a2 + C.a4) + C.a6, 2);
      } else {
        r = residue(C.a3, 2);
        t = residue(r + C.a4, 2);
      }
    } else if (p == 3) {
      r = divides(3, C.b2()) ? residue(-C.b6(), 3) : residue(-C.b2() * C.b4(), 3);
      t = residue(C.a1 * r + C.a3, 3);
    } else {
      const mpz_class c4 = C.c4();
      if (divides(p, c4)) {
        r = residue(-C.b2() * z(inv_mod(12, p)), p);
      } else {
        const u64 den = inv_mod(mulmod(12, residue(c4, p), p), p);
        r = residue(-(C.c6() + C.b2() * c4) * z(den), p);
      }
      t = residue(-(C.a1 * r + C.a3) * z(half), p);
    }
    C = C.rst(r, 0, t);

    // Multiplicative: the node's tangents are the roots of T^2 + a1 T - a2.
    if (!divides(p, C.c4())) {
      const bool split = quadroots(1, C.a1, -C.a2, p);
      int c = n;
      if (!split) c = (n % 2 == 0) ? 2 : 1;
      return finish(p, split ? ReductionType::split_multiplicative
                             : ReductionType::nonsplit_multiplicative,
                    Kodaira{KodairaFamily::I, n}, n, 1, c, minimal, C);
    }

    if (val(C.a6, p) < 2) return additive(p, KodairaFamily::II, 0, n, n, 1, minimal, C);
    if (val(C.b8(), p) < 3) return additive(p, KodairaFamily::III, 0, n, n - 1, 2, minimal, C);
    if (val(C.b6(), p) < 3) {
      const int c = quadroots(1, exact_div(C.a3, P), -exact_div(C.a6, P2), p) ? 3 : 1;
      return additive(p, KodairaFamily::IV, 0, n, n - 2, c, minimal, C);
    }

    // Now p | a1, a2 and p^2 | a3, a4 and p^3 | a6.
    mpz_class s;
    if (p == 2) {
      s = residue(C.a2, 2);
      t = 2 * z(residue(exact_div(C.a6, 4), 2));
    } else {
      s = -C.a1 * z(half);
      t = -C.a3 * z(half);
    }
    C = C.rst(0, s, t);

    // P(T) = T^3 + b T^2 + c T + d.
    const mpz_class b = exact_div(C.a2, P), c = exact_div(C.a4, P2), d = exact_div(C.a6, P3);
    const mpz_class w = 27 * d * d - b * b * c * c + 4 * b * b * b * d - 18 * b * c * d + 4 * c * c * c;
    const mpz_class x = 3 * c - b * b;

    if (!divides(p, w)) {
      const int roots = ff::cubic_root_count(residue(b, p), residue(c, p), residue(d, p), p);
      return additive(p, KodairaFamily::I_star, 0, n, n - 4, 1 + roots, minimal, C);
    }

    if (!divides(p, x)) {
      // Double root alpha; shift it to 0 and run the I_m* subprocedure.
      u64 alpha;
      if (p == 2) {
        alpha = residue(c, 2);
      } else if (p == 3) {
        alpha = residue(b * c, 3);
      } else {
        const u64 den = inv_mod(mulmod(2, residue(x, p), p), p);
        alpha = residue((b * c - 9 * d) * z(den), p);
      }
      C = C.rst(P * z(alpha), 0, 0);
      int ix = 3, iy = 3;
      mpz_class mx = P2, my = P2;
      int cp = 0;
      for (;;) {
        // Y^2 + a3t Y - a6t.
        const mpz_class a3t = exact_div(C.a3, my), a6t = exact_div(C.a6, mx * my);
        if (!divides(p, a3t * a3t + 4 * a6t)) {
          cp = quadroots(1, a3t, -a6t, p) ? 4 : 2;
          break;
        }
        mpz_class root = p == 2 ? z(residue(a6t, 2)) : z(residue(-a3t * z(half), p));
        C = C.rst(0, 0, my * root);
        ++iy;
        my *= P;
        // a2t X^2 + a4t X + a6t.
        const mpz_class b2t = exact_div(C.a2, P), b4t = exact_div(C.a4, P * mx),
                        b6t = exact_div(C.a6, mx * my);
        if (!divides(p, b4t * b4t - 4 * b2t * b6t)) {
          cp = quadroots(b2t, b4t, b6t, p) ? 4 : 2;
          break;
        }
        if (p == 2) {
          root = z(residue(b6t * b2t, 2));
        } else {
          root = z(residue(-b4t * z(inv_mod(mulmod(2, residue(b2t, p), p), p)), p));
        }
        C = C.rst(mx * root, 0, 0);
        ++ix;
        mx *= P;
      }
      const int m = ix + iy - 5;
      return additive(p, KodairaFamily::I_star, m, n, n - ix - iy + 1, cp, minimal, C);
    }

    // Triple root alpha.
    u64 alpha;
    if (p == 2) {
      alpha = residue(b, 2);
    } else if (p == 3) {
      alpha = residue(-d, 3);
    } else {
      alpha = residue(-b * z(inv_mod(3, p)), p);
    }
    C = C.rst(P * z(alpha), 0, 0);
    const mpz_class x3 = exact_div(C.a3, P2), x6 = exact_div(C.a6, P4);
    if (!divides(p, x3 * x3 + 4 * x6)) {
      const int cp = quadroots(1, x3, -x6, p) ? 3 : 1;
      return additive(p, KodairaFamily::IV_star, 0, n, n - 6, cp, minimal, C);
    }
    // Double root of Y^2 + x3 Y - x6; move it to 0.
    const mpz_class y0 = p == 2 ? z(residue(x6, 2)) : z(residue(-x3 * z(half), p));
    C = C.rst(0, 0, P2 * y0);
    if (val(C.a4, p) < 4) return additive(p, KodairaFamily::III_star, 0, n, n - 7, 2, minimal, C);
    if (val(C.a6, p) < 6) return additive(p, KodairaFamily::II_star, 0, n, n - 8, 1, minimal, C);

    // Not minimal: scale by u = p and start over.
    C = LongModel{exact_div(C.a1, P), exact_div(C.a2, P2), exact_div(C.a3, P3),
                  exact_div(C.a4, P4), exact_div(C.a6, P4 * P2)};
    minimal = false;
  }
}

ReductionType reduction_type(const WeierstrassPair& e, u64 ell) {
  if (disc_core(e) == 0) throw InputError("reduction_type: singular pair");
  if (!is_prime(ell)) throw InputError("reduction_type: not a prime: " + std::to_string(ell));
  if (ell <= 3) return tate(e, ell).type;
  // ell >= 5: ell-minimal short model, then c4 = -48 a and Wong's criterion.
  const i128 l = static_cast<i128>(ell);
  const i128 l4 = l * l * l * l;
  WeierstrassPair m = e;
  while (m.a % l4 == 0 && m.b % (l4 * l * l) == 0) {
    m.a /= l4;
    m.b /= l4 * l * l;
  }
  if (mod_u64(disc_core(m), ell) != 0) return ReductionType::good;
  if (mod_u64(m.a, ell) == 0) return ReductionType::additive;
  return ff::legendre(checked_mul(6, m.b), ell) == 1 ? ReductionType::split_multiplicative
                                                     : ReductionType::nonsplit_multiplicative;
}

int local_root_factor(const WeierstrassPair& e, u64 ell) {
  if (ell == 2) throw InputError("local_root_factor: ell must be odd");
  switch (reduction_type(e, ell)) {
    case ReductionType::split_multiplicative: return -1;
    case ReductionType::additive:
      throw AdditiveReductionError("additive reduction at odd prime " + std::to_string(ell));
    default: return 1;
  }
}

OddRootSign odd_root_sign(const WeierstrassPair& e, std::uint64_t seed) {
  const i128 d = disc_core(e);
  if (d == 0) throw InputError("odd_root_sign: singular pair");
  OddRootSign out;
  int product = 1;
  for (const auto& pp : factor(odd_positive_part(d), seed)) {
    const ReductionData rd = tate(e, pp.prime);
    if (rd.type == ReductionType::good) continue;
    if (rd.type == ReductionType::additive) {
      throw AdditiveReductionError("additive reduction at odd prime " + std::to_string(pp.prime));
    }
    const int f = *rd.local_root;
    out.factors.emplace_back(pp.prime, f);
    product *= f;
  }
  out.sign = -product;
  return out;
}

bool ordinary_at(const WeierstrassPair& e, u64 p) {
  const ReductionData rd = tate(e, p);
  if (rd.type != ReductionType::good) {
    throw InputError("ordinary_at: bad reduction at " + std::to_string(p));
  }
  const ff::FpCurve c = ff::FpCurve::reduce(e.a, e.b, p);
  const u64 count = c.nonsingular() ? ff::point_count(c) : long_model_point_count(rd.minimal_model, p);
  const i64 trace = static_cast<i64>(p) + 1 - static_cast<i64>(count);
  return trace % static_cast<i64>(p) != 0;
}

u64 long_model_point_count(const LongModel& m, u64 ell) {
  if (!is_prime(ell)) throw InputError("long_model_point_count: not a prime");
  if (ell > 100000) throw InputError("long_model_point_count: prime too large for enumeration");
  const u64 a1 = residue(m.a1, ell), a2 = residue(m.a2, ell), a3 = residue(m.a3, ell),
            a4 = residue(m.a4, ell), a6 = residue(m.a6, ell);
  u64 n = 1;
  for (u64 x = 0; x < ell; ++x) {
    const u64 x2 = mulmod(x, x, ell);
    const u64 rhs = (mulmod(x2, x, ell) + mulmod(a2, x2, ell) + mulmod(a4, x, ell) + a6) % ell;
    const u64 lin = (mulmod(a1, x, ell) + a3) % ell;
    for (u64 y = 0; y < ell; ++y) {
      const u64 lhs = (mulmod(y, y, ell) + mulmod(lin, y, ell)) % ell;
      if (lhs == rhs) ++n;
    }
  }
  return n;
}

}  // namespace dstab::localred
