#include "dstab/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <optional>
#include <thread>

#include "dstab/errors.hpp"
#include "dstab/ffcurve.hpp"
#include "dstab/localred.hpp"

namespace dstab::sieve {

namespace {

struct Box {
  i128 amax = 0;
  i128 bmax = 0;
  std::vector<u64> small_primes;  // enough to decide minimality inside the box
};

Box box_of(const HeightBound& x) {
  Box box;
  box.amax = static_cast<i128>(icbrt(static_cast<u128>(x.x())));
  box.bmax = static_cast<i128>(isqrt(static_cast<u128>(x.x())));
  // Throws on overflow; the discriminant is largest in magnitude at corners.
  (void)discriminant({box.amax, box.bmax});
  (void)discriminant({-box.amax, box.bmax});
  // ell^4 | a != 0 needs ell <= amax^(1/4); ell^6 | b != 0 needs ell <= bmax^(1/6).
  const u64 lim = std::max(isqrt(isqrt(static_cast<u128>(box.amax))),
                           icbrt(isqrt(static_cast<u128>(box.bmax))));
  box.small_primes = primes_up_to(lim + 1);
  return box;
}

bool minimal_in_box(i128 a, i128 b, const Box& box) {
  if (a == 0 && b == 0) return false;
  for (u64 ell : box.small_primes) {
    const i128 l2 = static_cast<i128>(ell) * static_cast<i128>(ell);
    const i128 l4 = l2 * l2;
    if (a % l4 == 0 && b % (l4 * l2) == 0) return false;
  }
  return true;
}

// Calls f(a, b) over minimal pairs with a in [a_lo, a_hi], ordered.
template <class F>
void scan(const Box& box, i128 a_lo, i128 a_hi, bool include_singular, F&& f) {
  for (i128 a = a_lo; a <= a_hi; ++a) {
    for (i128 b = -box.bmax; b <= box.bmax; ++b) {
      if (!include_singular && 4 * a * a * a + 27 * b * b == 0) continue;
      if (!minimal_in_box(a, b, box)) continue;
      f(WeierstrassPair{a, b});
    }
  }
}

// Splits [-amax, amax] into contiguous stripes, runs job(lo, hi) on each and
// returns the partial results in stripe order.
template <class R, class Job>
std::vector<R> over_stripes(const Box& box, unsigned workers, Job&& job) {
  if (workers == 0) throw InputError("workers must be positive");
  const i128 width = 2 * box.amax + 1;
  const i128 n = std::min<i128>(workers, width);
  std::vector<R> out(static_cast<std::size_t>(n));
  std::vector<std::thread> threads;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (i128 w = 0; w < n; ++w) {
    const i128 lo = -box.amax + width * w / n;
    const i128 hi = -box.amax + width * (w + 1) / n - 1;
    auto run = [&, lo, hi, w] {
      try {
        out[static_cast<std::size_t>(w)] = job(lo, hi);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    };
    if (n == 1) {
      run();
    } else {
      threads.emplace_back(run);
    }
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

void require_member_input(const WeierstrassPair& e, std::uint64_t seed) {
  if (disc_core(e) == 0) throw InputError("membership needs a nonsingular pair");
  if (!is_globally_minimal(e, seed)) throw InputError("membership needs a globally minimal pair");
}

Membership fail(std::string reason, u64 ell) { return {Verdict::fail, std::move(reason), ell}; }

bool torsion_free(const ff::FpCurve& c, u64 p, const ff::LegendreTable* table) {
  const u64 n = table ? ff::point_count(c, *table) : ff::point_count(c);
  return n % p != 0;
}

bool torsion_free_both(const WeierstrassPair& e, u64 ell, u64 p, const ff::LegendreTable* table) {
  const ff::FpCurve c = ff::FpCurve::reduce(e.a, e.b, ell);
  if (!c.nonsingular()) return false;
  return torsion_free(c, p, table) && torsion_free(c.twist_minus_one(), p, table);
}

bool holds(const WeierstrassPair& e, const Condition& c, u64 p, const ff::LegendreTable* table) {
  switch (c.predicate) {
    case Predicate::two_adic_class:
      return two_adic_class(e);
    case Predicate::disc_unit:
      return mod_u64(discriminant(e), c.ell) != 0;
    case Predicate::disc_unit_mod_square:
      return mod_u64(discriminant(e), c.ell * c.ell) != 0;
    case Predicate::torsion_free_both_twists:
      return torsion_free_both(e, c.ell, p, table);
  }
  return false;
}

// Primes ell with ell^2 | n, n > 0. `trial` must contain every prime up to
// cbrt(n) when n < 2^64; wider n goes through factor().
std::vector<u64> square_primes(u128 n, const std::vector<u64>& trial, std::uint64_t seed) {
  std::vector<u64> out;
  if (n >> 64) {
    for (const PrimePower& pp : factor(static_cast<i128>(n), seed)) {
      if (pp.exponent >= 2) out.push_back(pp.prime);
    }
    return out;
  }
  u64 m = static_cast<u64>(n);
  for (u64 ell : trial) {
    if (ell * ell * ell > m) break;
    if (m % ell) continue;
    int e = 0;
    while (m % ell == 0) {
      m /= ell;
      ++e;
    }
    if (e >= 2) out.push_back(ell);
  }
  // What is left has at most two prime factors, all above the trial bound.
  if (m > 1) {
    const u64 r = isqrt(m);
    if (r * r == m && is_prime(r)) out.push_back(r);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool prime_factor_above(u64 n, u64 z) {
  for (u64 d = 2; d * d <= n; ++d) {
    while (n % d == 0) {
      if (d > z) return true;
      n /= d;
    }
  }
  return n > z;
}

}  // namespace

std::string to_string(Predicate pr) {
  switch (pr) {
    case Predicate::disc_unit_mod_square: return "DiscUnitModSquare";
    case Predicate::disc_unit: return "DiscUnit";
    case Predicate::torsion_free_both_twists: return "TorsionFreeBothTwists";
    case Predicate::two_adic_class: return "TwoAdicClass";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::indeterminate: return "indeterminate";
  }
  return "?";
}

CongruenceFamily CongruenceFamily::make(u64 p, std::vector<u64> ramified) {
  if (p != 3 && p != 5) throw InputError("p must be 3 or 5");
  std::sort(ramified.begin(), ramified.end());
  if (std::adjacent_find(ramified.begin(), ramified.end()) != ramified.end()) {
    throw InputError("ramified primes must be distinct");
  }
  CongruenceFamily fam;
  fam.p = p;
  for (u64 ell : ramified) {
    if (!is_prime(ell)) throw InputError("ramified entry " + std::to_string(ell) + " is not prime");
    if (ell == 2 || ell == p) throw InputError("ramified primes must differ from 2 and p");
  }
  fam.ramified = ramified;
  fam.conditions.push_back({2, Predicate::two_adic_class});
  std::vector<Condition> rest{{p, Predicate::disc_unit}};
  for (u64 ell : ramified) rest.push_back({ell, Predicate::torsion_free_both_twists});
  std::sort(rest.begin(), rest.end(), [](const Condition& x, const Condition& y) { return x.ell < y.ell; });
  fam.conditions.insert(fam.conditions.end(), rest.begin(), rest.end());
  return fam;
}

bool CongruenceFamily::in_t(u64 ell) const {
  return std::any_of(conditions.begin(), conditions.end(), [&](const Condition& c) { return c.ell == ell; });
}

bool two_adic_class(const WeierstrassPair& e) {
  const u64 b = mod_u64(e.b, 4096);
  return mod_u64(e.a, 1024) == 756 && (b == 16 || b == 4096 - 16);
}

bool condition_holds(const WeierstrassPair& e, const Condition& c, u64 p) {
  if (disc_core(e) == 0) throw InputError("condition needs a nonsingular pair");
  return holds(e, c, p, nullptr);
}

u64 enumerate_minimal(const HeightBound& x, const std::function<void(const WeierstrassPair&)>& visit) {
  const Box box = box_of(x);
  u64 count = 0;
  scan(box, -box.amax, box.amax, false, [&](const WeierstrassPair& e) {
    ++count;
    visit(e);
  });
  return count;
}

u64 count_minimal(const HeightBound& x, unsigned workers) {
  const Box box = box_of(x);
  const auto parts = over_stripes<u64>(box, workers, [&](i128 lo, i128 hi) {
    u64 n = 0;
    scan(box, lo, hi, false, [&](const WeierstrassPair&) { ++n; });
    return n;
  });
  u64 total = 0;
  for (u64 v : parts) total += v;
  return total;
}

Zeta10 zeta10(unsigned terms) {
  if (terms == 0) throw InputError("zeta10 needs at least one term");
  long double s = 0;
  // Smallest terms first.
  for (unsigned n = terms; n >= 1; --n) s += std::pow(static_cast<long double>(n), -10.0L);
  const long double tail = std::pow(static_cast<long double>(terms), -9.0L) / 9;
  return {s, s + tail};
}

long double brumer_reference(const HeightBound& x) {
  const Zeta10 z = zeta10();
  const long double zeta = (z.lo + z.hi) / 2;
  return 4 * std::pow(static_cast<long double>(x.x()), 5.0L / 6.0L) / zeta;
}

Membership member_F(const WeierstrassPair& e, const CongruenceFamily& fam, std::uint64_t seed) {
  require_member_input(e, seed);
  for (const Condition& c : fam.conditions) {
    if (holds(e, c, fam.p, nullptr)) continue;
    switch (c.predicate) {
      case Predicate::two_adic_class: return fail("2-adic class", 2);
      case Predicate::disc_unit: return fail("bad reduction at p", c.ell);
      case Predicate::torsion_free_both_twists:
        if (mod_u64(disc_core(e), c.ell) == 0) return fail("bad reduction at ramified prime", c.ell);
        return fail("p-torsion at ramified prime", c.ell);
      case Predicate::disc_unit_mod_square: break;
    }
  }
  Factorization f;
  try {
    f = factor(odd_positive_part(discriminant(e)), seed);
  } catch (const IndeterminateError& ex) {
    return {Verdict::indeterminate, std::string("factoring: ") + ex.what(), 0};
  }
  for (const PrimePower& pp : f) {
    if (pp.exponent >= 2 && !fam.in_t(pp.prime)) return fail("square divides discriminant", pp.prime);
  }
  return {};
}

Membership member_E(const WeierstrassPair& e, u64 p, const std::vector<u64>& z, std::uint64_t seed) {
  if (p != 3 && p != 5) throw InputError("p must be 3 or 5");
  require_member_input(e, seed);
  if (localred::tate(e, p).type != localred::ReductionType::good) return fail("bad reduction at p", p);
  for (u64 ell : z) {
    if (!is_prime(ell) || ell == 2 || ell == p) throw InputError("bad ramified prime");
    if (localred::tate(e, ell).type != localred::ReductionType::good) {
      return fail("bad reduction at ramified prime", ell);
    }
    if (!torsion_free_both(e, ell, p, nullptr)) return fail("p-torsion at ramified prime", ell);
  }
  const i128 dprime = odd_positive_part(discriminant(e));
  Factorization f;
  try {
    f = factor(dprime, seed);
  } catch (const IndeterminateError& ex) {
    return {Verdict::indeterminate, std::string("factoring: ") + ex.what(), 0};
  }
  for (const PrimePower& pp : f) {
    if (pp.exponent >= 2) return fail("odd discriminant part not squarefree", pp.prime);
  }
  if (dprime % 4 != 1) return fail("odd discriminant part not 1 mod 4", 2);
  for (const WeierstrassPair& g : {e, twist_minus_one(e)}) {
    const localred::ReductionData r = localred::tate(g, 2);
    if (r.type != localred::ReductionType::additive) return fail("not additive at 2", 2);
    if (!r.was_minimal) return fail("not minimal at 2", 2);
  }
  // c4 = -48 a on the short model, which is minimal at 2 here.
  const localred::ReductionData r2 = localred::tate(e, 2);
  if (e.a == 0 || 3 * (4 + valuation(e.a, 2)) != r2.v_delta_min) {
    return fail("j not a 2-adic unit", 2);
  }
  return {};
}

SieveReport family_count(const HeightBound& x, const CongruenceFamily& fam,
                         const std::vector<u64>& generic_profile, unsigned workers, std::uint64_t seed) {
  const Box box = box_of(x);
  std::vector<Condition> profiled = fam.conditions;
  std::vector<u64> generic;
  for (u64 ell : generic_profile) {
    if (!is_prime(ell)) throw InputError("profiled entry " + std::to_string(ell) + " is not prime");
    if (ell == 2 || fam.in_t(ell) || std::find(generic.begin(), generic.end(), ell) != generic.end()) continue;
    generic.push_back(ell);
  }
  std::sort(generic.begin(), generic.end());
  const std::size_t n_t = profiled.size();
  for (u64 ell : generic) profiled.push_back({ell, Predicate::disc_unit_mod_square});

  std::vector<std::optional<ff::LegendreTable>> tables(profiled.size());
  for (std::size_t i = 0; i < profiled.size(); ++i) {
    const Condition& c = profiled[i];
    if (c.predicate == Predicate::torsion_free_both_twists && c.ell >= 5 && c.ell <= 10'000'000) {
      tables[i].emplace(c.ell);
    }
  }

  struct Partial {
    u64 total = 0, members = 0, joint = 0, indeterminate = 0;
    std::vector<u64> rejected;
  };
  const auto parts = over_stripes<Partial>(box, workers, [&](i128 lo, i128 hi) {
    Partial part;
    part.rejected.assign(profiled.size(), 0);
    scan(box, lo, hi, false, [&](const WeierstrassPair& e) {
      ++part.total;
      bool t_ok = true, generic_ok = true;
      for (std::size_t i = 0; i < profiled.size(); ++i) {
        const ff::LegendreTable* table = tables[i] ? &*tables[i] : nullptr;
        if (holds(e, profiled[i], fam.p, table)) continue;
        ++part.rejected[i];
        (i < n_t ? t_ok : generic_ok) = false;
      }
      if (generic_ok) ++part.joint;
      if (!t_ok) return;
      const Membership m = member_F(e, fam, seed);
      if (m.verdict == Verdict::pass) ++part.members;
      if (m.verdict == Verdict::indeterminate) ++part.indeterminate;
    });
    return part;
  });

  SieveReport rep;
  rep.cutoff = x.x();
  rep.generic_profile = generic;
  for (const Condition& c : profiled) rep.rejections[c.ell] = 0;
  for (const Partial& part : parts) {
    rep.total_minimal += part.total;
    rep.family_count += part.members;
    rep.generic_joint_pass += part.joint;
    rep.indeterminate += part.indeterminate;
    for (std::size_t i = 0; i < profiled.size(); ++i) rep.rejections[profiled[i].ell] += part.rejected[i];
  }
  rep.empirical_density = Rational(to_mpz(static_cast<i128>(rep.family_count)),
                                   to_mpz(static_cast<i128>(rep.total_minimal)));
  rep.empirical_density.canonicalize();
  return rep;
}

MembersReport two_adic_members(const HeightBound& x, const CongruenceFamily& fam, std::uint64_t seed) {
  const Box box = box_of(x);
  MembersReport rep;
  rep.cutoff = x.x();
  // Least a >= -amax with a = 756 mod 1024.
  const i128 a0 = -box.amax + static_cast<i128>(mod_u64(756 + box.amax, 1024));
  const i128 b0 = -box.bmax + static_cast<i128>(mod_u64(-16 + box.bmax, 4096));
  const i128 b1 = -box.bmax + static_cast<i128>(mod_u64(16 + box.bmax, 4096));
  for (i128 a = a0; a <= box.amax; a += 1024) {
    std::vector<i128> bs;
    for (i128 b = b0; b <= box.bmax; b += 4096) bs.push_back(b);
    for (i128 b = b1; b <= box.bmax; b += 4096) bs.push_back(b);
    std::sort(bs.begin(), bs.end());
    for (i128 b : bs) {
      const WeierstrassPair e{a, b};
      if (height(e) > x.x() || disc_core(e) == 0 || !minimal_in_box(a, b, box)) continue;
      ++rep.candidates;
      const Membership m = member_F(e, fam, seed);
      switch (m.verdict) {
        case Verdict::pass: rep.members.push_back(e); break;
        case Verdict::fail: ++rep.rejections[m.reason]; break;
        case Verdict::indeterminate: ++rep.indeterminate; break;
      }
    }
  }
  return rep;
}

TailClasses tail_classes(const WeierstrassPair& e, u64 z, std::uint64_t seed) {
  if (z < 3) throw InputError("z must be at least 3");
  TailClasses t;
  const i128 g = gcd128(e.a, e.b);
  if (g != 0) t.b1 = prime_factor_above(static_cast<u64>(abs128(g)), z);
  const i128 d = disc_core(e);
  if (d == 0) {
    t.b3 = true;
    return t;
  }
  const u128 n = static_cast<u128>(abs128(d));
  std::vector<u64> trial;
  if (!(n >> 64)) trial = primes_up_to(icbrt(n) + 1);
  for (u64 ell : square_primes(n, trial, seed)) {
    if (ell > z && !(mod_u64(e.a, ell) == 0 && mod_u64(e.b, ell) == 0)) t.b2 = true;
  }
  return t;
}

TailDefect tail_defect(u64 z, const HeightBound& x, unsigned workers, std::uint64_t seed) {
  if (z < 5) throw InputError("z must be at least 5");
  const Box box = box_of(x);
  // |4a^3 + 27b^2| <= 31 x.
  const u128 dmax = static_cast<u128>(31) * static_cast<u128>(x.x());
  const std::vector<u64> trial = (dmax >> 64) ? std::vector<u64>{} : primes_up_to(icbrt(dmax) + 1);
  const auto parts = over_stripes<TailDefect>(box, workers, [&](i128 lo, i128 hi) {
    TailDefect part;
    scan(box, lo, hi, true, [&](const WeierstrassPair& e) {
      TailClasses t;
      const i128 g = gcd128(e.a, e.b);
      t.b1 = prime_factor_above(static_cast<u64>(abs128(g)), z);
      const i128 d = disc_core(e);
      if (d == 0) {
        t.b3 = true;
      } else {
        try {
          for (u64 ell : square_primes(static_cast<u128>(abs128(d)), trial, seed)) {
            if (ell > z && !(mod_u64(e.a, ell) == 0 && mod_u64(e.b, ell) == 0)) t.b2 = true;
          }
        } catch (const IndeterminateError&) {
          ++part.indeterminate;
          return;
        }
      }
      part.b1 += t.b1;
      part.b2 += t.b2;
      part.b3 += t.b3;
      part.total += t.any();
    });
    return part;
  });
  TailDefect rep;
  rep.z = z;
  rep.cutoff = x.x();
  for (const TailDefect& p : parts) {
    rep.total += p.total;
    rep.b1 += p.b1;
    rep.b2 += p.b2;
    rep.b3 += p.b3;
    rep.indeterminate += p.indeterminate;
  }
  return rep;
}

long double prime_inverse_square_tail(u64 z) {
  constexpr u64 kN = 1'000'000;
  long double s = 0;
  const std::vector<u64> primes = primes_up_to(kN);
  for (auto it = primes.rbegin(); it != primes.rend() && *it > z; ++it) {
    const long double l = static_cast<long double>(*it);
    s += 1 / (l * l);
  }
  return s + 1.0L / kN;
}

}  // namespace dstab::sieve
