#include "dstab/densities.hpp"

#include <algorithm>
#include <thread>

#include "dstab/errors.hpp"
#include "dstab/ffcurve.hpp"

namespace dstab::dens {

namespace {

constexpr u64 kGenericGridMaxEll = 100;   // (Z/ell^2)^2 has ell^4 cells
constexpr u64 kAtPGridMaxEll = 10000;
constexpr u64 kRamifiedBruteMaxEll = 100;  // ell^2 pairs times ell^2 points
constexpr u64 kMaxCutoff = 1'000'000;

mpz_class z(u64 v) { return mpz_class(static_cast<unsigned long>(v)); }

Rational q(const mpz_class& num, const mpz_class& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

void require_theorem_p(u64 p) {
  if (p != 3 && p != 5) throw InputError("p must be 3 or 5, got " + std::to_string(p));
}

void require_role(u64 ell, Role role, u64 p) {
  require_theorem_p(p);
  if (!is_prime(ell)) throw InputError("not a prime: " + std::to_string(ell));
  switch (role) {
    case Role::at_two:
      if (ell != 2) throw InputError("role at_two needs ell = 2");
      break;
    case Role::at_p:
      if (ell != p) throw InputError("role at_p needs ell = p");
      break;
    case Role::generic:
    case Role::ramified:
      if (ell == 2 || ell == p) {
        throw InputError("role " + to_string(role) + " excludes ell in {2, p}");
      }
      break;
  }
}

LocalDensity make(u64 ell, Role role, int n, const mpz_class& count, const char* provenance) {
  mpz_class grid = 1;
  for (int i = 0; i < 2 * n; ++i) grid *= z(ell);
  Rational v(count, grid);
  v.canonicalize();
  return LocalDensity{ell, role, n, count, v, provenance};
}

// Counts pairs per the afrak definition; twisted = also require p ∤ #E_{A,-B}.
u64 count_pairs(u64 ell, u64 p, unsigned workers, bool twisted) {
  require_theorem_p(p);
  if (!is_prime(ell) || ell == 2 || ell == p) {
    throw InputError("afrak needs a prime ell not in {2, p}, got " + std::to_string(ell));
  }
  if (ell > kAfrakMaxEll) {
    throw InputError("afrak: ell above " + std::to_string(kAfrakMaxEll) + " is not supported");
  }
  const ff::LegendreTable table(ell);
  workers = std::max(1u, workers);

  auto stripe = [&](unsigned w) {
    u64 total = 0;
    std::vector<u64> f(ell);
    std::vector<i64> sum(ell);
    for (u64 a = w; a < ell; a += workers) {
      for (u64 x = 0; x < ell; ++x) f[x] = (mulmod(mulmod(x, x, ell), x, ell) + mulmod(a, x, ell)) % ell;
      const u64 four_a3 = mulmod(4, mulmod(mulmod(a, a, ell), a, ell), ell);
      for (u64 b = 0; b < ell; ++b) {
        i64 s = 0;
        for (u64 x = 0; x < ell; ++x) {
          u64 v = f[x] + b;
          if (v >= ell) v -= ell;
          s += table(v);
        }
        sum[b] = s;
      }
      for (u64 b = 0; b < ell; ++b) {
        if ((four_a3 + mulmod(27, mulmod(b, b, ell), ell)) % ell == 0) continue;
        const u64 n = static_cast<u64>(static_cast<i64>(ell) + 1 + sum[b]);
        if (n % p == 0) continue;
        if (twisted) {
          const u64 nt = static_cast<u64>(static_cast<i64>(ell) + 1 + sum[(ell - b) % ell]);
          if (nt % p == 0) continue;
        }
        ++total;
      }
    }
    return total;
  };

  if (workers == 1) return stripe(0);
  std::vector<u64> partial(workers, 0);
  std::vector<std::thread> threads;
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] { partial[w] = stripe(w); });
  }
  for (auto& t : threads) t.join();
  u64 total = 0;
  for (u64 v : partial) total += v;
  return total;
}

mpz_class product_tree(std::vector<mpz_class> v) {
  if (v.empty()) return 1;
  while (v.size() > 1) {
    std::vector<mpz_class> next;
    next.reserve((v.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < v.size(); i += 2) next.push_back(v[i] * v[i + 1]);
    if (v.size() % 2 == 1) next.push_back(v.back());
    v = std::move(next);
  }
  return v.front();
}

}  // namespace

std::string to_string(Role r) {
  switch (r) {
    case Role::generic: return "generic";
    case Role::ramified: return "ramified";
    case Role::at_p: return "at_p";
    case Role::at_two: return "at_two";
  }
  return "?";
}

Role parse_role(const std::string& s) {
  if (s == "generic") return Role::generic;
  if (s == "ramified") return Role::ramified;
  if (s == "at_p") return Role::at_p;
  if (s == "at_two") return Role::at_two;
  throw InputError("unknown role: " + s);
}

u64 afrak(u64 ell, u64 p, unsigned workers) { return count_pairs(ell, p, workers, true); }

u64 afrak_untwisted(u64 ell, u64 p, unsigned workers) { return count_pairs(ell, p, workers, false); }

LocalDensity delta_closed(u64 ell, Role role, u64 p, unsigned workers) {
  require_role(ell, role, p);
  const mpz_class l = z(ell);
  switch (role) {
    case Role::generic:
      // ell = 3 only occurs for p = 5; there 9 | Delta iff 3 | A.
      if (ell == 3) return make(3, role, 2, 54, "closed-form");
      return make(ell, role, 2, l * l * l * l - 2 * l * l + l, "closed-form");
    case Role::at_p: return make(ell, role, 1, l * l - l, "closed-form");
    case Role::at_two: return make(2, role, 12, 8, "closed-form");
    case Role::ramified: return make(ell, role, 1, z(afrak(ell, p, workers)), "closed-form");
  }
  throw InputError("unknown role");
}

LocalDensity delta_bruteforce(u64 ell, Role role, u64 p) {
  require_role(ell, role, p);
  switch (role) {
    case Role::at_two:
      throw InputError("delta_bruteforce: the at_two density is a definition, not enumerated");
    case Role::generic: {
      if (ell > kGenericGridMaxEll) throw InputError("delta_bruteforce: generic grid too large");
      const u64 m = ell * ell;
      u64 count = 0;
      for (u64 a = 0; a < m; ++a) {
        const u64 four_a3 = 4 * (a * a % m) % m * a % m;
        for (u64 b = 0; b < m; ++b) {
          if ((four_a3 + 27 * (b * b % m)) % m != 0) ++count;
        }
      }
      return make(ell, role, 2, z(count), "brute-force");
    }
    case Role::at_p: {
      if (ell > kAtPGridMaxEll) throw InputError("delta_bruteforce: at_p grid too large");
      u64 count = 0;
      for (u64 a = 0; a < ell; ++a) {
        for (u64 b = 0; b < ell; ++b) {
          if (ff::FpCurve{ell, a, b}.nonsingular()) ++count;
        }
      }
      return make(ell, role, 1, z(count), "brute-force");
    }
    case Role::ramified: {
      if (ell > kRamifiedBruteMaxEll) throw InputError("delta_bruteforce: ramified grid too large");
      u64 count = 0;
      for (u64 a = 0; a < ell; ++a) {
        for (u64 b = 0; b < ell; ++b) {
          const ff::FpCurve c{ell, a, b};
          if (!c.nonsingular()) continue;
          if (ff::point_count_exhaustive(c) % p == 0) continue;
          if (ff::point_count_exhaustive(c.twist_minus_one()) % p == 0) continue;
          ++count;
        }
      }
      return make(ell, role, 1, z(count), "brute-force");
    }
  }
  throw InputError("unknown role");
}

std::optional<Rational> howe_bound(u64 ell, u64 p) {
  require_theorem_p(p);
  if (!is_prime(ell) || ell == 2 || ell == p) {
    throw InputError("howe_bound needs a prime ell not in {2, p}");
  }
  if (p == 3 && ell % 4 != 1) throw InputError("howe_bound for p = 3 needs ell = 1 (mod 4)");
  // sqrt(ell) >= floor(sqrt(ell * 4^20)) / 2^20.
  constexpr int kBits = 20;
  const u64 root = isqrt(static_cast<u128>(ell) << (2 * kBits));
  const Rational s_lo = q(z(root), mpz_class(1) << kBits);
  const Rational pairs = Rational(z(ell) * z(ell) - z(ell));
  Rational value;
  if (p == 3) {
    value = pairs / 2 * (1 - q(1518, 100) / s_lo);
  } else {
    value = pairs - q(1, 2) * pairs * (1 + q(253, 100) * 30 / s_lo);
  }
  value.canonicalize();
  if (value <= 0) return std::nullopt;
  return value;
}

Rational eta(u64 p) {
  require_theorem_p(p);
  return p == 3 ? q(1, 4) : q(3, 8);
}

ProductInterval euler_product(u64 p, const std::vector<u64>& excluded, u64 cutoff,
                              const std::vector<Rational>& special) {
  if (!is_prime(p)) throw InputError("euler_product: p must be prime");
  if (cutoff < 100) throw InputError("euler_product: cutoff must be >= 100");
  if (cutoff > kMaxCutoff) throw InputError("euler_product: cutoff above 10^6 is not supported");
  for (u64 q : excluded) {
    if (q > cutoff) throw InputError("euler_product: cutoff below an excluded prime");
  }
  std::vector<mpz_class> nums, dens;
  for (u64 ell : primes_up_to(cutoff)) {
    if (ell == 2 || ell == p) continue;
    if (std::find(excluded.begin(), excluded.end(), ell) != excluded.end()) continue;
    if (ell == 3) {
      nums.emplace_back(2);
      dens.emplace_back(3);
      continue;
    }
    const mpz_class l = z(ell);
    nums.push_back(l * l * l - 2 * l + 1);
    dens.push_back(l * l * l);
  }
  for (const Rational& s : special) {
    nums.push_back(s.get_num());
    dens.push_back(s.get_den());
  }
  Rational hi(product_tree(std::move(nums)), product_tree(std::move(dens)));
  hi.canonicalize();
  Rational lo = hi * (1 - q(2, z(cutoff)));
  lo.canonicalize();
  return ProductInterval{lo, hi};
}

DensityBound theorem_bound(u64 p, const std::vector<std::pair<u64, u64>>& ram, u64 cutoff) {
  require_theorem_p(p);
  DensityBound out;
  out.p = p;
  out.eta = eta(p);
  out.truncation_cutoff = cutoff;
  out.per_prime.push_back(delta_closed(2, Role::at_two, p));
  out.per_prime.push_back(delta_closed(p, Role::at_p, p));
  std::vector<std::pair<u64, u64>> sorted = ram;
  std::sort(sorted.begin(), sorted.end());
  std::vector<u64> excluded;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const auto [ell, count] = sorted[i];
    if (!is_prime(ell) || ell % p != 1) {
      throw InputError("ramified prime must be a prime = 1 (mod p): " + std::to_string(ell));
    }
    if (i > 0 && sorted[i - 1].first == ell) throw InputError("duplicate ramified prime");
    if (count > ell * ell) throw InputError("afrak value exceeds ell^2");
    if (count == 0) {
      throw HypothesisError("afrak(" + std::to_string(ell) + ", " + std::to_string(p) +
                            ") = 0: no admissible curve at a ramified prime");
    }
    out.per_prime.push_back(make(ell, Role::ramified, 1, z(count), "supplied"));
    excluded.push_back(ell);
  }
  out.generic = euler_product(p, excluded, cutoff);
  out.prefactor = out.eta;
  for (const auto& d : out.per_prime) out.prefactor *= d.value;
  out.prefactor.canonicalize();
  out.product_interval = ProductInterval{out.prefactor * out.generic.lo, out.prefactor * out.generic.hi};
  out.product_interval.lo.canonicalize();
  out.product_interval.hi.canonicalize();
  return out;
}

}  // namespace dstab::dens
