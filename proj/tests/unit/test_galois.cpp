#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "dstab/errors.hpp"
#include "dstab/ffcurve.hpp"
#include "dstab/galois.hpp"
#include "dstab/sieve.hpp"

using namespace dstab;
using namespace dstab::galois;

namespace {

const ExtensionSpec& mu31() {
  static const ExtensionSpec s = ExtensionSpec::make(3, {{31, 1}});
  return s;
}

u64 multiplicative_order(u64 x, u64 q) {
  u64 k = 1, acc = x % q;
  while (acc != 1) {
    acc = mulmod(acc, x, q);
    ++k;
  }
  return k;
}

}  // namespace

TEST(Spec, ConstructionAndValidation) {
  EXPECT_EQ(mu31().p(), 3u);
  ASSERT_EQ(mu31().factors().size(), 1u);
  EXPECT_EQ(mu31().factors()[0].g, 3u);
  // Single factor: canonical c = 1.
  EXPECT_EQ(ExtensionSpec::make(3, {{31, 2}}), mu31());
  // Two factors keep their coefficients.
  const ExtensionSpec two = ExtensionSpec::make(3, {{13, 2}, {7, 1}});
  EXPECT_EQ(two.factors()[0].q, 7u);
  EXPECT_EQ(two.factors()[1].c, 2u);

  EXPECT_THROW(ExtensionSpec::make(7, {{29, 1}}), InputError);
  EXPECT_THROW(ExtensionSpec::make(3, {}), InputError);
  EXPECT_THROW(ExtensionSpec::make(3, {{11, 1}}), InputError);  // 11 = 2 mod 3
  EXPECT_THROW(ExtensionSpec::make(3, {{31, 1}, {31, 2}}), InputError);
  EXPECT_THROW(ExtensionSpec::make(3, {{7, 1}, {13, 3}}), InputError);
  EXPECT_THROW(ExtensionSpec::make(3, {{25, 1}}), InputError);
}

TEST(Spec, JsonRoundTrip) {
  const ExtensionSpec s =
      ExtensionSpec::parse(R"({"p": 3, "factors": [{"q": 31, "c": 1}], "generator_policy": "least-primitive-root"})");
  EXPECT_EQ(s, mu31());
  EXPECT_EQ(ExtensionSpec::from_json(s.to_json()), s);
  EXPECT_THROW(ExtensionSpec::parse("{"), InputError);
  EXPECT_THROW(ExtensionSpec::parse(R"({"p": 3})"), InputError);
  EXPECT_THROW(ExtensionSpec::parse(R"({"p": "3", "factors": []})"), InputError);
  EXPECT_THROW(ExtensionSpec::parse(R"({"p": 3, "factors": [{"q": 31}], "generator_policy": "other"})"),
               InputError);
  EXPECT_THROW(ExtensionSpec::parse(R"({"p": 3, "factors": [{"q": -31}]})"), InputError);
}

TEST(Chi, Examples) {
  EXPECT_EQ(chi(mu31(), 2), 0u);
  EXPECT_EQ(chi(mu31(), 1), 0u);
  EXPECT_EQ(chi(mu31(), 3), 1u);
  EXPECT_THROW(chi(mu31(), 62), InputError);
  EXPECT_THROW(chi(mu31(), 0), InputError);
}

TEST(Chi, HomomorphismRandom) {
  std::mt19937_64 rng(17);
  const std::vector<ExtensionSpec> specs{mu31(), ExtensionSpec::make(3, {{7, 1}, {13, 2}}),
                                         ExtensionSpec::make(5, {{11, 1}, {41, 3}}),
                                         ExtensionSpec::make(5, {{101, 1}})};
  int tested = 0;
  while (tested < 10000) {
    const ExtensionSpec& s = specs[rng() % specs.size()];
    const i128 m = static_cast<i128>(rng() % 2000001) - 1000000;
    const i128 n = static_cast<i128>(rng() % 2000001) - 1000000;
    bool coprime = m != 0 && n != 0;
    for (const auto& f : s.factors()) {
      coprime = coprime && mod_u64(m, f.q) != 0 && mod_u64(n, f.q) != 0;
    }
    if (!coprime) continue;
    EXPECT_EQ(chi(s, m * n), (chi(s, m) + chi(s, n)) % s.p());
    ++tested;
  }
}

TEST(Chi, SplittingKernelIndependentOfGenerator) {
  // Every primitive root of 31 gives the same set of split primes.
  std::vector<bool> base;
  for (u64 ell = 2; ell < 1000; ++ell) {
    if (is_prime(ell) && ell != 31) base.push_back(splits_completely(mu31(), ell).splits);
  }
  for (u64 g = 2; g < 31; ++g) {
    if (!ff::is_primitive_root(31, g)) continue;
    std::vector<bool> with_g;
    for (u64 ell = 2; ell < 1000; ++ell) {
      if (is_prime(ell) && ell != 31) with_g.push_back(chi_with_generators(mu31(), {g}, ell) == 0);
    }
    EXPECT_EQ(with_g, base) << "g=" << g;
  }
  // Two factors: swapping generators rescales c_q by k where g' = g^k, and the
  // character (hence its kernel) is unchanged once c_q is rescaled.
  const ExtensionSpec s = ExtensionSpec::make(3, {{7, 1}, {13, 1}});
  for (u64 k7 : {1u, 5u}) {
    for (u64 k13 : {1u, 5u, 7u, 11u}) {
      const u64 g7 = powmod(3, k7, 7), g13 = powmod(2, k13, 13);
      ASSERT_TRUE(ff::is_primitive_root(7, g7));
      ASSERT_TRUE(ff::is_primitive_root(13, g13));
      const ExtensionSpec rescaled = ExtensionSpec::make(3, {{7, k7 % 3}, {13, k13 % 3}});
      for (u64 ell = 2; ell < 500; ++ell) {
        if (!is_prime(ell) || ell == 7 || ell == 13) continue;
        EXPECT_EQ(chi_with_generators(rescaled, {g7, g13}, ell), chi(s, ell)) << ell;
      }
    }
  }
}

TEST(Splitting, Mu31Examples) {
  EXPECT_TRUE(splits_completely(mu31(), 2).splits);
  EXPECT_FALSE(splits_completely(mu31(), 3).splits);
  const Splitting r = splits_completely(mu31(), 31);
  EXPECT_TRUE(r.ramified);
  EXPECT_FALSE(r.splits);
}

TEST(Splitting, Mu31MatchesOrderOracle) {
  // L is the cubic subfield of Q(zeta_31): ell splits iff ell^10 = 1 mod 31.
  for (u64 ell = 2; ell < 100; ++ell) {
    if (!is_prime(ell) || ell == 31) continue;
    const bool oracle = 10 % multiplicative_order(ell, 31) == 0;
    EXPECT_EQ(splits_completely(mu31(), ell).splits, oracle) << ell;
    EXPECT_EQ(oracle, powmod(ell, 10, 31) == 1);
  }
}

TEST(Validate, Examples) {
  const auto mu = validate_extension(mu31());
  ASSERT_EQ(mu.size(), 2u);
  EXPECT_EQ(mu[0].id, "MT-1");
  EXPECT_EQ(mu[0].status, Status::pass);
  EXPECT_EQ(mu[0].witness["chi_2"], 0);
  EXPECT_EQ(mu[1].id, "MT-2");
  EXPECT_EQ(mu[1].status, Status::pass);
  EXPECT_EQ(mu[1].witness["ramified"][0]["afrak"], 240);
  EXPECT_EQ(mu[1].witness["ramified"][0]["afrak_untwisted"], 585);

  const auto seven = validate_extension(ExtensionSpec::make(3, {{7, 1}}));
  EXPECT_EQ(seven[0].status, Status::fail);
  EXPECT_EQ(seven[0].witness["chi_2"], 2);

  const auto eleven = validate_extension(ExtensionSpec::make(5, {{11, 1}}));
  EXPECT_EQ(eleven[0].status, Status::fail);
  EXPECT_EQ(eleven[0].witness["chi_2"], 1);
}

TEST(Validate, LargeConductorUsesHowe) {
  // 2029 is past the afrak range and 1 mod 4, so a Howe bound certifies MT-2.
  const auto v = validate_extension(ExtensionSpec::make(3, {{2029, 1}}));
  EXPECT_EQ(v[1].status, Status::pass);
  EXPECT_TRUE(v[1].witness["ramified"][0].contains("howe_bound"));
}

TEST(Certificate, FailureExamples) {
  const Certificate c11 = assumption_certificate({1, 1}, mu31(), false);
  EXPECT_EQ(c11.item("A2.1-4").status, Status::fail);
  EXPECT_EQ(c11.verdict(), "fail");

  const Certificate c01 = assumption_certificate({0, 1}, mu31(), false);
  EXPECT_EQ(c01.item("A2.1-2").status, Status::fail);
  EXPECT_THROW(assumption_certificate({0, 0}, mu31(), false), InputError);
}

TEST(Certificate, SelmerNeverEstablished) {
  for (bool assumed : {false, true}) {
    const Certificate c = assumption_certificate({1, 1}, mu31(), assumed);
    EXPECT_EQ(c.item("A2.1-1").status, assumed ? Status::assumed : Status::not_established);
    EXPECT_EQ(c.item("A2.1-3").status, Status::vacuous);
  }
  // Nothing anywhere reports A2.1-1 as a pass.
  for (i128 a = -6; a <= 6; ++a) {
    for (i128 b = -6; b <= 6; ++b) {
      if (disc_core({a, b}) == 0) continue;
      EXPECT_NE(assumption_certificate({a, b}, mu31(), true).item("A2.1-1").status, Status::pass);
    }
  }
}

TEST(Certificate, FamilyMembersPassItemsTwoToSix) {
  const auto fam = sieve::CongruenceFamily::make(3, {31});
  const auto rep = sieve::two_adic_members(HeightBound(1'000'000'000), fam);
  ASSERT_FALSE(rep.members.empty());
  for (const WeierstrassPair& e : rep.members) {
    const Certificate c = assumption_certificate(e, mu31(), true);
    for (const char* id : {"A2.1-2", "A2.1-4", "A2.1-5", "A2.1-6", "MT-1", "MT-2"}) {
      EXPECT_EQ(c.item(id).status, Status::pass) << id << " " << to_string(e.a) << " " << to_string(e.b);
    }
    EXPECT_EQ(c.item("A2.1-3").status, Status::vacuous);
    EXPECT_EQ(c.verdict(), "conditional");
    // 2 is the only additive prime, and it splits.
    ASSERT_EQ(c.item("A2.1-6").witness.size(), 1u);
    EXPECT_EQ(c.item("A2.1-6").witness[0]["ell"], 2);
  }
}

TEST(Certificate, JsonShape) {
  const Certificate c = assumption_certificate({-268, 4112}, mu31(), false);
  const nlohmann::json j = c.to_json();
  ASSERT_EQ(j["items"].size(), 8u);
  const std::vector<std::string> ids{"A2.1-1", "A2.1-2", "A2.1-3", "A2.1-4", "A2.1-5", "A2.1-6", "MT-1", "MT-2"};
  for (std::size_t i = 0; i < ids.size(); ++i) EXPECT_EQ(j["items"][i]["id"], ids[i]);
  EXPECT_EQ(j["items"][0]["status"], "not-established");
  EXPECT_EQ(j["verdict"], c.verdict());
  EXPECT_EQ(j["extension"]["generator_policy"], "least-primitive-root");
}
