#pragma once

// Cyclic degree-p fields L presented by an order-p Dirichlet character, the
// main theorem's hypotheses on L, and per-curve certificates.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dstab/integer.hpp"
#include "dstab/ratcurve.hpp"

namespace dstab::galois {

/// Conductor primes are limited by the exhaustive discrete log.
inline constexpr u64 kMaxConductorPrime = 1'000'000;

struct CharacterFactor {
  u64 q = 0;  // prime, q = 1 mod p
  u64 c = 1;  // coefficient in [1, p - 1]
  u64 g = 0;  // least primitive root mod q (derived)

  friend bool operator==(const CharacterFactor&, const CharacterFactor&) = default;
};

/// chi(n) = sum_q c_q * dlog_{g_q}(n mod q)  (mod p).
class ExtensionSpec {
 public:
  /// Validates p in {3, 5}, at least one factor, distinct primes q = 1 mod p
  /// up to kMaxConductorPrime, c in [1, p - 1]. A single factor is
  /// canonicalized to c = 1 (all nonzero c give the same field).
  static ExtensionSpec make(u64 p, std::vector<std::pair<u64, u64>> factors);

  /// {"p": int, "factors": [{"q": int, "c": int}], "generator_policy": "least-primitive-root"}
  /// ("generator_policy" optional; any other policy is rejected).
  static ExtensionSpec from_json(const nlohmann::json& j);
  static ExtensionSpec parse(const std::string& text);
  nlohmann::json to_json() const;

  u64 p() const { return p_; }
  const std::vector<CharacterFactor>& factors() const { return factors_; }
  /// The ramified primes Z, ascending.
  std::vector<u64> ramified() const;
  bool is_ramified(u64 ell) const;

  friend bool operator==(const ExtensionSpec&, const ExtensionSpec&) = default;

 private:
  u64 p_ = 3;
  std::vector<CharacterFactor> factors_;
};

/// Throws InputError when n shares a factor with the conductor (or n = 0).
u64 chi(const ExtensionSpec& spec, i128 n);

/// chi computed with explicit generators (one per factor, in factor order);
/// used to check that the kernel does not depend on the choice.
u64 chi_with_generators(const ExtensionSpec& spec, const std::vector<u64>& generators, i128 n);

struct Splitting {
  bool splits = false;
  bool ramified = false;
};

/// Ramified ell answers {false, true}; otherwise splits iff chi(ell) = 0.
Splitting splits_completely(const ExtensionSpec& spec, u64 ell);

enum class Status { pass, fail, assumed, vacuous, not_established, indeterminate };

std::string to_string(Status s);

struct Item {
  std::string id;
  Status status = Status::pass;
  nlohmann::json witness;
};

/// MT-1: every q = 1 mod p (so p is unramified) and 2 splits completely.
/// MT-2: for each ramified q, afrak(q, p) > 0; beyond the afrak range a
/// positive Howe bound certifies it, otherwise the item is indeterminate.
std::vector<Item> validate_extension(const ExtensionSpec& spec, unsigned workers = 1);

struct Certificate {
  WeierstrassPair input;
  WeierstrassPair curve;  // globally minimal model actually certified
  ExtensionSpec extension;
  bool selmer_assumed = false;
  std::vector<Item> items;  // A2.1-1 ... A2.1-6, MT-1, MT-2

  /// "fail" if any item fails, else "indeterminate" if any is, else
  /// "conditional" when the Selmer hypothesis is assumed, else "unestablished".
  std::string verdict() const;
  const Item& item(const std::string& id) const;
  nlohmann::json to_json() const;
};

/// Item-by-item check of the good-reduction assumption for e over L.
/// Throws InputError for a singular pair.
Certificate assumption_certificate(const WeierstrassPair& e, const ExtensionSpec& spec,
                                   bool selmer_assumed, std::uint64_t seed = 0,
                                   unsigned workers = 1);

}  // namespace dstab::galois
