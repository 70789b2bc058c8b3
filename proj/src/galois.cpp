#include "dstab/galois.hpp"

#include <algorithm>

#include "dstab/densities.hpp"
#include "dstab/errors.hpp"
#include "dstab/ffcurve.hpp"
#include "dstab/localred.hpp"
#include "dstab/report.hpp"

namespace dstab::galois {

using nlohmann::json;

ExtensionSpec ExtensionSpec::make(u64 p, std::vector<std::pair<u64, u64>> factors) {
  if (p != 3 && p != 5) throw InputError("extension degree p must be 3 or 5");
  if (factors.empty()) throw InputError("extension needs at least one ramified prime");
  std::sort(factors.begin(), factors.end());
  ExtensionSpec spec;
  spec.p_ = p;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto [q, c] = factors[i];
    if (i > 0 && factors[i - 1].first == q) throw InputError("conductor primes must be distinct");
    if (!is_prime(q)) throw InputError("conductor entry " + std::to_string(q) + " is not prime");
    if (q % p != 1) {
      throw InputError("conductor prime " + std::to_string(q) + " is not 1 mod " + std::to_string(p));
    }
    if (q > kMaxConductorPrime) throw InputError("conductor prime " + std::to_string(q) + " too large");
    if (c < 1 || c >= p) throw InputError("coefficient c must lie in [1, p-1]");
    spec.factors_.push_back({q, factors.size() == 1 ? 1 : c, ff::smallest_primitive_root(q)});
  }
  return spec;
}

ExtensionSpec ExtensionSpec::from_json(const json& j) {
  try {
    if (!j.is_object()) throw InputError("extension spec must be a JSON object");
    if (j.contains("generator_policy") && j.at("generator_policy") != "least-primitive-root") {
      throw InputError("unsupported generator_policy");
    }
    const json& fs = j.at("factors");
    if (!fs.is_array()) throw InputError("factors must be an array");
    std::vector<std::pair<u64, u64>> factors;
    for (const json& f : fs) {
      const std::int64_t q = f.at("q").get<std::int64_t>();
      const std::int64_t c = f.contains("c") ? f.at("c").get<std::int64_t>() : 1;
      if (q <= 0 || c <= 0) throw InputError("q and c must be positive");
      factors.emplace_back(static_cast<u64>(q), static_cast<u64>(c));
    }
    const std::int64_t p = j.at("p").get<std::int64_t>();
    if (p <= 0) throw InputError("p must be positive");
    return make(static_cast<u64>(p), std::move(factors));
  } catch (const json::exception& ex) {
    throw InputError(std::string("malformed extension spec: ") + ex.what());
  }
}

ExtensionSpec ExtensionSpec::parse(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& ex) {
    throw InputError(std::string("extension spec is not valid JSON: ") + ex.what());
  }
  return from_json(j);
}

json ExtensionSpec::to_json() const {
  json fs = json::array();
  for (const auto& f : factors_) fs.push_back({{"q", f.q}, {"c", f.c}, {"g", f.g}});
  return {{"p", p_}, {"factors", fs}, {"generator_policy", "least-primitive-root"}};
}

std::vector<u64> ExtensionSpec::ramified() const {
  std::vector<u64> out;
  for (const auto& f : factors_) out.push_back(f.q);
  return out;
}

bool ExtensionSpec::is_ramified(u64 ell) const {
  return std::any_of(factors_.begin(), factors_.end(), [&](const CharacterFactor& f) { return f.q == ell; });
}

u64 chi_with_generators(const ExtensionSpec& spec, const std::vector<u64>& generators, i128 n) {
  const auto& fs = spec.factors();
  if (generators.size() != fs.size()) throw InputError("one generator per conductor prime");
  u64 sum = 0;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const u64 r = mod_u64(n, fs[i].q);
    if (r == 0) throw InputError("argument shares a factor with the conductor");
    sum = (sum + fs[i].c * (ff::dlog(fs[i].q, generators[i], r) % spec.p())) % spec.p();
  }
  return sum;
}

u64 chi(const ExtensionSpec& spec, i128 n) {
  std::vector<u64> gens;
  for (const auto& f : spec.factors()) gens.push_back(f.g);
  return chi_with_generators(spec, gens, n);
}

Splitting splits_completely(const ExtensionSpec& spec, u64 ell) {
  if (spec.is_ramified(ell)) return {false, true};
  return {chi(spec, static_cast<i128>(ell)) == 0, false};
}

std::string to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::assumed: return "assumed";
    case Status::vacuous: return "vacuous";
    case Status::not_established: return "not-established";
    case Status::indeterminate: return "indeterminate";
  }
  return "?";
}

std::vector<Item> validate_extension(const ExtensionSpec& spec, unsigned workers) {
  const u64 p = spec.p();
  Item mt1{"MT-1", Status::pass, json::object()};
  json cong = json::array();
  for (const auto& f : spec.factors()) {
    cong.push_back({{"q", f.q}, {"q_mod_p", f.q % p}});
    if (f.q % p != 1) mt1.status = Status::fail;  // unreachable through make()
  }
  const u64 chi2 = chi(spec, 2);
  if (chi2 != 0) mt1.status = Status::fail;
  mt1.witness = {{"conductor_congruences", cong},
                 {"p_unramified", true},
                 {"chi_2", chi2},
                 {"two_splits_completely", chi2 == 0}};

  Item mt2{"MT-2", Status::pass, json::object()};
  json per = json::array();
  for (const auto& f : spec.factors()) {
    json w{{"q", f.q}};
    if (f.q <= dens::kAfrakMaxEll) {
      const u64 a = dens::afrak(f.q, p, workers);
      w["afrak"] = a;
      w["afrak_untwisted"] = dens::afrak_untwisted(f.q, p, workers);
      if (a == 0) mt2.status = Status::fail;
    } else if (const auto hb = (p == 5 || f.q % 4 == 1) ? dens::howe_bound(f.q, p) : std::nullopt) {
      w["howe_bound"] = report::rational(*hb);
    } else {
      w["note"] = "beyond the afrak range and no positive Howe bound";
      if (mt2.status == Status::pass) mt2.status = Status::indeterminate;
    }
    per.push_back(w);
  }
  mt2.witness = {{"ramified", per}};
  return {mt1, mt2};
}

std::string Certificate::verdict() const {
  auto any = [&](Status s) {
    return std::any_of(items.begin(), items.end(), [&](const Item& i) { return i.status == s; });
  };
  if (any(Status::fail)) return "fail";
  if (any(Status::indeterminate)) return "indeterminate";
  return selmer_assumed ? "conditional" : "unestablished";
}

const Item& Certificate::item(const std::string& id) const {
  for (const Item& i : items) {
    if (i.id == id) return i;
  }
  throw InputError("no certificate item " + id);
}

json Certificate::to_json() const {
  json its = json::array();
  for (const Item& i : items) its.push_back({{"id", i.id}, {"status", to_string(i.status)}, {"witness", i.witness}});
  return {{"input_curve", report::curve(input)},
          {"curve", report::curve(curve)},
          {"extension", extension.to_json()},
          {"selmer_assumed", selmer_assumed},
          {"items", its},
          {"verdict", verdict()}};
}

Certificate assumption_certificate(const WeierstrassPair& e, const ExtensionSpec& spec, bool selmer_assumed,
                                   std::uint64_t seed, unsigned workers) {
  if (disc_core(e) == 0) throw InputError("certificate needs a nonsingular curve");
  const u64 p = spec.p();
  Certificate cert;
  cert.input = e;
  cert.curve = minimal_short_model(e, seed);
  cert.extension = spec;
  cert.selmer_assumed = selmer_assumed;
  const WeierstrassPair& E = cert.curve;

  cert.items.push_back({"A2.1-1", selmer_assumed ? Status::assumed : Status::not_established,
                        {{"selmer_assumed", selmer_assumed},
                         {"note", "Sel_p(E/Q) = 0 is an external input; it is never computed"}}});

  {
    const localred::ReductionData r = localred::tate(E, p);
    json w{{"p", p}, {"v_delta_min", r.v_delta_min}, {"reduction", localred::to_string(r.type)}};
    if (r.type == localred::ReductionType::good) w["ordinary"] = localred::ordinary_at(E, p);
    cert.items.push_back({"A2.1-2", r.v_delta_min == 0 ? Status::pass : Status::fail, w});
  }

  cert.items.push_back({"A2.1-3", Status::vacuous,
                        {{"reason", "p is unramified in L: every conductor prime is 1 mod p"}}});

  {
    Item it{"A2.1-4", Status::pass, json::array()};
    for (u64 q : spec.ramified()) {
      const localred::ReductionData r = localred::tate(E, q);
      json w{{"q", q}, {"reduction", localred::to_string(r.type)}};
      if (r.type != localred::ReductionType::good) {
        it.status = Status::fail;
      } else {
        const u64 n = ff::point_count(ff::FpCurve::reduce(E.a, E.b, q));
        w["point_count"] = n;
        w["p_divides_count"] = n % p == 0;
        if (n % p == 0) it.status = Status::fail;
      }
      it.witness.push_back(w);
    }
    cert.items.push_back(it);
  }

  Item a5{"A2.1-5", Status::pass, json::array()};
  Item a6{"A2.1-6", Status::pass, json::array()};
  try {
    for (const PrimePower& pp : factor(discriminant(E), seed)) {
      const localred::ReductionData r = localred::tate(E, pp.prime);
      if (r.type == localred::ReductionType::split_multiplicative) {
        const bool ok = r.tamagawa % static_cast<int>(p) != 0;
        a5.witness.push_back({{"ell", pp.prime}, {"kodaira", r.kodaira.symbol()}, {"tamagawa", r.tamagawa},
                              {"v_delta_min", r.v_delta_min}});
        if (!ok) a5.status = Status::fail;
      } else if (r.type == localred::ReductionType::additive) {
        const Splitting s = splits_completely(spec, pp.prime);
        json w{{"ell", pp.prime}, {"kodaira", r.kodaira.symbol()}, {"ramified", s.ramified},
               {"splits_completely", s.splits}};
        if (!s.ramified) w["chi"] = chi(spec, static_cast<i128>(pp.prime));
        a6.witness.push_back(w);
        if (!s.splits) a6.status = Status::fail;
      }
    }
  } catch (const IndeterminateError& ex) {
    a5 = {"A2.1-5", Status::indeterminate, {{"error", ex.what()}}};
    a6 = {"A2.1-6", Status::indeterminate, {{"error", ex.what()}}};
  }
  cert.items.push_back(a5);
  cert.items.push_back(a6);

  for (Item& it : validate_extension(spec, workers)) cert.items.push_back(std::move(it));
  return cert;
}

}  // namespace dstab::galois
