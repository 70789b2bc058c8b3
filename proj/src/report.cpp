#include "dstab/report.hpp"

#include <limits>

namespace dstab::report {

using nlohmann::json;

json integer(i128 v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max()) {
    return static_cast<std::int64_t>(v);
  }
  return to_string(v);
}

json rational(const Rational& q) {
  return {{"num", q.get_num().get_str()}, {"den", q.get_den().get_str()}};
}

json curve(const WeierstrassPair& e) { return {{"a", integer(e.a)}, {"b", integer(e.b)}}; }

json local_density(const dens::LocalDensity& d) {
  return {{"ell", d.ell},
          {"role", dens::to_string(d.role)},
          {"n_ell", d.n_ell},
          {"count", d.count.get_str()},
          {"value", rational(d.value)},
          {"value_approx", d.value.get_d()},
          {"provenance", d.provenance}};
}

namespace {

json interval(const dens::ProductInterval& iv) {
  return {{"lo", rational(iv.lo)},
          {"hi", rational(iv.hi)},
          {"lo_approx", iv.lo.get_d()},
          {"hi_approx", iv.hi.get_d()}};
}

}  // namespace

json density_bound(const dens::DensityBound& b) {
  json per = json::array();
  for (const auto& d : b.per_prime) per.push_back(local_density(d));
  json factors = json::array({rational(b.eta)});
  for (const auto& d : b.per_prime) factors.push_back(rational(d.value));
  Rational width = b.generic.hi - b.generic.lo;
  Rational rel = width / b.generic.hi;
  return {{"p", b.p},
          {"eta", rational(b.eta)},
          {"per_prime", per},
          {"factors", factors},
          {"prefactor", rational(b.prefactor)},
          {"truncation_cutoff", b.truncation_cutoff},
          {"generic_product", interval(b.generic)},
          {"generic_relative_width", rational(rel)},
          {"product_interval", interval(b.product_interval)},
          {"lower_bound", rational(b.lower_bound())},
          {"lower_bound_approx", b.lower_bound().get_d()}};
}

json reduction(const localred::ReductionData& r) {
  json j{{"ell", r.ell},
         {"type", localred::to_string(r.type)},
         {"kodaira", r.kodaira.symbol()},
         {"v_delta_min", r.v_delta_min},
         {"conductor_exponent", r.conductor_exponent},
         {"tamagawa", r.tamagawa},
         {"was_minimal", r.was_minimal}};
  j["local_root"] = r.local_root ? json(*r.local_root) : json(nullptr);
  const auto& m = r.minimal_model;
  j["minimal_model"] = {{"a1", m.a1.get_str()}, {"a2", m.a2.get_str()}, {"a3", m.a3.get_str()},
                        {"a4", m.a4.get_str()}, {"a6", m.a6.get_str()}};
  return j;
}

json sieve_report(const sieve::SieveReport& r) {
  json rej = json::object();
  for (const auto& [ell, n] : r.rejections) rej[std::to_string(ell)] = n;
  return {{"cutoff", integer(r.cutoff)},
          {"total_minimal", r.total_minimal},
          {"family_count", r.family_count},
          {"rejections", rej},
          {"generic_profile", r.generic_profile},
          {"generic_joint_pass", r.generic_joint_pass},
          {"empirical_density_num", r.empirical_density.get_num().get_str()},
          {"empirical_density_den", r.empirical_density.get_den().get_str()},
          {"empirical_density_approx", r.empirical_density.get_d()},
          {"indeterminate", r.indeterminate}};
}

json members_report(const sieve::MembersReport& r) {
  json members = json::array();
  for (const auto& e : r.members) members.push_back(curve(e));
  json rej = json::object();
  for (const auto& [reason, n] : r.rejections) rej[reason] = n;
  return {{"cutoff", integer(r.cutoff)},
          {"candidates", r.candidates},
          {"member_count", r.members.size()},
          {"members", members},
          {"rejections", rej},
          {"indeterminate", r.indeterminate}};
}

json tail_defect(const sieve::TailDefect& t) {
  return {{"z", t.z},       {"cutoff", integer(t.cutoff)}, {"total", t.total}, {"B1", t.b1},
          {"B2", t.b2},     {"B3", t.b3},                  {"indeterminate", t.indeterminate}};
}

}  // namespace dstab::report
