#include "dstab/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "dstab/densities.hpp"
#include "dstab/errors.hpp"
#include "dstab/galois.hpp"
#include "dstab/localred.hpp"
#include "dstab/report.hpp"
#include "dstab/sieve.hpp"

namespace dstab::cli {

namespace {

using nlohmann::json;

constexpr u64 kMaxWorkers = 256;
constexpr u64 kHoweMaxSpan = 1'000'000;
constexpr i128 kExampleMembersHeight = 1'000'000'000;

struct Common {
  std::string workers = "1";
  std::string seed = "0";
  std::string output;
  std::string format = "json";
};

// What a subcommand produced: a JSON document, or CSV text.
struct Outcome {
  json doc;
  std::string csv;
  int exit_code = ok;
};

u64 as_u64(const std::string& name, const std::string& text, u64 lo, u64 hi) {
  const i128 v = parse_i128(text);
  if (v < static_cast<i128>(lo) || v > static_cast<i128>(hi)) {
    throw InputError("--" + name + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return static_cast<u64>(v);
}

i128 as_height(const std::string& text) {
  const i128 x = parse_i128(text);
  if (x < 1) throw InputError("--max-height must be at least 1");
  return x;
}

galois::ExtensionSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read extension spec " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return galois::ExtensionSpec::parse(ss.str());
}

std::vector<u64> parse_prime_list(const std::string& text) {
  std::vector<u64> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(as_u64("profile", tok, 2, 1'000'000));
  }
  return out;
}

json error_doc(const std::string& code, const std::string& message) {
  return {{"error", {{"code", code}, {"message", message}}}};
}

std::string render(const json& j) { return j.dump(2) + "\n"; }

// ---- subcommands -----------------------------------------------------------

json certificate_summary(const galois::Certificate& c) {
  json items = json::object();
  for (const auto& it : c.items) items[it.id] = galois::to_string(it.status);
  return {{"curve", report::curve(c.curve)}, {"items", items}, {"verdict", c.verdict()}};
}

int certificate_exit(const galois::Certificate& c) {
  const std::string v = c.verdict();
  if (v == "fail") return hypothesis_failure;
  if (v == "indeterminate") return indeterminate;
  return ok;
}

// Throws HypothesisError naming the first failing theorem hypothesis.
void require_hypotheses(const std::vector<galois::Item>& items) {
  for (const auto& it : items) {
    if (it.status == galois::Status::fail) {
      throw HypothesisError("theorem hypothesis " + it.id + " fails: " + it.witness.dump());
    }
    if (it.status == galois::Status::indeterminate) {
      throw IndeterminateError("theorem hypothesis " + it.id + " undecided: " + it.witness.dump());
    }
  }
}

dens::DensityBound bound_for(const galois::ExtensionSpec& spec, u64 cutoff, unsigned workers) {
  std::vector<std::pair<u64, u64>> ram;
  for (u64 q : spec.ramified()) ram.emplace_back(q, dens::afrak(q, spec.p(), workers));
  return dens::theorem_bound(spec.p(), ram, cutoff);
}

long double tail_bound(u64 z, i128 x) {
  return 8 * sieve::prime_inverse_square_tail(z) * std::pow(static_cast<long double>(x), 5.0L / 6.0L) * 1.5L;
}

}  // namespace

Result run(const std::vector<std::string>& args) {
  CLI::App app{"dstab: explicit quantities behind a positive-density diophantine-stability theorem"};
  app.require_subcommand(1);
  Common common;

  std::string ell_s, p_s, role_s, from_s, to_s, spec_path, cutoff_s = "10000", x_s, a_s, b_s, z_s;
  std::string profile_s = "3,5,7,11,13", members_x_s = std::to_string(static_cast<long long>(kExampleMembersHeight));
  bool brute = false, assume_selmer = false, with_afrak = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--workers", common.workers, "worker threads (output does not depend on it)");
    sub->add_option("--seed", common.seed, "seed for Pollard rho");
    sub->add_option("--output", common.output, "write the report to this file");
    sub->add_option("--format", common.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };

  auto* afrak = app.add_subcommand("afrak", "count pairs mod ell with both twists free of p-torsion");
  afrak->add_option("--ell", ell_s)->required();
  afrak->add_option("--p", p_s)->required();

  auto* delta = app.add_subcommand("delta", "local density at ell");
  delta->add_option("--ell", ell_s)->required();
  delta->add_option("--role", role_s)->required();
  delta->add_option("--p", p_s)->required();
  delta->add_flag("--brute", brute, "enumerate the residue grid instead of the closed form");

  auto* howe = app.add_subcommand("howe", "Howe lower bounds on afrak over a prime range (CSV)");
  howe->add_option("--p", p_s)->required();
  howe->add_option("--from", from_s)->required();
  howe->add_option("--to", to_s)->required();
  howe->add_flag("--afrak", with_afrak, "also compute afrak where feasible");

  auto* bound = app.add_subcommand("bound", "the theorem's density lower bound for an extension");
  bound->add_option("--spec", spec_path)->required();
  bound->add_option("--cutoff", cutoff_s);

  auto* brumer = app.add_subcommand("brumer", "count minimal pairs against 4 X^(5/6) / zeta(10)");
  brumer->add_option("--max-height", x_s)->required();

  auto* sieve_cmd = app.add_subcommand("sieve", "count the family F with per-condition profiling");
  sieve_cmd->add_option("--max-height", x_s)->required();
  sieve_cmd->add_option("--spec", spec_path)->required();
  sieve_cmd->add_option("--profile", profile_s, "generic primes to profile, comma separated");

  auto* members = app.add_subcommand("members", "F-members found along the 2-adic progressions");
  members->add_option("--spec", spec_path)->required();
  members->add_option("--max-height", x_s)->required();

  auto* tate = app.add_subcommand("tate", "Tate's algorithm at one prime");
  tate->add_option("--a", a_s)->required();
  tate->add_option("--b", b_s)->required();
  tate->add_option("--ell", ell_s)->required();

  auto* check = app.add_subcommand("check", "assumption certificate for one curve");
  check->add_option("--a", a_s)->required();
  check->add_option("--b", b_s)->required();
  check->add_option("--spec", spec_path)->required();
  check->add_flag("--assume-selmer", assume_selmer, "take Sel_p(E/Q) = 0 as given");

  auto* tail = app.add_subcommand("tail", "tail-defect count B1 u B2 u B3");
  tail->add_option("--z", z_s)->required();
  tail->add_option("--max-height", x_s)->required();

  auto* example = app.add_subcommand("example-mu31", "end-to-end worked example with L inside Q(zeta_31)");
  example->add_option("--cutoff", cutoff_s);
  example->add_option("--members-height", members_x_s);

  for (CLI::App* sub : app.get_subcommands({})) add_common(sub);

  Result result;
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::Success&) {
    const auto subs = app.get_subcommands();
    result.out = subs.empty() ? app.help() : subs.front()->help();
    return result;
  } catch (const CLI::ParseError& ex) {
    result.exit_code = input_error;
    result.err = render(error_doc("usage", ex.what()));
    return result;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  if (name == "howe" && sub->count("--format") == 0) common.format = "csv";
  json config{{"subcommand", name}};

  Outcome outcome;
  try {
    const unsigned workers = static_cast<unsigned>(as_u64("workers", common.workers, 1, kMaxWorkers));
    const std::uint64_t seed = as_u64("seed", common.seed, 0, ~u64{0});
    config["seed"] = seed;
    config["format"] = common.format;
    if (common.format == "csv" && name != "howe") throw InputError("--format csv is only offered by howe");

    if (name == "afrak") {
      const u64 ell = as_u64("ell", ell_s, 2, dens::kAfrakMaxEll);
      const u64 p = as_u64("p", p_s, 2, 5);
      config["ell"] = ell;
      config["p"] = p;
      const u64 a = dens::afrak(ell, p, workers);
      outcome.doc = {{"afrak", a}, {"afrak_untwisted", dens::afrak_untwisted(ell, p, workers)}};
      if (a == 0) outcome.exit_code = hypothesis_failure;
    } else if (name == "delta") {
      const u64 ell = as_u64("ell", ell_s, 2, ~u64{0} >> 1);
      const u64 p = as_u64("p", p_s, 2, 5);
      const dens::Role role = dens::parse_role(role_s);
      config["ell"] = ell;
      config["p"] = p;
      config["role"] = role_s;
      config["brute"] = brute;
      const dens::LocalDensity d = brute ? dens::delta_bruteforce(ell, role, p) : dens::delta_closed(ell, role, p, workers);
      outcome.doc = {{"delta", report::local_density(d)}};
    } else if (name == "howe") {
      const u64 p = as_u64("p", p_s, 3, 5);
      const u64 from = as_u64("from", from_s, 2, 1'000'000'000);
      const u64 to = as_u64("to", to_s, from, from + kHoweMaxSpan);
      config["p"] = p;
      config["from"] = from;
      config["to"] = to;
      config["afrak"] = with_afrak;
      std::ostringstream csv;
      csv << "ell,afrak,bound_num,bound_den,vacuous_flag\n";
      json rows = json::array();
      for (u64 ell = from; ell <= to; ++ell) {
        if (!is_prime(ell) || ell == 2 || ell == p) continue;
        if (p == 3 && ell % 4 != 1) continue;  // the p = 3 bound needs ell = 1 mod 4
        const auto hb = dens::howe_bound(ell, p);
        const Rational value = hb.value_or(Rational(0));
        std::string af;
        json row{{"ell", ell}, {"bound", report::rational(value)}, {"vacuous", !hb.has_value()}};
        if (with_afrak && ell <= dens::kAfrakMaxEll) {
          const u64 a = dens::afrak(ell, p, workers);
          af = std::to_string(a);
          row["afrak"] = a;
        }
        csv << ell << ',' << af << ',' << value.get_num().get_str() << ',' << value.get_den().get_str() << ','
            << (hb ? 0 : 1) << '\n';
        rows.push_back(row);
      }
      outcome.csv = csv.str();
      outcome.doc = {{"rows", rows}};
    } else if (name == "bound") {
      const galois::ExtensionSpec spec = load_spec(spec_path);
      const u64 cutoff = as_u64("cutoff", cutoff_s, 100, 1'000'000);
      config["extension"] = spec.to_json();
      config["cutoff"] = cutoff;
      const auto hyps = galois::validate_extension(spec, workers);
      require_hypotheses(hyps);
      json h = json::array();
      for (const auto& it : hyps) h.push_back({{"id", it.id}, {"status", galois::to_string(it.status)}, {"witness", it.witness}});
      outcome.doc = {{"hypotheses", h}, {"bound", report::density_bound(bound_for(spec, cutoff, workers))}};
    } else if (name == "brumer") {
      const i128 x = as_height(x_s);
      config["max_height"] = report::integer(x);
      const u64 n = sieve::count_minimal(HeightBound(x), workers);
      const long double ref = sieve::brumer_reference(HeightBound(x));
      const sieve::Zeta10 z = sieve::zeta10();
      outcome.doc = {{"count", n},
                     {"reference_approx", static_cast<double>(ref)},
                     {"ratio_approx", static_cast<double>(n / ref)},
                     {"zeta10_lo_approx", static_cast<double>(z.lo)},
                     {"zeta10_hi_approx", static_cast<double>(z.hi)}};
    } else if (name == "sieve") {
      const i128 x = as_height(x_s);
      const galois::ExtensionSpec spec = load_spec(spec_path);
      const std::vector<u64> profile = parse_prime_list(profile_s);
      config["max_height"] = report::integer(x);
      config["extension"] = spec.to_json();
      config["profile"] = profile;
      const auto fam = sieve::CongruenceFamily::make(spec.p(), spec.ramified());
      const sieve::SieveReport rep = sieve::family_count(HeightBound(x), fam, profile, workers, seed);
      outcome.doc = report::sieve_report(rep);
      if (rep.indeterminate > 0) outcome.exit_code = indeterminate;
    } else if (name == "members") {
      const i128 x = as_height(x_s);
      const galois::ExtensionSpec spec = load_spec(spec_path);
      config["max_height"] = report::integer(x);
      config["extension"] = spec.to_json();
      const auto fam = sieve::CongruenceFamily::make(spec.p(), spec.ramified());
      const sieve::MembersReport rep = sieve::two_adic_members(HeightBound(x), fam, seed);
      outcome.doc = report::members_report(rep);
      if (rep.indeterminate > 0) outcome.exit_code = indeterminate;
    } else if (name == "tate") {
      const WeierstrassPair e{parse_i128(a_s), parse_i128(b_s)};
      const u64 ell = as_u64("ell", ell_s, 2, ~u64{0} >> 1);
      config["a"] = report::integer(e.a);
      config["b"] = report::integer(e.b);
      config["ell"] = ell;
      json doc = report::reduction(localred::tate(e, ell));
      doc["reduction_type"] = localred::to_string(localred::reduction_type(e, ell));
      outcome.doc = {{"reduction", doc}};
    } else if (name == "check") {
      const WeierstrassPair e{parse_i128(a_s), parse_i128(b_s)};
      const galois::ExtensionSpec spec = load_spec(spec_path);
      config["a"] = report::integer(e.a);
      config["b"] = report::integer(e.b);
      config["extension"] = spec.to_json();
      config["assume_selmer"] = assume_selmer;
      const galois::Certificate cert = galois::assumption_certificate(e, spec, assume_selmer, seed, workers);
      outcome.doc = {{"certificate", cert.to_json()}};
      outcome.exit_code = certificate_exit(cert);
    } else if (name == "tail") {
      const u64 z = as_u64("z", z_s, 5, 1'000'000'000);
      const i128 x = as_height(x_s);
      config["z"] = z;
      config["max_height"] = report::integer(x);
      const sieve::TailDefect t = sieve::tail_defect(z, HeightBound(x), workers, seed);
      const long double b = tail_bound(z, x);
      json doc = report::tail_defect(t);
      doc["bound_approx"] = static_cast<double>(b);
      doc["bound_constant"] = 8;
      doc["bound_slack"] = 0.5;
      doc["within_bound"] = static_cast<long double>(t.total) <= b;
      doc["note"] = "leading-term sanity check of the tail estimate, not a proof of the asymptotic";
      outcome.doc = doc;
      if (t.indeterminate > 0) outcome.exit_code = indeterminate;
    } else if (name == "example-mu31") {
      const u64 cutoff = as_u64("cutoff", cutoff_s, 100, 1'000'000);
      const i128 mx = as_height(members_x_s);
      const galois::ExtensionSpec spec = galois::ExtensionSpec::make(3, {{31, 1}});
      config["cutoff"] = cutoff;
      config["members_height"] = report::integer(mx);
      config["extension"] = spec.to_json();
      const auto hyps = galois::validate_extension(spec, workers);
      require_hypotheses(hyps);
      json h = json::array();
      for (const auto& it : hyps) h.push_back({{"id", it.id}, {"status", galois::to_string(it.status)}, {"witness", it.witness}});
      const auto fam = sieve::CongruenceFamily::make(3, {31});
      const sieve::MembersReport mem = sieve::two_adic_members(HeightBound(mx), fam, seed);
      json certs = json::array();
      for (const WeierstrassPair& e : mem.members) {
        certs.push_back(certificate_summary(galois::assumption_certificate(e, spec, false, seed, workers)));
      }
      outcome.doc = {{"extension", spec.to_json()},
                     {"chi_2", galois::chi(spec, 2)},
                     {"hypotheses", h},
                     {"afrak_31", dens::afrak(31, 3, workers)},
                     {"afrak_31_untwisted", dens::afrak_untwisted(31, 3, workers)},
                     {"bound", report::density_bound(bound_for(spec, cutoff, workers))},
                     {"members", report::members_report(mem)},
                     {"member_certificates", certs}};
      if (mem.indeterminate > 0) outcome.exit_code = indeterminate;
    }
  } catch (const HypothesisError& ex) {
    result.exit_code = hypothesis_failure;
    result.err = render(error_doc("hypothesis_failure", ex.what()));
    return result;
  } catch (const IndeterminateError& ex) {
    result.exit_code = indeterminate;
    result.err = render(error_doc("indeterminate", ex.what()));
    return result;
  } catch (const InputError& ex) {
    result.exit_code = input_error;
    result.err = render(error_doc("input_error", ex.what()));
    return result;
  } catch (const OverflowError& ex) {
    result.exit_code = input_error;
    result.err = render(error_doc("overflow", ex.what()));
    return result;
  }

  std::string text;
  if (common.format == "csv") {
    text = outcome.csv;
  } else {
    outcome.doc["config"] = config;
    text = render(outcome.doc);
  }
  if (!common.output.empty()) {
    std::ofstream out(common.output, std::ios::binary);
    if (!out || !(out << text)) {
      result.exit_code = input_error;
      result.err = render(error_doc("input_error", "cannot write " + common.output));
      return result;
    }
  } else {
    result.out = text;
  }
  result.exit_code = outcome.exit_code;
  return result;
}

}  // namespace dstab::cli
