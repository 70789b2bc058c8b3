#pragma once

// JSON encodings shared by every report. Exact rationals are
// {"num": "...", "den": "..."}; 128-bit integers are JSON numbers when they
// fit in 64 bits and decimal strings otherwise; floating values only ever
// appear under keys named "approx" or ending in "_approx".

#include <json.hpp>

#include "dstab/densities.hpp"
#include "dstab/integer.hpp"
#include "dstab/localred.hpp"
#include "dstab/ratcurve.hpp"
#include "dstab/sieve.hpp"

namespace dstab::report {

nlohmann::json integer(i128 v);
nlohmann::json rational(const Rational& q);
nlohmann::json curve(const WeierstrassPair& e);

nlohmann::json local_density(const dens::LocalDensity& d);
nlohmann::json density_bound(const dens::DensityBound& b);
nlohmann::json reduction(const localred::ReductionData& r);
nlohmann::json sieve_report(const sieve::SieveReport& r);
nlohmann::json members_report(const sieve::MembersReport& r);
nlohmann::json tail_defect(const sieve::TailDefect& t);

}  // namespace dstab::report
