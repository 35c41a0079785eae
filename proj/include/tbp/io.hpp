#pragma once

// CSV and JSON serialization. CSV carries a header row, comma separators and
// full double precision (17 significant digits). JSON documents are a single
// top-level object {schema, config, result}; no timestamps, so identical
// inputs produce byte-identical output.

#include <string>
#include <vector>

#include "json.hpp"

#include "tbp/critical.hpp"
#include "tbp/orbits.hpp"
#include "tbp/region.hpp"
#include "tbp/tangent.hpp"
#include "tbp/types.hpp"

namespace tbp {

inline constexpr const char* kSchemaVersion = "tbp/1";

std::string format_double(double x);

void to_json(nlohmann::json& j, const Vec2& v);
void to_json(nlohmann::json& j, const CriticalPoint& p);
void to_json(nlohmann::json& j, const CriticalEnergies& e);
void to_json(nlohmann::json& j, const TopologyClass& t);
void to_json(nlohmann::json& j, const Membership& m);
void to_json(nlohmann::json& j, const OvalCurve& oval);
void to_json(nlohmann::json& j, const TangentReport& r);
void to_json(nlohmann::json& j, const BaseCaseCertificate& c);
void to_json(nlohmann::json& j, const ContinuationSample& s);
void to_json(nlohmann::json& j, const ContinuationReport& r);
void to_json(nlohmann::json& j, const GridScan& s);
void to_json(nlohmann::json& j, const PeriodicOrbit& o);
void to_json(nlohmann::json& j, const SyzygyEvent& e);
void to_json(nlohmann::json& j, const SyzygyReport& r);
void to_json(nlohmann::json& j, const HillRegionCheck& c);

/// {schema, config, result} envelope shared by every JSON-emitting command.
nlohmann::json envelope(nlohmann::json config, nlohmann::json result);

std::string vertices_csv(const std::vector<Vec2>& points);
std::string curves_csv(const std::vector<LevelCurve>& curves);
std::string trajectory_csv(const Trajectory& traj, int samples);

/// x, u, u', u'' profile of the restricted potential over [x0, x1], skipping
/// samples within `exclusion` of the primaries.
std::string restricted_profile_csv(MassRatio mu, double x0, double x1, int samples,
                                   double exclusion = 1e-2);

void write_file(const std::string& path, const std::string& content);

} // namespace tbp
