#pragma once

#include <string>

#include "json.hpp"

#include "dreadlock/portrait.hpp"
#include "dreadlock/render.hpp"

namespace dreadlock {

using Json = nlohmann::ordered_json;

/// Serializes with every double printed as %.17g (non-finite values become
/// null), so identical inputs give byte-identical reports.
std::string dump_json(const Json& j, int indent = 2);

/// Appends the members of src to dst in order.
void merge_into(Json& dst, const Json& src);

Json to_json(cplx z);
Json map_json(const EntireMap& m);
Json to_json(const Classification& c);
Json to_json(const PeriodicPoint& p, Family family);
Json to_json(const LandingReport& r);
Json landing_json(const ExternalAddress& s, const LandingReport& r, Family family);
Json to_json(const RayPolyline& ray, Family family);
Json to_json(const PullbackOrbit& orbit, Family family);
Json to_json(const ScanResult& scan, Family family);
Json to_json(const HyperbolicSetApprox& h, Family family);
Json to_json(const UniformLandingReport& u);
Json to_json(const PortraitReport& r, Family family);
Json to_json(const CandidateTree& t, Family family);
Json error_json(const DynamicsError& e);

/// CSV "n,re,im,gap" (n = 0 is the base point, gap empty there).
std::string orbit_csv(const PullbackOrbit& orbit);
/// CSV "t,re,im".
std::string ray_csv(const RayPolyline& ray);

}  // namespace dreadlock
