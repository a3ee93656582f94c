#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dreadlock/periodic_points.hpp"
#include "dreadlock/pullback.hpp"
#include "dreadlock/symbolic.hpp"

namespace dreadlock {

struct PortraitOptions {
    LandOptions land;
    double match_tol = 1e-7;
    double parabolic_match_tol = 1e-5;  // parabolic points are only located to ~sqrt(eps)
    double seeds_per_unit = 8.0;        // scan grid density in the window
    double scan_tol = 1e-12;
    int threads = 0;
};

/// Base point used by the portrait sweeps: 2R in the direction opposite to delta.
cplx default_base(const EntireMap& m);

struct AddressLanding {
    ExternalAddress address;
    LandingReport report;
    std::string error;  // set when land() threw; report is then Undecided
};

/// land() for every address, in parallel; output order = input order.
std::vector<AddressLanding> land_all(const EntireMap& m, const std::vector<ExternalAddress>& addresses, cplx base,
                                     const PortraitOptions& opts);

double match_tolerance(const PeriodicPoint& z0, const PortraitOptions& opts);

/// Period-p addresses with |k| <= K whose landing point is z0 (brute force),
/// in lexicographic order.
std::vector<ExternalAddress> rays_to_point(const EntireMap& m, const PeriodicPoint& z0, int p, std::int64_t K,
                                           cplx base, const PortraitOptions& opts = {});

struct CandidateTree {
    PeriodicPoint target;
    cplx base;
    double delta_ball = 0;
    int first_filtered = 0;                       // N: first depth with a candidate inside the delta ball
    std::vector<std::vector<FiniteAddress>> levels;  // levels[n-1] = survivors of length n
    std::vector<double> radii;                    // radii[n-1]; infinite before N
    std::size_t node_count = 0;
};

/// Shrinking-ball candidate search. Depth-n candidates extend depth-(n-1)
/// survivors by one innermost label; before N every candidate survives, from
/// N on the pullback point must lie within delta_ball * 2^-(n-N) of the
/// target. N is the first depth at which some candidate enters the delta
/// ball, unless given. Throws EmptyLevel(n) and TooManyCandidates.
CandidateTree candidate_tree(const EntireMap& m, const PeriodicPoint& z0, std::int64_t K, double delta_ball,
                             std::optional<int> N, int depth, cplx base, std::size_t max_nodes = 2000000);

/// True iff every depth-(n+1) survivor truncates to a depth-n survivor.
bool prefix_invariant_holds(const CandidateTree& tree);

/// Periodic addresses (w)^inf of primitive period p whose prefixes survive
/// at every depth of the tree, in lexicographic order.
std::vector<ExternalAddress> extract_periodic(const CandidateTree& tree, int p);

struct UniformLandingReport {
    std::optional<int> n0;
    int window = 10;
    std::vector<std::vector<double>> distances;  // distances[a][n-1] = dist(zeta_n(s_a), H)
    std::string diagnostic;
};

/// Least n0 <= n0_max such that dist(zeta_n(s), H) <= eps for every address
/// and every n in [n0, n0 + window].
UniformLandingReport uniform_landing_check(const EntireMap& m, const HyperbolicSetApprox& H,
                                           const std::vector<ExternalAddress>& addresses, cplx base, double eps,
                                           int n0_max, int window = 10);

struct PortraitPair {
    ExternalAddress address;
    std::size_t point;  // index into PortraitReport::points
};

struct ColandingEntry {
    std::size_t point;
    std::vector<ExternalAddress> addresses;  // lexicographic order
};

struct BeyondAlphabet {
    std::size_t point;
    std::string itinerary;
};

struct PortraitReport {
    std::string map_id;
    int period = 1;
    std::int64_t K = 1;
    Window window;
    cplx base;
    double match_tol = 0;
    std::vector<PeriodicPoint> points;          // scan of the window
    std::vector<AddressLanding> landings;       // one per swept address
    std::vector<PortraitPair> pairs;
    std::vector<std::size_t> unmatched_points;  // repelling/parabolic, itinerary inside the alphabet
    std::vector<BeyondAlphabet> beyond_alphabet;
    std::vector<ExternalAddress> unmatched_addresses;  // not Landed
    std::vector<ExternalAddress> landed_unscanned;     // Landed outside the scanned set
    std::vector<ColandingEntry> colanding;
    std::vector<std::string> violations;
    std::vector<std::string> notes;

    bool ok() const { return violations.empty(); }
};

/// Both directions of the landing theorem over the period-p addresses with
/// |k| <= K and the period-p points in the window, plus the conjugacy,
/// common-period and cyclic-order checks. Violations are listed, never thrown.
PortraitReport verify_landing_theorem(const EntireMap& m, int p, std::int64_t K, const Window& window, cplx base,
                                      const PortraitOptions& opts = {});

struct ColandingCount {
    cplx point;
    std::size_t count;
};

std::vector<ColandingCount> count_colanding(const PortraitReport& report);

/// Points of `larger` (alphabet K+1) whose co-landing count exceeds the
/// count of the same point in `smaller` (alphabet K).
std::vector<ColandingCount> colanding_growth(const PortraitReport& smaller, const PortraitReport& larger,
                                             double tol = 1e-7);

}  // namespace dreadlock
