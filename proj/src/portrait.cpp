#include "dreadlock/portrait.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dreadlock/parallel.hpp"

namespace dreadlock {

cplx default_base(const EntireMap& m) {
    return 2.0 * m.disc_radius() * axis_direction(m.cut_angle() + kPi);
}

std::vector<AddressLanding> land_all(const EntireMap& m, const std::vector<ExternalAddress>& addresses, cplx base,
                                     const PortraitOptions& opts) {
    return parallel_map<AddressLanding>(
        addresses.size(),
        [&](std::size_t i) {
            AddressLanding out{addresses[i], {}, {}};
            try {
                out.report = land(m, addresses[i], base, opts.land);
            } catch (const DynamicsError& e) {
                out.error = std::string(to_string(e.kind())) + ": " + e.what();
                out.report.diagnostic = out.error;
            }
            return out;
        },
        opts.threads);
}

double match_tolerance(const PeriodicPoint& z0, const PortraitOptions& opts) {
    return (z0.classification.is_parabolic() || z0.multiple_root) ? opts.parabolic_match_tol : opts.match_tol;
}

namespace {

bool landed(const LandingReport& r) { return r.status == LandingReport::Status::Landed; }

cplx finite_pullback(const EntireMap& m, const std::vector<DomainLabel>& entries, cplx base) {
    cplx w = base;
    for (std::size_t j = entries.size(); j-- > 0;) w = m.inverse_branch_continued(entries[j], w);
    return w;
}

}  // namespace

std::vector<ExternalAddress> rays_to_point(const EntireMap& m, const PeriodicPoint& z0, int p, std::int64_t K,
                                           cplx base, const PortraitOptions& opts) {
    if (K < 1 || p < 1) throw DynamicsError(ErrorKind::PreconditionViolated, "rays_to_point needs p >= 1, K >= 1");
    auto sweep = land_all(m, periodic_addresses(m.alphabet(K), static_cast<std::size_t>(p)), base, opts);
    const double tol = match_tolerance(z0, opts);
    std::vector<ExternalAddress> out;
    for (const auto& rec : sweep)
        if (landed(rec.report) && std::abs(rec.report.landing_point - z0.point) <= tol) out.push_back(rec.address);
    return out;  // sweep order is lexicographic
}

CandidateTree candidate_tree(const EntireMap& m, const PeriodicPoint& z0, std::int64_t K, double delta_ball,
                             std::optional<int> N, int depth, cplx base, std::size_t max_nodes) {
    if (!z0.classification.is_repelling())
        throw DynamicsError(ErrorKind::PreconditionViolated, "candidate_tree target must be repelling");
    if (depth < 1 || !(delta_ball > 0))
        throw DynamicsError(ErrorKind::PreconditionViolated, "candidate_tree needs depth >= 1 and delta_ball > 0");
    if (!m.in_W0(base)) throw DynamicsError(ErrorKind::PreconditionViolated, "base point must lie in W_0");

    CandidateTree tree;
    tree.target = z0;
    tree.base = base;
    tree.delta_ball = delta_ball;
    const auto alphabet = m.alphabet(K);
    std::vector<std::vector<DomainLabel>> current{{}};
    int first = N.value_or(0);  // 0 = not reached yet

    for (int n = 1; n <= depth; ++n) {
        std::vector<std::vector<DomainLabel>> candidates;
        std::vector<double> dist;
        candidates.reserve(current.size() * alphabet.size());
        for (const auto& u : current) {
            for (const auto& F : alphabet) {
                auto child = u;
                child.push_back(F);
                double d = std::numeric_limits<double>::infinity();
                try {
                    d = std::abs(finite_pullback(m, child, base) - z0.point);
                } catch (const DynamicsError&) {
                    // on a branch cut: not a candidate
                }
                if (!std::isfinite(d)) continue;
                candidates.push_back(std::move(child));
                dist.push_back(d);
            }
        }
        if (first == 0 && std::any_of(dist.begin(), dist.end(), [&](double d) { return d <= delta_ball; }))
            first = n;
        const double radius = (first == 0 || n < first) ? std::numeric_limits<double>::infinity()
                                                         : delta_ball * std::ldexp(1.0, -(n - first));
        std::vector<std::vector<DomainLabel>> next;
        for (std::size_t i = 0; i < candidates.size(); ++i)
            if (dist[i] <= radius) next.push_back(std::move(candidates[i]));
        if (next.empty()) throw DynamicsError(ErrorKind::EmptyLevel, "no surviving candidate").with_depth(n);
        tree.node_count += next.size();
        if (tree.node_count > max_nodes)
            throw DynamicsError(ErrorKind::TooManyCandidates, "candidate tree exceeds the node limit").with_depth(n);
        std::vector<FiniteAddress> level;
        level.reserve(next.size());
        for (const auto& u : next) level.emplace_back(u);
        std::sort(level.begin(), level.end());
        tree.levels.push_back(std::move(level));
        tree.radii.push_back(radius);
        current = std::move(next);
    }
    tree.first_filtered = first;
    if (!prefix_invariant_holds(tree))
        throw DynamicsError(ErrorKind::PreconditionViolated, "candidate tree prefix invariant violated");
    return tree;
}

bool prefix_invariant_holds(const CandidateTree& tree) {
    for (std::size_t n = 1; n < tree.levels.size(); ++n) {
        const auto& parents = tree.levels[n - 1];
        for (const auto& u : tree.levels[n])
            if (!std::binary_search(parents.begin(), parents.end(), u.truncated())) return false;
    }
    return true;
}

std::vector<ExternalAddress> extract_periodic(const CandidateTree& tree, int p) {
    std::vector<ExternalAddress> out;
    if (tree.levels.empty() || p < 1) return out;
    for (const auto& u : tree.levels.back()) {
        const std::size_t len = u.size();
        if (len < static_cast<std::size_t>(p)) continue;
        bool periodic = true;
        for (std::size_t i = p; i < len && periodic; ++i) periodic = u[i] == u[i % p];
        if (!periodic) continue;
        std::vector<DomainLabel> word(u.entries().begin(), u.entries().begin() + p);
        ExternalAddress s = ExternalAddress::periodic(word);
        if (s.period_length() != static_cast<std::size_t>(p)) continue;
        if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    }
    std::sort(out.begin(), out.end(), LexLess{});
    return out;
}

UniformLandingReport uniform_landing_check(const EntireMap& m, const HyperbolicSetApprox& H,
                                           const std::vector<ExternalAddress>& addresses, cplx base, double eps,
                                           int n0_max, int window) {
    UniformLandingReport rep;
    rep.window = window;
    const auto targets = H.all_points();
    const int horizon = n0_max + window;
    for (const auto& s : addresses) {
        std::vector<double> d;
        d.reserve(horizon);
        try {
            PullbackSequence seq(m, s, base);
            for (int n = 1; n <= horizon; ++n) {
                const cplx z = seq.next();
                double best = std::numeric_limits<double>::infinity();
                for (cplx t : targets) best = std::min(best, std::abs(z - t));
                d.push_back(std::isfinite(std::abs(z)) ? best : std::numeric_limits<double>::infinity());
            }
        } catch (const DynamicsError& e) {
            rep.diagnostic = "pullback of " + format_address(s, m.family()) + " failed: " + e.what();
            d.resize(horizon, std::numeric_limits<double>::infinity());
        }
        rep.distances.push_back(std::move(d));
    }
    for (int n0 = 1; n0 <= n0_max; ++n0) {
        bool ok = true;
        for (const auto& d : rep.distances)
            for (int n = n0; n <= n0 + window && ok; ++n) ok = d[n - 1] <= eps;
        if (ok) {
            rep.n0 = n0;
            return rep;
        }
    }
    if (rep.diagnostic.empty()) {
        // Name the address that stays farthest from H at the end of the horizon.
        std::size_t worst = 0;
        for (std::size_t i = 1; i < rep.distances.size(); ++i)
            if (rep.distances[i].back() > rep.distances[worst].back()) worst = i;
        rep.diagnostic = addresses.empty() ? "no addresses"
                                           : "address " + format_address(addresses[worst], m.family()) +
                                                 " stays at distance " + std::to_string(rep.distances[worst].back()) +
                                                 " from the hyperbolic set";
    }
    return rep;
}

PortraitReport verify_landing_theorem(const EntireMap& m, int p, std::int64_t K, const Window& window, cplx base,
                                      const PortraitOptions& opts) {
    if (p < 1 || K < 1) throw DynamicsError(ErrorKind::PreconditionViolated, "portrait needs p >= 1 and K >= 1");
    if (window.degenerate()) throw DynamicsError(ErrorKind::PreconditionViolated, "degenerate window");
    PortraitReport rep;
    rep.map_id = m.id();
    rep.period = p;
    rep.K = K;
    rep.window = window;
    rep.base = base;
    rep.match_tol = opts.match_tol;
    const Family fam = m.family();

    const auto addresses = periodic_addresses(m.alphabet(K), static_cast<std::size_t>(p));
    rep.landings = land_all(m, addresses, base, opts);

    const int nx = std::max(1, static_cast<int>(std::ceil((window.re_max - window.re_min) * opts.seeds_per_unit)));
    const int ny = std::max(1, static_cast<int>(std::ceil((window.im_max - window.im_min) * opts.seeds_per_unit)));
    rep.points = scan_periodic(m, p, window, nx, ny, opts.scan_tol, opts.threads, opts.land.classify).points;

    // Direction A and matching.
    std::vector<std::vector<ExternalAddress>> matched(rep.points.size());
    for (const auto& rec : rep.landings) {
        const auto& r = rec.report;
        if (!landed(r)) {
            rep.unmatched_addresses.push_back(rec.address);
            continue;
        }
        if (!r.classification.is_repelling() && !r.classification.is_parabolic())
            rep.violations.push_back("address " + format_address(rec.address, fam) + " lands at a " +
                                     to_string(r.classification) + " point");
        std::optional<std::size_t> hit;
        for (std::size_t i = 0; i < rep.points.size() && !hit; ++i)
            if (std::abs(r.landing_point - rep.points[i].point) <= match_tolerance(rep.points[i], opts)) hit = i;
        if (!hit) {
            rep.landed_unscanned.push_back(rec.address);
            continue;
        }
        rep.pairs.push_back({rec.address, *hit});
        matched[*hit].push_back(rec.address);
    }

    // Direction B.
    for (std::size_t i = 0; i < rep.points.size(); ++i) {
        const auto& pt = rep.points[i];
        if (!pt.classification.is_repelling() && !pt.classification.is_parabolic()) continue;
        if (!matched[i].empty()) continue;
        std::vector<DomainLabel> itinerary;
        bool known = true;
        cplx z = pt.point;
        for (int j = 0; j < p && known; ++j) {
            try {
                itinerary.push_back(m.continued_label(z));
                auto next = m.eval(z);
                if (!next) known = false;
                else z = *next;
            } catch (const DynamicsError&) {
                known = false;
            }
        }
        const std::string where = "(" + std::to_string(pt.point.real()) + ", " + std::to_string(pt.point.imag()) + ")";
        if (!known) {
            rep.unmatched_points.push_back(i);
            rep.violations.push_back("no address lands at " + where + " and its itinerary is undefined");
            continue;
        }
        const ExternalAddress itin = ExternalAddress::periodic(itinerary);
        const bool inside = std::all_of(itinerary.begin(), itinerary.end(),
                                        [&](const DomainLabel& F) { return F.k >= -K && F.k <= K; });
        if (inside && itin.period_length() == static_cast<std::size_t>(p)) {
            rep.unmatched_points.push_back(i);
            rep.violations.push_back("no address lands at " + where + " (itinerary " + format_address(itin, fam) +
                                     ")");
        } else {
            rep.beyond_alphabet.push_back({i, format_address(itin, fam)});
        }
    }

    // Conjugacy: (shift s, f(z0)) must land together with (s, z0).
    for (const auto& pair : rep.pairs) {
        const ExternalAddress shifted = pair.address.shift();
        auto it = std::find_if(rep.landings.begin(), rep.landings.end(),
                               [&](const AddressLanding& r) { return r.address == shifted; });
        if (it == rep.landings.end()) continue;  // outside the swept alphabet
        const auto& pt = rep.points[pair.point];
        auto image = m.eval(pt.point);
        auto slope = m.deriv(pt.point);
        if (!image || !slope) continue;
        const double tol = match_tolerance(pt, opts) * std::max(1.0, std::abs(*slope));
        if (!landed(it->report) || std::abs(it->report.landing_point - *image) > tol)
            rep.violations.push_back("conjugacy fails: " + format_address(shifted, fam) + " does not land at f(z0) for " +
                                     format_address(pair.address, fam));
    }

    // Co-landing groups: common primitive period and cyclic order under the shift.
    for (std::size_t i = 0; i < rep.points.size(); ++i) {
        if (matched[i].empty()) continue;
        std::sort(matched[i].begin(), matched[i].end(), LexLess{});
        for (const auto& s : matched[i])
            if (s.period_length() != matched[i].front().period_length())
                rep.violations.push_back("co-landing addresses with different periods at point " + std::to_string(i));
        rep.colanding.push_back({i, matched[i]});
    }
    std::vector<ExternalAddress> all_matched;
    for (const auto& pr : rep.pairs) all_matched.push_back(pr.address);
    std::sort(all_matched.begin(), all_matched.end(), LexLess{});
    for (std::size_t a = 0; a < all_matched.size(); ++a)
        for (std::size_t b = a + 1; b < all_matched.size(); ++b)
            for (std::size_t c = b + 1; c < all_matched.size(); ++c) {
                const auto &s1 = all_matched[a], &s2 = all_matched[b], &s3 = all_matched[c];
                if (!(s1.entry(0) == s2.entry(0) && s2.entry(0) == s3.entry(0))) continue;
                if (cyclic_between(s1, s2, s3) != cyclic_between(s1.shift(), s2.shift(), s3.shift()))
                    rep.violations.push_back("shift does not preserve the cyclic order of " + format_address(s1, fam) +
                                             ", " + format_address(s2, fam) + ", " + format_address(s3, fam));
            }

    rep.notes.push_back("heuristic candidate filter: metric balls stand in for preimage components");
    rep.notes.push_back("finiteness of co-landing is certified only within |k| <= " + std::to_string(K));
    return rep;
}

std::vector<ColandingCount> count_colanding(const PortraitReport& report) {
    std::vector<ColandingCount> out;
    for (const auto& e : report.colanding) out.push_back({report.points[e.point].point, e.addresses.size()});
    return out;
}

std::vector<ColandingCount> colanding_growth(const PortraitReport& smaller, const PortraitReport& larger, double tol) {
    const auto before = count_colanding(smaller);
    std::vector<ColandingCount> grown;
    for (const auto& c : count_colanding(larger)) {
        std::size_t old = 0;
        for (const auto& b : before)
            if (std::abs(b.point - c.point) <= tol) old = b.count;
        if (c.count > old) grown.push_back(c);
    }
    return grown;
}

}  // namespace dreadlock
