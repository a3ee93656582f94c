#include "dreadlock/pullback.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>

namespace dreadlock {

const char* to_string(LandingReport::Status s) {
    switch (s) {
        case LandingReport::Status::Landed: return "Landed";
        case LandingReport::Status::Cycling: return "Cycling";
        case LandingReport::Status::Diverged: return "Diverged";
        case LandingReport::Status::Undecided: return "Undecided";
    }
    return "Undecided";
}

namespace {

void require_base(const EntireMap& m, cplx base) {
    if (!m.in_W0(base)) throw DynamicsError(ErrorKind::PreconditionViolated, "pullback base point must lie in W_0");
}

}  // namespace

cplx axis_direction(double angle) {
    cplx d = std::polar(1.0, angle);
    if (std::abs(d.real()) < 1e-15) d.real(0.0);
    if (std::abs(d.imag()) < 1e-15) d.imag(0.0);
    return d;
}

cplx pullback_point(const EntireMap& m, const ExternalAddress& s, cplx base, int n) {
    require_base(m, base);
    if (n < 0) throw DynamicsError(ErrorKind::PreconditionViolated, "pullback depth must be >= 0");
    cplx w = base;
    for (int j = n - 1; j >= 0; --j) {
        try {
            w = m.inverse_branch_continued(s.entry(static_cast<std::size_t>(j)), w);
        } catch (const DynamicsError& e) {
            throw e.with_depth(n - j);
        }
    }
    return w;
}

PullbackSequence::PullbackSequence(const EntireMap& m, const ExternalAddress& s, cplx base)
    : map_(m), address_(s), base_(base), eta_ring_(s.period_length()) {
    require_base(m, base);
}

cplx PullbackSequence::compose(const std::vector<DomainLabel>& labels, std::size_t count, cplx w) const {
    for (std::size_t j = count; j-- > 0;) w = map_.inverse_branch_continued(labels[j], w);
    return w;
}

cplx PullbackSequence::eta(std::size_t j) {
    const auto& per = address_.period();
    const std::size_t p = per.size();
    while (eta_next_ <= j) {
        const std::size_t i = eta_next_;
        cplx value = i < p ? compose(per, i, base_) : compose(per, p, eta_ring_[i % p]);
        eta_ring_[i % p] = value;
        ++eta_next_;
    }
    return eta_ring_[j % p];
}

cplx PullbackSequence::next() {
    const int n = ++n_;
    const auto& pre = address_.preperiod();
    const std::size_t m = pre.size();
    try {
        if (static_cast<std::size_t>(n) < m) return compose(pre, static_cast<std::size_t>(n), base_);
        return compose(pre, m, eta(static_cast<std::size_t>(n) - m));
    } catch (const DynamicsError& e) {
        throw e.with_depth(n);
    }
}

PullbackOrbit pullback_orbit(const EntireMap& m, const ExternalAddress& s, cplx base, int n) {
    PullbackOrbit orbit{s, base, {}, {}};
    PullbackSequence seq(m, s, base);
    cplx prev = base;
    orbit.points.reserve(std::max(n, 0));
    orbit.gaps.reserve(std::max(n, 0));
    for (int i = 0; i < n; ++i) {
        cplx z = seq.next();
        orbit.points.push_back(z);
        orbit.gaps.push_back(std::abs(z - prev));
        prev = z;
    }
    return orbit;
}

LandingReport land(const EntireMap& m, const ExternalAddress& s, cplx base, const LandOptions& opts) {
    using Status = LandingReport::Status;
    LandingReport report;
    PullbackSequence seq(m, s, base);
    const std::size_t pre_len = s.preperiod().size();
    const int p = static_cast<int>(s.period_length());
    constexpr std::size_t kWindow = 5;

    std::vector<double> gaps;
    std::deque<cplx> recent;  // last few points, for cycle detection
    const std::size_t keep = static_cast<std::size_t>(opts.classify.q_max) + kWindow + 1;
    const int hard_limit = opts.slow_mode ? std::max(opts.n_max, opts.slow_n_max) : opts.n_max;
    int limit = opts.n_max;
    cplx prev = base;
    bool landed = false;

    for (int n = 1; n <= limit; ++n) {
        cplx z = seq.next();
        const double gap = std::abs(z - prev);
        prev = z;
        gaps.push_back(gap);
        recent.push_back(z);
        if (recent.size() > keep) recent.pop_front();
        report.steps = n;
        report.raw_limit = z;
        report.gap_final = gap;

        if (!std::isfinite(std::abs(z)) || std::abs(z) > opts.r_div) {
            report.status = Status::Diverged;
            report.diagnostic = "pullback left the divergence radius";
            return report;
        }
        if (gaps.size() >= kWindow) {
            auto tail = gaps.end() - kWindow;
            bool below = std::all_of(tail, gaps.end(), [&](double g) { return g < opts.tol; });
            bool deep = std::all_of(tail, gaps.end(), [&](double g) { return g < opts.tol / 10; });
            bool decreasing = true;
            for (auto it = tail + 1; it != gaps.end(); ++it) decreasing = decreasing && *it < *(it - 1);
            if (below && (decreasing || deep)) {
                landed = true;
                break;
            }
        }
        if (n == limit && limit < hard_limit) {
            // Slow mode: sub-geometric (parabolic) convergence keeps shrinking the gaps.
            const double earlier = gaps[gaps.size() / 2];
            if (gap < 0.99 * earlier) limit = hard_limit;
        }
    }

    if (!landed) {
        for (int q = 2; q <= opts.classify.q_max && recent.size() >= static_cast<std::size_t>(q) + kWindow; ++q) {
            bool cycles = true;
            for (std::size_t i = recent.size() - kWindow; i < recent.size() && cycles; ++i)
                cycles = std::abs(recent[i] - recent[i - q]) < 10 * opts.tol;
            if (cycles) {
                report.status = Status::Cycling;
                report.cycle_estimate = q;
                return report;
            }
        }
        report.status = Status::Undecided;
        report.diagnostic = "no convergence within n_max";
        return report;
    }

    // Refine the limit of the periodic part, then map it through the preperiod.
    const ExternalAddress periodic_part({}, s.period());
    cplx seed = report.raw_limit;
    if (pre_len > 0) seed = pullback_point(m, periodic_part, base, report.steps - static_cast<int>(pre_len));
    auto refined = newton_refine(m, p, seed, opts.residual_tol, opts.newton_steps);
    const auto* root = std::get_if<NewtonRoot>(&refined);
    const double jump_bound = 10.0 * std::sqrt(report.gap_final) + 100.0 * opts.tol;
    if (!root || std::abs(root->point - seed) > jump_bound) {
        report.status = Status::Undecided;
        report.diagnostic = root ? "Newton refinement jumped away from the pullback limit"
                                 : std::string("Newton refinement failed: ") +
                                       to_string(std::get<NewtonFailure>(refined));
        return report;
    }
    const cplx cycle_point = root->point;
    report.period = primitive_period(m, cycle_point, p);
    auto jet = orbit_jet(m, cycle_point, report.period);
    if (!jet) {
        report.status = Status::Undecided;
        report.diagnostic = "landing cycle left the exp-safe region";
        return report;
    }
    report.multiplier = jet->derivative;
    report.classification = classify_multiplier(jet->derivative, opts.classify);
    report.residual = std::abs(jet->value - cycle_point);
    report.multiple_root = root->multiple_root;
    report.landing_point = cycle_point;
    if (pre_len > 0) {
        cplx w = cycle_point;
        for (std::size_t j = pre_len; j-- > 0;) w = m.inverse_branch_continued(s.preperiod()[j], w);
        report.landing_point = w;
    }
    if (report.residual > opts.residual_tol) {
        report.status = Status::Undecided;
        report.diagnostic = "refined limit does not satisfy the residual tolerance";
        return report;
    }
    report.status = Status::Landed;
    return report;
}

bool segment_in_W0(const EntireMap& m, cplx from, cplx to, int /*max_depth*/) {
    if (!m.in_W0(from) || !m.in_W0(to)) return false;
    const double R = m.disc_radius();
    const cplx d = to - from;
    const double len2 = std::norm(d);
    double t = len2 > 0 ? -(from.real() * d.real() + from.imag() * d.imag()) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    if (std::abs(from + t * d) <= R) return false;
    // Rotate delta onto the positive real axis [R, inf).
    const cplx rot = std::polar(1.0, -m.cut_angle());
    const cplx a = from * rot, b = to * rot;
    if ((a.imag() > 0 && b.imag() > 0) || (a.imag() < 0 && b.imag() < 0)) return true;
    if (a.imag() == b.imag()) return std::max(a.real(), b.real()) < R;
    const double s = a.imag() / (a.imag() - b.imag());
    return (a + s * (b - a)).real() < R;
}

cplx default_trace_base(const EntireMap& m, const std::vector<DomainLabel>& labels) {
    const cplx dir = axis_direction(m.cut_angle() + kPi);
    double r = 2.0 * m.disc_radius();
    for (int attempt = 0; attempt < 12 && r < 1e300; ++attempt, r = std::max(r * r, 10.0 * r)) {
        const cplx base = r * dir;
        bool ok = m.in_W0(base);
        for (const auto& F : labels) {
            if (!ok) break;
            cplx end = m.inverse_branch(F, base);
            ok = segment_in_W0(m, base, end);
        }
        if (ok) return base;
    }
    throw DynamicsError(ErrorKind::ArcLeavesW0, "no base point with all base arcs inside W_0");
}

RayPolyline trace_ray(const EntireMap& m, const ExternalAddress& s, cplx base, int n_pull, int samples_per_unit) {
    require_base(m, base);
    if (n_pull < 1 || samples_per_unit < 1)
        throw DynamicsError(ErrorKind::PreconditionViolated, "trace_ray needs n_pull >= 1 and samples >= 1");

    std::set<DomainLabel> used;
    for (int n = 0; n < n_pull; ++n) used.insert(s.entry(static_cast<std::size_t>(n)));
    std::map<DomainLabel, cplx> arc_end;
    for (const auto& F : used) {
        cplx end;
        try {
            end = m.inverse_branch(F, base);
        } catch (const DynamicsError&) {
            throw DynamicsError(ErrorKind::ArcLeavesW0, "base arc endpoint is not in W_0");
        }
        if (!segment_in_W0(m, base, end))
            throw DynamicsError(ErrorKind::ArcLeavesW0, "base arc for label " + format_label(F, m.family()) +
                                                            " leaves W_0");
        arc_end[F] = end;
    }

    const auto& pre = s.preperiod();
    const auto& per = s.period();
    const std::size_t m_len = pre.size(), p = per.size();
    auto compose = [&](const std::vector<DomainLabel>& labels, std::size_t count, cplx w) {
        for (std::size_t j = count; j-- > 0;) w = m.inverse_branch_continued(labels[j], w);
        return w;
    };

    // pieces[n][i] = gamma_n at u = i / S (plus u = 1 for the deepest piece).
    const int S = samples_per_unit;
    std::vector<std::vector<cplx>> pieces(n_pull, std::vector<cplx>(S + 1));
    for (int i = 0; i <= S; ++i) {
        const double u = static_cast<double>(i) / S;
        auto beta = [&](const DomainLabel& F) { return base + u * (arc_end[F] - base); };
        std::vector<cplx> ring(p);  // periodic-part pieces rho_j, rho_{j+p} = Phi(rho_j)
        std::size_t produced = 0;
        for (int n = 0; n < n_pull; ++n) {
            try {
                if (static_cast<std::size_t>(n) < m_len) {
                    pieces[n][i] = compose(pre, static_cast<std::size_t>(n), beta(pre[n]));
                    continue;
                }
                const std::size_t j = static_cast<std::size_t>(n) - m_len;
                while (produced <= j) {
                    const std::size_t q = produced;
                    ring[q % p] = q < p ? compose(per, q, beta(per[q])) : compose(per, p, ring[q % p]);
                    ++produced;
                }
                pieces[n][i] = compose(pre, m_len, ring[j % p]);
            } catch (const DynamicsError& e) {
                throw e.with_depth(n).with_index(i);
            }
        }
    }

    RayPolyline ray{s, {}, {}};
    ray.vertices.reserve(static_cast<std::size_t>(n_pull) * S + 1);
    ray.vertices.push_back(pieces[n_pull - 1][S]);
    ray.t_values.push_back(-static_cast<double>(n_pull));
    for (int n = n_pull - 1; n >= 0; --n) {
        for (int i = S - 1; i >= 0; --i) {
            ray.vertices.push_back(pieces[n][i]);
            ray.t_values.push_back(-n - static_cast<double>(i) / S);
        }
    }
    return ray;
}

FiniteAddress escape_address(const EntireMap& m, cplx z, int n_max, AddressMode mode) {
    if (n_max < 1) throw DynamicsError(ErrorKind::PreconditionViolated, "n_max must be >= 1");
    const bool real_map = m.family() == Family::Exponential ? m.a().imag() == 0
                                                            : m.a().imag() == 0 && m.b().imag() == 0;
    std::vector<DomainLabel> entries;
    cplx x = z;
    for (int j = 0; j < n_max; ++j) {
        auto fx = m.eval(x);
        if (fx && mode == AddressMode::Strict && !m.in_W0(*fx))
            throw DynamicsError(ErrorKind::OrbitEntersD, "orbit enters closure(D) or delta at step " +
                                                             std::to_string(j + 1))
                .with_depth(j + 1);
        try {
            entries.push_back(mode == AddressMode::Strict ? m.fundamental_domain_of(x) : m.continued_label(x));
        } catch (const DynamicsError& e) {
            throw DynamicsError(ErrorKind::OrbitEntersD, std::string("cannot label f^j(z): ") + e.what())
                .with_depth(j);
        }
        if (fx) {
            x = *fx;
            continue;
        }
        // Overflow. A real orbit of a real map stays on the real axis; follow
        // it symbolically with a huge real proxy of the right sign.
        if (!(real_map && x.imag() == 0))
            throw DynamicsError(ErrorKind::OrbitEscaped, "orbit overflowed at step " + std::to_string(j + 1))
                .with_depth(j + 1);
        double sign = 1.0;
        if (m.family() == Family::Cosine)
            sign = x.real() > 0 ? (m.a().real() > 0 ? 1.0 : -1.0) : (m.b().real() > 0 ? 1.0 : -1.0);
        x = cplx{sign * (kExpSafeBound + 1.0), 0.0};
    }
    return FiniteAddress(std::move(entries));
}

GapDecay gap_decay_check(const PullbackOrbit& orbit) {
    GapDecay out;
    const std::size_t n = orbit.gaps.size();
    std::vector<double> xs, ys;
    bool all_tiny = true;
    for (std::size_t i = n / 2; i < n; ++i) {
        const double floor = 1e-14 * std::max(1.0, std::abs(orbit.points[i]));
        if (orbit.gaps[i] <= floor) continue;
        all_tiny = false;
        xs.push_back(static_cast<double>(i + 1));
        ys.push_back(std::log(orbit.gaps[i]));
    }
    out.samples = static_cast<int>(xs.size());
    if (all_tiny) {
        out.geometric = true;
        out.rate = 0.0;
        return out;
    }
    if (xs.size() < 3) return out;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
    mx /= xs.size();
    my /= ys.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    out.rate = std::exp(sxy / sxx);
    out.geometric = out.rate <= kGeometricRateBound;
    return out;
}

}  // namespace dreadlock
