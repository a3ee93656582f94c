#include "dreadlock/periodic_points.hpp"

#include <algorithm>
#include <cmath>

#include "dreadlock/parallel.hpp"

namespace dreadlock {

std::string to_string(const Classification& c) {
    switch (c.kind) {
        case Classification::Kind::Repelling: return "Repelling";
        case Classification::Kind::ParabolicMultiplier1: return "ParabolicMultiplier1";
        case Classification::Kind::ParabolicRootOfUnity: return "ParabolicRootOfUnity(" + std::to_string(c.q) + ")";
        case Classification::Kind::Attracting: return "Attracting";
        case Classification::Kind::Indifferent: return "Indifferent";
        case Classification::Kind::Unclassified: return "Unclassified";
    }
    return "Unclassified";
}

const char* to_string(NewtonFailure f) {
    switch (f) {
        case NewtonFailure::NoConvergence: return "NoConvergence";
        case NewtonFailure::DerivativeBlowup: return "DerivativeBlowup";
        case NewtonFailure::NotPrimitive: return "NotPrimitive";
    }
    return "NoConvergence";
}

Classification classify_multiplier(cplx lambda, const ClassifyOptions& opts) {
    using K = Classification::Kind;
    const double eps = opts.eps_lambda;
    const double modulus = std::abs(lambda);
    if (!std::isfinite(modulus)) return {K::Unclassified, 0};
    if (std::abs(lambda - 1.0) <= eps) return {K::ParabolicMultiplier1, 1};
    if (std::abs(modulus - 1.0) <= eps) {
        cplx power = lambda;
        for (int q = 2; q <= opts.q_max; ++q) {
            power *= lambda;
            if (std::abs(power - 1.0) <= eps) return {K::ParabolicRootOfUnity, q};
        }
    }
    if (modulus > 1.0 + eps) return {K::Repelling, 0};
    if (modulus < 1.0 - eps) return {K::Attracting, 0};
    return {K::Indifferent, 0};
}

std::optional<OrbitJet> orbit_jet(const EntireMap& m, cplx z, int p) {
    cplx w = z;
    cplx d = 1.0;
    for (int i = 0; i < p; ++i) {
        auto dw = m.deriv(w);
        auto fw = m.eval(w);
        if (!dw || !fw) return std::nullopt;
        d *= *dw;
        w = *fw;
        if (!std::isfinite(std::abs(w)) || !std::isfinite(std::abs(d))) return std::nullopt;
    }
    return OrbitJet{w, d};
}

std::variant<NewtonRoot, NewtonFailure> newton_refine(const EntireMap& m, int p, cplx seed, double tol,
                                                      int max_steps) {
    if (p < 1) throw DynamicsError(ErrorKind::PreconditionViolated, "period must be >= 1");
    auto jet = orbit_jet(m, seed, p);
    if (!jet) return NewtonFailure::DerivativeBlowup;
    cplx z = seed;
    cplx g = jet->value - z;
    double res = std::abs(g);
    NewtonRoot best{z, res, 0, false};
    int budget = max_steps;
    double prev_step = 0;
    int linear_streak = 0;
    for (int step = 0; step < budget; ++step) {
        cplx gp = jet->derivative - 1.0;
        if (gp == cplx{}) break;
        cplx delta = g / gp;
        // Damping: halve the step (up to 8 times) until the residual drops.
        bool accepted = false;
        double scale = 1.0;
        for (int h = 0; h <= 8; ++h, scale *= 0.5) {
            cplx trial = z - scale * delta;
            auto tj = orbit_jet(m, trial, p);
            if (!tj) continue;
            double tres = std::abs(tj->value - trial);
            if (tres < res) {
                z = trial;
                jet = tj;
                g = tj->value - trial;
                res = tres;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
        const double step_size = scale * std::abs(delta);
        if (prev_step > 0) {
            double ratio = step_size / prev_step;
            linear_streak = (ratio > 0.3 && ratio < 0.7) ? linear_streak + 1 : 0;
            if (linear_streak >= 3 && !best.multiple_root) {
                // Multiple root: convergence is only linear, relax the budget.
                best.multiple_root = true;
                budget = std::max(budget, 4 * max_steps);
            }
        }
        prev_step = step_size;
        best.steps = step + 1;
        if (res <= best.residual) {
            best.point = z;
            best.residual = res;
        }
        if (step_size <= 4e-16 * std::max(1.0, std::abs(z))) break;
    }
    if (!(best.residual <= tol)) return NewtonFailure::NoConvergence;
    return best;
}

int primitive_period(const EntireMap& m, cplx z, int p, double threshold) {
    for (int q = 1; q < p; ++q) {
        if (p % q != 0) continue;
        auto jet = orbit_jet(m, z, q);
        if (jet && std::abs(jet->value - z) <= threshold * std::max(1.0, std::abs(z))) return q;
    }
    return p;
}

std::variant<PeriodicPoint, NewtonFailure> newton_periodic(const EntireMap& m, int p, cplx seed, double tol,
                                                           int max_steps, const ClassifyOptions& opts) {
    auto refined = newton_refine(m, p, seed, tol, max_steps);
    if (auto* f = std::get_if<NewtonFailure>(&refined)) return *f;
    const auto& root = std::get<NewtonRoot>(refined);
    if (primitive_period(m, root.point, p) != p) return NewtonFailure::NotPrimitive;
    auto jet = orbit_jet(m, root.point, p);
    if (!jet) return NewtonFailure::DerivativeBlowup;
    PeriodicPoint out;
    out.point = root.point;
    out.period = p;
    out.multiplier = jet->derivative;
    out.classification = classify_multiplier(jet->derivative, opts);
    out.residual = std::abs(jet->value - root.point);
    out.multiple_root = root.multiple_root;
    return out;
}

ScanResult scan_periodic(const EntireMap& m, int p, const Window& window, int nx, int ny, double tol,
                         int threads, const ClassifyOptions& opts) {
    ScanResult result;
    if (window.degenerate() || nx <= 0 || ny <= 0) return result;
    const std::size_t count = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
    result.seeds = static_cast<int>(count);
    const double dx = (window.re_max - window.re_min) / nx;
    const double dy = (window.im_max - window.im_min) / ny;
    using Outcome = std::variant<PeriodicPoint, NewtonFailure>;
    auto outcomes = parallel_map<Outcome>(
        count,
        [&](std::size_t idx) -> Outcome {
            const std::size_t i = idx % nx, j = idx / nx;
            cplx seed{window.re_min + (i + 0.5) * dx, window.im_min + (j + 0.5) * dy};
            return newton_periodic(m, p, seed, tol, 100, opts);
        },
        threads);

    for (const auto& o : outcomes) {
        if (const auto* f = std::get_if<NewtonFailure>(&o)) {
            if (*f == NewtonFailure::NotPrimitive)
                ++result.non_primitive;
            else
                ++result.failures;
            continue;
        }
        const auto& pt = std::get<PeriodicPoint>(o);
        if (!window.contains(pt.point)) {
            ++result.outside_window;
            continue;
        }
        bool merged = false;
        for (auto& kept : result.points) {
            const double radius = (kept.multiple_root || pt.multiple_root) ? 1e-5 : 100.0 * tol;
            if (std::abs(kept.point - pt.point) < radius) {
                if (pt.residual < kept.residual) kept = pt;
                merged = true;
                break;
            }
        }
        if (!merged) result.points.push_back(pt);
    }
    std::sort(result.points.begin(), result.points.end(), [](const PeriodicPoint& x, const PeriodicPoint& y) {
        if (x.point.imag() != y.point.imag()) return x.point.imag() < y.point.imag();
        return x.point.real() < y.point.real();
    });
    return result;
}

std::vector<cplx> HyperbolicSetApprox::all_points() const {
    std::vector<cplx> out;
    for (const auto& c : cycles)
        for (const auto& p : c) out.push_back(p.point);
    return out;
}

HyperbolicSetApprox build_hyperbolic_set(const EntireMap& m, const std::vector<PeriodicPoint>& points, int k,
                                         double tol) {
    if (k < 1) throw DynamicsError(ErrorKind::PreconditionViolated, "k must be >= 1");
    HyperbolicSetApprox set;
    set.k = k;
    for (const auto& pt : points) {
        if (!pt.classification.is_repelling())
            throw DynamicsError(ErrorKind::PreconditionViolated, "hyperbolic set inputs must be repelling");
        bool known = false;
        for (const auto& c : set.cycles)
            for (const auto& q : c) known = known || std::abs(q.point - pt.point) <= 100.0 * tol;
        if (known) continue;
        std::vector<PeriodicPoint> cycle;
        cplx z = pt.point;
        for (int j = 0; j < pt.period; ++j) {
            PeriodicPoint member = pt;
            member.point = z;
            if (auto jet = orbit_jet(m, z, pt.period)) member.residual = std::abs(jet->value - z);
            cycle.push_back(member);
            auto next = m.eval(z);
            if (!next) throw DynamicsError(ErrorKind::DerivativeBlowup, "cycle left the exp-safe region");
            z = *next;
        }
        set.cycles.push_back(std::move(cycle));
    }
    set.eta = std::numeric_limits<double>::infinity();
    for (cplx z : set.all_points()) {
        auto jet = orbit_jet(m, z, k);
        if (!jet) throw DynamicsError(ErrorKind::DerivativeBlowup, "orbit left the exp-safe region");
        set.eta = std::min(set.eta, std::abs(jet->derivative));
    }
    if (set.cycles.empty() || !(set.eta > 1.0))
        throw DynamicsError(ErrorKind::NotExpanding, "expansion witness eta <= 1 for the given k");
    return set;
}

}  // namespace dreadlock
