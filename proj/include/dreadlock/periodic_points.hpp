#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dreadlock/function_model.hpp"

namespace dreadlock {

struct Classification {
    enum class Kind { Repelling, ParabolicMultiplier1, ParabolicRootOfUnity, Attracting, Indifferent, Unclassified };
    Kind kind = Kind::Unclassified;
    int q = 0;  // order of the root of unity for ParabolicRootOfUnity

    bool is_repelling() const { return kind == Kind::Repelling; }
    bool is_parabolic() const {
        return kind == Kind::ParabolicMultiplier1 || kind == Kind::ParabolicRootOfUnity;
    }
    friend bool operator==(const Classification&, const Classification&) = default;
};

std::string to_string(const Classification& c);

struct ClassifyOptions {
    double eps_lambda = 1e-6;
    int q_max = 12;
};

Classification classify_multiplier(cplx lambda, const ClassifyOptions& opts = {});

/// f^p(z) and (f^p)'(z) by the chain rule; empty once the orbit leaves the
/// exp-safe region.
struct OrbitJet {
    cplx value;
    cplx derivative;
};
std::optional<OrbitJet> orbit_jet(const EntireMap& m, cplx z, int p);

struct PeriodicPoint {
    cplx point;
    int period = 1;
    cplx multiplier;
    Classification classification;
    double residual = 0;
    bool multiple_root = false;  // converged linearly (parabolic / multiple root of f^p - z)
};

enum class NewtonFailure { NoConvergence, DerivativeBlowup, NotPrimitive };
const char* to_string(NewtonFailure f);

/// Damped Newton on g(z) = f^p(z) - z without the primitivity check.
/// Used for landing-point refinement, where the point's period may be a
/// proper divisor of the address period.
struct NewtonRoot {
    cplx point;
    double residual = 0;
    int steps = 0;
    bool multiple_root = false;
};
std::variant<NewtonRoot, NewtonFailure> newton_refine(const EntireMap& m, int p, cplx seed, double tol,
                                                      int max_steps);

/// Smallest divisor q of p with |f^q(z) - z| <= threshold * max(1, |z|).
int primitive_period(const EntireMap& m, cplx z, int p, double threshold = 1e-6);

std::variant<PeriodicPoint, NewtonFailure> newton_periodic(const EntireMap& m, int p, cplx seed, double tol,
                                                           int max_steps, const ClassifyOptions& opts = {});

struct Window {
    double re_min = 0, re_max = 0, im_min = 0, im_max = 0;

    bool contains(cplx z) const {
        return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
    }
    bool degenerate() const { return !(re_max > re_min) || !(im_max > im_min); }
};

struct ScanResult {
    std::vector<PeriodicPoint> points;
    int seeds = 0;
    int failures = 0;      // NoConvergence / DerivativeBlowup
    int non_primitive = 0;
    int outside_window = 0;
};

/// Newton from every cell centre of a grid over the window; keeps the
/// primitive period-p points inside the window, deduplicated (radius
/// 100*tol, or 1e-5 for multiple roots) and sorted by (Im, Re).
ScanResult scan_periodic(const EntireMap& m, int p, const Window& window, int nx, int ny, double tol,
                         int threads = 0, const ClassifyOptions& opts = {});

struct HyperbolicSetApprox {
    std::vector<std::vector<PeriodicPoint>> cycles;
    int k = 1;
    double eta = 0;

    std::vector<cplx> all_points() const;
};

/// Collects full cycles of repelling points and the expansion witness
/// eta = min |(f^k)'| over them. Throws PreconditionViolated on a
/// non-repelling input and NotExpanding when eta <= 1.
HyperbolicSetApprox build_hyperbolic_set(const EntireMap& m, const std::vector<PeriodicPoint>& points, int k,
                                         double tol = 1e-9);

}  // namespace dreadlock
