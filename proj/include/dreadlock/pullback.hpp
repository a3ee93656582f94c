#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dreadlock/function_model.hpp"
#include "dreadlock/periodic_points.hpp"
#include "dreadlock/symbolic.hpp"

namespace dreadlock {

/// e^{i angle} with rounding noise on the coordinate axes removed.
cplx axis_direction(double angle);

/// zeta_n = inv(F_0) o inv(F_1) o ... o inv(F_{n-1}) (zeta), innermost first.
/// Requires zeta in W_0; inner points may leave W_0 and are handled by the
/// continued branches. Branch errors carry the failing depth.
cplx pullback_point(const EntireMap& m, const ExternalAddress& s, cplx base, int n);

/// Incremental generator of zeta_1, zeta_2, ... for an eventually periodic
/// address, O(preperiod + period) work per step: with s = pre . (P)^inf,
/// eta_{j+p} = Phi(eta_j) where Phi is the composition over one period, and
/// zeta_n = G_pre(eta_{n - |pre|}).
class PullbackSequence {
public:
    PullbackSequence(const EntireMap& m, const ExternalAddress& s, cplx base);

    /// Returns zeta_{n+1} and advances.
    cplx next();
    int depth() const noexcept { return n_; }

private:
    cplx compose(const std::vector<DomainLabel>& labels, std::size_t count, cplx w) const;
    cplx eta(std::size_t j);

    const EntireMap& map_;
    ExternalAddress address_;
    cplx base_;
    int n_ = 0;
    std::vector<cplx> eta_ring_;
    std::size_t eta_next_ = 0;  // index of the next eta to produce
};

struct PullbackOrbit {
    ExternalAddress address;
    cplx base;
    std::vector<cplx> points;  // zeta_1 .. zeta_N
    std::vector<double> gaps;  // gaps[i] = |points[i] - zeta_i| (zeta_0 = base)
};

PullbackOrbit pullback_orbit(const EntireMap& m, const ExternalAddress& s, cplx base, int n);

struct LandOptions {
    double tol = 1e-10;
    int n_max = 10000;
    bool slow_mode = true;   // keep going to slow_n_max while gaps still shrink
    int slow_n_max = 1000000;
    double residual_tol = 1e-8;
    double r_div = 1e6;
    int newton_steps = 100;
    ClassifyOptions classify;
};

struct LandingReport {
    enum class Status { Landed, Cycling, Diverged, Undecided };
    Status status = Status::Undecided;
    int cycle_estimate = 0;  // for Cycling
    cplx landing_point;
    cplx raw_limit;          // last pullback point before refinement
    int period = 0;          // primitive period of the landing cycle
    cplx multiplier;
    Classification classification;
    double residual = 0;
    double gap_final = 0;
    int steps = 0;
    bool multiple_root = false;
    std::string diagnostic;
};

const char* to_string(LandingReport::Status s);

/// Runs the pullback until the last five gaps are below tol (decreasing, or
/// all below tol/10), refines the limit by Newton on f^p(z) - z, and
/// classifies the multiplier. Preperiodic addresses are refined through
/// their periodic part and mapped back through the preperiod branches.
LandingReport land(const EntireMap& m, const ExternalAddress& s, cplx base, const LandOptions& opts = {});

struct RayPolyline {
    ExternalAddress address;
    std::vector<cplx> vertices;
    std::vector<double> t_values;  // ascending; t = -n at zeta_n
};

/// Exact check that the straight segment [from, to] avoids closure(D) and delta.
/// max_depth is accepted for interface compatibility and ignored.
bool segment_in_W0(const EntireMap& m, cplx from, cplx to, int max_depth = 20);

/// Pulls the base arcs beta_F = [zeta, inv_F(zeta)] back along s and
/// concatenates the pieces gamma_n = f_s^{-n}(beta_{F_n}) for n = n_pull-1 .. 0,
/// giving t in [-n_pull, 0] with f(gamma_s(t)) = gamma_{shift(s)}(t + 1).
RayPolyline trace_ray(const EntireMap& m, const ExternalAddress& s, cplx base, int n_pull, int samples_per_unit);

/// Base point on the ray opposite to delta, far enough out that every base
/// arc used for `labels` lies in W_0.
cplx default_trace_base(const EntireMap& m, const std::vector<DomainLabel>& labels);

enum class AddressMode {
    Strict,    // requires f^{j+1}(z) in W_0, as for points in fundamental domains
    Continued, // labels by the continued branches; follows tails into D
};

/// entries[j] = label of f^j(z), j = 0 .. n_max-1. Strict mode throws
/// OrbitEntersD(j) when f^{j+1}(z) lies in closure(D) or on delta.
FiniteAddress escape_address(const EntireMap& m, cplx z, int n_max, AddressMode mode = AddressMode::Strict);

struct GapDecay {
    bool geometric = false;
    double rate = 0;
    int samples = 0;
};

/// Least-squares slope of log(gap) against n over the second half of the
/// orbit (gaps at rounding level dropped); geometric iff rate <= 0.6, i.e.
/// the expansion factor 2 with slack.
GapDecay gap_decay_check(const PullbackOrbit& orbit);

inline constexpr double kGeometricRateBound = 0.6;

}  // namespace dreadlock
