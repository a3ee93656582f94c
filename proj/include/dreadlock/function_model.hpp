#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dreadlock/error.hpp"

namespace dreadlock {

enum class Family { Exponential, Cosine };

/// One fundamental domain: tract id and 2*pi*i translate index.
///
/// Exponential maps have a single tract (0). Cosine maps a*e^z + b*e^-z have
/// tract 0 ("L", Re z -> -inf) and tract 1 ("R", Re z -> +inf).
struct DomainLabel {
    int tract = 0;
    std::int64_t k = 0;

    friend auto operator<=>(const DomainLabel&, const DomainLabel&) = default;
};

std::string format_label(const DomainLabel& label, Family family);
DomainLabel parse_label(const std::string& text, Family family);

/// A point together with a chosen logarithm (z = exp(log_lift)).
struct CylPoint {
    cplx z;
    cplx log_lift;
};

/// Members of the two closed-form families f(z) = e^z + a and
/// f(z) = a e^z + b e^-z, together with the reference disc D = D(0, R) and
/// the straight cut ray delta = { t e^{i cut_angle} : t >= R } defining
/// W_0 = C \ (closure(D) u delta).
///
/// Immutable; every member function is pure and thread-safe.
class EntireMap {
public:
    /// Throws PreconditionViolated if R is not admissible (see `admissible`).
    static EntireMap exponential(cplx a, double disc_radius, double cut_angle = kPi);
    static EntireMap cosine(cplx a, cplx b, double disc_radius, double cut_angle = kPi / 2);

    /// Empty when R is admissible, otherwise the reason it is not:
    /// singular values must lie strictly inside D, f(0) must lie in D, and
    /// delta must avoid the closure of every tract.
    static std::optional<std::string> admissible(Family family, cplx a, cplx b, double disc_radius,
                                                 double cut_angle);

    EntireMap with_radius(double disc_radius) const;

    Family family() const noexcept { return family_; }
    cplx a() const noexcept { return a_; }
    cplx b() const noexcept { return b_; }
    double disc_radius() const noexcept { return radius_; }
    double cut_angle() const noexcept { return cut_; }

    /// "exp:<re>,<im>" or "cos:<a_re>,<a_im>,<b_re>,<b_im>" (round-trips through parse_map_spec).
    std::string id() const;

    /// f(z); empty ("escaped to infinity") when |Re z| exceeds the exp-safe bound.
    std::optional<cplx> eval(cplx z) const;
    std::optional<cplx> deriv(cplx z) const;

    /// |f'(z) z / f(z)|, evaluated without overflow for large |Re z|.
    double cyl_derivative_norm(cplx z) const;

    std::vector<cplx> singular_values() const;

    bool in_disc_closure(cplx w) const;
    bool in_W0(cplx w) const;

    /// Labels with |k| <= K over every tract, in the linear order of labels.
    std::vector<DomainLabel> alphabet(std::int64_t K) const;

    /// The unique z in fundamental domain F with f(z) = w. Requires w in W_0.
    cplx inverse_branch(const DomainLabel& F, cplx w) const;

    /// The inverse branch for F continued analytically to the complement of
    /// its cut; agrees with inverse_branch on W_0. Throws BranchAmbiguity
    /// within 1e-12 (relative) of the cut.
    cplx inverse_branch_continued(const DomainLabel& F, cplx w) const;

    /// Label of the fundamental domain containing z. Requires f(z) in W_0.
    DomainLabel fundamental_domain_of(cplx z) const;

    /// Label F with z = inverse_branch_continued(F, f(z)); defined whenever
    /// f(z) is off the continued cut.
    DomainLabel continued_label(cplx z) const;

    /// Log lift of z in W_0 with Im inside the window (cut - 2pi, cut).
    CylPoint cyl_point(cplx z) const;
    double cyl_distance_W0(cplx z, cplx w) const;

private:
    EntireMap(Family family, cplx a, cplx b, double radius, double cut);

    double arg_window(cplx w) const;
    cplx continued_log_principal(int tract, cplx w) const;
    bool near_delta(cplx w) const;

    Family family_;
    cplx a_;
    cplx b_;
    double radius_;
    double cut_;
};

/// Parses the map mini-language "exp:<re>[,<im>]" / "cos:<a_re>,<a_im>,<b_re>,<b_im>".
/// Returns family and coefficients; the radius is chosen separately.
struct MapSpec {
    Family family = Family::Exponential;
    cplx a{};
    cplx b{};
    std::optional<double> disc_radius;
    std::optional<double> cut_angle;
};
MapSpec parse_map_spec(const std::string& text);
EntireMap build_map(const MapSpec& spec, int radius_samples = 64);

inline constexpr double kExpSafeBound = 700.0;

struct RadiusChoice {
    double radius = 0;
    double sampled_min_norm = 0;
    int doublings = 0;
    std::string method = "sampled normalization";
};

/// Smallest R = R0 * 2^j for which R is admissible and the sampled minimum of
/// the cylindrical derivative over { z : |f(z)| > R } is at least 2.
RadiusChoice choose_radius(Family family, cplx a, cplx b, double cut_angle, int samples);
RadiusChoice choose_radius(const EntireMap& m, int samples);

struct PostsingularReport {
    bool bounded = false;
    double max_modulus = 0;
};

PostsingularReport check_postsingular_bounded(const EntireMap& m, int n_iter, double bound);

}  // namespace dreadlock
