#include "dreadlock/function_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace dreadlock {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::PreconditionViolated: return "PreconditionViolated";
        case ErrorKind::BranchAmbiguity: return "BranchAmbiguity";
        case ErrorKind::DomainError: return "DomainError";
        case ErrorKind::NormalizationNotAchieved: return "NormalizationNotAchieved";
        case ErrorKind::NotComparable: return "NotComparable";
        case ErrorKind::MissingLabel: return "MissingLabel";
        case ErrorKind::ArcLeavesW0: return "ArcLeavesW0";
        case ErrorKind::OrbitEntersD: return "OrbitEntersD";
        case ErrorKind::OrbitEscaped: return "OrbitEscaped";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::DerivativeBlowup: return "DerivativeBlowup";
        case ErrorKind::NotExpanding: return "NotExpanding";
        case ErrorKind::EmptyLevel: return "EmptyLevel";
        case ErrorKind::TooManyCandidates: return "TooManyCandidates";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::ResolutionCap: return "ResolutionCap";
        case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

namespace {

// Relative angular tolerance for "on the cut" decisions.
constexpr double kCutTol = 1e-12;

double wrap_into(double theta, double upper) {
    // Returns theta + 2 pi m in (upper - 2pi, upper].
    double t = theta;
    if (t > upper) t -= kTwoPi * std::ceil((t - upper) / kTwoPi);
    if (t <= upper - kTwoPi) t += kTwoPi * std::ceil((upper - kTwoPi - t) / kTwoPi);
    return t;
}

std::string fmt_double(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

double parse_double(std::string_view text) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw DynamicsError(ErrorKind::ParseError, "not a number: '" + std::string(text) + "'");
    return v;
}

std::vector<double> parse_number_list(std::string_view text) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        if (comma == std::string_view::npos) comma = text.size();
        out.push_back(parse_double(text.substr(start, comma - start)));
        start = comma + 1;
    }
    return out;
}

}  // namespace

std::string format_label(const DomainLabel& label, Family family) {
    if (family == Family::Exponential) return std::to_string(label.k);
    return std::string(label.tract == 0 ? "L" : "R") + std::to_string(label.k);
}

DomainLabel parse_label(const std::string& text, Family family) {
    std::string_view body = text;
    while (!body.empty() && body.front() == ' ') body.remove_prefix(1);
    while (!body.empty() && body.back() == ' ') body.remove_suffix(1);
    DomainLabel label;
    if (family == Family::Cosine) {
        if (body.empty() || (body.front() != 'L' && body.front() != 'R'))
            throw DynamicsError(ErrorKind::ParseError, "cosine label needs L/R prefix: '" + text + "'");
        label.tract = body.front() == 'L' ? 0 : 1;
        body.remove_prefix(1);
    }
    if (!body.empty() && body.front() == '+') body.remove_prefix(1);
    std::int64_t k = 0;
    auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), k);
    if (ec != std::errc() || ptr != body.data() + body.size() || body.empty())
        throw DynamicsError(ErrorKind::ParseError, "bad label: '" + text + "'");
    label.k = k;
    return label;
}

EntireMap::EntireMap(Family family, cplx a, cplx b, double radius, double cut)
    : family_(family), a_(a), b_(b), radius_(radius), cut_(cut) {
    if (auto reason = admissible(family, a, b, radius, cut))
        throw DynamicsError(ErrorKind::PreconditionViolated, "inadmissible map: " + *reason);
}

EntireMap EntireMap::exponential(cplx a, double disc_radius, double cut_angle) {
    return EntireMap(Family::Exponential, a, cplx{}, disc_radius, cut_angle);
}

EntireMap EntireMap::cosine(cplx a, cplx b, double disc_radius, double cut_angle) {
    return EntireMap(Family::Cosine, a, b, disc_radius, cut_angle);
}

EntireMap EntireMap::with_radius(double disc_radius) const {
    return EntireMap(family_, a_, b_, disc_radius, cut_);
}

std::optional<std::string> EntireMap::admissible(Family family, cplx a, cplx b, double R,
                                                 double cut) {
    if (!(R > 0) || !std::isfinite(R)) return "disc radius must be positive and finite";
    if (!std::isfinite(cut) || cut < 0 || cut >= kTwoPi) return "cut angle must lie in [0, 2pi)";
    double max_s = 0;
    cplx f0;
    if (family == Family::Exponential) {
        max_s = std::abs(a);
        f0 = 1.0 + a;
    } else {
        if (a == cplx{} || b == cplx{}) return "cosine family needs a != 0 and b != 0";
        max_s = 2.0 * std::sqrt(std::abs(a * b));
        f0 = a + b;
    }
    if (!(max_s < R)) return "singular values must lie strictly inside D";
    if (!(std::abs(f0) < R)) return "f(0) must lie in D";
    if (family == Family::Exponential) {
        // On delta, |f| <= e^{R cos(cut)} + |a|.
        if (!(std::cos(cut) < 0) || !(std::exp(R * std::cos(cut)) + std::abs(a) < R))
            return "cut ray meets a tract";
    } else {
        // On the imaginary axis |a e^z + b e^-z| <= |a| + |b|.
        if (std::abs(std::abs(std::sin(cut)) - 1.0) > 1e-12 || !(std::abs(a) + std::abs(b) < R))
            return "cut ray meets a tract";
    }
    return std::nullopt;
}

std::string EntireMap::id() const {
    if (family_ == Family::Exponential)
        return "exp:" + fmt_double(a_.real()) + "," + fmt_double(a_.imag());
    return "cos:" + fmt_double(a_.real()) + "," + fmt_double(a_.imag()) + "," +
           fmt_double(b_.real()) + "," + fmt_double(b_.imag());
}

std::optional<cplx> EntireMap::eval(cplx z) const {
    if (std::abs(z.real()) > kExpSafeBound) return std::nullopt;
    if (family_ == Family::Exponential) return std::exp(z) + a_;
    return a_ * std::exp(z) + b_ * std::exp(-z);
}

std::optional<cplx> EntireMap::deriv(cplx z) const {
    if (std::abs(z.real()) > kExpSafeBound) return std::nullopt;
    if (family_ == Family::Exponential) return std::exp(z);
    return a_ * std::exp(z) - b_ * std::exp(-z);
}

double EntireMap::cyl_derivative_norm(cplx z) const {
    if (z == cplx{}) throw DynamicsError(ErrorKind::DomainError, "cylindrical derivative at z = 0");
    cplx ratio;  // f'(z) / f(z)
    if (family_ == Family::Exponential) {
        if (a_ == cplx{}) {
            ratio = 1.0;
        } else if (z.real() > kExpSafeBound) {
            ratio = 1.0 / (1.0 + a_ * std::exp(-z));
        } else {
            cplx e = std::exp(z);
            cplx f = e + a_;
            if (f == cplx{}) throw DynamicsError(ErrorKind::DomainError, "f(z) = 0");
            ratio = e / f;
        }
    } else {
        if (z.real() >= 0) {
            cplx r = (b_ / a_) * std::exp(-2.0 * z);
            if (1.0 + r == cplx{}) throw DynamicsError(ErrorKind::DomainError, "f(z) = 0");
            ratio = (1.0 - r) / (1.0 + r);
        } else {
            cplx r = (a_ / b_) * std::exp(2.0 * z);
            if (r + 1.0 == cplx{}) throw DynamicsError(ErrorKind::DomainError, "f(z) = 0");
            ratio = (r - 1.0) / (r + 1.0);
        }
    }
    return std::abs(ratio * z);
}

std::vector<cplx> EntireMap::singular_values() const {
    if (family_ == Family::Exponential) return {a_};
    cplx c = 2.0 * std::sqrt(a_ * b_);
    return {c, -c};
}

bool EntireMap::in_disc_closure(cplx w) const { return std::abs(w) <= radius_; }

bool EntireMap::near_delta(cplx w) const {
    cplx u = w * std::polar(1.0, -cut_);
    if (u.real() <= 0) return false;
    return std::abs(u.imag()) <= kCutTol * std::max(1.0, std::abs(w)) &&
           u.real() >= radius_ * (1.0 - kCutTol);
}

bool EntireMap::in_W0(cplx w) const { return !in_disc_closure(w) && !near_delta(w); }

std::vector<DomainLabel> EntireMap::alphabet(std::int64_t K) const {
    std::vector<DomainLabel> out;
    int tracts = family_ == Family::Exponential ? 1 : 2;
    for (int t = 0; t < tracts; ++t)
        for (std::int64_t k = -K; k <= K; ++k) out.push_back({t, k});
    return out;
}

double EntireMap::arg_window(cplx w) const { return wrap_into(std::arg(w), cut_); }

// k = 0 branch of the continued inverse for one tract, without the cut test.
cplx EntireMap::continued_log_principal(int tract, cplx w) const {
    if (family_ == Family::Exponential) {
        cplx d = w - a_;
        if (d == cplx{}) throw DynamicsError(ErrorKind::BranchAmbiguity, "w equals the singular value");
        double im;
        if (a_ == cplx{}) {
            im = arg_window(w);
        } else if (std::abs(w) < 1e-300) {
            // w = 0: take the limit from the side opposite to the cut.
            cplx probe = std::polar(1e-300, cut_ + kPi);
            im = arg_window(probe) + std::arg(1.0 - a_ / probe);
        } else {
            im = arg_window(w) + std::arg(1.0 - a_ / w);
        }
        return {std::log(std::abs(d)), im};
    }
    if (std::abs(w) < 1e-300) throw DynamicsError(ErrorKind::BranchAmbiguity, "w = 0 lies on the cut");
    cplx q = std::sqrt(1.0 - 4.0 * a_ * b_ / (w * w));
    cplx half = 0.5 * (1.0 + q);
    cplx log_right{std::log(std::abs(w) * std::abs(half) / std::abs(a_)),
                   arg_window(w) - std::arg(a_) + std::arg(half)};
    if (tract == 1) return log_right;
    return {std::log(std::abs(b_)) - std::log(std::abs(a_)) - log_right.real(),
            std::arg(b_) - std::arg(a_) - log_right.imag()};
}

cplx EntireMap::inverse_branch_continued(const DomainLabel& F, cplx w) const {
    if (family_ == Family::Exponential && F.tract != 0)
        throw DynamicsError(ErrorKind::PreconditionViolated, "exponential maps have a single tract");
    if (F.tract < 0 || F.tract > 1)
        throw DynamicsError(ErrorKind::PreconditionViolated, "tract id out of range");
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
        throw DynamicsError(ErrorKind::PreconditionViolated, "non-finite argument");
    cplx z0 = continued_log_principal(F.tract, w);
    // Every part of the cut is a radial line through 0, so a tiny rotation
    // either side detects it.
    cplx plus = continued_log_principal(F.tract, w * std::polar(1.0, kCutTol));
    cplx minus = continued_log_principal(F.tract, w * std::polar(1.0, -kCutTol));
    if (std::abs(plus.imag() - minus.imag()) > kPi)
        throw DynamicsError(ErrorKind::BranchAmbiguity, "argument lies on the branch cut");
    return z0 + cplx{0.0, kTwoPi * static_cast<double>(F.k)};
}

cplx EntireMap::inverse_branch(const DomainLabel& F, cplx w) const {
    if (in_disc_closure(w))
        throw DynamicsError(ErrorKind::PreconditionViolated, "inverse_branch: w lies in closure(D)");
    if (near_delta(w)) throw DynamicsError(ErrorKind::BranchAmbiguity, "inverse_branch: w lies on delta");
    return inverse_branch_continued(F, w);
}

namespace {

// Direction proxy for f(z) when |Re z| is beyond the exp-safe bound.
cplx escaped_image_proxy(const EntireMap& m, cplx z, int& tract) {
    double phase;
    if (m.family() == Family::Exponential) {
        tract = 0;
        if (z.real() < 0) return m.a();  // e^z underflows
        phase = z.imag();
    } else if (z.real() > 0) {
        tract = 1;
        phase = std::arg(m.a()) + z.imag();
    } else {
        tract = 0;
        phase = std::arg(m.b()) - z.imag();
    }
    return std::polar(1e200, phase);
}

}  // namespace

DomainLabel EntireMap::fundamental_domain_of(cplx z) const {
    int tract = 0;
    cplx w;
    if (auto fz = eval(z)) {
        w = *fz;
        if (family_ == Family::Cosine)
            tract = z.real() > 0.5 * std::log(std::abs(b_ / a_)) ? 1 : 0;
    } else {
        w = escaped_image_proxy(*this, z, tract);
    }
    if (!in_W0(w))
        throw DynamicsError(ErrorKind::PreconditionViolated, "fundamental_domain_of: f(z) not in W_0");
    cplx z0 = continued_log_principal(tract, w);
    auto k = std::llround((z.imag() - z0.imag()) / kTwoPi);
    return {tract, static_cast<std::int64_t>(k)};
}

DomainLabel EntireMap::continued_label(cplx z) const {
    int tract = 0;
    cplx w;
    if (auto fz = eval(z)) {
        w = *fz;
        if (family_ == Family::Cosine)
            tract = z.real() > 0.5 * std::log(std::abs(b_ / a_)) ? 1 : 0;
    } else {
        w = escaped_image_proxy(*this, z, tract);
    }
    cplx z0 = inverse_branch_continued({tract, 0}, w);
    auto k = std::llround((z.imag() - z0.imag()) / kTwoPi);
    return {tract, static_cast<std::int64_t>(k)};
}

CylPoint EntireMap::cyl_point(cplx z) const {
    if (!in_W0(z)) throw DynamicsError(ErrorKind::NotComparable, "cyl_point: z not in W_0");
    return {z, {std::log(std::abs(z)), arg_window(z)}};
}

double EntireMap::cyl_distance_W0(cplx z, cplx w) const {
    // Both lifts lie in the strip (cut - 2pi, cut) x (log R, inf), which is convex.
    return std::abs(cyl_point(z).log_lift - cyl_point(w).log_lift);
}

MapSpec parse_map_spec(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw DynamicsError(ErrorKind::ParseError, "map spec needs '<family>:<params>': '" + text + "'");
    std::string family = text.substr(0, colon);
    auto nums = parse_number_list(std::string_view(text).substr(colon + 1));
    MapSpec spec;
    if (family == "exp") {
        if (nums.size() != 1 && nums.size() != 2)
            throw DynamicsError(ErrorKind::ParseError, "exp map takes <re>[,<im>]");
        spec.family = Family::Exponential;
        spec.a = {nums[0], nums.size() == 2 ? nums[1] : 0.0};
    } else if (family == "cos") {
        if (nums.size() != 4)
            throw DynamicsError(ErrorKind::ParseError, "cos map takes <a_re>,<a_im>,<b_re>,<b_im>");
        spec.family = Family::Cosine;
        spec.a = {nums[0], nums[1]};
        spec.b = {nums[2], nums[3]};
    } else {
        throw DynamicsError(ErrorKind::ParseError, "unknown map family '" + family + "'");
    }
    return spec;
}

EntireMap build_map(const MapSpec& spec, int radius_samples) {
    double cut = spec.cut_angle.value_or(spec.family == Family::Exponential ? kPi : kPi / 2);
    double R = spec.disc_radius ? *spec.disc_radius
                                : choose_radius(spec.family, spec.a, spec.b, cut, radius_samples).radius;
    if (spec.family == Family::Exponential) return EntireMap::exponential(spec.a, R, cut);
    return EntireMap::cosine(spec.a, spec.b, R, cut);
}

RadiusChoice choose_radius(Family family, cplx a, cplx b, double cut, int samples) {
    if (samples < 2) throw DynamicsError(ErrorKind::PreconditionViolated, "choose_radius needs samples >= 2");
    double max_s = family == Family::Exponential ? std::abs(a) : 2.0 * std::sqrt(std::abs(a * b));
    const double r0 = 1.25 * std::max(1.0, max_s);
    constexpr int kMaxDoublings = 40;
    for (int j = 0; j <= kMaxDoublings; ++j) {
        double R = std::ldexp(r0, j);
        if (EntireMap::admissible(family, a, b, R, cut)) continue;
        EntireMap m = family == Family::Exponential ? EntireMap::exponential(a, R, cut)
                                                    : EntireMap::cosine(a, b, R, cut);
        // Polar grid over { |w| > R } pulled back through every branch with
        // |k| <= 3 covers the region where the cylindrical derivative is smallest.
        double min_norm = std::numeric_limits<double>::infinity();
        for (int i = 0; i < samples; ++i) {
            double rho = (1.0 + 1e-9) * std::exp(std::log(1e4) * i / (samples - 1));
            for (int t = 0; t < samples; ++t) {
                double theta = cut - kTwoPi + (t + 0.5) * kTwoPi / samples;
                cplx w = std::polar(R * rho, theta);
                for (const auto& F : m.alphabet(3)) {
                    cplx z = m.inverse_branch(F, w);
                    min_norm = std::min(min_norm, m.cyl_derivative_norm(z));
                }
            }
        }
        if (min_norm >= 2.0) return {R, min_norm, j, "sampled normalization"};
    }
    throw DynamicsError(ErrorKind::NormalizationNotAchieved,
                        "no radius in the geometric schedule achieves sampled expansion >= 2");
}

RadiusChoice choose_radius(const EntireMap& m, int samples) {
    return choose_radius(m.family(), m.a(), m.b(), m.cut_angle(), samples);
}

PostsingularReport check_postsingular_bounded(const EntireMap& m, int n_iter, double bound) {
    if (n_iter < 1) throw DynamicsError(ErrorKind::PreconditionViolated, "n_iter must be >= 1");
    PostsingularReport report{true, 0.0};
    for (cplx z : m.singular_values()) {
        report.max_modulus = std::max(report.max_modulus, std::abs(z));
        for (int n = 0; n < n_iter; ++n) {
            auto next = m.eval(z);
            if (!next) {
                report.bounded = false;
                report.max_modulus = std::numeric_limits<double>::infinity();
                break;
            }
            z = *next;
            report.max_modulus = std::max(report.max_modulus, std::abs(z));
            if (std::abs(z) >= bound) {
                report.bounded = false;
                break;
            }
        }
    }
    return report;
}

}  // namespace dreadlock
