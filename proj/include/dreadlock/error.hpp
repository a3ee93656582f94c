#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

namespace dreadlock {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

enum class ErrorKind {
    PreconditionViolated,
    BranchAmbiguity,
    DomainError,
    NormalizationNotAchieved,
    NotComparable,
    MissingLabel,
    ArcLeavesW0,
    OrbitEntersD,
    OrbitEscaped,
    NoConvergence,
    DerivativeBlowup,
    NotExpanding,
    EmptyLevel,
    TooManyCandidates,
    ParseError,
    ResolutionCap,
    IoError,
};

const char* to_string(ErrorKind kind);

/// Error raised by every numerical operation in the library.
///
/// `depth` is set when the failure happened inside an iterated pullback
/// (the number of inverse branches already applied), `index` when the
/// failure belongs to one sample of a batch (ray samples, seeds).
class DynamicsError : public std::runtime_error {
public:
    DynamicsError(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<long> depth() const noexcept { return depth_; }
    std::optional<long> index() const noexcept { return index_; }

    DynamicsError with_depth(long d) const {
        DynamicsError e = *this;
        e.depth_ = d;
        return e;
    }
    DynamicsError with_index(long i) const {
        DynamicsError e = *this;
        e.index_ = i;
        return e;
    }

private:
    ErrorKind kind_;
    std::optional<long> depth_;
    std::optional<long> index_;
};

}  // namespace dreadlock
