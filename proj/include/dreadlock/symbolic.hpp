#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "dreadlock/function_model.hpp"

namespace dreadlock {

/// Finite external address F_0 F_1 ... F_{n-1} (address of a fundamental tail).
class FiniteAddress {
public:
    explicit FiniteAddress(std::vector<DomainLabel> entries);

    const std::vector<DomainLabel>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    const DomainLabel& operator[](std::size_t i) const { return entries_[i]; }

    FiniteAddress extended(const DomainLabel& last) const;
    /// Drops the last entry; requires size() >= 2.
    FiniteAddress truncated() const;

    friend auto operator<=>(const FiniteAddress&, const FiniteAddress&) = default;

private:
    std::vector<DomainLabel> entries_;
};

/// Eventually periodic infinite external address, stored canonically:
/// the period block is primitive and the preperiod is minimal, so two
/// addresses denote the same sequence iff their representations are equal.
class ExternalAddress {
public:
    ExternalAddress(std::vector<DomainLabel> preperiod, std::vector<DomainLabel> period);

    static ExternalAddress periodic(std::vector<DomainLabel> period) {
        return ExternalAddress({}, std::move(period));
    }

    const std::vector<DomainLabel>& preperiod() const noexcept { return preperiod_; }
    const std::vector<DomainLabel>& period() const noexcept { return period_; }
    std::size_t period_length() const noexcept { return period_.size(); }
    bool is_periodic() const noexcept { return preperiod_.empty(); }

    DomainLabel entry(std::size_t n) const;
    ExternalAddress shift() const;
    FiniteAddress prefix(std::size_t n) const;

    friend bool operator==(const ExternalAddress&, const ExternalAddress&) = default;

private:
    std::vector<DomainLabel> preperiod_;
    std::vector<DomainLabel> period_;
};

/// Lexicographic order induced by the linear order of labels; the first
/// differing entry decides.
std::strong_ordering lex_compare(const ExternalAddress& s1, const ExternalAddress& s2);

/// Cyclic order: true iff a < b < c, b < c < a or c < a < b lexicographically.
bool cyclic_between(const ExternalAddress& a, const ExternalAddress& b, const ExternalAddress& c);

struct LexLess {
    bool operator()(const ExternalAddress& x, const ExternalAddress& y) const {
        return lex_compare(x, y) < 0;
    }
};

/// Checks dist(zeta_0, zeta_{F_n}) <= exp^n(T) for n up to one full period
/// past the preperiod, which decides the question for eventually periodic s.
/// Throws MissingLabel if base_distances lacks an entry of s.
bool is_exponentially_bounded(const ExternalAddress& s, double T,
                              const std::map<DomainLabel, double>& base_distances);

/// Text syntax: "[5,4] (1,2,3)" = preperiod 5,4 then period 1,2,3; "(0)" is
/// the fixed address 000... Cosine labels are written "L3" / "R-1".
ExternalAddress parse_address(const std::string& text, Family family);
std::string format_address(const ExternalAddress& s, Family family);
std::string format_finite_address(const FiniteAddress& s, Family family);

/// All addresses of primitive period exactly p over the given alphabet,
/// in lexicographic order.
std::vector<ExternalAddress> periodic_addresses(const std::vector<DomainLabel>& alphabet, std::size_t p);

}  // namespace dreadlock
