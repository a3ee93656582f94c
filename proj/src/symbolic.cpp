#include "dreadlock/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dreadlock {

namespace {

// Length of the shortest block whose repetition gives `block`.
std::size_t primitive_length(const std::vector<DomainLabel>& block) {
    const std::size_t n = block.size();
    for (std::size_t d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        bool ok = true;
        for (std::size_t i = d; i < n && ok; ++i) ok = block[i] == block[i - d];
        if (ok) return d;
    }
    return n;
}

}  // namespace

FiniteAddress::FiniteAddress(std::vector<DomainLabel> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw DynamicsError(ErrorKind::PreconditionViolated, "finite address must be nonempty");
}

FiniteAddress FiniteAddress::extended(const DomainLabel& last) const {
    auto e = entries_;
    e.push_back(last);
    return FiniteAddress(std::move(e));
}

FiniteAddress FiniteAddress::truncated() const {
    if (entries_.size() < 2) throw DynamicsError(ErrorKind::PreconditionViolated, "cannot truncate length-1 address");
    return FiniteAddress({entries_.begin(), entries_.end() - 1});
}

ExternalAddress::ExternalAddress(std::vector<DomainLabel> preperiod, std::vector<DomainLabel> period)
    : preperiod_(std::move(preperiod)), period_(std::move(period)) {
    if (period_.empty()) throw DynamicsError(ErrorKind::PreconditionViolated, "period must be nonempty");
    period_.resize(primitive_length(period_));
    // Absorb preperiod entries that already continue the periodic pattern.
    while (!preperiod_.empty() && preperiod_.back() == period_.back()) {
        std::rotate(period_.rbegin(), period_.rbegin() + 1, period_.rend());
        preperiod_.pop_back();
    }
}

DomainLabel ExternalAddress::entry(std::size_t n) const {
    if (n < preperiod_.size()) return preperiod_[n];
    return period_[(n - preperiod_.size()) % period_.size()];
}

ExternalAddress ExternalAddress::shift() const {
    if (!preperiod_.empty()) return ExternalAddress({preperiod_.begin() + 1, preperiod_.end()}, period_);
    auto p = period_;
    std::rotate(p.begin(), p.begin() + 1, p.end());
    return ExternalAddress({}, std::move(p));
}

FiniteAddress ExternalAddress::prefix(std::size_t n) const {
    if (n == 0) throw DynamicsError(ErrorKind::PreconditionViolated, "prefix length must be positive");
    std::vector<DomainLabel> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(entry(i));
    return FiniteAddress(std::move(out));
}

std::strong_ordering lex_compare(const ExternalAddress& s1, const ExternalAddress& s2) {
    if (s1 == s2) return std::strong_ordering::equal;
    // Distinct eventually periodic sequences differ before max preperiod + lcm(periods).
    const std::size_t bound = std::max(s1.preperiod().size(), s2.preperiod().size()) +
                              std::lcm(s1.period_length(), s2.period_length());
    for (std::size_t n = 0; n < bound; ++n) {
        auto c = s1.entry(n) <=> s2.entry(n);
        if (c != 0) return c;
    }
    return std::strong_ordering::equal;
}

bool cyclic_between(const ExternalAddress& a, const ExternalAddress& b, const ExternalAddress& c) {
    auto lt = [](const ExternalAddress& x, const ExternalAddress& y) { return lex_compare(x, y) < 0; };
    return (lt(a, b) && lt(b, c)) || (lt(b, c) && lt(c, a)) || (lt(c, a) && lt(a, b));
}

bool is_exponentially_bounded(const ExternalAddress& s, double T,
                              const std::map<DomainLabel, double>& base_distances) {
    const std::size_t horizon = s.preperiod().size() + s.period_length();
    double tower = T;
    for (std::size_t n = 0; n < horizon; ++n) {
        auto it = base_distances.find(s.entry(n));
        if (it == base_distances.end())
            throw DynamicsError(ErrorKind::MissingLabel, "no base distance for an entry of the address");
        if (it->second > tower) return false;
        tower = tower > 700.0 ? std::numeric_limits<double>::infinity() : std::exp(tower);
    }
    return true;
}

namespace {

std::vector<DomainLabel> parse_label_list(std::string_view body, Family family) {
    std::vector<DomainLabel> out;
    std::size_t start = 0;
    while (start <= body.size()) {
        auto comma = body.find(',', start);
        if (comma == std::string_view::npos) comma = body.size();
        out.push_back(parse_label(std::string(body.substr(start, comma - start)), family));
        start = comma + 1;
    }
    return out;
}

std::string join_labels(const std::vector<DomainLabel>& labels, Family family) {
    std::string out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i) out += ",";
        out += format_label(labels[i], family);
    }
    return out;
}

}  // namespace

ExternalAddress parse_address(const std::string& text, Family family) {
    std::string_view rest = text;
    auto skip_ws = [&] { while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1); };
    auto bracketed = [&](char open, char close) {
        skip_ws();
        if (rest.empty() || rest.front() != open)
            throw DynamicsError(ErrorKind::ParseError, "bad address syntax: '" + text + "'");
        auto end = rest.find(close);
        if (end == std::string_view::npos)
            throw DynamicsError(ErrorKind::ParseError, "unterminated group in address: '" + text + "'");
        auto body = rest.substr(1, end - 1);
        rest.remove_prefix(end + 1);
        return parse_label_list(body, family);
    };
    std::vector<DomainLabel> pre;
    skip_ws();
    if (!rest.empty() && rest.front() == '[') pre = bracketed('[', ']');
    auto period = bracketed('(', ')');
    skip_ws();
    if (!rest.empty()) throw DynamicsError(ErrorKind::ParseError, "trailing text in address: '" + text + "'");
    return ExternalAddress(std::move(pre), std::move(period));
}

std::string format_address(const ExternalAddress& s, Family family) {
    std::string out;
    if (!s.preperiod().empty()) out += "[" + join_labels(s.preperiod(), family) + "] ";
    out += "(" + join_labels(s.period(), family) + ")";
    return out;
}

std::string format_finite_address(const FiniteAddress& s, Family family) {
    return "[" + join_labels(s.entries(), family) + "]";
}

std::vector<ExternalAddress> periodic_addresses(const std::vector<DomainLabel>& alphabet, std::size_t p) {
    std::vector<ExternalAddress> out;
    if (alphabet.empty() || p == 0) return out;
    std::vector<std::size_t> digits(p, 0);
    std::vector<DomainLabel> word(p);
    while (true) {
        for (std::size_t i = 0; i < p; ++i) word[i] = alphabet[digits[i]];
        if (primitive_length(word) == p) out.push_back(ExternalAddress::periodic(word));
        std::size_t i = p;
        while (i > 0 && ++digits[i - 1] == alphabet.size()) digits[--i] = 0;
        if (i == 0) break;
    }
    std::sort(out.begin(), out.end(), LexLess{});
    return out;
}

}  // namespace dreadlock
