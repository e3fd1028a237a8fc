#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace triflag {

// Exact rational scalar. All group-theoretic computations run over Q so that
// cell membership and rank decisions are decisions, not tolerance checks.
// cpp_rational keeps the canonical form (reduced, positive denominator).
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Rat rat(long long num, long long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    return Rat(Int(num), Int(den));
}

inline double to_double(const Rat& r) { return r.template convert_to<double>(); }

/// Serializes as "p" for integers and "p/q" otherwise.
inline std::string rat_to_string(const Rat& r) {
    const Int num = numerator(r), den = denominator(r);
    std::string s = num.str();
    if (den != 1) {
        s += '/';
        s += den.str();
    }
    return s;
}

/// Accepts "p" or "p/q" with optional sign; q must be nonzero.
inline Rat rat_from_string(std::string_view sv) {
    const auto slash = sv.find('/');
    try {
        if (slash == std::string_view::npos) return Rat(Int(std::string(sv)));
        Int num{std::string(sv.substr(0, slash))};
        Int den{std::string(sv.substr(slash + 1))};
        if (den == 0) throw std::invalid_argument("zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        return Rat(num, den);
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed rational: \"" + std::string(sv) + '"');
    }
}

}  // namespace triflag
