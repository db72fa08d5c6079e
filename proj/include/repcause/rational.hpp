#pragma once

#include <cstdint>
#include <string>

#include <boost/rational.hpp>

namespace repcause {

/// Exact responsibility degrees. Denominators are bounded by instance size.
using Rational = boost::rational<std::int64_t>;

/// "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

} // namespace repcause
