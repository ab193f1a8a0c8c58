#ifndef EDBN_RATIONAL_HPP
#define EDBN_RATIONAL_HPP

#include <cstdint>

#include "edbn/error.hpp"

namespace edbn {

/// Count ratio kept exact so model files reproduce bit-identical doubles.
struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    bool operator==(const Rational&) const = default;
};

inline Rational make_rational(std::uint64_t num, std::uint64_t den) {
    if (den == 0) throw ArgumentError("rational with zero denominator");
    return {num, den};
}

}  // namespace edbn

#endif
