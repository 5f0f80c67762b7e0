#pragma once

#include <functional>
#include <random>

#include "purify/bell_state.hpp"
#include "purify/sampler.hpp"

namespace purify::test {

inline std::mt19937_64 rng(std::uint64_t seed = 12345) {
    return std::mt19937_64(seed);
}

// Rejection-samples the flat simplex until the predicate holds.
inline BellDiagonalState random_state_where(std::mt19937_64& gen,
                                            const std::function<bool(const BellDiagonalState&)>& pred) {
    for (;;) {
        const BellDiagonalState s = random_simplex_state(gen);
        if (pred(s)) {
            return s;
        }
    }
}

inline double linf(const BellDiagonalState& x, const BellDiagonalState& y) {
    return std::max(std::max(std::abs(x.a - y.a), std::abs(x.b - y.b)),
                    std::max(std::abs(x.c - y.c), std::abs(x.d - y.d)));
}

}  // namespace purify::test
