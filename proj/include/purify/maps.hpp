#pragma once

#include <stdexcept>

#include "purify/bell_state.hpp"

namespace purify {

// The two local-unitary choices with closed-form one-round recurrences:
// Qpa is U(pi/2, pi/2), Xh is U(pi/2, 0). Arbitrary angles run through the
// circuit oracle instead.
enum class MapKind { Qpa, Xh };

inline const char* to_string(MapKind kind) {
    return kind == MapKind::Qpa ? "qpa" : "xh";
}

// Surviving control-pair state and the probability p of coinciding target
// measurements. p = x^2 + y^2 with x + y = 1, so p is always in [1/2, 1].
struct StepResult {
    BellDiagonalState state;
    double p;
};

namespace detail {

// The four numerators sum to p algebraically; dividing by their actual sum
// keeps long trajectories exactly on the simplex.
inline BellDiagonalState renormalized(double a, double b, double c, double d) {
    const double sum = a + b + c + d;
    return {a / sum, b / sum, c / sum, d / sum};
}

}  // namespace detail

// a' = (a^2+b^2)/p, b' = 2cd/p, c' = (c^2+d^2)/p, d' = 2ab/p,
// p = (a+b)^2 + (c+d)^2.
inline StepResult qpa_step(const BellDiagonalState& s) {
    const double p = (s.a + s.b) * (s.a + s.b) + (s.c + s.d) * (s.c + s.d);
    return {detail::renormalized(s.a * s.a + s.b * s.b, 2.0 * s.c * s.d,
                                 s.c * s.c + s.d * s.d, 2.0 * s.a * s.b),
            p};
}

// a' = (a^2+c^2)/p, b' = 2bd/p, c' = (b^2+d^2)/p, d' = 2ac/p,
// p = (a+c)^2 + (b+d)^2.
inline StepResult xh_step(const BellDiagonalState& s) {
    const double p = (s.a + s.c) * (s.a + s.c) + (s.b + s.d) * (s.b + s.d);
    return {detail::renormalized(s.a * s.a + s.c * s.c, 2.0 * s.b * s.d,
                                 s.b * s.b + s.d * s.d, 2.0 * s.a * s.c),
            p};
}

inline StepResult apply_map(MapKind kind, const BellDiagonalState& s) {
    return kind == MapKind::Qpa ? qpa_step(s) : xh_step(s);
}

}  // namespace purify
