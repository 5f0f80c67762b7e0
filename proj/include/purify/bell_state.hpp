#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "purify/numio.hpp"

namespace purify {

// Mixed two-qubit state diagonal in the Bell basis. The weights follow the
// fixed basis order {Phi+, Psi-, Psi+, Phi-}, so `a` is the fidelity with
// the target state |Phi+><Phi+|.
struct BellDiagonalState {
    double a{};
    double b{};
    double c{};
    double d{};

    friend bool operator==(const BellDiagonalState&, const BellDiagonalState&) = default;
};

// Simplex domain of the dominant weight. An entry equal to exactly 1/2
// classifies Outside: the domains are open at the boundary.
enum class DomainLabel { Da, Db, Dc, Dd, Outside };

// Local Pauli on one side of the pair, recorded as the Bell-weight
// permutation it induces.
enum class PauliRelabel { Identity, XOnOneSide, ZOnOneSide, YOnOneSide };

inline const char* to_string(DomainLabel label) {
    switch (label) {
        case DomainLabel::Da: return "Da";
        case DomainLabel::Db: return "Db";
        case DomainLabel::Dc: return "Dc";
        case DomainLabel::Dd: return "Dd";
        case DomainLabel::Outside: return "Outside";
    }
    return "?";
}

inline const char* to_string(PauliRelabel op) {
    switch (op) {
        case PauliRelabel::Identity: return "identity";
        case PauliRelabel::XOnOneSide: return "X-on-one-side";
        case PauliRelabel::ZOnOneSide: return "Z-on-one-side";
        case PauliRelabel::YOnOneSide: return "Y-on-one-side";
    }
    return "?";
}

// Validating constructor. Entries within 1e-12 below zero are clamped to
// zero; anything further out, or a weight sum off 1 by more than 1e-9,
// is rejected.
inline BellDiagonalState make_state(double a, double b, double c, double d) {
    constexpr double entry_slack = 1e-12;
    constexpr double sum_slack = 1e-9;
    const std::array<std::pair<const char*, double>, 4> entries{
        {{"a", a}, {"b", b}, {"c", c}, {"d", d}}};
    double sum = 0.0;
    for (const auto& [name, value] : entries) {
        if (!std::isfinite(value)) {
            throw std::invalid_argument(std::string("state entry ") + name + " is not finite");
        }
        if (value < -entry_slack) {
            throw std::invalid_argument(std::string("state entry ") + name + " = " + fmt(value) +
                                        " is negative");
        }
        if (value > 1.0 + entry_slack) {
            throw std::invalid_argument(std::string("state entry ") + name + " = " + fmt(value) +
                                        " exceeds 1");
        }
        sum += value;
    }
    if (std::abs(sum - 1.0) > sum_slack) {
        throw std::invalid_argument("state entries must sum to 1, got " + fmt(sum));
    }
    const auto clamp = [](double v) { return v < 0.0 ? 0.0 : v; };
    return {clamp(a), clamp(b), clamp(c), clamp(d)};
}

inline DomainLabel domain_of(const BellDiagonalState& s) {
    if (s.a > 0.5) return DomainLabel::Da;
    if (s.b > 0.5) return DomainLabel::Db;
    if (s.c > 0.5) return DomainLabel::Dc;
    if (s.d > 0.5) return DomainLabel::Dd;
    return DomainLabel::Outside;
}

inline bool in_domain_ab(const BellDiagonalState& s) {
    const DomainLabel l = domain_of(s);
    return l == DomainLabel::Da || l == DomainLabel::Db;
}

inline bool in_domain_cd(const BellDiagonalState& s) {
    const DomainLabel l = domain_of(s);
    return l == DomainLabel::Dc || l == DomainLabel::Dd;
}

inline bool in_domain_ac(const BellDiagonalState& s) {
    const DomainLabel l = domain_of(s);
    return l == DomainLabel::Da || l == DomainLabel::Dc;
}

// D_abcd: some weight exceeds 1/2, i.e. the state is distillable by these
// recurrences.
inline bool is_distillable(const BellDiagonalState& s) {
    return domain_of(s) != DomainLabel::Outside;
}

// Each relabel is an involution: X swaps (a<->c, b<->d), Z swaps
// (a<->d, b<->c), Y swaps (a<->b, c<->d).
inline BellDiagonalState apply_relabel(const BellDiagonalState& s, PauliRelabel op) {
    switch (op) {
        case PauliRelabel::Identity: return s;
        case PauliRelabel::XOnOneSide: return {s.c, s.d, s.a, s.b};
        case PauliRelabel::ZOnOneSide: return {s.d, s.c, s.b, s.a};
        case PauliRelabel::YOnOneSide: return {s.b, s.a, s.d, s.c};
    }
    return s;
}

struct RelabelResult {
    BellDiagonalState state;
    PauliRelabel op;
};

// Moves the dominant weight to position `a` with the unique single-side
// Pauli permutation. Ties break with priority a > b > c > d, so a weakly
// dominant `a` yields Identity.
inline RelabelResult relabel_to_target(const BellDiagonalState& s) {
    PauliRelabel op = PauliRelabel::Identity;
    double best = s.a;
    if (s.b > best) {
        best = s.b;
        op = PauliRelabel::YOnOneSide;
    }
    if (s.c > best) {
        best = s.c;
        op = PauliRelabel::XOnOneSide;
    }
    if (s.d > best) {
        best = s.d;
        op = PauliRelabel::ZOnOneSide;
    }
    return {apply_relabel(s, op), op};
}

// Ensemble average over random bilateral rotations that preserve the Phi+
// fidelity: projects onto the Werner family (a, (1-a)/3, (1-a)/3, (1-a)/3).
inline BellDiagonalState twirl_to_werner(const BellDiagonalState& s) {
    const double rest = (1.0 - s.a) / 3.0;
    return {s.a, rest, rest, rest};
}

inline BellDiagonalState werner_state(double fidelity) {
    return make_state(fidelity, (1.0 - fidelity) / 3.0, (1.0 - fidelity) / 3.0,
                      (1.0 - fidelity) / 3.0);
}

// Shannon entropy of the four weights in bits, with 0*log2(0) = 0. Equals
// the von Neumann entropy of the state. Range [0, 2].
inline double entropy_bits(const BellDiagonalState& s) {
    const auto term = [](double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; };
    return term(s.a) + term(s.b) + term(s.c) + term(s.d);
}

// Wire format "a,b,c,d", shared with the CLI.
inline std::string format_state(const BellDiagonalState& s) {
    return fmt(s.a) + "," + fmt(s.b) + "," + fmt(s.c) + "," + fmt(s.d);
}

inline BellDiagonalState parse_state(std::string_view text) {
    constexpr const char* field_names[4] = {"a", "b", "c", "d"};
    std::array<double, 4> values{};
    std::size_t pos = 0;
    for (int field = 0; field < 4; ++field) {
        const bool last = field == 3;
        const std::size_t next = last ? text.size() : text.find(',', pos);
        if (next == std::string_view::npos) {
            throw std::invalid_argument("state: expected 4 comma-separated numbers, got " +
                                        std::to_string(field + 1));
        }
        values[static_cast<std::size_t>(field)] =
            parse_double(text.substr(pos, next - pos),
                         std::string("state field ") + field_names[field]);
        pos = next + 1;
    }
    return make_state(values[0], values[1], values[2], values[3]);
}

}  // namespace purify
