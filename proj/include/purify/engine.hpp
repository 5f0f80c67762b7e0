#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "purify/bell_state.hpp"
#include "purify/maps.hpp"
#include "purify/oracle.hpp"
#include "purify/protocols.hpp"

namespace purify {

// Per-round trajectory snapshot. Y is the expected surviving pairs per input
// pair, accumulated as p/2 each round; Yp is the yield after handing the
// survivors to a hashing protocol.
struct TrajectoryRecord {
    int r = 0;
    BellDiagonalState state;
    std::optional<double> p;              // absent on the initial record
    double Y = 1.0;
    double S = 0.0;                       // entropy in bits of the recorded state
    double Yp = 0.0;
    double max_offdiag = 0.0;             // Bell-basis leakage of oracle-backed rounds
    std::optional<PauliRelabel> relabel;  // recorded pre-operation, if any
};

// Y*(1-S) for entropy below one bit; hashing produces nothing past that.
inline double improved_yield(double yield, double entropy) {
    return entropy < 1.0 ? yield * (1.0 - entropy) : 0.0;
}

namespace detail {

// Working state of a trajectory. Closed-form rounds track only the Bell
// diagonal; once an oracle-backed round has run, the full survivor matrix is
// carried so Bell-basis off-diagonals are propagated, not discarded.
struct RoundCursor {
    BellDiagonalState state;
    std::optional<PairDensityMatrix> carried;
};

struct RoundOutput {
    double p = 0.0;
    double max_offdiag = 0.0;
    std::optional<PauliRelabel> relabel;
};

inline RoundOutput advance(const ProtocolSchedule& sched, int r, RoundCursor& cursor) {
    const RoundPlan plan = sched.rule(r);
    RoundOutput out;

    for (const PreOp op : plan.pre_ops) {
        if (op == PreOp::Relabel) {
            const BellDiagonalState diag =
                cursor.carried ? bell_diagonal_of(*cursor.carried).state : cursor.state;
            const RelabelResult rl = relabel_to_target(diag);
            out.relabel = rl.op;
            if (cursor.carried) {
                *cursor.carried = conjugate_one_side(*cursor.carried, rl.op);
            }
            cursor.state = rl.state;
        } else {  // Twirl: the Werner projection kills Bell off-diagonals.
            const BellDiagonalState diag =
                cursor.carried ? bell_diagonal_of(*cursor.carried).state : cursor.state;
            cursor.state = twirl_to_werner(diag);
            if (cursor.carried) {
                cursor.carried = bell_density(cursor.state);
            }
        }
    }

    if (std::holds_alternative<MapKind>(plan.action) && !cursor.carried) {
        const StepResult step = apply_map(std::get<MapKind>(plan.action), cursor.state);
        cursor.state = step.state;
        out.p = step.p;
        return out;
    }

    // Oracle-backed round; closed-form kinds translate to their angles.
    const UnitaryParams angles =
        std::holds_alternative<UnitaryParams>(plan.action)
            ? std::get<UnitaryParams>(plan.action)
            : (std::get<MapKind>(plan.action) == MapKind::Qpa
                   ? UnitaryParams{std::numbers::pi / 2.0, std::numbers::pi / 2.0}
                   : UnitaryParams{std::numbers::pi / 2.0, 0.0});
    const PairDensityMatrix rho = cursor.carried ? *cursor.carried : bell_density(cursor.state);
    const LoccOutcome outcome = locc_round(rho, angles.theta, angles.phi);
    cursor.carried = outcome.survivor;
    const BellDiagonalReadout readout = bell_diagonal_of(outcome.survivor);
    cursor.state = readout.state;
    out.p = outcome.p;
    out.max_offdiag = readout.max_offdiag;
    return out;
}

}  // namespace detail

// Runs `r_max` rounds of the schedule from s0. Record 0 holds the initial
// state with Y = 1; record r holds the post-round state, that round's p, and
// the accumulated yield Y_r = Y_{r-1} * p_r / 2.
inline std::vector<TrajectoryRecord> run(const ProtocolSchedule& sched,
                                         const BellDiagonalState& s0, int r_max) {
    if (r_max < 1) {
        throw std::invalid_argument("r_max must be >= 1");
    }
    std::vector<TrajectoryRecord> records;
    records.reserve(static_cast<std::size_t>(r_max) + 1);

    TrajectoryRecord initial;
    initial.state = s0;
    initial.S = entropy_bits(s0);
    initial.Yp = improved_yield(1.0, initial.S);
    records.push_back(initial);

    detail::RoundCursor cursor{s0, std::nullopt};
    double yield = 1.0;
    for (int r = 1; r <= r_max; ++r) {
        const detail::RoundOutput round = detail::advance(sched, r, cursor);
        yield *= round.p / 2.0;

        TrajectoryRecord rec;
        rec.r = r;
        rec.state = cursor.state;
        rec.p = round.p;
        rec.Y = yield;
        rec.S = entropy_bits(cursor.state);
        rec.Yp = improved_yield(yield, rec.S);
        rec.max_offdiag = round.max_offdiag;
        rec.relabel = round.relabel;
        records.push_back(rec);
    }
    return records;
}

// Limit sets of the recurrences: the target fixed point (1,0,0,0), the rival
// fixed point (0,0,1,0), or the period-2 cycle {.5,0,0,.5} <-> {.5,0,.5,0}.
enum class AttractorClass { FixedTarget, FixedPsiPlus, Period2, Undecided };

inline const char* to_string(AttractorClass cls) {
    switch (cls) {
        case AttractorClass::FixedTarget: return "FixedTarget";
        case AttractorClass::FixedPsiPlus: return "FixedPsiPlus";
        case AttractorClass::Period2: return "Period2";
        case AttractorClass::Undecided: return "Undecided";
    }
    return "?";
}

namespace detail {

inline double linf_distance(const BellDiagonalState& x, const BellDiagonalState& y) {
    return std::max(std::max(std::abs(x.a - y.a), std::abs(x.b - y.b)),
                    std::max(std::abs(x.c - y.c), std::abs(x.d - y.d)));
}

}  // namespace detail

// Iterates the schedule and classifies the trajectory's limit behavior.
// Fixed points fire when the matching weight is within fixed_tol of 1.
// Period2 fires once dist(s_r, s_{r-2}) < period_tol while
// dist(s_r, s_{r-1}) >= 10*period_tol, sustained for 4 consecutive rounds
// (the separation guard keeps slowly-converging fixed points out).
inline AttractorClass classify_attractor(const ProtocolSchedule& sched,
                                         const BellDiagonalState& s0, double fixed_tol,
                                         double period_tol, int max_iter) {
    if (fixed_tol <= 0.0 || period_tol <= 0.0) {
        throw std::invalid_argument("tolerances must be positive");
    }
    if (max_iter < 4) {
        throw std::invalid_argument("max_iter must be >= 4");
    }
    detail::RoundCursor cursor{s0, std::nullopt};
    BellDiagonalState prev2 = s0;
    BellDiagonalState prev1 = s0;
    int streak = 0;
    for (int r = 1; r <= max_iter; ++r) {
        detail::advance(sched, r, cursor);
        const BellDiagonalState& cur = cursor.state;
        if (std::abs(cur.a - 1.0) < fixed_tol) {
            return AttractorClass::FixedTarget;
        }
        if (std::abs(cur.c - 1.0) < fixed_tol) {
            return AttractorClass::FixedPsiPlus;
        }
        if (r >= 2) {
            const double to_prev2 = detail::linf_distance(cur, prev2);
            const double to_prev1 = detail::linf_distance(cur, prev1);
            if (to_prev2 < period_tol && to_prev1 >= 10.0 * period_tol) {
                if (++streak >= 4) {
                    return AttractorClass::Period2;
                }
            } else {
                streak = 0;
            }
        }
        prev2 = prev1;
        prev1 = cur;
    }
    return AttractorClass::Undecided;
}

inline AttractorClass classify_attractor(const ProtocolSchedule& sched,
                                         const BellDiagonalState& s0, double tol,
                                         int max_iter) {
    return classify_attractor(sched, s0, tol, tol, max_iter);
}

// Trajectory CSV: comment lines for recorded relabels, then a header row,
// then one row per record. The p field is empty on the initial record.
inline void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryRecord>& records) {
    for (const TrajectoryRecord& rec : records) {
        if (rec.relabel && *rec.relabel != PauliRelabel::Identity) {
            os << "# relabel round " << rec.r << ": " << to_string(*rec.relabel) << "\n";
        }
    }
    os << "r,a,b,c,d,p,Y,S,Y_improved\n";
    for (const TrajectoryRecord& rec : records) {
        os << rec.r << ',' << format_state(rec.state) << ',' << (rec.p ? fmt(*rec.p) : "")
           << ',' << fmt(rec.Y) << ',' << fmt(rec.S) << ',' << fmt(rec.Yp) << "\n";
    }
}

}  // namespace purify
