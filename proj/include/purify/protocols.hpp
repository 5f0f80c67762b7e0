#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "purify/maps.hpp"

namespace purify {

// Angles of the general local unitary U(theta, phi), kept in [0, 2pi).
struct UnitaryParams {
    double theta{};
    double phi{};
};

inline double canonical_angle(double angle) {
    if (!std::isfinite(angle)) {
        throw std::invalid_argument("angle is not finite");
    }
    const double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(angle, two_pi);
    if (r < 0.0) {
        r += two_pi;
    }
    return r;
}

// Pair operations performed before the round's LOCC map. Neither consumes
// pairs, so neither enters the yield.
enum class PreOp { Twirl, Relabel };

using RoundAction = std::variant<MapKind, UnitaryParams>;

struct RoundPlan {
    std::vector<PreOp> pre_ops;
    RoundAction action;
};

// Deterministic per-round recipe, total over round index r >= 1. The parties
// agree on the schedule in advance; no rule may inspect the state.
struct ProtocolSchedule {
    std::string name;
    std::function<RoundPlan(int)> rule;
};

// Oxford / QPA: one relabel ahead of round 1 moves the dominant Bell state
// onto the target, then every round applies U(pi/2, pi/2).
inline ProtocolSchedule oxford() {
    return {"oxford", [](int r) {
                std::vector<PreOp> pre;
                if (r == 1) {
                    pre.push_back(PreOp::Relabel);
                }
                return RoundPlan{std::move(pre), MapKind::Qpa};
            }};
}

// IBM: twirl to Werner form before every round; round 1 relabels first so
// the Werner fidelity starts above 1/2.
inline ProtocolSchedule ibm() {
    return {"ibm", [](int r) {
                std::vector<PreOp> pre;
                if (r == 1) {
                    pre.push_back(PreOp::Relabel);
                }
                pre.push_back(PreOp::Twirl);
                return RoundPlan{std::move(pre), MapKind::Qpa};
            }};
}

inline ProtocolSchedule xh_only() {
    return {"xh", [](int) { return RoundPlan{{}, MapKind::Xh}; }};
}

inline ProtocolSchedule qpa_only() {
    return {"qpa", [](int) { return RoundPlan{{}, MapKind::Qpa}; }};
}

// Two-map protocol 1: XH in rounds 1-2 (lands any distillable state in Da),
// QPA from round 3 on. No pre-operations in any round.
inline ProtocolSchedule tm1() {
    return {"tm1", [](int r) { return RoundPlan{{}, r <= 2 ? MapKind::Xh : MapKind::Qpa}; }};
}

// Two-map protocol 2: QPA first (lands the state in Da or Dc), XH in round 2,
// QPA afterwards. No pre-operations in any round.
inline ProtocolSchedule tm2() {
    return {"tm2", [](int r) { return RoundPlan{{}, r == 2 ? MapKind::Xh : MapKind::Qpa}; }};
}

// Custom (theta, phi) sequence, served round by round through the circuit
// oracle. Rounds past the end of the sequence reuse its last element.
inline ProtocolSchedule custom(std::vector<UnitaryParams> seq) {
    if (seq.empty()) {
        throw std::invalid_argument("custom schedule needs at least one (theta, phi) pair");
    }
    for (auto& u : seq) {
        u.theta = canonical_angle(u.theta);
        u.phi = canonical_angle(u.phi);
    }
    return {"custom", [seq = std::move(seq)](int r) {
                const std::size_t idx =
                    std::min(static_cast<std::size_t>(r - 1), seq.size() - 1);
                return RoundPlan{{}, seq[idx]};
            }};
}

// Names accepted by the CLI; "custom" takes its angle list separately.
inline ProtocolSchedule schedule_by_name(std::string_view name) {
    if (name == "ibm") return ibm();
    if (name == "oxford") return oxford();
    if (name == "xh") return xh_only();
    if (name == "tm1") return tm1();
    if (name == "tm2") return tm2();
    throw std::invalid_argument("unknown protocol \"" + std::string(name) +
                                "\" (expected ibm, oxford, xh, tm1 or tm2)");
}

}  // namespace purify
