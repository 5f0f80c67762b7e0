#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "purify/bell_state.hpp"

namespace purify {

// Density matrix of one Alice-Bob pair over the computational product basis
// {|00>, |01>, |10>, |11>}, index = 2*(Alice bit) + (Bob bit).
using PairDensityMatrix = Eigen::Matrix4cd;

// Two-pair register [A1, B1, A2, B2], tensor index = 8*A1 + 4*B1 + 2*A2 + B2.
// Pair 1 is the control pair Alice and Bob keep; pair 2 is measured.
using TwoPairMatrix = Eigen::Matrix<std::complex<double>, 16, 16>;

class degenerate_round_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Basis-change matrix whose columns are the Bell vectors in the fixed order
// {Phi+, Psi-, Psi+, Phi-}. Real, orthogonal.
inline const Eigen::Matrix4d& bell_basis() {
    static const Eigen::Matrix4d basis = [] {
        const double s = 1.0 / std::numbers::sqrt2;
        Eigen::Matrix4d m;
        // rows: |00>, |01>, |10>, |11>
        m << s, 0, 0, s,
             0, s, s, 0,
             0, -s, s, 0,
             s, 0, 0, -s;
        return m;
    }();
    return basis;
}

// a|Phi+><Phi+| + b|Psi-><Psi-| + c|Psi+><Psi+| + d|Phi-><Phi-|.
inline PairDensityMatrix bell_density(const BellDiagonalState& s) {
    const Eigen::Vector4d w(s.a, s.b, s.c, s.d);
    const Eigen::Matrix4d m = bell_basis() * w.asDiagonal() * bell_basis().transpose();
    return m.cast<std::complex<double>>();
}

// U(theta, phi) = [cos(theta/2), -e^{-i phi} sin(theta/2);
//                  e^{i phi} sin(theta/2), cos(theta/2)].
inline Eigen::Matrix2cd unitary(double theta, double phi) {
    const std::complex<double> i(0.0, 1.0);
    const double ch = std::cos(theta / 2.0);
    const double sh = std::sin(theta / 2.0);
    Eigen::Matrix2cd u;
    u << ch, -std::exp(-i * phi) * sh,
         std::exp(i * phi) * sh, ch;
    return u;
}

namespace detail {

// CNOT between register qubits (0 = A1 most significant ... 3 = B2).
inline TwoPairMatrix cnot16(int control, int target) {
    TwoPairMatrix m = TwoPairMatrix::Zero();
    for (int idx = 0; idx < 16; ++idx) {
        const bool on = ((idx >> (3 - control)) & 1) != 0;
        const int out = on ? idx ^ (1 << (3 - target)) : idx;
        m(out, idx) = 1.0;
    }
    return m;
}

}  // namespace detail

// Unitary part of one purification round: U(theta, phi) on Alice's qubits,
// the entrywise conjugate U* on Bob's, then CNOT(A1->A2) and CNOT(B1->B2).
inline TwoPairMatrix round_circuit(double theta, double phi) {
    const Eigen::Matrix2cd u = unitary(theta, phi);
    const Eigen::Matrix2cd uc = u.conjugate();
    const Eigen::Matrix4cd pair_local = Eigen::kroneckerProduct(u, uc).eval();
    const TwoPairMatrix locals = Eigen::kroneckerProduct(pair_local, pair_local).eval();
    return detail::cnot16(1, 3) * detail::cnot16(0, 2) * locals;
}

struct LoccOutcome {
    PairDensityMatrix survivor;  // post-selected control pair, renormalized
    double p;                    // probability of coinciding outcomes
};

// One purification LOCC round on two copies of `rho`. The target qubits
// (A2, B2) are measured in the computational basis; the 00 and 11 branches
// are kept and summed, the control pair is traced out of the rest.
inline LoccOutcome locc_round(const PairDensityMatrix& rho, double theta, double phi) {
    const TwoPairMatrix joint = Eigen::kroneckerProduct(rho, rho).eval();
    const TwoPairMatrix circuit = round_circuit(theta, phi);
    const TwoPairMatrix evolved = circuit * joint * circuit.adjoint();

    PairDensityMatrix survivor = PairDensityMatrix::Zero();
    for (const int outcome : {0b00, 0b11}) {
        for (int row = 0; row < 4; ++row) {
            for (int col = 0; col < 4; ++col) {
                survivor(row, col) += evolved((row << 2) | outcome, (col << 2) | outcome);
            }
        }
    }
    const double p = survivor.trace().real();
    if (p < 1e-14) {
        throw degenerate_round_error("post-selection probability vanished");
    }
    survivor /= p;
    return {survivor, p};
}

inline LoccOutcome locc_round(const BellDiagonalState& s, double theta, double phi) {
    return locc_round(bell_density(s), theta, phi);
}

struct BellDiagonalReadout {
    BellDiagonalState state;  // renormalized Bell-basis diagonal
    double max_offdiag;       // largest off-diagonal magnitude in the Bell basis
};

inline BellDiagonalReadout bell_diagonal_of(const PairDensityMatrix& m) {
    const Eigen::Matrix4cd mb = bell_basis().transpose() * m * bell_basis();
    double max_off = 0.0;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (i != j) {
                max_off = std::max(max_off, std::abs(mb(i, j)));
            }
        }
    }
    double w[4];
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
        w[i] = std::max(mb(i, i).real(), 0.0);
        sum += w[i];
    }
    return {{w[0] / sum, w[1] / sum, w[2] / sum, w[3] / sum}, max_off};
}

inline Eigen::Matrix2cd pauli_matrix(PauliRelabel op) {
    const std::complex<double> i(0.0, 1.0);
    Eigen::Matrix2cd m;
    switch (op) {
        case PauliRelabel::Identity: m << 1, 0, 0, 1; break;
        case PauliRelabel::XOnOneSide: m << 0, 1, 1, 0; break;
        case PauliRelabel::ZOnOneSide: m << 1, 0, 0, -1; break;
        case PauliRelabel::YOnOneSide: m << 0, -i, i, 0; break;
    }
    return m;
}

// Conjugates by (sigma x I): the Pauli acts on Alice's qubit of the pair.
inline PairDensityMatrix conjugate_one_side(const PairDensityMatrix& m, PauliRelabel op) {
    const Eigen::Matrix4cd s =
        Eigen::kroneckerProduct(pauli_matrix(op), Eigen::Matrix2cd::Identity()).eval();
    return s * m * s.adjoint();
}

}  // namespace purify
