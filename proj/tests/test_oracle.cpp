#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <numbers>

#include "purify/maps.hpp"
#include "purify/oracle.hpp"
#include "helpers.hpp"

using namespace purify;
using Catch::Approx;
using std::numbers::pi;

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

double max_abs_diff(const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
    return (x - y).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("bell_density expands the projectors in the computational basis") {
    SECTION("phi-plus") {
        const PairDensityMatrix m = bell_density(make_state(1, 0, 0, 0));
        CHECK(m(0, 0).real() == Approx(0.5));
        CHECK(m(0, 3).real() == Approx(0.5));
        CHECK(m(3, 0).real() == Approx(0.5));
        CHECK(m(3, 3).real() == Approx(0.5));
        CHECK(std::abs(m(1, 1)) == Approx(0.0).margin(1e-15));
        CHECK(std::abs(m(0, 1)) == Approx(0.0).margin(1e-15));
    }
    SECTION("psi-minus carries the negative coherence") {
        const PairDensityMatrix m = bell_density(make_state(0, 1, 0, 0));
        CHECK(m(1, 1).real() == Approx(0.5));
        CHECK(m(2, 2).real() == Approx(0.5));
        CHECK(m(1, 2).real() == Approx(-0.5));
        CHECK(m(2, 1).real() == Approx(-0.5));
        CHECK(std::abs(m(0, 0)) == Approx(0.0).margin(1e-15));
    }
    SECTION("maximally mixed is identity over 4") {
        const PairDensityMatrix m = bell_density(make_state(0.25, 0.25, 0.25, 0.25));
        CHECK(max_abs_diff(m, PairDensityMatrix::Identity() * 0.25) < 1e-15);
    }
}

TEST_CASE("unitary matches the two canonical operators") {
    // U(pi/2, pi/2) = (1/sqrt2)[[1, i], [i, 1]] from the general form; the
    // off-diagonal signs are forced by unitarity, and only this operator
    // reproduces the closed-form recurrence through the circuit.
    const Eigen::Matrix2cd qpa = unitary(pi / 2, pi / 2);
    const double s = 1.0 / std::numbers::sqrt2;
    CHECK(std::abs(qpa(0, 0) - s) < 1e-15);
    CHECK(std::abs(qpa(0, 1) - kI * s) < 1e-15);
    CHECK(std::abs(qpa(1, 0) - kI * s) < 1e-15);
    CHECK(std::abs(qpa(1, 1) - s) < 1e-15);

    const Eigen::Matrix2cd xh = unitary(pi / 2, 0);
    CHECK(std::abs(xh(0, 0) - s) < 1e-15);
    CHECK(std::abs(xh(0, 1) + s) < 1e-15);
    CHECK(std::abs(xh(1, 0) - s) < 1e-15);
    CHECK(std::abs(xh(1, 1) - s) < 1e-15);

    CHECK(max_abs_diff(unitary(0, 1.234), Eigen::Matrix2cd::Identity()) < 1e-15);
}

TEST_CASE("unitary is unitary for random angles") {
    auto gen = test::rng(37);
    for (int i = 0; i < 200; ++i) {
        const double theta = detail::uniform_unit(gen) * 2.0 * pi;
        const double phi = detail::uniform_unit(gen) * 2.0 * pi;
        const Eigen::Matrix2cd u = unitary(theta, phi);
        REQUIRE(max_abs_diff(u * u.adjoint(), Eigen::Matrix2cd::Identity()) < 1e-14);
    }
}

TEST_CASE("bell_diagonal_of inverts bell_density") {
    CHECK(bell_diagonal_of(PairDensityMatrix::Identity() * 0.25).max_offdiag <
          1e-15);
    const BellDiagonalReadout pure = bell_diagonal_of(bell_density(make_state(1, 0, 0, 0)));
    CHECK(pure.state.a == Approx(1.0).margin(1e-14));
    CHECK(pure.max_offdiag < 1e-15);

    auto gen = test::rng(41);
    for (int i = 0; i < 500; ++i) {
        const BellDiagonalState s = random_simplex_state(gen);
        const BellDiagonalReadout r = bell_diagonal_of(bell_density(s));
        REQUIRE(test::linf(r.state, s) < 1e-12);
        REQUIRE(r.max_offdiag < 1e-12);
    }
}

TEST_CASE("locc_round keeps the target state fixed") {
    const LoccOutcome out = locc_round(make_state(1, 0, 0, 0), pi / 2, pi / 2);
    CHECK(out.p == Approx(1.0).margin(1e-12));
    CHECK(max_abs_diff(out.survivor, bell_density(make_state(1, 0, 0, 0))) < 1e-12);
}

TEST_CASE("locc_round reproduces the closed-form worked examples") {
    SECTION("qpa angles on Werner 0.7") {
        const LoccOutcome out = locc_round(make_state(0.7, 0.1, 0.1, 0.1), pi / 2, pi / 2);
        const BellDiagonalReadout r = bell_diagonal_of(out.survivor);
        CHECK(out.p == Approx(0.68).margin(1e-12));
        CHECK(r.state.a == Approx(25.0 / 34.0).margin(1e-12));
        CHECK(r.state.b == Approx(1.0 / 34.0).margin(1e-12));
        CHECK(r.state.c == Approx(1.0 / 34.0).margin(1e-12));
        CHECK(r.state.d == Approx(7.0 / 34.0).margin(1e-12));
        CHECK(r.max_offdiag < 1e-12);
    }
    SECTION("xh angles on the Dc example") {
        const LoccOutcome out = locc_round(make_state(0.1, 0.2, 0.6, 0.1), pi / 2, 0);
        const BellDiagonalReadout r = bell_diagonal_of(out.survivor);
        CHECK(out.p == Approx(0.58).margin(1e-12));
        CHECK(r.state.a == Approx(37.0 / 58.0).margin(1e-12));
        CHECK(r.state.b == Approx(4.0 / 58.0).margin(1e-12));
        CHECK(r.state.c == Approx(5.0 / 58.0).margin(1e-12));
        CHECK(r.state.d == Approx(12.0 / 58.0).margin(1e-12));
        CHECK(r.max_offdiag < 1e-12);
    }
}

TEST_CASE("kept plus discarded probability is 1") {
    auto gen = test::rng(43);
    for (int i = 0; i < 100; ++i) {
        const BellDiagonalState s = random_simplex_state(gen);
        const double theta = detail::uniform_unit(gen) * 2.0 * pi;
        const double phi = detail::uniform_unit(gen) * 2.0 * pi;

        const PairDensityMatrix rho = bell_density(s);
        const TwoPairMatrix circuit = round_circuit(theta, phi);
        const TwoPairMatrix evolved =
            circuit * Eigen::kroneckerProduct(rho, rho).eval() * circuit.adjoint();
        // coinciding vs differing (A2, B2) outcomes partition the trace
        double kept = 0.0;
        double discarded = 0.0;
        for (int idx = 0; idx < 16; ++idx) {
            const int a2 = (idx >> 1) & 1;
            const int b2 = idx & 1;
            const double w = evolved(idx, idx).real();
            (a2 == b2 ? kept : discarded) += w;
        }
        REQUIRE(kept + discarded == Approx(1.0).margin(1e-12));
        REQUIRE(locc_round(rho, theta, phi).p == Approx(kept).margin(1e-12));
    }
}

TEST_CASE("survivor is a valid density matrix for random angles") {
    auto gen = test::rng(47);
    for (int i = 0; i < 100; ++i) {
        const BellDiagonalState s = random_simplex_state(gen);
        const double theta = detail::uniform_unit(gen) * 2.0 * pi;
        const double phi = detail::uniform_unit(gen) * 2.0 * pi;
        const LoccOutcome out = locc_round(s, theta, phi);
        REQUIRE(out.p > 0.0);
        REQUIRE(out.p <= 1.0 + 1e-12);
        REQUIRE(max_abs_diff(out.survivor, out.survivor.adjoint()) < 1e-12);
        REQUIRE(out.survivor.trace().real() == Approx(1.0).margin(1e-12));
        Eigen::SelfAdjointEigenSolver<PairDensityMatrix> eig(out.survivor);
        REQUIRE(eig.eigenvalues().minCoeff() >= -1e-10);
    }
}

TEST_CASE("oracle matches both closed-form maps on random states") {
    auto gen = test::rng(53);
    double worst = 0.0;
    for (int i = 0; i < 300; ++i) {
        const BellDiagonalState s = random_simplex_state(gen);
        const struct {
            double phi;
            StepResult closed;
        } cases[2] = {{pi / 2, qpa_step(s)}, {0.0, xh_step(s)}};
        for (const auto& c : cases) {
            const LoccOutcome out = locc_round(s, pi / 2, c.phi);
            const BellDiagonalReadout r = bell_diagonal_of(out.survivor);
            worst = std::max(worst, test::linf(r.state, c.closed.state));
            worst = std::max(worst, std::abs(out.p - c.closed.p));
            worst = std::max(worst, r.max_offdiag);
        }
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("single-side Pauli conjugation permutes the Bell diagonal as recorded") {
    auto gen = test::rng(59);
    for (int i = 0; i < 300; ++i) {
        const BellDiagonalState s = random_simplex_state(gen);
        for (const PauliRelabel op : {PauliRelabel::Identity, PauliRelabel::XOnOneSide,
                                      PauliRelabel::ZOnOneSide, PauliRelabel::YOnOneSide}) {
            const BellDiagonalReadout r =
                bell_diagonal_of(conjugate_one_side(bell_density(s), op));
            REQUIRE(test::linf(r.state, apply_relabel(s, op)) < 1e-12);
            REQUIRE(r.max_offdiag < 1e-12);
        }
    }
}

TEST_CASE("relabel worked examples agree with the conjugation oracle") {
    const BellDiagonalState from_b = make_state(0.1, 0.7, 0.1, 0.1);
    const BellDiagonalReadout via_y =
        bell_diagonal_of(conjugate_one_side(bell_density(from_b), PauliRelabel::YOnOneSide));
    CHECK(test::linf(via_y.state, make_state(0.7, 0.1, 0.1, 0.1)) < 1e-14);

    const BellDiagonalState from_c = make_state(0.1, 0.2, 0.6, 0.1);
    const BellDiagonalReadout via_x =
        bell_diagonal_of(conjugate_one_side(bell_density(from_c), PauliRelabel::XOnOneSide));
    CHECK(test::linf(via_x.state, make_state(0.6, 0.1, 0.1, 0.2)) < 1e-14);
}
