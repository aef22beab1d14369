#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pbkg/errors.hpp"
#include "pbkg/modespace.hpp"

using namespace pbkg;

namespace {

StateVector random_state_below_edge(const ModeLattice& lattice, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    StateVector state{lattice, Eigen::VectorXcd::Zero(static_cast<long>(lattice.state_dim()))};
    for (long idx = 0; idx < state.amplitudes.size(); ++idx) {
        bool safe = true;
        for (int j = 0; j < lattice.mode_count() && safe; ++j) {
            safe = state.occupation(static_cast<std::uint64_t>(idx), j) <=
                   lattice.local_dim() - 2;
        }
        if (safe) state.amplitudes[idx] = Complex(dist(rng), dist(rng));
    }
    state.amplitudes.normalize();
    return state;
}

} // namespace

TEST_CASE("dispersion") {
    CHECK(omega(0.0, 1.0) == 1.0);
    const auto dv = dispersion(-2.0, 1.5);
    CHECK(dv.omega == omega(2.0, 1.5));
    CHECK(dv.omega >= dv.m);
    CHECK(dv.k == -2.0);
    CHECK(omega(4.0, 3.0) == 5.0);
    CHECK(std::fabs(omega(1.0, 1.0) - std::sqrt(2.0)) < 1e-15);
    CHECK(omega(-2.3, 0.7) == omega(2.3, 0.7));
    CHECK_THROWS_AS(omega(1.0, 0.0), parameter_error);
    CHECK_THROWS_AS(omega(1.0, -2.0), parameter_error);
}

TEST_CASE("lattice construction and symmetry") {
    const ModeLattice lattice(9, 0.25, 1.0, 2);
    CHECK(lattice.mode_count() == 9);
    CHECK(lattice.mode(4) == 0.0);
    for (int j = 0; j < 9; ++j) {
        CHECK(lattice.mode(j) + lattice.mode(8 - j) == 0.0);
    }
    CHECK(lattice.k_max() == doctest::Approx(1.0));
    CHECK(lattice.state_dim() == 512);

    CHECK_THROWS_AS(ModeLattice(8, 0.25, 1.0, 2), parameter_error); // even M
    CHECK_THROWS_AS(ModeLattice(9, -0.1, 1.0, 2), parameter_error);
    CHECK_THROWS_AS(ModeLattice(9, 0.25, 0.0, 2), parameter_error);
    CHECK_THROWS_AS(ModeLattice(9, 0.25, 1.0, 1), parameter_error);
}

TEST_CASE("memory budget guards state allocation, not lattice metadata") {
    const ModeLattice big(801, 0.05, 1.0, 2); // 2^801 amplitudes
    CHECK_FALSE(big.dense_capable());
    CHECK(big.mode_count() == 801);           // usable for mode sums
    CHECK_THROWS_AS(big.state_dim(), memory_budget_error);
    CHECK_THROWS_AS(vacuum(big), memory_budget_error);

    const ModeLattice custom(3, 0.5, 1.0, 4, /*max_states=*/32);
    CHECK_THROWS_AS(vacuum(custom), memory_budget_error); // 64 > 32, never truncated
}

TEST_CASE("vacuum") {
    const ModeLattice one(1, 0.5, 1.0, 2);
    const auto v1 = vacuum(one);
    CHECK(v1.amplitudes[0] == Complex(1.0, 0.0));
    CHECK(v1.amplitudes[1] == Complex(0.0, 0.0));

    const ModeLattice lattice(3, 0.5, 1.0, 3);
    const auto vac = vacuum(lattice);
    CHECK(std::abs(inner(vac, vac) - Complex(1.0, 0.0)) == 0.0);
    for (int j = 0; j < 3; ++j) {
        CHECK(apply_annihilate(vac, j).amplitudes.norm() == 0.0);
    }
}

TEST_CASE("ladder actions") {
    const ModeLattice lattice(3, 0.5, 1.0, 4);
    const auto vac = vacuum(lattice);

    SUBCASE("create on vacuum gives a unit single-quantum state") {
        for (int j = 0; j < 3; ++j) {
            const auto up = apply_create(vac, j);
            CHECK(std::fabs(up.amplitudes.norm() - 1.0) < 1e-15);
            const auto expected = basis_state(lattice, {j == 0, j == 1, j == 2});
            CHECK((up.amplitudes - expected.amplitudes).norm() == 0.0);
        }
    }
    SUBCASE("annihilate carries the sqrt(n) weight") {
        const auto two = basis_state(lattice, {0, 2, 0});
        const auto down = apply_annihilate(two, 1);
        const auto onequantum = basis_state(lattice, {0, 1, 0});
        CHECK((down.amplitudes - std::sqrt(2.0) * onequantum.amplitudes).norm() < 1e-15);
    }
    SUBCASE("create annihilates the top level") {
        const auto top = basis_state(lattice, {3, 0, 0});
        CHECK(apply_create(top, 0).amplitudes.norm() == 0.0);
    }
    SUBCASE("mode index out of range") {
        CHECK_THROWS_AS(apply_create(vac, 3), index_error);
        CHECK_THROWS_AS(apply_annihilate(vac, -1), index_error);
    }
}

TEST_CASE("ccr holds exactly below the truncation edge") {
    const ModeLattice lattice(3, 0.4, 1.0, 4);
    std::mt19937_64 rng(7);
    const auto psi = random_state_below_edge(lattice, rng);
    for (int j = 0; j < 3; ++j) {
        for (int l = 0; l < 3; ++l) {
            const auto lhs = apply_annihilate(apply_create(psi, l), j);
            const auto rhs = apply_create(apply_annihilate(psi, j), l);
            Eigen::VectorXcd diff = lhs.amplitudes - rhs.amplitudes;
            if (j == l) diff -= psi.amplitudes;
            CHECK(diff.norm() < 1e-14);
        }
    }
}

TEST_CASE("ladders are mutually adjoint and linear") {
    const ModeLattice lattice(3, 0.4, 1.0, 3);
    std::mt19937_64 rng(11);
    const auto u = random_state_below_edge(lattice, rng);
    const auto v = random_state_below_edge(lattice, rng);

    for (int j = 0; j < 3; ++j) {
        const Complex lhs = inner(u, apply_annihilate(v, j));
        const Complex rhs = inner(apply_create(u, j), v);
        CHECK(std::abs(lhs - rhs) < 1e-14);
    }

    const Complex a{0.3, -0.8}, b{-1.1, 0.2};
    StateVector combo{lattice, a * u.amplitudes + b * v.amplitudes};
    const auto lhs = apply_create(combo, 1);
    const Eigen::VectorXcd rhs =
        a * apply_create(u, 1).amplitudes + b * apply_create(v, 1).amplitudes;
    CHECK((lhs.amplitudes - rhs).norm() < 1e-14);
}

TEST_CASE("inner product") {
    const ModeLattice lattice(3, 0.4, 1.0, 3);
    std::mt19937_64 rng(13);
    const auto u = random_state_below_edge(lattice, rng);
    const auto v = random_state_below_edge(lattice, rng);
    CHECK(std::abs(inner(u, v) - std::conj(inner(v, u))) < 1e-15);
    CHECK(inner(u, u).real() >= 0.0);
    CHECK(std::fabs(inner(u, u).imag()) < 1e-16);
    CHECK(std::abs(inner(vacuum(lattice), apply_create(vacuum(lattice), 1))) == 0.0);

    const ModeLattice other(5, 0.4, 1.0, 3);
    CHECK_THROWS_AS(inner(u, vacuum(other)), dimension_error);
}

TEST_CASE("single-mode commutator matrix") {
    SUBCASE("d = 2 against the dense oracle") {
        const auto cm = single_mode_commutator(2);
        const auto c = oracles::dense_annihilator(2);
        const Eigen::MatrixXcd oracle = c * c.adjoint() - c.adjoint() * c;
        CHECK((cm - oracle).cwiseAbs().maxCoeff() == 0.0);
        CHECK(std::abs(cm(0, 0) - Complex(1.0, 0.0)) == 0.0);
        CHECK(std::abs(cm(1, 1) - Complex(-1.0, 0.0)) == 0.0);
    }
    SUBCASE("d = 4 against the dense oracle") {
        const auto cm = single_mode_commutator(4);
        const auto c = oracles::dense_annihilator(4);
        const Eigen::MatrixXcd oracle = c * c.adjoint() - c.adjoint() * c;
        CHECK((cm - oracle).cwiseAbs().maxCoeff() == 0.0);
        CHECK(std::abs(cm(3, 3) - Complex(-3.0, 0.0)) < 1e-14); // sqrt(n)^2 roundoff
    }
    SUBCASE("truncation touches only the top level") {
        for (int d : {2, 3, 6, 11}) {
            const auto cm = single_mode_commutator(d);
            const Eigen::MatrixXcd block = cm.topLeftCorner(d - 1, d - 1);
            CHECK((block - Eigen::MatrixXcd::Identity(d - 1, d - 1)).cwiseAbs().maxCoeff() <
                  1e-14);
        }
    }
    SUBCASE("d < 2 rejected") { CHECK_THROWS_AS(single_mode_commutator(1), parameter_error); }
}
