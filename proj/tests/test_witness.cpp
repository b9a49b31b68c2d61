#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "steerkit/random.hpp"
#include "steerkit/witness.hpp"

using namespace steerkit;
using Eigen::Index;

namespace {

DensityOperator<double> correlated_mixed_state() {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
    m(1, 1) = 0.5;
    m(2, 2) = 0.5;
    return DensityOperator<double>(m, {2, 2});
}

DensityOperator<double> singlet() {
    Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
    psi(1) = 1.0 / std::sqrt(2.0);
    psi(2) = -1.0 / std::sqrt(2.0);
    return DensityOperator<double>::pure(psi, {2, 2});
}

// Convex mixture of product states: separable by construction.
DensityOperator<double> random_separable(Index n, Index parts, bool pure_parts, Rng& rng) {
    const auto weights = random_simplex_point<double>(parts, rng);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n * n, n * n);
    for (Index part = 0; part < parts; ++part) {
        const auto a = pure_parts ? random_pure_state<double>(n, rng)
                                  : random_mixed_state<double>(n, rng);
        const auto b = pure_parts ? random_pure_state<double>(n, rng)
                                  : random_mixed_state<double>(n, rng);
        m += weights(part) * Eigen::kroneckerProduct(a.matrix(), b.matrix());
    }
    return DensityOperator<double>(m, {n, n});
}

// A common rotation keeps the pair mutually unbiased.
std::pair<ObservableBasis<double>, ObservableBasis<double>> random_mub_pair(Index n, Rng& rng) {
    const auto u = haar_unitary<double>(n, rng);
    return {ObservableBasis<double>((u * ObservableBasis<double>::computational(n).matrix()).eval(),
                                    "q"),
            ObservableBasis<double>((u * ObservableBasis<double>::fourier(n).matrix()).eval(),
                                    "r")};
}

void check_components_recombine(const WitnessReport<double>& report) {
    double lhs = 0.0, bound = 0.0;
    for (const auto& [key, value] : report.lhs_terms) lhs += value;
    for (const auto& [key, value] : report.bound_terms) bound += value;
    CHECK(std::abs(lhs - report.lhs) <= 1e-12);
    CHECK(std::abs(bound - report.bound) <= 1e-12);
    const double margin =
        report.sense == BoundSense::lower ? report.lhs - report.bound : report.bound - report.lhs;
    CHECK(std::abs(margin - report.margin) <= 1e-12);
}

}  // namespace

TEST_CASE("overlap omega on known bases") {
    const auto z = ObservableBasis<double>::pauli_z();
    const auto x = ObservableBasis<double>::pauli_x();
    CHECK(overlap_omega(z, x) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(overlap_omega(z, z) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(overlap_omega(ObservableBasis<double>::computational(3),
                        ObservableBasis<double>::fourier(3)) ==
          doctest::Approx(3.0).epsilon(1e-12));
    CHECK_THROWS_AS(overlap_omega(z, ObservableBasis<double>::computational(3)),
                    DimensionMismatch);
}

TEST_CASE("overlap omega symmetry, phase and relabeling invariance") {
    Rng rng(21);
    for (int round = 0; round < 25; ++round) {
        const Index n = 2 + rng.integer(3);
        const auto q = random_basis<double>(n, rng);
        const auto r = random_basis<double>(n, rng);
        const double omega = overlap_omega(q, r);
        CHECK(omega >= 1.0 - 1e-12);
        CHECK(omega <= static_cast<double>(n) + 1e-9);
        CHECK(overlap_omega(r, q) == doctest::Approx(omega).epsilon(1e-12));

        // rephase and cyclically relabel q's vectors
        Eigen::MatrixXcd shuffled(n, n);
        for (Index i = 0; i < n; ++i) {
            const double phase = 2.0 * M_PI * rng.uniform();
            shuffled.col((i + 1) % n) =
                q.matrix().col(i) * std::complex<double>(std::cos(phase), std::sin(phase));
        }
        CHECK(overlap_omega(ObservableBasis<double>(shuffled, "q'"), r) ==
              doctest::Approx(omega).epsilon(1e-10));
    }
}

TEST_CASE("maassen-uffink on the spec examples") {
    const auto z = ObservableBasis<double>::pauli_z();
    const auto x = ObservableBasis<double>::pauli_x();
    Eigen::Vector2cd up(1.0, 0.0);

    const auto saturating = maassen_uffink_check(DensityOperator<double>::pure(up, {2}), z, x);
    CHECK(saturating.lhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(saturating.bound == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(saturating.verdict == Verdict::saturated);
    check_components_recombine(saturating);

    const auto mixed = maassen_uffink_check(DensityOperator<double>::maximally_mixed(2), z, x);
    CHECK(mixed.lhs == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(mixed.verdict == Verdict::satisfied);
}

TEST_CASE("berta saturation cases") {
    const auto z = ObservableBasis<double>::pauli_z();
    const auto x = ObservableBasis<double>::pauli_x();

    const auto mixed = berta_check(DensityOperator<double>::maximally_mixed(2), z, x);
    CHECK(mixed.lhs == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(mixed.bound == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(mixed.verdict == Verdict::saturated);

    Eigen::Vector2cd up(1.0, 0.0);
    const auto pure = berta_check(DensityOperator<double>::pure(up, {2}), z, x);
    CHECK(pure.bound == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pure.verdict == Verdict::saturated);
}

TEST_CASE("uncertainty relations never report violation on random states") {
    Rng rng(22);
    for (Index n : {2, 3, 4}) {
        for (int round = 0; round < 800; ++round) {
            const auto rho = (round % 2 == 0) ? random_mixed_state<double>(n, rng)
                                              : random_pure_state<double>(n, rng);
            const auto [q, r] = random_mub_pair(n, rng);
            const auto mu = maassen_uffink_check(rho, q, r);
            const auto berta = berta_check(rho, q, r);
            CHECK(mu.verdict != Verdict::violated);
            CHECK(berta.verdict != Verdict::violated);
            CHECK(berta.bound >= mu.bound - 1e-12);
        }
    }
}

TEST_CASE("berta bound exceeds maassen-uffink exactly by the state entropy") {
    Rng rng(23);
    for (int round = 0; round < 50; ++round) {
        const auto rho = random_mixed_state<double>(3, rng);
        const auto q = random_basis<double>(3, rng);
        const auto r = random_basis<double>(3, rng);
        const auto mu = maassen_uffink_check(rho, q, r);
        const auto berta = berta_check(rho, q, r);
        CHECK(berta.bound - mu.bound == doctest::Approx(von_neumann_entropy(rho)).epsilon(1e-12));
    }
}

TEST_CASE("conditional steering inequality saturates on the correlated mixed state") {
    const auto z = ObservableBasis<double>::pauli_z();
    const auto x = ObservableBasis<double>::pauli_x();
    const auto report = steering_conditional_discrete(correlated_mixed_state(), z, z, x, x);
    CHECK(report.lhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report.bound == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report.verdict == Verdict::saturated);
    CHECK(report.verdict != Verdict::violated);
    check_components_recombine(report);
}

TEST_CASE("conditional steering flags the singlet and passes the mixed state") {
    const auto z = ObservableBasis<double>::pauli_z();
    const auto x = ObservableBasis<double>::pauli_x();

    const auto entangled = steering_conditional_discrete(singlet(), z, z, x, x);
    CHECK(entangled.lhs <= 1e-9);
    CHECK(entangled.verdict == Verdict::violated);

    const auto noise = steering_conditional_discrete(
        DensityOperator<double>(Eigen::Matrix4cd::Identity() * 0.25, {2, 2}), z, z, x, x);
    CHECK(noise.lhs == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(noise.verdict == Verdict::satisfied);
}

TEST_CASE("conditioning on an independent party is a no-op") {
    Rng rng(24);
    for (int round = 0; round < 30; ++round) {
        const auto product = tensor(random_mixed_state<double>(2, rng),
                                    random_mixed_state<double>(2, rng));
        const auto z = ObservableBasis<double>::pauli_z();
        const auto x = ObservableBasis<double>::pauli_x();
        const auto report = steering_conditional_discrete(product, z, z, x, x);
        const auto rho_b = partial_trace(product, 1);
        const double expected = shannon_entropy(marginal_distribution(rho_b, z)) +
                                shannon_entropy(marginal_distribution(rho_b, x));
        CHECK(report.lhs == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("naive substitution flags the contradiction on the correlated mixed state") {
    const auto z = ObservableBasis<double>::pauli_z();
    const auto x = ObservableBasis<double>::pauli_x();
    const auto report = naive_substitution_demo(correlated_mixed_state(), z, z, x, x);
    CHECK(report.lhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report.bound == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(report.verdict == Verdict::violated);
    CHECK_FALSE(report.steering_witness);
    CHECK(report.contradiction);  // separable, certified via PPT
    check_components_recombine(report);
}

TEST_CASE("naive substitution on entangled and product inputs") {
    const auto z = ObservableBasis<double>::pauli_z();
    const auto x = ObservableBasis<double>::pauli_x();

    const auto entangled = naive_substitution_demo(singlet(), z, z, x, x);
    CHECK(entangled.lhs <= 1e-9);
    CHECK(entangled.bound == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_FALSE(entangled.steering_witness);
    CHECK_FALSE(entangled.contradiction);  // not separable, no contradiction

    Eigen::Vector4cd up_up = Eigen::Vector4cd::Zero();
    up_up(0) = 1.0;
    const auto product =
        naive_substitution_demo(DensityOperator<double>::pure(up_up, {2, 2}), z, z, x, x);
    CHECK(product.lhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(product.bound == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(product.verdict != Verdict::violated);
    CHECK_FALSE(product.contradiction);
}

TEST_CASE("separable mixtures never violate the valid bound but do beat the naive one") {
    const auto z = ObservableBasis<double>::pauli_z();
    const auto x = ObservableBasis<double>::pauli_x();
    Rng rng(25);
    int contradictions = 0;
    for (int round = 0; round < 400; ++round) {
        const auto rho = random_separable(2, 1 + rng.integer(4), round % 2 == 0, rng);
        const auto valid = steering_conditional_discrete(rho, z, z, x, x);
        CHECK(valid.verdict != Verdict::violated);
        CHECK(valid.margin >= -1e-9);
        const auto naive = naive_substitution_demo(rho, z, z, x, x,
                                                   SeparabilityHint::separable_by_construction);
        if (naive.contradiction) ++contradictions;
    }
    // separable states beating the substituted bound, found constructively
    CHECK(contradictions > 0);
}

TEST_CASE("symmetric steering inequality examples") {
    const auto z = ObservableBasis<double>::pauli_z();
    const auto x = ObservableBasis<double>::pauli_x();

    const auto correlated = steering_symmetric_discrete(correlated_mixed_state(), z, z, x, x);
    CHECK(correlated.lhs == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(correlated.bound == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(correlated.verdict == Verdict::saturated);
    check_components_recombine(correlated);

    const auto entangled = steering_symmetric_discrete(singlet(), z, z, x, x);
    CHECK(entangled.lhs == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(entangled.verdict == Verdict::violated);

    Eigen::Vector4cd up_up = Eigen::Vector4cd::Zero();
    up_up(0) = 1.0;
    const auto product =
        steering_symmetric_discrete(DensityOperator<double>::pure(up_up, {2, 2}), z, z, x, x);
    CHECK(product.lhs <= 1e-9);
    CHECK(product.verdict == Verdict::satisfied);
}

TEST_CASE("symmetric steering rejects unequal subsystem dimensions") {
    Rng rng(26);
    const DensityOperator<double> rho(random_mixed_state<double>(6, rng).matrix(), {2, 3});
    CHECK_THROWS_AS(steering_symmetric_discrete(rho, ObservableBasis<double>::pauli_z(),
                                                ObservableBasis<double>::computational(3),
                                                ObservableBasis<double>::pauli_x(),
                                                ObservableBasis<double>::fourier(3)),
                    UnequalDimensions);
}

TEST_CASE("separable mixtures respect the symmetric bound") {
    const auto z = ObservableBasis<double>::pauli_z();
    const auto x = ObservableBasis<double>::pauli_x();
    Rng rng(27);
    for (int round = 0; round < 200; ++round) {
        const auto rho = random_separable(2, 1 + rng.integer(3), true, rng);
        const auto report = steering_symmetric_discrete(rho, z, z, x, x);
        CHECK(report.margin >= -1e-9);
    }
}
