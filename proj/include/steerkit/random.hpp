#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

#include "steerkit/qstate.hpp"

namespace steerkit {

// Engine wrapper with hand-rolled uniform/normal draws so that sampled values
// depend only on the mt19937_64 stream, not on a standard-library
// distribution implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Stream seed for one trial of a seeded search; stable under reordering.
    static Rng for_trial(std::uint64_t seed, std::uint64_t trial) {
        std::uint64_t x = seed + 0x9e3779b97f4a7c15ull * (trial + 1);
        return Rng(splitmix(x));
    }

    double uniform() {  // [0, 1)
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    std::uint64_t integer(std::uint64_t bound) {  // uniform on [0, bound)
        return static_cast<std::uint64_t>(uniform() * static_cast<double>(bound)) % bound;
    }

    bool coin() { return (engine_() & 1ull) != 0; }

private:
    static std::uint64_t splitmix(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

template <typename Scalar = double>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> haar_ket(Eigen::Index n, Rng& rng) {
    Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> psi(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        psi(i) = std::complex<Scalar>(Scalar(rng.normal()), Scalar(rng.normal()));
    }
    psi.normalize();
    return psi;
}

template <typename Scalar = double>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> ginibre(Eigen::Index n,
                                                                            Rng& rng) {
    Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            g(i, j) = std::complex<Scalar>(Scalar(rng.normal()), Scalar(rng.normal()));
        }
    }
    return g;
}

template <typename Scalar = double>
DensityOperator<Scalar> random_pure_state(Eigen::Index n, Rng& rng) {
    return DensityOperator<Scalar>::pure(haar_ket<Scalar>(n, rng), {n});
}

// Hilbert-Schmidt random mixed state, G G^dag normalized.
template <typename Scalar = double>
DensityOperator<Scalar> random_mixed_state(Eigen::Index n, Rng& rng) {
    const auto g = ginibre<Scalar>(n, rng);
    auto m = (g * g.adjoint()).eval();
    m /= m.trace();
    return DensityOperator<Scalar>(m, {n});
}

template <typename Scalar = double>
Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> haar_unitary(Eigen::Index n,
                                                                                 Rng& rng) {
    using Matrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
    const Matrix g = ginibre<Scalar>(n, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().template triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto d = r(i, i);
        const Scalar mag = std::abs(d);
        q.col(i) *= (mag > Scalar(0)) ? d / mag : std::complex<Scalar>(1);
    }
    return q;
}

template <typename Scalar = double>
ObservableBasis<Scalar> random_basis(Eigen::Index n, Rng& rng, std::string label = "random") {
    return ObservableBasis<Scalar>(haar_unitary<Scalar>(n, rng), std::move(label));
}

// Uniform point on the probability simplex (Dirichlet with unit weights).
template <typename Scalar = double>
ProbabilityVector<Scalar> random_simplex_point(Eigen::Index n, Rng& rng) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double u = rng.uniform();
        while (u <= 0.0) u = rng.uniform();
        w(i) = Scalar(-std::log(u));
    }
    w /= w.sum();
    return ProbabilityVector<Scalar>(w);
}

}  // namespace steerkit
