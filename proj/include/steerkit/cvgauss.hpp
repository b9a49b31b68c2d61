#pragma once

#include <Eigen/Dense>

#include "steerkit/infotheory.hpp"
#include "steerkit/witness.hpp"

namespace steerkit {

// Quadrature ordering of the mean vector and covariance matrix. Dimensionless
// convention with vacuum variances sigma_x^2 = sigma_k^2 = 1/2, the one under
// which independent vacua saturate the log2(pi e) bound exactly.
enum class Quadrature { x_a = 0, k_a = 1, x_b = 2, k_b = 3 };

template <typename Scalar = double>
class GaussianState {
public:
    using Vector4 = Eigen::Matrix<Scalar, 4, 1>;
    using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;

    GaussianState(Vector4 mean, Matrix4 cov) : mean_(std::move(mean)), cov_(std::move(cov)) {
        if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > Scalar(tol::cov_symmetry)) {
            throw NotPositiveDefinite("covariance matrix is not symmetric");
        }
        Eigen::SelfAdjointEigenSolver<Matrix4> solver(cov_, Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success) {
            throw EigensolveFailure("eigensolve failed validating covariance");
        }
        if (!(solver.eigenvalues().minCoeff() > Scalar(0))) {
            throw NotPositiveDefinite("covariance matrix is not positive definite");
        }
        // sigma_x^2 sigma_k^2 >= 1/4 per party, necessary for admissibility.
        const Scalar slack = Scalar(1) - Scalar(1e-12);
        if (variance(Quadrature::x_a) * variance(Quadrature::k_a) < slack / Scalar(4) ||
            variance(Quadrature::x_b) * variance(Quadrature::k_b) < slack / Scalar(4)) {
            throw NotPositiveDefinite(
                "covariance violates the quadrature uncertainty product 1/4");
        }
    }

    const Vector4& mean() const { return mean_; }
    const Matrix4& cov() const { return cov_; }

    Scalar variance(Quadrature q) const {
        const auto i = static_cast<Eigen::Index>(q);
        return cov_(i, i);
    }

    Scalar covariance(Quadrature p, Quadrature q) const {
        return cov_(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
    }

    Scalar std_dev(Quadrature q) const { return std::sqrt(variance(q)); }

private:
    Vector4 mean_;
    Matrix4 cov_;
};

// Two-mode squeezed vacuum: diagonal blocks cosh(2r)/2 * I, off-diagonal block
// sinh(2r)/2 * diag(1, -1).
template <typename Scalar = double>
GaussianState<Scalar> tmsv(Scalar r) {
    if (r < Scalar(0)) {
        throw DimensionMismatch("squeezing parameter must be nonnegative");
    }
    const Scalar c = std::cosh(Scalar(2) * r) / Scalar(2);
    const Scalar s = std::sinh(Scalar(2) * r) / Scalar(2);
    typename GaussianState<Scalar>::Matrix4 cov;
    cov << c, 0, s, 0,
           0, c, 0, -s,
           s, 0, c, 0,
           0, -s, 0, c;
    return GaussianState<Scalar>(GaussianState<Scalar>::Vector4::Zero(), cov);
}

// h = (1/2) log2(2 pi e sigma^2), in bits; negative for narrow densities.
template <typename Scalar>
Scalar gaussian_differential_entropy(Scalar variance) {
    if (!(variance > Scalar(0))) {
        throw NonpositiveVariance("variance must be positive, got " +
                                  detail::number_string(variance));
    }
    return Scalar(0.5) * std::log2(Scalar(2) * Scalar(M_PI) * std::exp(Scalar(1)) * variance);
}

// Schur complement sigma^2_{t|g} = sigma^2_t - cov(t,g)^2 / sigma^2_g.
template <typename Scalar>
Scalar conditional_variance(const GaussianState<Scalar>& g, Quadrature target, Quadrature given) {
    const Scalar cross = g.covariance(target, given);
    return g.variance(target) - cross * cross / g.variance(given);
}

// h(x^B|x^A) + h(k^B|k^A) >= log2(pi e). Exact for Gaussian states since the
// conditional variance does not depend on the conditioning outcome.
template <typename Scalar>
WitnessReport<Scalar> steering_conditional_cv(const GaussianState<Scalar>& g) {
    WitnessReport<Scalar> report;
    report.name = "steering-conditional-cv";
    report.lhs_terms["h(x^B|x^A)"] =
        gaussian_differential_entropy(conditional_variance(g, Quadrature::x_b, Quadrature::x_a));
    report.lhs_terms["h(k^B|k^A)"] =
        gaussian_differential_entropy(conditional_variance(g, Quadrature::k_b, Quadrature::k_a));
    report.bound_terms["log2_pi_e"] = std::log2(Scalar(M_PI) * std::exp(Scalar(1)));
    detail::finalize_report(report);
    return report;
}

namespace detail {

// Gaussian mutual information of one quadrature pair as marginal minus
// conditional entropy.
template <typename Scalar>
Scalar quadrature_pair_mi(const GaussianState<Scalar>& g, Quadrature a, Quadrature b) {
    return gaussian_differential_entropy(g.variance(b)) -
           gaussian_differential_entropy(conditional_variance(g, b, a));
}

}  // namespace detail

// h(x^A:x^B) + h(k^A:k^B) <= max_i log2(2 sigma_x^i sigma_k^i). The bound uses
// marginal standard deviations, so state information enters only through
// observed second moments.
template <typename Scalar>
WitnessReport<Scalar> steering_symmetric_cv(const GaussianState<Scalar>& g) {
    WitnessReport<Scalar> report;
    report.name = "steering-symmetric-cv";
    report.sense = BoundSense::upper;
    report.lhs_terms["h(x^A:x^B)"] =
        detail::quadrature_pair_mi(g, Quadrature::x_a, Quadrature::x_b);
    report.lhs_terms["h(k^A:k^B)"] =
        detail::quadrature_pair_mi(g, Quadrature::k_a, Quadrature::k_b);
    const Scalar bound_a =
        std::log2(Scalar(2) * g.std_dev(Quadrature::x_a) * g.std_dev(Quadrature::k_a));
    const Scalar bound_b =
        std::log2(Scalar(2) * g.std_dev(Quadrature::x_b) * g.std_dev(Quadrature::k_b));
    report.bound_terms["max_log2_2_sigma_x_sigma_k"] = std::max(bound_a, bound_b);
    report.extras["bound_A"] = bound_a;
    report.extras["bound_B"] = bound_b;
    detail::finalize_report(report);
    return report;
}

// Discretized variant: the mutual informations of the binned quadrature pairs
// against the same marginal-deviation bound. Binned lhs never exceeds the
// continuous one.
template <typename Scalar>
WitnessReport<Scalar> steering_symmetric_binned(const GaussianState<Scalar>& g,
                                                const BinningSpec<Scalar>& spec_x,
                                                const BinningSpec<Scalar>& spec_k) {
    auto pair_cov = [&](Quadrature a, Quadrature b) {
        Eigen::Matrix<Scalar, 2, 2> cov;
        cov << g.variance(a), g.covariance(a, b), g.covariance(a, b), g.variance(b);
        return cov;
    };
    const auto x_binned =
        bin_bivariate_gaussian(pair_cov(Quadrature::x_a, Quadrature::x_b), spec_x, spec_x);
    const auto k_binned =
        bin_bivariate_gaussian(pair_cov(Quadrature::k_a, Quadrature::k_b), spec_k, spec_k);

    WitnessReport<Scalar> report = steering_symmetric_cv(g);
    report.extras["continuous_lhs"] = report.lhs;
    report.name = "steering-symmetric-binned";
    report.lhs_terms.clear();
    report.lhs_terms["H(X^A:X^B)"] = mutual_information(x_binned);
    report.lhs_terms["H(K^A:K^B)"] = mutual_information(k_binned);
    detail::finalize_report(report);
    return report;
}

}  // namespace steerkit
