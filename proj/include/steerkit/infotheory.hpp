#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "steerkit/errors.hpp"

namespace steerkit {

// Validation tolerances. Logarithms are base 2 everywhere in this library.
namespace tol {
inline constexpr double hermitian = 1e-8;
inline constexpr double orthonormal = 1e-8;
inline constexpr double trace = 1e-8;
inline constexpr double probability = 1e-8;
inline constexpr double psd = 1e-9;
inline constexpr double verdict = 1e-9;
inline constexpr double cov_symmetry = 1e-10;
inline constexpr double quadrature_cell = 1e-10;
}  // namespace tol

enum class Party { a, b };

namespace detail {

// -sum p log2 p over the positive entries; 0 log 0 = 0.
template <typename Derived>
typename Derived::Scalar entropy_kernel(const Eigen::DenseBase<Derived>& probs) {
    using Scalar = typename Derived::Scalar;
    Scalar h = 0;
    for (Eigen::Index i = 0; i < probs.size(); ++i) {
        const Scalar p = probs.derived()(i);
        if (p > Scalar(0)) {
            h -= p * std::log2(p);
        }
    }
    return h;
}

template <typename Scalar>
std::string number_string(Scalar v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace detail

// Nonnegative vector summing to one within tol::probability. Entries in
// [-tol, 0) are clamped to zero; anything worse is rejected.
template <typename Scalar = double>
class ProbabilityVector {
public:
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    template <typename Derived>
    explicit ProbabilityVector(const Eigen::MatrixBase<Derived>& entries)
        : entries_(entries.template cast<Scalar>()) {
        if (entries_.size() == 0) {
            throw DimensionMismatch("probability vector must be nonempty");
        }
        for (Eigen::Index i = 0; i < entries_.size(); ++i) {
            Scalar& p = entries_(i);
            if (p < Scalar(0)) {
                if (p < -Scalar(tol::probability)) {
                    throw DimensionMismatch(
                        "probability entry " + detail::number_string(p) + " is negative");
                }
                p = Scalar(0);
            }
            if (p > Scalar(1) + Scalar(tol::probability)) {
                throw DimensionMismatch(
                    "probability entry " + detail::number_string(p) + " exceeds 1");
            }
        }
        const Scalar total = entries_.sum();
        if (std::abs(total - Scalar(1)) > Scalar(tol::probability)) {
            throw DimensionMismatch(
                "probabilities sum to " + detail::number_string(total) + ", expected 1");
        }
    }

    const Vector& entries() const { return entries_; }
    Eigen::Index size() const { return entries_.size(); }
    Scalar operator()(Eigen::Index i) const { return entries_(i); }

private:
    Vector entries_;
};

// Joint outcome probabilities: rows are party-A outcomes, columns party B.
template <typename Scalar = double>
class JointDistribution {
public:
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    template <typename Derived>
    explicit JointDistribution(const Eigen::MatrixBase<Derived>& table)
        : table_(table.template cast<Scalar>()) {
        if (table_.rows() == 0 || table_.cols() == 0) {
            throw DimensionMismatch("joint distribution table must be nonempty");
        }
        for (Eigen::Index i = 0; i < table_.rows(); ++i) {
            for (Eigen::Index j = 0; j < table_.cols(); ++j) {
                Scalar& p = table_(i, j);
                if (p < Scalar(0)) {
                    if (p < -Scalar(tol::probability)) {
                        throw DimensionMismatch("joint distribution entry (" +
                                                std::to_string(i) + "," + std::to_string(j) +
                                                ") is negative: " + detail::number_string(p));
                    }
                    p = Scalar(0);
                }
            }
        }
        const Scalar total = table_.sum();
        if (std::abs(total - Scalar(1)) > Scalar(tol::probability)) {
            throw DimensionMismatch("joint distribution sums to " +
                                    detail::number_string(total) + ", expected 1");
        }
    }

    const Matrix& table() const { return table_; }
    Eigen::Index rows() const { return table_.rows(); }
    Eigen::Index cols() const { return table_.cols(); }
    Scalar operator()(Eigen::Index i, Eigen::Index j) const { return table_(i, j); }

    ProbabilityVector<Scalar> marginal(Party p) const {
        if (p == Party::a) {
            return ProbabilityVector<Scalar>(table_.rowwise().sum().eval());
        }
        return ProbabilityVector<Scalar>(table_.colwise().sum().transpose().eval());
    }

private:
    Matrix table_;
};

// Uniform binning grid for one continuous variable.
template <typename Scalar = double>
struct BinningSpec {
    Scalar lower;
    Scalar width;
    Eigen::Index count;

    BinningSpec(Scalar lower_edge, Scalar bin_width, Eigen::Index bin_count)
        : lower(lower_edge), width(bin_width), count(bin_count) {
        if (!(width > Scalar(0))) {
            throw DimensionMismatch("bin width must be positive");
        }
        if (count < 2) {
            throw DimensionMismatch("bin count must be at least 2");
        }
    }

    // count bins spanning +- half_range_sigmas standard deviations around zero.
    static BinningSpec centered(Scalar sigma, Eigen::Index bin_count = 64,
                                Scalar half_range_sigmas = Scalar(6)) {
        const Scalar half = half_range_sigmas * sigma;
        return BinningSpec(-half, Scalar(2) * half / Scalar(bin_count), bin_count);
    }

    Scalar edge(Eigen::Index i) const { return lower + Scalar(i) * width; }
};

template <typename Scalar>
Scalar shannon_entropy(const ProbabilityVector<Scalar>& p) {
    return detail::entropy_kernel(p.entries());
}

template <typename Scalar>
Scalar joint_entropy(const JointDistribution<Scalar>& d) {
    return detail::entropy_kernel(d.table().reshaped());
}

// H(other | given) via the identity H(B|A) = H(A,B) - H(A).
template <typename Scalar>
Scalar conditional_entropy(const JointDistribution<Scalar>& d, Party given) {
    return joint_entropy(d) - shannon_entropy(d.marginal(given));
}

template <typename Scalar>
Scalar mutual_information(const JointDistribution<Scalar>& d) {
    return shannon_entropy(d.marginal(Party::a)) + shannon_entropy(d.marginal(Party::b)) -
           joint_entropy(d);
}

namespace detail {

template <typename Scalar>
Scalar normal_cdf(Scalar x, Scalar mean, Scalar sigma) {
    if (std::isinf(x)) {
        return x > Scalar(0) ? Scalar(1) : Scalar(0);
    }
    const Scalar z = (x - mean) / sigma;
    return Scalar(0.5) * std::erfc(-z / std::sqrt(Scalar(2)));
}

template <typename Scalar, typename F>
Scalar simpson_step(const F& f, Scalar a, Scalar b, Scalar fa, Scalar fm, Scalar fb,
                    Scalar whole, Scalar eps, int depth, int force) {
    const Scalar m = (a + b) / Scalar(2);
    const Scalar lm = (a + m) / Scalar(2);
    const Scalar rm = (m + b) / Scalar(2);
    const Scalar flm = f(lm);
    const Scalar frm = f(rm);
    const Scalar left = (m - a) / Scalar(6) * (fa + Scalar(4) * flm + fm);
    const Scalar right = (b - m) / Scalar(6) * (fm + Scalar(4) * frm + fb);
    const Scalar delta = left + right - whole;
    if (force <= 0 && std::abs(delta) <= Scalar(15) * eps) {
        return left + right + delta / Scalar(15);
    }
    if (depth <= 0) {
        throw QuadratureFailure("adaptive quadrature failed to reach tolerance " +
                                number_string(eps) + " on [" + number_string(a) + ", " +
                                number_string(b) + "]");
    }
    return simpson_step(f, a, m, fa, flm, fm, left, eps / Scalar(2), depth - 1, force - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, eps / Scalar(2), depth - 1, force - 1);
}

// Runs far below the requested tolerance and always subdivides twice: the
// residual per-interval bias is one-signed here, so thousands of cells summed
// against tol::probability need headroom, and the forced splits keep a smooth
// first look from accepting a biased estimate.
template <typename Scalar, typename F>
Scalar adaptive_simpson(const F& f, Scalar a, Scalar b, Scalar eps) {
    if (!(a < b)) {
        return Scalar(0);
    }
    const Scalar m = (a + b) / Scalar(2);
    const Scalar fa = f(a);
    const Scalar fm = f(m);
    const Scalar fb = f(b);
    const Scalar whole = (b - a) / Scalar(6) * (fa + Scalar(4) * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, eps / Scalar(1024), 48, 2);
}

}  // namespace detail

// Probability masses of a zero-mean bivariate normal over the grid rectangles.
// Cell (i,j) is the mass over bin i of variable A times bin j of variable B; the
// outermost edges extend to +-infinity so the table carries all the mass. Each
// cell is a 1D adaptive quadrature, over the outer bin, of the density times the
// conditional-CDF difference across the inner bin.
template <typename Scalar>
JointDistribution<Scalar> bin_bivariate_gaussian(const Eigen::Matrix<Scalar, 2, 2>& cov,
                                                 const BinningSpec<Scalar>& spec_a,
                                                 const BinningSpec<Scalar>& spec_b) {
    const Scalar var_a = cov(0, 0);
    const Scalar var_b = cov(1, 1);
    const Scalar cross = cov(0, 1);
    if (std::abs(cov(0, 1) - cov(1, 0)) > Scalar(tol::cov_symmetry)) {
        throw NotPositiveDefinite("covariance matrix is not symmetric");
    }
    const Scalar det = var_a * var_b - cross * cross;
    if (!(var_a > Scalar(0)) || !(var_b > Scalar(0)) || !(det > Scalar(0))) {
        throw NotPositiveDefinite("covariance matrix is not positive definite");
    }

    const Scalar sigma_a = std::sqrt(var_a);
    const Scalar slope = cross / var_a;                  // E[B|A=x] = slope * x
    const Scalar sigma_cond = std::sqrt(det / var_a);    // sd of B given A
    const Scalar inv_norm = Scalar(1) / (sigma_a * std::sqrt(Scalar(2) * Scalar(M_PI)));
    const Scalar inf = std::numeric_limits<Scalar>::infinity();
    const Scalar reach = Scalar(40) * sigma_a;  // density is zero past this, to double precision

    auto edge_a = [&](Eigen::Index i) -> Scalar {
        if (i == 0) return -inf;
        if (i == spec_a.count) return inf;
        return spec_a.edge(i);
    };
    auto edge_b = [&](Eigen::Index j) -> Scalar {
        if (j == 0) return -inf;
        if (j == spec_b.count) return inf;
        return spec_b.edge(j);
    };

    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> table(spec_a.count, spec_b.count);
    for (Eigen::Index i = 0; i < spec_a.count; ++i) {
        const Scalar lo = std::max(edge_a(i), -reach);
        const Scalar hi = std::min(edge_a(i + 1), reach);
        for (Eigen::Index j = 0; j < spec_b.count; ++j) {
            const Scalar b_lo = edge_b(j);
            const Scalar b_hi = edge_b(j + 1);
            auto integrand = [&](Scalar x) {
                const Scalar mean_b = slope * x;
                const Scalar strip = detail::normal_cdf(b_hi, mean_b, sigma_cond) -
                                     detail::normal_cdf(b_lo, mean_b, sigma_cond);
                return inv_norm * std::exp(-x * x / (Scalar(2) * var_a)) * strip;
            };
            table(i, j) = std::max(
                detail::adaptive_simpson(integrand, lo, hi, Scalar(tol::quadrature_cell)),
                Scalar(0));
        }
    }
    return JointDistribution<Scalar>(table);
}

}  // namespace steerkit
