#pragma once

#include <Eigen/Dense>
#include <complex>
#include <numeric>
#include <string>
#include <unsupported/Eigen/KroneckerProduct>
#include <utility>
#include <vector>

#include "steerkit/infotheory.hpp"

namespace steerkit {

inline constexpr Eigen::Index min_subsystem_dim = 2;
inline constexpr Eigen::Index max_subsystem_dim = 64;

// Validated quantum state: Hermitian, unit trace, positive semidefinite, with
// declared subsystem dimensions whose product equals the matrix side.
template <typename Scalar = double>
class DensityOperator {
public:
    using Complex = std::complex<Scalar>;
    using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

    template <typename Derived>
    DensityOperator(const Eigen::MatrixBase<Derived>& matrix, std::vector<Eigen::Index> dims)
        : matrix_(matrix.template cast<Complex>()), dims_(std::move(dims)) {
        if (matrix_.rows() != matrix_.cols()) {
            throw DimensionMismatch("density matrix must be square, got " +
                                    std::to_string(matrix_.rows()) + "x" +
                                    std::to_string(matrix_.cols()));
        }
        if (dims_.empty()) {
            throw DimensionMismatch("subsystem dimension list must be nonempty");
        }
        Eigen::Index product = 1;
        for (Eigen::Index d : dims_) {
            if (d < min_subsystem_dim || d > max_subsystem_dim) {
                throw DimensionMismatch("subsystem dimension " + std::to_string(d) +
                                        " outside supported range [" +
                                        std::to_string(min_subsystem_dim) + ", " +
                                        std::to_string(max_subsystem_dim) + "]");
            }
            product *= d;
        }
        if (product != matrix_.rows()) {
            throw DimensionMismatch("matrix side " + std::to_string(matrix_.rows()) +
                                    " does not equal product of subsystem dimensions " +
                                    std::to_string(product));
        }

        std::vector<DefectRecord> defects;
        const Scalar herm_defect = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
        if (herm_defect > Scalar(tol::hermitian)) {
            defects.push_back({StateDefect::non_hermitian, static_cast<double>(herm_defect)});
        }
        const Scalar trace_defect = std::abs(matrix_.trace() - Complex(1));
        if (trace_defect > Scalar(tol::trace)) {
            defects.push_back({StateDefect::non_unit_trace, static_cast<double>(trace_defect)});
        }
        Eigen::SelfAdjointEigenSolver<Matrix> solver(
            ((matrix_ + matrix_.adjoint()) / Scalar(2)).eval(), Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success) {
            throw EigensolveFailure("eigensolve failed during density validation");
        }
        const Scalar min_eig = solver.eigenvalues().minCoeff();
        if (min_eig < -Scalar(tol::psd)) {
            defects.push_back({StateDefect::not_positive, static_cast<double>(-min_eig)});
        }
        if (!defects.empty()) {
            throw StateValidationError(std::move(defects));
        }
    }

    const Matrix& matrix() const { return matrix_; }
    const std::vector<Eigen::Index>& dims() const { return dims_; }
    Eigen::Index dim() const { return matrix_.rows(); }
    bool bipartite() const { return dims_.size() == 2; }

    template <typename Derived>
    static DensityOperator pure(const Eigen::MatrixBase<Derived>& ket,
                                std::vector<Eigen::Index> dims) {
        Vector psi = ket.template cast<Complex>();
        psi.normalize();
        return DensityOperator((psi * psi.adjoint()).eval(), std::move(dims));
    }

    static DensityOperator maximally_mixed(Eigen::Index n) {
        return DensityOperator(Matrix::Identity(n, n) / Scalar(n), {n});
    }

private:
    Matrix matrix_;
    std::vector<Eigen::Index> dims_;
};

template <typename Scalar, typename Derived>
DensityOperator<Scalar> validate_density(const Eigen::MatrixBase<Derived>& matrix,
                                         std::vector<Eigen::Index> dims) {
    return DensityOperator<Scalar>(matrix, std::move(dims));
}

// Orthonormal measurement basis; the columns of matrix() are the basis kets.
template <typename Scalar = double>
class ObservableBasis {
public:
    using Complex = std::complex<Scalar>;
    using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
    using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

    template <typename Derived>
    ObservableBasis(const Eigen::MatrixBase<Derived>& vectors, std::string label)
        : vectors_(vectors.template cast<Complex>()), label_(std::move(label)) {
        if (vectors_.rows() != vectors_.cols() || vectors_.rows() == 0) {
            throw DimensionMismatch("observable basis needs N vectors of dimension N");
        }
        const Matrix gram = vectors_.adjoint() * vectors_;
        const Scalar defect =
            (gram - Matrix::Identity(vectors_.rows(), vectors_.rows())).cwiseAbs().maxCoeff();
        if (defect > Scalar(tol::orthonormal)) {
            throw DimensionMismatch("basis '" + label_ + "' is not orthonormal, defect " +
                                    detail::number_string(defect));
        }
    }

    const Matrix& matrix() const { return vectors_; }
    Vector vector(Eigen::Index i) const { return vectors_.col(i); }
    Eigen::Index dim() const { return vectors_.rows(); }
    const std::string& label() const { return label_; }

    static ObservableBasis computational(Eigen::Index n, std::string label = "computational") {
        return ObservableBasis(Matrix::Identity(n, n), std::move(label));
    }

    static ObservableBasis fourier(Eigen::Index n, std::string label = "fourier") {
        Matrix m(n, n);
        const Scalar norm = Scalar(1) / std::sqrt(Scalar(n));
        for (Eigen::Index j = 0; j < n; ++j) {
            for (Eigen::Index k = 0; k < n; ++k) {
                const Scalar phase =
                    Scalar(2) * Scalar(M_PI) * Scalar(j) * Scalar(k) / Scalar(n);
                m(j, k) = Complex(std::cos(phase), std::sin(phase)) * norm;
            }
        }
        return ObservableBasis(m, std::move(label));
    }

    static ObservableBasis pauli_z() { return computational(2, "sigma_z"); }

    static ObservableBasis pauli_x() {
        Matrix m(2, 2);
        const Scalar s = Scalar(1) / std::sqrt(Scalar(2));
        m << Complex(s), Complex(s), Complex(s), Complex(-s);
        return ObservableBasis(m, "sigma_x");
    }

    static ObservableBasis pauli_y() {
        Matrix m(2, 2);
        const Scalar s = Scalar(1) / std::sqrt(Scalar(2));
        m << Complex(s), Complex(s), Complex(0, s), Complex(0, -s);
        return ObservableBasis(m, "sigma_y");
    }

private:
    Matrix vectors_;
    std::string label_;
};

// Reduced state of one subsystem of a bipartite state; trace preserving.
template <typename Scalar>
DensityOperator<Scalar> partial_trace(const DensityOperator<Scalar>& rho, Eigen::Index keep) {
    if (!rho.bipartite()) {
        throw BadSubsystem("partial trace requires a bipartite state");
    }
    if (keep != 0 && keep != 1) {
        throw BadSubsystem("subsystem index " + std::to_string(keep) + " out of range");
    }
    const Eigen::Index da = rho.dims()[0];
    const Eigen::Index db = rho.dims()[1];
    using Matrix = typename DensityOperator<Scalar>::Matrix;
    Matrix reduced;
    if (keep == 0) {
        reduced = Matrix::Zero(da, da);
        for (Eigen::Index i = 0; i < da; ++i) {
            for (Eigen::Index k = 0; k < da; ++k) {
                for (Eigen::Index j = 0; j < db; ++j) {
                    reduced(i, k) += rho.matrix()(i * db + j, k * db + j);
                }
            }
        }
    } else {
        reduced = Matrix::Zero(db, db);
        for (Eigen::Index j = 0; j < db; ++j) {
            for (Eigen::Index l = 0; l < db; ++l) {
                for (Eigen::Index i = 0; i < da; ++i) {
                    reduced(j, l) += rho.matrix()(i * db + j, i * db + l);
                }
            }
        }
    }
    return DensityOperator<Scalar>(reduced, {reduced.rows()});
}

// Transpose on party B's indices. Not a physical state in general, so the raw
// matrix is returned; its spectrum is what the PPT test looks at.
template <typename Scalar>
typename DensityOperator<Scalar>::Matrix partial_transpose(const DensityOperator<Scalar>& rho,
                                                           Party party) {
    if (!rho.bipartite()) {
        throw BadSubsystem("partial transpose requires a bipartite state");
    }
    const Eigen::Index da = rho.dims()[0];
    const Eigen::Index db = rho.dims()[1];
    typename DensityOperator<Scalar>::Matrix out(da * db, da * db);
    for (Eigen::Index i = 0; i < da; ++i) {
        for (Eigen::Index k = 0; k < da; ++k) {
            for (Eigen::Index j = 0; j < db; ++j) {
                for (Eigen::Index l = 0; l < db; ++l) {
                    if (party == Party::b) {
                        out(i * db + j, k * db + l) = rho.matrix()(i * db + l, k * db + j);
                    } else {
                        out(i * db + j, k * db + l) = rho.matrix()(k * db + j, i * db + l);
                    }
                }
            }
        }
    }
    return out;
}

template <typename Scalar>
DensityOperator<Scalar> tensor(const DensityOperator<Scalar>& a, const DensityOperator<Scalar>& b) {
    std::vector<Eigen::Index> dims = a.dims();
    dims.insert(dims.end(), b.dims().begin(), b.dims().end());
    return DensityOperator<Scalar>(Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval(),
                                   std::move(dims));
}

// Born probabilities P(i,j) = Tr(rho |a_i><a_i| (x) |b_j><b_j|).
template <typename Scalar>
JointDistribution<Scalar> joint_distribution(const DensityOperator<Scalar>& rho,
                                             const ObservableBasis<Scalar>& basis_a,
                                             const ObservableBasis<Scalar>& basis_b) {
    if (!rho.bipartite()) {
        throw DimensionMismatch("joint distribution requires a bipartite state");
    }
    const Eigen::Index da = rho.dims()[0];
    const Eigen::Index db = rho.dims()[1];
    if (basis_a.dim() != da || basis_b.dim() != db) {
        throw DimensionMismatch("basis dimensions (" + std::to_string(basis_a.dim()) + ", " +
                                std::to_string(basis_b.dim()) +
                                ") do not match subsystem dimensions (" + std::to_string(da) +
                                ", " + std::to_string(db) + ")");
    }
    const auto product = Eigen::kroneckerProduct(basis_a.matrix(), basis_b.matrix()).eval();
    const auto diag = (product.adjoint() * rho.matrix() * product).diagonal().real().eval();
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> table =
        diag.reshaped(db, da).transpose();
    return JointDistribution<Scalar>(table);
}

template <typename Scalar>
ProbabilityVector<Scalar> marginal_distribution(const DensityOperator<Scalar>& rho,
                                                const ObservableBasis<Scalar>& basis) {
    if (basis.dim() != rho.dim()) {
        throw DimensionMismatch("basis dimension " + std::to_string(basis.dim()) +
                                " does not match state dimension " + std::to_string(rho.dim()));
    }
    const auto probs =
        (basis.matrix().adjoint() * rho.matrix() * basis.matrix()).diagonal().real().eval();
    return ProbabilityVector<Scalar>(probs);
}

// -sum lambda_i log2 lambda_i; eigenvalues clipped to [0, 1] first.
template <typename Scalar>
Scalar von_neumann_entropy(const DensityOperator<Scalar>& rho) {
    using Matrix = typename DensityOperator<Scalar>::Matrix;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.matrix(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw EigensolveFailure("eigensolve failed in von Neumann entropy");
    }
    const auto clipped =
        solver.eigenvalues().cwiseMax(Scalar(0)).cwiseMin(Scalar(1)).eval();
    return detail::entropy_kernel(clipped);
}

}  // namespace steerkit
