#pragma once

#include <map>
#include <string>

#include "steerkit/qstate.hpp"

namespace steerkit {

enum class Verdict { satisfied, saturated, violated };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::satisfied: return "satisfied";
        case Verdict::saturated: return "saturated";
        case Verdict::violated: return "violated";
    }
    return "?";
}

// Whether the inequality lower-bounds the lhs (entropy sums) or upper-bounds
// it (mutual-information sums).
enum class BoundSense { lower, upper };

// Evaluated inequality. lhs and bound are exactly the sums of their term maps;
// margin is lhs - bound for lower bounds and bound - lhs for upper bounds, so
// negative margin always means violation.
template <typename Scalar = double>
struct WitnessReport {
    std::string name;
    BoundSense sense = BoundSense::lower;
    Scalar lhs{};
    Scalar bound{};
    Scalar margin{};
    Verdict verdict = Verdict::satisfied;
    std::map<std::string, Scalar> lhs_terms;
    std::map<std::string, Scalar> bound_terms;
    std::map<std::string, Scalar> extras;
    // False only for the deliberately invalid substituted bound: violating
    // that bound certifies nothing.
    bool steering_witness = true;
    bool contradiction = false;
};

namespace detail {

template <typename Scalar>
void finalize_report(WitnessReport<Scalar>& report) {
    report.lhs = Scalar(0);
    for (const auto& [key, value] : report.lhs_terms) report.lhs += value;
    report.bound = Scalar(0);
    for (const auto& [key, value] : report.bound_terms) report.bound += value;
    report.margin = (report.sense == BoundSense::lower) ? report.lhs - report.bound
                                                        : report.bound - report.lhs;
    if (std::abs(report.margin) <= Scalar(tol::verdict)) {
        report.verdict = Verdict::saturated;
    } else if (report.margin < Scalar(0)) {
        report.verdict = Verdict::violated;
    } else {
        report.verdict = Verdict::satisfied;
    }
}

}  // namespace detail

// Omega = 1 / max_{i,j} |<q_i|r_j>|^2, in [1, N].
template <typename Scalar>
Scalar overlap_omega(const ObservableBasis<Scalar>& q, const ObservableBasis<Scalar>& r) {
    if (q.dim() != r.dim()) {
        throw DimensionMismatch("overlap requires equal basis dimensions, got " +
                                std::to_string(q.dim()) + " and " + std::to_string(r.dim()));
    }
    const Scalar max_sq =
        (q.matrix().adjoint() * r.matrix()).cwiseAbs2().maxCoeff();
    return Scalar(1) / max_sq;
}

// H(Q) + H(R) >= log2(Omega).
template <typename Scalar>
WitnessReport<Scalar> maassen_uffink_check(const DensityOperator<Scalar>& rho,
                                           const ObservableBasis<Scalar>& q,
                                           const ObservableBasis<Scalar>& r) {
    const Scalar omega = overlap_omega(q, r);
    WitnessReport<Scalar> report;
    report.name = "maassen-uffink";
    report.lhs_terms["H(" + q.label() + ")"] = shannon_entropy(marginal_distribution(rho, q));
    report.lhs_terms["H(" + r.label() + ")"] = shannon_entropy(marginal_distribution(rho, r));
    report.bound_terms["log2_Omega"] = std::log2(omega);
    report.extras["Omega"] = omega;
    detail::finalize_report(report);
    return report;
}

// H(Q) + H(R) >= log2(Omega) + S(rho): the bound gains the intrinsic mixedness
// of the measured state.
template <typename Scalar>
WitnessReport<Scalar> berta_check(const DensityOperator<Scalar>& rho,
                                  const ObservableBasis<Scalar>& q,
                                  const ObservableBasis<Scalar>& r) {
    WitnessReport<Scalar> report = maassen_uffink_check(rho, q, r);
    report.name = "berta";
    report.bound_terms["S(rho)"] = von_neumann_entropy(rho);
    detail::finalize_report(report);
    return report;
}

// H(Q^B|Q^A) + H(R^B|R^A) >= log2(Omega^B). Violation certifies steering of B
// by A.
template <typename Scalar>
WitnessReport<Scalar> steering_conditional_discrete(const DensityOperator<Scalar>& rho_ab,
                                                    const ObservableBasis<Scalar>& q_a,
                                                    const ObservableBasis<Scalar>& q_b,
                                                    const ObservableBasis<Scalar>& r_a,
                                                    const ObservableBasis<Scalar>& r_b) {
    const Scalar omega_b = overlap_omega(q_b, r_b);
    const auto q_joint = joint_distribution(rho_ab, q_a, q_b);
    const auto r_joint = joint_distribution(rho_ab, r_a, r_b);
    WitnessReport<Scalar> report;
    report.name = "steering-conditional";
    report.lhs_terms["H(" + q_b.label() + "^B|" + q_a.label() + "^A)"] =
        conditional_entropy(q_joint, Party::a);
    report.lhs_terms["H(" + r_b.label() + "^B|" + r_a.label() + "^A)"] =
        conditional_entropy(r_joint, Party::a);
    report.bound_terms["log2_Omega_B"] = std::log2(omega_b);
    report.extras["Omega_B"] = omega_b;
    detail::finalize_report(report);
    return report;
}

enum class SeparabilityHint { unknown, separable_by_construction };

// Smallest eigenvalue of the partial transpose; nonnegative iff PPT.
template <typename Scalar>
Scalar ppt_minimum_eigenvalue(const DensityOperator<Scalar>& rho_ab) {
    Eigen::SelfAdjointEigenSolver<typename DensityOperator<Scalar>::Matrix> solver(
        partial_transpose(rho_ab, Party::b), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw EigensolveFailure("eigensolve failed in PPT test");
    }
    return solver.eigenvalues().minCoeff();
}

// The invalid substitution: conditional entropies against the state-dependent
// bound log2(Omega^B) + S(rho^B). This is NOT a steering witness; the report
// says so, and the contradiction flag records a separable state "violating"
// it. Separability is certified automatically via PPT where PPT is decisive
// (dA*dB <= 6), or by the caller's hint for states built as product mixtures.
template <typename Scalar>
WitnessReport<Scalar> naive_substitution_demo(
    const DensityOperator<Scalar>& rho_ab, const ObservableBasis<Scalar>& q_a,
    const ObservableBasis<Scalar>& q_b, const ObservableBasis<Scalar>& r_a,
    const ObservableBasis<Scalar>& r_b, SeparabilityHint hint = SeparabilityHint::unknown) {
    WitnessReport<Scalar> report = steering_conditional_discrete(rho_ab, q_a, q_b, r_a, r_b);
    report.name = "naive-substitution";
    report.steering_witness = false;
    const Scalar entropy_b = von_neumann_entropy(partial_trace(rho_ab, 1));
    report.bound_terms["S(rho_B)"] = entropy_b;

    bool separable = (hint == SeparabilityHint::separable_by_construction);
    const bool ppt_decisive = rho_ab.dims()[0] * rho_ab.dims()[1] <= 6;
    if (!separable && ppt_decisive) {
        separable = ppt_minimum_eigenvalue(rho_ab) >= -Scalar(tol::psd);
    }
    report.extras["separable_certified"] = separable ? Scalar(1) : Scalar(0);
    detail::finalize_report(report);
    report.contradiction = separable && report.verdict == Verdict::violated;
    return report;
}

// H(Q^A:Q^B) + H(R^A:R^B) <= max_i log2(N^2 / Omega^i). Violation certifies
// steering in both directions.
template <typename Scalar>
WitnessReport<Scalar> steering_symmetric_discrete(const DensityOperator<Scalar>& rho_ab,
                                                  const ObservableBasis<Scalar>& q_a,
                                                  const ObservableBasis<Scalar>& q_b,
                                                  const ObservableBasis<Scalar>& r_a,
                                                  const ObservableBasis<Scalar>& r_b) {
    if (!rho_ab.bipartite()) {
        throw DimensionMismatch("symmetric steering requires a bipartite state");
    }
    if (rho_ab.dims()[0] != rho_ab.dims()[1]) {
        throw UnequalDimensions("symmetric steering bound is defined for equal subsystem "
                                "dimensions, got " +
                                std::to_string(rho_ab.dims()[0]) + " and " +
                                std::to_string(rho_ab.dims()[1]));
    }
    const Scalar n = Scalar(rho_ab.dims()[0]);
    const Scalar omega_a = overlap_omega(q_a, r_a);
    const Scalar omega_b = overlap_omega(q_b, r_b);
    const auto q_joint = joint_distribution(rho_ab, q_a, q_b);
    const auto r_joint = joint_distribution(rho_ab, r_a, r_b);

    WitnessReport<Scalar> report;
    report.name = "steering-symmetric";
    report.sense = BoundSense::upper;
    report.lhs_terms["H(" + q_a.label() + "^A:" + q_b.label() + "^B)"] =
        mutual_information(q_joint);
    report.lhs_terms["H(" + r_a.label() + "^A:" + r_b.label() + "^B)"] =
        mutual_information(r_joint);
    report.bound_terms["max_log2_N2_over_Omega"] =
        std::max(std::log2(n * n / omega_a), std::log2(n * n / omega_b));
    report.extras["Omega_A"] = omega_a;
    report.extras["Omega_B"] = omega_b;
    report.extras["N"] = n;
    detail::finalize_report(report);
    return report;
}

}  // namespace steerkit
