#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <vector>

#include "steerkit/parallel.hpp"
#include "steerkit/random.hpp"
#include "steerkit/witness.hpp"

namespace steerkit {

inline constexpr Eigen::Index max_lambda_count = 64;

// Local-hidden-state model for Bob: hidden value lambda with weight P(lambda),
// a quantum state rho^B_lambda that Bob receives, and for each of Alice's
// observable labels a response distribution P(a | lambda) over her announced
// outcomes.
template <typename Scalar = double>
class LhsEnsemble {
public:
    using ResponseTable = std::map<std::string, std::vector<ProbabilityVector<Scalar>>>;

    LhsEnsemble(ProbabilityVector<Scalar> weights, std::vector<DensityOperator<Scalar>> bob_states,
                ResponseTable responses)
        : weights_(std::move(weights)),
          bob_states_(std::move(bob_states)),
          responses_(std::move(responses)) {
        const Eigen::Index lambdas = weights_.size();
        if (lambdas > max_lambda_count) {
            throw DimensionMismatch("lambda count " + std::to_string(lambdas) +
                                    " exceeds supported maximum " +
                                    std::to_string(max_lambda_count));
        }
        if (static_cast<Eigen::Index>(bob_states_.size()) != lambdas) {
            throw DimensionMismatch("need one Bob state per lambda");
        }
        for (const auto& state : bob_states_) {
            if (state.dim() != bob_states_.front().dim()) {
                throw DimensionMismatch("Bob states must share one dimension");
            }
        }
        for (const auto& [label, per_lambda] : responses_) {
            if (static_cast<Eigen::Index>(per_lambda.size()) != lambdas) {
                throw DimensionMismatch("response table for '" + label +
                                        "' needs one distribution per lambda");
            }
            for (const auto& response : per_lambda) {
                if (response.size() != per_lambda.front().size()) {
                    throw DimensionMismatch("response distributions for '" + label +
                                            "' must share one outcome count");
                }
            }
        }
    }

    Eigen::Index lambda_count() const { return weights_.size(); }
    Eigen::Index bob_dim() const { return bob_states_.front().dim(); }
    const ProbabilityVector<Scalar>& weights() const { return weights_; }
    const std::vector<DensityOperator<Scalar>>& bob_states() const { return bob_states_; }
    const ResponseTable& responses() const { return responses_; }

    const std::vector<ProbabilityVector<Scalar>>& responses_for(const std::string& label) const {
        const auto it = responses_.find(label);
        if (it == responses_.end()) {
            throw MissingResponse("no Alice responses for observable label '" + label + "'");
        }
        return it->second;
    }

private:
    ProbabilityVector<Scalar> weights_;
    std::vector<DensityOperator<Scalar>> bob_states_;
    ResponseTable responses_;
};

// P(a_i, b_j) = sum_lambda P(lambda) P(a_i|lambda) Tr(|b_j><b_j| rho^B_lambda).
template <typename Scalar>
JointDistribution<Scalar> lhs_joint_distribution(const LhsEnsemble<Scalar>& ensemble,
                                                 const std::string& alice_label,
                                                 const ObservableBasis<Scalar>& bob_basis) {
    if (bob_basis.dim() != ensemble.bob_dim()) {
        throw DimensionMismatch("Bob basis dimension " + std::to_string(bob_basis.dim()) +
                                " does not match ensemble state dimension " +
                                std::to_string(ensemble.bob_dim()));
    }
    const auto& responses = ensemble.responses_for(alice_label);
    const Eigen::Index alice_outcomes = responses.front().size();
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> table =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(alice_outcomes,
                                                                    bob_basis.dim());
    for (Eigen::Index lambda = 0; lambda < ensemble.lambda_count(); ++lambda) {
        const Scalar weight = ensemble.weights()(lambda);
        if (weight == Scalar(0)) continue;
        const auto born =
            marginal_distribution(ensemble.bob_states()[lambda], bob_basis).entries();
        table.noalias() += weight * (responses[lambda].entries() * born.transpose());
    }
    return JointDistribution<Scalar>(table);
}

template <typename Scalar>
struct LhsLambdaRecord {
    Scalar weight;
    Scalar entropy_q;      // H_q(Q^B | lambda)
    Scalar entropy_r;      // H_q(R^B | lambda)
    Scalar von_neumann;    // S(rho^B_lambda)
};

// Both sides of the LHS criterion
//   H(Q^B|Q^A) + H(R^B|R^A) >= sum_lambda P(lambda) (H_q(Q^B|lambda) + H_q(R^B|lambda)),
// plus the lambda-averaged von Neumann entropy that a substituted
// state-dependent bound would add.
template <typename Scalar>
struct LhsCriterionReport {
    Scalar lhs;
    Scalar conditional_q;
    Scalar conditional_r;
    Scalar rhs;
    Scalar avg_von_neumann;
    std::vector<LhsLambdaRecord<Scalar>> per_lambda;
};

template <typename Scalar>
LhsCriterionReport<Scalar> lhs_criterion_check(const LhsEnsemble<Scalar>& ensemble,
                                               const std::string& q_label,
                                               const std::string& r_label,
                                               const ObservableBasis<Scalar>& q_b,
                                               const ObservableBasis<Scalar>& r_b) {
    LhsCriterionReport<Scalar> report;
    report.conditional_q =
        conditional_entropy(lhs_joint_distribution(ensemble, q_label, q_b), Party::a);
    report.conditional_r =
        conditional_entropy(lhs_joint_distribution(ensemble, r_label, r_b), Party::a);
    report.lhs = report.conditional_q + report.conditional_r;
    report.rhs = Scalar(0);
    report.avg_von_neumann = Scalar(0);
    report.per_lambda.reserve(static_cast<std::size_t>(ensemble.lambda_count()));
    for (Eigen::Index lambda = 0; lambda < ensemble.lambda_count(); ++lambda) {
        const auto& state = ensemble.bob_states()[lambda];
        LhsLambdaRecord<Scalar> record;
        record.weight = ensemble.weights()(lambda);
        record.entropy_q = shannon_entropy(marginal_distribution(state, q_b));
        record.entropy_r = shannon_entropy(marginal_distribution(state, r_b));
        record.von_neumann = von_neumann_entropy(state);
        report.rhs += record.weight * (record.entropy_q + record.entropy_r);
        report.avg_von_neumann += record.weight * record.von_neumann;
        report.per_lambda.push_back(record);
    }
    return report;
}

// Conditional-entropy sum of the model's own statistics; the quantity the
// steering bound log2(Omega) caps from below.
template <typename Scalar>
Scalar steering_sum(const LhsEnsemble<Scalar>& ensemble, const std::string& q_label,
                    const std::string& r_label, const ObservableBasis<Scalar>& q_b,
                    const ObservableBasis<Scalar>& r_b) {
    return conditional_entropy(lhs_joint_distribution(ensemble, q_label, q_b), Party::a) +
           conditional_entropy(lhs_joint_distribution(ensemble, r_label, r_b), Party::a);
}

// The tightness witness: lambda runs over the eigenstates of q_b with equal
// weights and deterministic announcements, so the Q-side conditional entropy
// is zero and the R side averages the per-eigenstate overlap entropies.
template <typename Scalar>
LhsEnsemble<Scalar> saturating_ensemble(const ObservableBasis<Scalar>& q_b) {
    const Eigen::Index n = q_b.dim();
    using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    ProbabilityVector<Scalar> weights(RealVector::Constant(n, Scalar(1) / Scalar(n)));
    std::vector<DensityOperator<Scalar>> states;
    std::vector<ProbabilityVector<Scalar>> announce;
    states.reserve(static_cast<std::size_t>(n));
    announce.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index lambda = 0; lambda < n; ++lambda) {
        states.push_back(DensityOperator<Scalar>::pure(q_b.vector(lambda), {n}));
        RealVector point = RealVector::Zero(n);
        point(lambda) = Scalar(1);
        announce.emplace_back(point);
    }
    typename LhsEnsemble<Scalar>::ResponseTable responses;
    responses["Q"] = announce;
    responses["R"] = announce;
    return LhsEnsemble<Scalar>(std::move(weights), std::move(states), std::move(responses));
}

enum class StateFamily { pure, mixed, both };

struct LhsSearchOptions {
    Eigen::Index lambda_count = 8;
    StateFamily family = StateFamily::both;
    unsigned threads = 1;
};

// One sampled ensemble, a pure function of (seed, trial). Even trials use
// deterministic Alice responses (a random injection of lambda values into
// outcomes when it fits, a random map otherwise), odd trials sample response
// rows uniformly from the simplex.
template <typename Scalar = double>
LhsEnsemble<Scalar> sample_lhs_ensemble(Eigen::Index dim, std::uint64_t seed, std::uint64_t trial,
                                        const LhsSearchOptions& options) {
    if (options.lambda_count < 1 || options.lambda_count > max_lambda_count) {
        throw DimensionMismatch("lambda count must be in [1, " +
                                std::to_string(max_lambda_count) + "]");
    }
    Rng rng = Rng::for_trial(seed, trial);
    const Eigen::Index lambdas = options.lambda_count;
    using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    ProbabilityVector<Scalar> weights =
        lambdas == 1 ? ProbabilityVector<Scalar>(RealVector::Ones(1))
                     : random_simplex_point<Scalar>(lambdas, rng);

    std::vector<DensityOperator<Scalar>> states;
    states.reserve(static_cast<std::size_t>(lambdas));
    for (Eigen::Index lambda = 0; lambda < lambdas; ++lambda) {
        const bool pure = options.family == StateFamily::pure ||
                          (options.family == StateFamily::both && rng.coin());
        states.push_back(pure ? random_pure_state<Scalar>(dim, rng)
                              : random_mixed_state<Scalar>(dim, rng));
    }

    const bool deterministic = (trial % 2 == 0);
    typename LhsEnsemble<Scalar>::ResponseTable responses;
    for (const char* label : {"Q", "R"}) {
        std::vector<ProbabilityVector<Scalar>> rows;
        rows.reserve(static_cast<std::size_t>(lambdas));
        if (deterministic) {
            std::vector<Eigen::Index> outcomes(static_cast<std::size_t>(dim));
            std::iota(outcomes.begin(), outcomes.end(), Eigen::Index(0));
            for (Eigen::Index i = dim - 1; i > 0; --i) {
                std::swap(outcomes[static_cast<std::size_t>(i)],
                          outcomes[rng.integer(static_cast<std::uint64_t>(i) + 1)]);
            }
            for (Eigen::Index lambda = 0; lambda < lambdas; ++lambda) {
                const Eigen::Index outcome =
                    (lambda < dim) ? outcomes[static_cast<std::size_t>(lambda)]
                                   : static_cast<Eigen::Index>(
                                         rng.integer(static_cast<std::uint64_t>(dim)));
                RealVector point = RealVector::Zero(dim);
                point(outcome) = Scalar(1);
                rows.emplace_back(point);
            }
        } else {
            for (Eigen::Index lambda = 0; lambda < lambdas; ++lambda) {
                rows.push_back(random_simplex_point<Scalar>(dim, rng));
            }
        }
        responses[label] = std::move(rows);
    }
    return LhsEnsemble<Scalar>(std::move(weights), std::move(states), std::move(responses));
}

template <typename Scalar = double>
struct LhsSearchReport {
    Scalar min_steering_sum{};
    std::uint64_t argmin_steering_trial = 0;
    Scalar min_avg_von_neumann{};
    std::uint64_t argmin_entropy_trial = 0;
    Scalar bound{};  // log2(Omega(q_b, r_b))
    std::uint64_t trials = 0;
    LhsEnsemble<Scalar> argmin_ensemble;
    LhsCriterionReport<Scalar> argmin_criterion;
};

// Randomized sweep over LHS ensembles. Deterministic for fixed (seed, trials)
// and independent of thread count: each trial derives its own RNG stream and
// mins are reduced lexicographically on (value, trial index).
template <typename Scalar>
LhsSearchReport<Scalar> random_lhs_search(const ObservableBasis<Scalar>& q_b,
                                          const ObservableBasis<Scalar>& r_b,
                                          std::uint64_t trials, std::uint64_t seed,
                                          const LhsSearchOptions& options = {}) {
    if (trials < 1) {
        throw DimensionMismatch("search needs at least one trial");
    }
    if (q_b.dim() != r_b.dim()) {
        throw DimensionMismatch("Bob bases must have equal dimensions");
    }
    const Eigen::Index dim = q_b.dim();

    struct Best {
        Scalar value;
        std::uint64_t trial;
    };
    auto better = [](const Best& lhs, const Best& rhs) {
        return lhs.value < rhs.value || (lhs.value == rhs.value && lhs.trial < rhs.trial);
    };

    std::mutex merge_mutex;
    Best best_sum{std::numeric_limits<Scalar>::infinity(), 0};
    Best best_entropy{std::numeric_limits<Scalar>::infinity(), 0};
    const unsigned threads = options.threads == 0 ? 1 : options.threads;
    detail::parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t index) {
        const auto trial = static_cast<std::uint64_t>(index);
        const auto ensemble = sample_lhs_ensemble<Scalar>(dim, seed, trial, options);
        const auto check = lhs_criterion_check(ensemble, "Q", "R", q_b, r_b);
        const Best sum{check.lhs, trial};
        const Best entropy{check.avg_von_neumann, trial};
        std::lock_guard<std::mutex> lock(merge_mutex);
        if (better(sum, best_sum)) best_sum = sum;
        if (better(entropy, best_entropy)) best_entropy = entropy;
    });

    LhsSearchReport<Scalar> report{
        best_sum.value,
        best_sum.trial,
        best_entropy.value,
        best_entropy.trial,
        std::log2(overlap_omega(q_b, r_b)),
        trials,
        sample_lhs_ensemble<Scalar>(dim, seed, best_sum.trial, options),
        {}};
    report.argmin_criterion = lhs_criterion_check(report.argmin_ensemble, "Q", "R", q_b, r_b);
    return report;
}

}  // namespace steerkit
