#pragma once

#include "bq/embedding.hpp"
#include "bq/gp.hpp"
#include "bq/kernel.hpp"

#include <vector>

namespace bq {

struct BQPosterior {
    double mu = 0.0;
    double sigma2 = 0.0;
    Vector weights;
    double lambda_used = 0.0;
};

struct WeightSolution {
    Vector weights;
    double lambda_used = 0.0;
};

// Everything needed to evaluate the integral posterior and its sequential
// updates for one (kernel, node set). Brownian-motion nodes at the origin
// carry zero prior variance, so they are left out of the solve and receive
// zero weight; `active` maps rows of the solved system back to X.
struct ConditionedSystem {
    KernelSpec spec;
    Measure P;
    NodeSet X;                  // active nodes only
    std::vector<Eigen::Index> active;
    Eigen::Index n_total = 0;
    FactoredSystem sys;
    EmbeddingVector emb;        // over active nodes
    Vector w;                   // (K + λI)^{-1} k_PX over active nodes
    double sigma2 = 0.0;        // Σ_D

    [[nodiscard]] Vector full_weights() const;
};

[[nodiscard]] ConditionedSystem condition(const KernelSpec& spec, const Measure& P,
                                          const NodeSet& X, const NuggetPolicy& policy);

[[nodiscard]] WeightSolution bq_weights(const KernelSpec& spec, const Measure& P, const NodeSet& X,
                                        const NuggetPolicy& policy);

[[nodiscard]] BQPosterior bq_infer(const KernelSpec& spec, const Measure& P, const Dataset& data,
                                   const NuggetPolicy& policy,
                                   const PriorMean& prior_mean = PriorMean::zero());

// Posterior from an existing conditioned system and fresh evaluations.
[[nodiscard]] BQPosterior bq_posterior(const ConditionedSystem& cs, const Dataset& data,
                                       const PriorMean& prior_mean = PriorMean::zero());

// Weights of the constant-trend model; they sum to one.
[[nodiscard]] Vector normalized_weights(const KernelSpec& spec, const Measure& P, const NodeSet& X,
                                        const NuggetPolicy& policy);

// sqrt(k_PP − 2vᵀk_PX + vᵀK v), unregularized, clamped at zero.
[[nodiscard]] double worst_case_error(const KernelSpec& spec, const Measure& P, const Vector& v,
                                      const NodeSet& X);

}  // namespace bq
