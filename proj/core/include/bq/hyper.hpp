#pragma once

#include "bq/gp.hpp"
#include "bq/kernel.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace bq {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    [[nodiscard]] double clamp(double v) const { return std::min(hi, std::max(lo, v)); }
};

struct HyperBounds {
    Interval lengthscale{1e-3, 1e3};
    Interval sigma2{1e-6, 1e6};
    void validate() const;
};

struct FitOptions {
    HyperBounds bounds;
    int restarts = 5;
    std::uint64_t seed = 0;
    // Profile σ² out in closed form instead of searching over it.
    bool profile_scale = true;
    NuggetPolicy policy;
    PriorMean prior_mean = PriorMean::zero();
    int max_evaluations = 300;
};

struct HyperParams {
    KernelSpec spec;
    HyperBounds bounds;
    bool log_parameterized = true;
    double log_marginal = 0.0;
    int evaluations = 0;

    // {"sigma2", "lengthscale_0", ...}
    [[nodiscard]] std::map<std::string, double> theta() const;
};

[[nodiscard]] double log_marginal(const KernelSpec& spec, const PriorMean& prior_mean,
                                  const Dataset& data, const NuggetPolicy& policy);

// Log-likelihood under covariance σ²·A, where A = LLᵀ is an already
// regularized unit-scale Gram factor and r the residual f − m.
[[nodiscard]] double log_marginal_scaled(const FactoredSystem& unit, const Vector& residual,
                                         double sigma2);

// (1/N) rᵀA^{-1}r with A the regularized unit-scale Gram.
[[nodiscard]] double ml_scale_closed_form(const KernelSpec& spec_unit_scale, const Dataset& data,
                                          const NuggetPolicy& policy,
                                          const PriorMean& prior_mean = PriorMean::zero());

// Best-of-restarts ML-II estimate of the family's hyperparameters. `initial`
// fixes the family, dimension and smoothness; its values seed restart 0.
[[nodiscard]] HyperParams fit_ml(const KernelSpec& initial, const Dataset& data,
                                 const FitOptions& opts);

}  // namespace bq
