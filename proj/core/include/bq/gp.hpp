#pragma once

#include "bq/kernel.hpp"
#include "bq/types.hpp"

#include <functional>
#include <vector>

namespace bq {

struct NuggetPolicy {
    double fixed_a = 1e-10;
    double fixed_b = 1e-8;
    // Applied to the mean diagonal of the (fixed-regularized) Gram matrix.
    std::vector<double> dynamic_multipliers{0.0, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2};

    // No fixed terms and a single zero rung: plain Cholesky.
    static NuggetPolicy disabled() { return {0.0, 0.0, {0.0}}; }
    void validate() const;
};

class FactoredSystem {
public:
    FactoredSystem() = default;
    FactoredSystem(Eigen::LLT<Matrix> llt, double lambda_used);

    [[nodiscard]] Eigen::Index n() const { return n_; }
    [[nodiscard]] double lambda_used() const { return lambda_; }
    [[nodiscard]] Matrix chol_factor() const { return llt_.matrixL(); }

    // (K + λI)^{-1} b
    [[nodiscard]] Vector solve(const Vector& b) const;
    // L^{-1} b
    [[nodiscard]] Vector solve_lower(const Vector& b) const;
    [[nodiscard]] double log_det() const;

private:
    Eigen::LLT<Matrix> llt_;
    double lambda_ = 0.0;
    Eigen::Index n_ = 0;
};

// Tries K + λI with λ = a + b + ā·m for each multiplier m in turn.
// Throws FactorizationError once the ladder is exhausted.
[[nodiscard]] FactoredSystem cholesky_with_nugget(const Matrix& K, const NuggetPolicy& policy);

struct PriorMean {
    std::function<double(Point)> fn;  // empty means zero
    double integral = 0.0;            // m_P

    static PriorMean zero() { return {}; }
    static PriorMean constant(double c);
    [[nodiscard]] double operator()(Point x) const { return fn ? fn(x) : 0.0; }
};

struct Dataset {
    NodeSet X;
    Vector f;

    [[nodiscard]] Eigen::Index size() const { return X.rows(); }
    [[nodiscard]] int dim() const { return static_cast<int>(X.cols()); }
    void validate() const;
    void append(Point x, double fx);
};

struct GpMoments {
    double mean = 0.0;
    double var = 0.0;
};

// Conditional mean and variance at x with the regularized factor in place of
// K_XX. Negative variance within 1e-8·max(1, k(x,x)) is clamped to zero;
// anything below that signals a broken factor and throws.
[[nodiscard]] GpMoments gp_posterior_at(const KernelSpec& spec, const PriorMean& prior_mean,
                                        const Dataset& data, const FactoredSystem& sys, Point x);

[[nodiscard]] double clamp_variance(double var, double scale, const char* where);

}  // namespace bq
