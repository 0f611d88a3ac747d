#pragma once

#include "bq/kernel.hpp"
#include "bq/types.hpp"

namespace bq {

enum class MeasureKind { UniformUnitCube };

struct Measure {
    MeasureKind kind = MeasureKind::UniformUnitCube;
    int dim = 1;
    double density_max = 1.0;

    static Measure uniform(int dim) { return {MeasureKind::UniformUnitCube, dim, 1.0}; }
    [[nodiscard]] double density(Point) const { return 1.0; }
};

struct EmbeddingVector {
    Vector k_PX;
    double k_PP = 0.0;
    double m_P = 0.0;
};

// Whether kernel_mean / initial_variance have a closed form for the pair.
[[nodiscard]] bool embedding_supported(const KernelSpec& spec, const Measure& P);

// k_P(x) = ∫ k(x', x) dP(x'); throws UnsupportedError for pairs without a
// closed form (isotropic Matérn in d ≥ 2).
[[nodiscard]] double kernel_mean(const KernelSpec& spec, const Measure& P, Point x);
[[nodiscard]] double initial_variance(const KernelSpec& spec, const Measure& P);
[[nodiscard]] EmbeddingVector embed(const KernelSpec& spec, const Measure& P, const NodeSet& X,
                                    double m_P = 0.0);

// Nested adaptive quadrature of ∫ k(x', x) dP(x'), independent of the closed
// forms above. Test-only cost profile; dim ≤ 3.
[[nodiscard]] double oracle_embedding(const KernelSpec& spec, const Measure& P, Point x,
                                      double tol);

// One-dimensional unit-scale factors on [0, 1]; exposed for testing.
[[nodiscard]] double se_mean_1d(double lengthscale, double x);
[[nodiscard]] double se_variance_1d(double lengthscale);
[[nodiscard]] double matern_mean_1d(Smoothness nu, double lengthscale, double x);
[[nodiscard]] double matern_variance_1d(Smoothness nu, double lengthscale);

}  // namespace bq
