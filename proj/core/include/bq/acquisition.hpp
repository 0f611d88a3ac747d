#pragma once

#include "bq/embedding.hpp"
#include "bq/gp.hpp"
#include "bq/hyper.hpp"
#include "bq/quadrature.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bq {

enum class AcquisitionKind { MI, IVR, NIV, US, PVC };

[[nodiscard]] AcquisitionKind parse_acquisition(std::string_view name);
[[nodiscard]] std::string acquisition_name(AcquisitionKind k);

struct SequentialState {
    Dataset data;
    ConditionedSystem cache;
    HyperParams hyper;
    int step = 0;
    double exclusion_radius = 1e-8;

    // Conditions on `data` (which may be empty) under the given kernel.
    static SequentialState make(const KernelSpec& spec, const Measure& P, Dataset data,
                                const NuggetPolicy& policy);
};

// Posterior-kernel embedding k_{D;P}(x) and posterior variance k_D(x, x).
struct PosteriorQuantities {
    double kdp = 0.0;
    double kd = 0.0;
};
[[nodiscard]] PosteriorQuantities posterior_quantities(const SequentialState& state, Point x);

// False for candidates within the exclusion radius of a node, or with
// vanishing posterior variance.
[[nodiscard]] bool admissible(const SequentialState& state, Point x);

// Sequential single-point form k_{D;P}(x)² / (Σ_D k_D(x,x)); empty when x
// is not admissible or Σ_D = 0.
[[nodiscard]] std::optional<double> squared_correlation(const SequentialState& state, Point x);

// Batch form k̃ᵀ K̃^{-1} k̃ / Σ_D with posterior quantities; on empty data
// this is the prior form k_PX̃ᵀ K_X̃X̃^{-1} k_PX̃ / k_PP.
[[nodiscard]] double squared_correlation_batch(const SequentialState& state,
                                               const NodeSet& candidates);

[[nodiscard]] double acquisition_from_rho2(AcquisitionKind kind, double rho2);

// MI, IVR and NIV at a non-admissible point report the zero-information value.
[[nodiscard]] double acquisition_value(AcquisitionKind kind, const SequentialState& state, Point x);

struct SearchConfig {
    int candidates = 512;
    int refine_iters = 40;
    int top_k = 3;
    std::uint64_t seed = 0;
};

[[nodiscard]] Vector maximize_acquisition(AcquisitionKind kind, const SequentialState& state,
                                          const SearchConfig& cfg);

struct Problem {
    std::function<double(Point)> f;
    Measure P = Measure::uniform(1);
};

struct ModelConfig {
    KernelSpec kernel;
    NuggetPolicy policy;
    bool refit = true;
    FitOptions fit;
    SearchConfig search;
};

struct Stopping {
    int budget = 30;
    std::optional<double> variance_tol;
};

enum class StopReason { Budget, VarianceTolerance };

struct TraceEntry {
    int n = 0;
    double mu = 0.0;
    double sigma2 = 0.0;
    KernelSpec spec;
    double lambda_used = 0.0;
};

struct SequentialResult {
    Dataset data;
    BQPosterior posterior;
    KernelSpec spec;
    std::vector<TraceEntry> trace;
    StopReason reason = StopReason::Budget;
    int n_init = 0;
};

inline constexpr int kSequentialInitMax = 5;

// Random initial design of min(budget, 5) nodes drawn from the same stream as
// the random sampler, then one acquisition step per node.
[[nodiscard]] SequentialResult run_sequential_bq(const Problem& problem, const ModelConfig& model,
                                                 AcquisitionKind kind, const Stopping& stopping,
                                                 std::uint64_t seed);

}  // namespace bq
