#pragma once

#include <functional>
#include <vector>

namespace bq {

struct OptimumResult {
    std::vector<double> x;
    double value = 0.0;
    int evaluations = 0;
};

struct NelderMeadOptions {
    int max_evaluations = 400;
    double initial_step = 1.0;
    double ftol = 1e-10;
    double xtol = 1e-8;
};

// Maximizes f; the returned value is the best seen, never worse than f(x0).
// Points with f = -inf are treated as infeasible.
[[nodiscard]] OptimumResult nelder_mead_max(const std::function<double(const std::vector<double>&)>& f,
                                           std::vector<double> x0, const NelderMeadOptions& opts = {});

struct ScalarOptimum {
    double x = 0.0;
    double value = 0.0;
};

// Golden-section maximization on [a, b]; also compares the endpoints.
[[nodiscard]] ScalarOptimum golden_section_max(const std::function<double(double)>& f, double a,
                                               double b, int iterations);

}  // namespace bq
