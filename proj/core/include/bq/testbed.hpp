#pragma once

#include "bq/kernel.hpp"
#include "bq/types.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace bq {

enum class TestFamily { FourierSeries, BrownianKL, KernelCombination, Linear };

// Second parameter of the Fourier coefficient normal: variance 2(J+1) as
// written, or its reciprocal.
enum class CoefficientScale { Variance, ReciprocalVariance };

struct TestFunction {
    TestFamily family = TestFamily::Linear;
    Vector a;  // cosine (Fourier) or sine (Brownian KL) coefficients, index j-1
    Vector u;  // Fourier sine coefficients
    double L = 5.0;
    int J = 0;
    double true_integral = 0.0;
    int id = 1;
    // Kernel combination f = Σ c_j k(·, z_j).
    KernelSpec kernel;
    NodeSet centers;
    Vector c;
    double rkhs_norm2 = 0.0;

    [[nodiscard]] double operator()(double x) const;
    [[nodiscard]] double eval(Point x) const;
    [[nodiscard]] std::function<double(Point)> as_function() const;
};

inline constexpr int kFourierTerms = 25;
inline constexpr double kFourierPeriod = 5.0;
inline constexpr int kBrownianTerms = 500;

[[nodiscard]] TestFunction make_fourier(std::uint64_t seed,
                                        CoefficientScale scale = CoefficientScale::Variance,
                                        int id = 1);
[[nodiscard]] TestFunction fourier_from_coefficients(Vector a, Vector u, double L = kFourierPeriod,
                                                     int id = 1);
[[nodiscard]] TestFunction make_brownian_path(std::uint64_t seed, int id = 1);
[[nodiscard]] TestFunction brownian_from_coefficients(Vector a, int id = 1);

// One-dimensional RKHS members with closed-form integral and norm.
[[nodiscard]] TestFunction make_kernel_combination(const KernelSpec& spec, NodeSet centers, Vector c,
                                                   int id = 1);
[[nodiscard]] TestFunction make_random_kernel_combination(const KernelSpec& spec, std::uint64_t seed,
                                                          int terms = 5, int id = 1);
[[nodiscard]] TestFunction make_linear();

// t-th member (1-based) of a named family for an experiment seed.
[[nodiscard]] TestFunction family_member(TestFamily family, std::uint64_t seed, int t,
                                         CoefficientScale scale = CoefficientScale::Variance);

// Adaptive quadrature of f over [0, 1] to absolute tolerance tol, after
// splitting into `panels` equal pieces.
[[nodiscard]] double true_integral_oracle(const std::function<double(double)>& f, double tol,
                                          int panels = 32);

void write_coefficients_csv(std::ostream& os, const std::vector<TestFunction>& fns);

[[nodiscard]] TestFamily parse_family(std::string_view name);
[[nodiscard]] std::string family_name(TestFamily f);

}  // namespace bq
