#pragma once

#include "bq/types.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace bq {

enum class KernelFamily { SquareExponential, MaternIso, MaternProduct, BrownianMotion };

// Half-integer Matérn smoothness; the value is 2ν.
enum class Smoothness { Half = 1, ThreeHalves = 3, FiveHalves = 5 };

struct KernelSpec {
    KernelFamily family = KernelFamily::SquareExponential;
    double sigma2 = 1.0;
    std::vector<double> lengthscales{1.0};
    Smoothness nu = Smoothness::ThreeHalves;
    int dim = 1;

    static KernelSpec square_exponential(int dim, double sigma2, double lengthscale);
    static KernelSpec matern(Smoothness nu, int dim, double sigma2, double lengthscale);
    static KernelSpec matern_product(Smoothness nu, int dim, double sigma2, double lengthscale);
    static KernelSpec brownian(double sigma2 = 1.0);

    // Throws std::invalid_argument on a violated invariant.
    void validate() const;

    [[nodiscard]] bool has_lengthscales() const { return family != KernelFamily::BrownianMotion; }
    [[nodiscard]] bool stationary() const { return family != KernelFamily::BrownianMotion; }
    [[nodiscard]] KernelSpec with_sigma2(double s) const;
    [[nodiscard]] KernelSpec with_lengthscales(std::vector<double> ls) const;
};

// Brownian motion lives on [0, T]; T is fixed to the unit interval.
inline constexpr double kBrownianHorizon = 1.0;

[[nodiscard]] double kernel_eval(const KernelSpec& spec, Point x, Point y);
[[nodiscard]] Matrix gram(const KernelSpec& spec, const NodeSet& X);
// k_X(x): kernel between every node and x.
[[nodiscard]] Vector cross_kernel(const KernelSpec& spec, const NodeSet& X, Point x);

// Unit-scale Matérn profile q(z)e^{-z} with z = sqrt(2ν)·r.
[[nodiscard]] double matern_profile(Smoothness nu, double r);
[[nodiscard]] double matern_rate(Smoothness nu);

// "se", "matern12", "matern32", "matern52", "matern_prod12", ..., "brownian".
[[nodiscard]] KernelSpec parse_kernel(std::string_view name, int dim = 1, double sigma2 = 1.0,
                                      double lengthscale = 1.0);
[[nodiscard]] std::string kernel_name(const KernelSpec& spec);

}  // namespace bq
