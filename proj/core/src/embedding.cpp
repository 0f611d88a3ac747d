#include "bq/embedding.hpp"

#include "bq/integrate.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace bq {

namespace {

// ∫_0^b z^n e^{-z} dz, the lower incomplete gamma γ(n+1, b).
double gamma_moment(int n, double b) {
    if (b <= 0.0) return 0.0;
    if (b < n + 2.0) {
        double term = 1.0 / (n + 1.0), sum = term;
        for (int k = 1; k < 200; ++k) {
            term *= b / (n + 1.0 + k);
            sum += term;
            if (term < 1e-17 * sum) break;
        }
        return std::pow(b, n + 1) * std::exp(-b) * sum;
    }
    double partial = 0.0, power = 1.0, fact = 1.0;
    for (int k = 0; k <= n; ++k) {
        if (k > 0) {
            power *= b;
            fact *= k;
        }
        partial += power / fact;
    }
    double nfact = 1.0;
    for (int k = 2; k <= n; ++k) nfact *= k;
    return nfact * (1.0 - std::exp(-b) * partial);
}

// Coefficients of q with φ(z) = q(z)e^{-z}.
std::vector<double> matern_poly(Smoothness nu) {
    switch (nu) {
        case Smoothness::Half: return {1.0};
        case Smoothness::ThreeHalves: return {1.0, 1.0};
        case Smoothness::FiveHalves: return {1.0, 1.0, 1.0 / 3.0};
    }
    return {};
}

// G(b) = ∫_0^b q(z) e^{-z} dz.
double matern_antiderivative(const std::vector<double>& q, double b) {
    double g = 0.0;
    for (std::size_t n = 0; n < q.size(); ++n) g += q[n] * gamma_moment(static_cast<int>(n), b);
    return g;
}

void check_pair(const KernelSpec& spec, const Measure& P) {
    spec.validate();
    if (P.dim != spec.dim)
        throw std::invalid_argument("embedding: measure and kernel dimensions differ");
    if (!embedding_supported(spec, P))
        throw UnsupportedError("embedding: no closed form for " + kernel_name(spec) + " in dim " +
                               std::to_string(spec.dim));
}

void check_domain(Point x) {
    for (double v : x)
        if (!(v >= 0.0 && v <= 1.0)) throw std::domain_error("embedding: point outside [0,1]^d");
}

}  // namespace

double se_mean_1d(double l, double x) {
    const double s = l * std::numbers::sqrt2;
    return l * std::sqrt(std::numbers::pi / 2.0) * (std::erf((1.0 - x) / s) + std::erf(x / s));
}

double se_variance_1d(double l) {
    return 2.0 * l * l * std::expm1(-1.0 / (2.0 * l * l)) +
           std::sqrt(2.0 * std::numbers::pi) * l * std::erf(1.0 / (l * std::numbers::sqrt2));
}

double matern_mean_1d(Smoothness nu, double l, double x) {
    const double c = matern_rate(nu) / l;
    const auto q = matern_poly(nu);
    return (matern_antiderivative(q, c * x) + matern_antiderivative(q, c * (1.0 - x))) / c;
}

double matern_variance_1d(Smoothness nu, double l) {
    // 2/c² ∫_0^c G(b) db, with ∫_0^c G = c·G(c) − ∫_0^c b q(b) e^{-b} db.
    const double c = matern_rate(nu) / l;
    const auto q = matern_poly(nu);
    double h = c * matern_antiderivative(q, c);
    for (std::size_t n = 0; n < q.size(); ++n) h -= q[n] * gamma_moment(static_cast<int>(n) + 1, c);
    return 2.0 * h / (c * c);
}

bool embedding_supported(const KernelSpec& spec, const Measure& P) {
    if (P.kind != MeasureKind::UniformUnitCube) return false;
    if (spec.family == KernelFamily::MaternIso) return spec.dim == 1;
    return true;
}

double kernel_mean(const KernelSpec& spec, const Measure& P, Point x) {
    check_pair(spec, P);
    if (static_cast<int>(x.size()) != spec.dim)
        throw std::invalid_argument("kernel_mean: point dimension mismatch");
    check_domain(x);
    double v = spec.sigma2;
    switch (spec.family) {
        case KernelFamily::SquareExponential:
            for (int i = 0; i < spec.dim; ++i) v *= se_mean_1d(spec.lengthscales[i], x[i]);
            return v;
        case KernelFamily::MaternIso:
        case KernelFamily::MaternProduct:
            for (int i = 0; i < spec.dim; ++i)
                v *= matern_mean_1d(spec.nu, spec.lengthscales[i], x[i]);
            return v;
        case KernelFamily::BrownianMotion:
            return v * (x[0] - 0.5 * x[0] * x[0]);
    }
    return 0.0;
}

double initial_variance(const KernelSpec& spec, const Measure& P) {
    check_pair(spec, P);
    double v = spec.sigma2;
    switch (spec.family) {
        case KernelFamily::SquareExponential:
            for (double l : spec.lengthscales) v *= se_variance_1d(l);
            return v;
        case KernelFamily::MaternIso:
        case KernelFamily::MaternProduct:
            for (double l : spec.lengthscales) v *= matern_variance_1d(spec.nu, l);
            return v;
        case KernelFamily::BrownianMotion:
            return v / 3.0;
    }
    return 0.0;
}

EmbeddingVector embed(const KernelSpec& spec, const Measure& P, const NodeSet& X, double m_P) {
    EmbeddingVector e;
    e.k_PX.resize(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) e.k_PX(i) = kernel_mean(spec, P, node(X, i));
    e.k_PP = initial_variance(spec, P);
    e.m_P = m_P;
    return e;
}

double oracle_embedding(const KernelSpec& spec, const Measure& P, Point x, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("oracle_embedding: tol must be positive");
    if (P.dim != spec.dim || static_cast<int>(x.size()) != spec.dim)
        throw std::invalid_argument("oracle_embedding: dimension mismatch");
    if (spec.dim > 3) throw std::invalid_argument("oracle_embedding: dim must be <= 3");
    const int d = spec.dim;
    std::vector<double> xp(static_cast<std::size_t>(d));
    const std::vector<double> target(x.begin(), x.end());
    // Inner dimensions get a tighter share so the outer estimate stays honest.
    std::function<double(int, double)> integrate_from = [&](int axis, double t) -> double {
        auto f = [&, axis](double s) {
            xp[static_cast<std::size_t>(axis)] = s;
            if (axis + 1 == d)
                return kernel_eval(spec, Point(xp), Point(target)) * P.density(Point(xp));
            return integrate_from(axis + 1, t * 0.1);
        };
        return adaptive_integrate(f, 0.0, 1.0, t, {target[static_cast<std::size_t>(axis)]});
    };
    return integrate_from(0, tol);
}

}  // namespace bq
