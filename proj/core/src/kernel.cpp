#include "bq/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace bq {

namespace {

void check_point(const KernelSpec& spec, Point x) {
    if (static_cast<int>(x.size()) != spec.dim)
        throw std::invalid_argument("kernel: point dimension " + std::to_string(x.size()) +
                                    " does not match kernel dimension " +
                                    std::to_string(spec.dim));
    for (double v : x)
        if (!std::isfinite(v)) throw std::domain_error("kernel: non-finite input");
}

double scaled_distance(const KernelSpec& spec, Point x, Point y) {
    // hypot-style accumulation over scaled coordinate differences.
    double scale = 0.0, ssq = 1.0;
    for (int i = 0; i < spec.dim; ++i) {
        const double d = std::abs(x[i] - y[i]) / spec.lengthscales[i];
        if (d == 0.0) continue;
        if (scale < d) {
            ssq = 1.0 + ssq * (scale / d) * (scale / d);
            scale = d;
        } else {
            ssq += (d / scale) * (d / scale);
        }
    }
    return scale * std::sqrt(ssq);
}

}  // namespace

double matern_rate(Smoothness nu) {
    return std::sqrt(static_cast<double>(static_cast<int>(nu)));
}

double matern_profile(Smoothness nu, double r) {
    const double z = matern_rate(nu) * r;
    const double e = std::exp(-z);
    switch (nu) {
        case Smoothness::Half: return e;
        case Smoothness::ThreeHalves: return (1.0 + z) * e;
        case Smoothness::FiveHalves: return (1.0 + z + z * z / 3.0) * e;
    }
    return 0.0;
}

KernelSpec KernelSpec::square_exponential(int dim, double sigma2, double lengthscale) {
    KernelSpec s;
    s.family = KernelFamily::SquareExponential;
    s.dim = dim;
    s.sigma2 = sigma2;
    s.lengthscales.assign(static_cast<std::size_t>(dim), lengthscale);
    s.validate();
    return s;
}

KernelSpec KernelSpec::matern(Smoothness nu, int dim, double sigma2, double lengthscale) {
    KernelSpec s = square_exponential(dim, sigma2, lengthscale);
    s.family = KernelFamily::MaternIso;
    s.nu = nu;
    return s;
}

KernelSpec KernelSpec::matern_product(Smoothness nu, int dim, double sigma2, double lengthscale) {
    KernelSpec s = matern(nu, dim, sigma2, lengthscale);
    s.family = KernelFamily::MaternProduct;
    return s;
}

KernelSpec KernelSpec::brownian(double sigma2) {
    KernelSpec s;
    s.family = KernelFamily::BrownianMotion;
    s.dim = 1;
    s.sigma2 = sigma2;
    s.lengthscales = {1.0};
    s.validate();
    return s;
}

void KernelSpec::validate() const {
    if (dim < 1) throw std::invalid_argument("kernel: dim must be >= 1");
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
        throw std::invalid_argument("kernel: sigma2 must be positive and finite");
    if (family == KernelFamily::BrownianMotion) {
        if (dim != 1) throw std::invalid_argument("kernel: Brownian motion requires dim = 1");
        return;
    }
    if (static_cast<int>(lengthscales.size()) != dim)
        throw std::invalid_argument("kernel: need one lengthscale per dimension");
    for (double l : lengthscales)
        if (!(l > 0.0) || !std::isfinite(l))
            throw std::invalid_argument("kernel: lengthscales must be positive and finite");
}

KernelSpec KernelSpec::with_sigma2(double s) const {
    KernelSpec out = *this;
    out.sigma2 = s;
    return out;
}

KernelSpec KernelSpec::with_lengthscales(std::vector<double> ls) const {
    KernelSpec out = *this;
    out.lengthscales = std::move(ls);
    return out;
}

double kernel_eval(const KernelSpec& spec, Point x, Point y) {
    check_point(spec, x);
    check_point(spec, y);
    switch (spec.family) {
        case KernelFamily::SquareExponential: {
            double s = 0.0;
            for (int i = 0; i < spec.dim; ++i) {
                const double d = (x[i] - y[i]) / spec.lengthscales[i];
                s += d * d;
            }
            return spec.sigma2 * std::exp(-0.5 * s);
        }
        case KernelFamily::MaternIso:
            return spec.sigma2 * matern_profile(spec.nu, scaled_distance(spec, x, y));
        case KernelFamily::MaternProduct: {
            double p = spec.sigma2;
            for (int i = 0; i < spec.dim; ++i)
                p *= matern_profile(spec.nu, std::abs(x[i] - y[i]) / spec.lengthscales[i]);
            return p;
        }
        case KernelFamily::BrownianMotion:
            if (x[0] < 0.0 || y[0] < 0.0)
                throw std::domain_error("kernel: Brownian motion needs nonnegative inputs");
            return spec.sigma2 * std::min(x[0], y[0]);
    }
    return 0.0;
}

Matrix gram(const KernelSpec& spec, const NodeSet& X) {
    const Eigen::Index n = X.rows();
    if (n == 0) throw std::invalid_argument("gram: empty node set");
    Matrix K(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        K(i, i) = kernel_eval(spec, node(X, i), node(X, i));
        for (Eigen::Index j = 0; j < i; ++j) {
            if ((X.row(i).array() == X.row(j).array()).all())
                throw std::invalid_argument("gram: duplicate nodes " + std::to_string(j) + " and " +
                                            std::to_string(i));
            K(i, j) = K(j, i) = kernel_eval(spec, node(X, i), node(X, j));
        }
    }
    return K;
}

Vector cross_kernel(const KernelSpec& spec, const NodeSet& X, Point x) {
    Vector k(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) k(i) = kernel_eval(spec, node(X, i), x);
    return k;
}

KernelSpec parse_kernel(std::string_view name, int dim, double sigma2, double lengthscale) {
    auto nu_of = [&](std::string_view tail) {
        if (tail == "12") return Smoothness::Half;
        if (tail == "32") return Smoothness::ThreeHalves;
        if (tail == "52") return Smoothness::FiveHalves;
        throw ConfigError("unknown kernel '" + std::string(name) + "'");
    };
    if (name == "se") return KernelSpec::square_exponential(dim, sigma2, lengthscale);
    if (name == "brownian") {
        if (dim != 1) throw ConfigError("kernel 'brownian' is one-dimensional");
        return KernelSpec::brownian(sigma2);
    }
    if (name.starts_with("matern_prod"))
        return KernelSpec::matern_product(nu_of(name.substr(11)), dim, sigma2, lengthscale);
    if (name.starts_with("matern"))
        return KernelSpec::matern(nu_of(name.substr(6)), dim, sigma2, lengthscale);
    throw ConfigError("unknown kernel '" + std::string(name) + "'");
}

std::string kernel_name(const KernelSpec& spec) {
    auto tail = [&] {
        switch (spec.nu) {
            case Smoothness::Half: return std::string("12");
            case Smoothness::ThreeHalves: return std::string("32");
            case Smoothness::FiveHalves: return std::string("52");
        }
        return std::string();
    };
    switch (spec.family) {
        case KernelFamily::SquareExponential: return "se";
        case KernelFamily::MaternIso: return "matern" + tail();
        case KernelFamily::MaternProduct: return "matern_prod" + tail();
        case KernelFamily::BrownianMotion: return "brownian";
    }
    return "";
}

}  // namespace bq
