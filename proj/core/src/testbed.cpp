#include "bq/testbed.hpp"

#include "bq/embedding.hpp"
#include "bq/integrate.hpp"
#include "bq/random.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>

namespace bq {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kPi = std::numbers::pi;

}  // namespace

double TestFunction::operator()(double x) const {
    switch (family) {
        case TestFamily::FourierSeries: {
            double s = 0.0;
            for (int j = 1; j <= J; ++j) {
                const double t = 2.0 * kPi * j * x / L;
                s += a(j - 1) * std::cos(t) + u(j - 1) * std::sin(t);
            }
            return kSqrt2 * s;
        }
        case TestFamily::BrownianKL: {
            double s = 0.0;
            for (int j = 1; j <= J; ++j) {
                const double w = (j - 0.5) * kPi;
                s += a(j - 1) * std::sin(w * x) / w;
            }
            return kSqrt2 * s;
        }
        case TestFamily::KernelCombination: {
            double s = 0.0;
            const double xv[1] = {x};
            for (Eigen::Index i = 0; i < centers.rows(); ++i)
                s += c(i) * kernel_eval(kernel, Point(xv), node(centers, i));
            return s;
        }
        case TestFamily::Linear: return x;
    }
    return 0.0;
}

double TestFunction::eval(Point x) const {
    if (x.size() != 1) throw std::invalid_argument("test function: families are univariate");
    return (*this)(x[0]);
}

std::function<double(Point)> TestFunction::as_function() const {
    return [f = *this](Point x) { return f.eval(x); };
}

TestFunction fourier_from_coefficients(Vector a, Vector u, double L, int id) {
    if (a.size() != u.size()) throw std::invalid_argument("fourier: coefficient lengths differ");
    TestFunction f;
    f.family = TestFamily::FourierSeries;
    f.J = static_cast<int>(a.size());
    f.L = L;
    f.id = id;
    double I = 0.0;
    for (int j = 1; j <= f.J; ++j) {
        const double w = 2.0 * kPi * j / L;
        I += a(j - 1) * std::sin(w) / w + u(j - 1) * (1.0 - std::cos(w)) / w;
    }
    f.true_integral = kSqrt2 * I;
    f.a = std::move(a);
    f.u = std::move(u);
    return f;
}

TestFunction make_fourier(std::uint64_t seed, CoefficientScale scale, int id) {
    const double var = 2.0 * (kFourierTerms + 1);
    const double sd = std::sqrt(scale == CoefficientScale::Variance ? var : 1.0 / var);
    Rng rng(derive_seed(seed, "fourier"));
    Vector a(kFourierTerms), u(kFourierTerms);
    for (int j = 0; j < kFourierTerms; ++j) {
        a(j) = sd * rng.normal();
        u(j) = sd * rng.normal();
    }
    return fourier_from_coefficients(std::move(a), std::move(u), kFourierPeriod, id);
}

TestFunction brownian_from_coefficients(Vector a, int id) {
    TestFunction f;
    f.family = TestFamily::BrownianKL;
    f.J = static_cast<int>(a.size());
    f.id = id;
    double I = 0.0;
    for (int j = 1; j <= f.J; ++j) {
        const double w = (j - 0.5) * kPi;
        I += a(j - 1) / (w * w);
    }
    f.true_integral = kSqrt2 * I;
    f.a = std::move(a);
    return f;
}

TestFunction make_brownian_path(std::uint64_t seed, int id) {
    Rng rng(derive_seed(seed, "brownian-kl"));
    Vector a(kBrownianTerms);
    for (int j = 0; j < kBrownianTerms; ++j) a(j) = rng.normal();
    return brownian_from_coefficients(std::move(a), id);
}

TestFunction make_kernel_combination(const KernelSpec& spec, NodeSet centers, Vector c, int id) {
    if (spec.dim != 1) throw std::invalid_argument("kernel combination: univariate kernels only");
    if (centers.rows() != c.size()) throw std::invalid_argument("kernel combination: size mismatch");
    TestFunction f;
    f.family = TestFamily::KernelCombination;
    f.kernel = spec;
    f.id = id;
    const Measure P = Measure::uniform(1);
    const EmbeddingVector e = embed(spec, P, centers);
    f.true_integral = c.dot(e.k_PX);
    f.rkhs_norm2 = c.dot(gram(spec, centers) * c);
    f.centers = std::move(centers);
    f.c = std::move(c);
    return f;
}

TestFunction make_random_kernel_combination(const KernelSpec& spec, std::uint64_t seed, int terms,
                                            int id) {
    Rng rng(derive_seed(seed, "kernel-combination"));
    NodeSet Z(terms, 1);
    Vector c(terms);
    for (int i = 0; i < terms; ++i) {
        Z(i, 0) = rng.uniform();
        c(i) = rng.normal();
    }
    return make_kernel_combination(spec, std::move(Z), std::move(c), id);
}

TestFunction make_linear() {
    TestFunction f;
    f.family = TestFamily::Linear;
    f.true_integral = 0.5;
    return f;
}

TestFunction family_member(TestFamily family, std::uint64_t seed, int t, CoefficientScale scale) {
    const std::uint64_t s = derive_seed(seed, "test-function", static_cast<std::uint64_t>(t));
    switch (family) {
        case TestFamily::FourierSeries: return make_fourier(s, scale, t);
        case TestFamily::BrownianKL: return make_brownian_path(s, t);
        case TestFamily::Linear: {
            TestFunction f = make_linear();
            f.id = t;
            return f;
        }
        case TestFamily::KernelCombination: break;
    }
    throw std::invalid_argument("family_member: kernel combinations need a kernel");
}

double true_integral_oracle(const std::function<double(double)>& f, double tol, int panels) {
    if (panels < 1) throw std::invalid_argument("true_integral_oracle: panels must be >= 1");
    std::vector<double> cuts;
    for (int i = 1; i < panels; ++i) cuts.push_back(static_cast<double>(i) / panels);
    return adaptive_integrate(f, 0.0, 1.0, tol, cuts, 20000);
}

void write_coefficients_csv(std::ostream& os, const std::vector<TestFunction>& fns) {
    os << "# bq-coefficients v1\n";
    os << "family,id,j,a,u,true_integral\n";
    const auto old = os.precision(17);
    for (const TestFunction& f : fns)
        for (int j = 1; j <= f.J; ++j)
            os << family_name(f.family) << ',' << f.id << ',' << j << ',' << f.a(j - 1) << ','
               << (f.u.size() ? f.u(j - 1) : 0.0) << ',' << f.true_integral << '\n';
    os.precision(old);
}

TestFamily parse_family(std::string_view name) {
    if (name == "fourier") return TestFamily::FourierSeries;
    if (name == "brownian_kl") return TestFamily::BrownianKL;
    if (name == "linear") return TestFamily::Linear;
    throw ConfigError("unknown test family '" + std::string(name) + "'");
}

std::string family_name(TestFamily f) {
    switch (f) {
        case TestFamily::FourierSeries: return "fourier";
        case TestFamily::BrownianKL: return "brownian_kl";
        case TestFamily::KernelCombination: return "kernel_combination";
        case TestFamily::Linear: return "linear";
    }
    return "";
}

}  // namespace bq
