#include "bq/kernel.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

using namespace bq;

namespace {

double k1(const KernelSpec& s, double x, double y) {
    const double a[1] = {x}, b[1] = {y};
    return kernel_eval(s, Point(a), Point(b));
}

std::vector<KernelSpec> all_families(int dim) {
    std::vector<KernelSpec> v{KernelSpec::square_exponential(dim, 1.3, 0.4)};
    for (Smoothness nu : {Smoothness::Half, Smoothness::ThreeHalves, Smoothness::FiveHalves}) {
        v.push_back(KernelSpec::matern(nu, dim, 0.7, 0.3));
        v.push_back(KernelSpec::matern_product(nu, dim, 0.7, 0.3));
    }
    if (dim == 1) v.push_back(KernelSpec::brownian(2.0));
    return v;
}

}  // namespace

TEST_CASE("kernel examples") {
    const auto se = KernelSpec::square_exponential(1, 1.0, 1.0);
    CHECK(k1(se, 0.3, 0.3) == 1.0);
    CHECK(k1(KernelSpec::brownian(), 0.3, 0.7) == 0.3);
    CHECK(k1(KernelSpec::brownian(), 0.4, 0.4) == 0.4);
    const auto m12 = KernelSpec::matern(Smoothness::Half, 1, 1.0, 0.5);
    CHECK(k1(m12, 0.1, 0.6) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(k1(m12, 0.1, 0.6) == doctest::Approx(oracle::matern_bessel(0.5, 0.5, 0.5, 1.0)).epsilon(1e-12));
}

TEST_CASE("half-integer Matérn matches the Bessel form") {
    for (double nu : {0.5, 1.5, 2.5}) {
        const Smoothness s = nu == 0.5 ? Smoothness::Half
                             : nu == 1.5 ? Smoothness::ThreeHalves
                                         : Smoothness::FiveHalves;
        for (double l : {0.05, 0.3, 2.0})
            for (double r : {1e-6, 0.01, 0.2, 0.7, 1.0}) {
                const auto spec = KernelSpec::matern(s, 1, 1.7, l);
                CHECK(k1(spec, 0.0, r) ==
                      doctest::Approx(oracle::matern_bessel(nu, r, l, 1.7)).epsilon(1e-10));
            }
    }
}

TEST_CASE("gram examples") {
    NodeSet X(1, 1);
    X << 0.42;
    const auto spec = KernelSpec::matern(Smoothness::FiveHalves, 1, 2.5, 0.3);
    const Matrix K1 = gram(spec, X);
    CHECK(K1.rows() == 1);
    CHECK(K1(0, 0) == 2.5);

    NodeSet Y(2, 1);
    Y << 0.0, 1.0;
    const Matrix K = gram(KernelSpec::square_exponential(1, 1.0, 1.0), Y);
    CHECK(K(0, 0) == 1.0);
    CHECK(K(1, 1) == 1.0);
    CHECK(K(0, 1) == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));
    CHECK(K(1, 0) == K(0, 1));

    NodeSet Z(2, 1);
    Z << 0.5, 1.0;
    const Matrix B = gram(KernelSpec::brownian(), Z);
    CHECK(B(0, 0) == 0.5);
    CHECK(B(0, 1) == 0.5);
    CHECK(B(1, 0) == 0.5);
    CHECK(B(1, 1) == 1.0);
}

TEST_CASE("kernel errors") {
    const auto se2 = KernelSpec::square_exponential(2, 1.0, 1.0);
    const double a[1] = {0.1}, b[2] = {0.1, 0.2};
    CHECK_THROWS_AS((void)kernel_eval(se2, Point(a), Point(b)), std::invalid_argument);
    const double nan2[2] = {std::numeric_limits<double>::quiet_NaN(), 0.0};
    CHECK_THROWS_AS((void)kernel_eval(se2, Point(nan2), Point(b)), std::domain_error);
    CHECK_THROWS_AS((void)k1(KernelSpec::brownian(), -0.1, 0.2), std::domain_error);

    NodeSet dup(2, 1);
    dup << 0.3, 0.3;
    CHECK_THROWS_AS((void)gram(KernelSpec::brownian(), dup), std::invalid_argument);
    CHECK_THROWS_AS((void)gram(se2, NodeSet(0, 2)), std::invalid_argument);

    KernelSpec bad = KernelSpec::square_exponential(1, 1.0, 1.0);
    bad.sigma2 = 0.0;
    CHECK_THROWS((void)bad.validate());
    bad.sigma2 = 1.0;
    bad.lengthscales = {-1.0};
    CHECK_THROWS((void)bad.validate());
    KernelSpec bm = KernelSpec::brownian();
    bm.dim = 2;
    CHECK_THROWS((void)bm.validate());
}

TEST_CASE("symmetry, Cauchy–Schwarz and PSD over random node sets") {
    Rng rng(11);
    for (int dim : {1, 2, 3})
        for (const KernelSpec& spec : all_families(dim)) {
            for (int trial = 0; trial < 100; ++trial) {
                const int n = 1 + static_cast<int>(rng.below(12));
                const NodeSet X = oracle::random_nodes(rng, n, dim);
                const Matrix K = gram(spec, X);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        CHECK(kernel_eval(spec, node(X, i), node(X, j)) ==
                              kernel_eval(spec, node(X, j), node(X, i)));
                        CHECK(K(i, j) <= std::sqrt(K(i, i) * K(j, j)) * (1 + 1e-15));
                    }
                const Eigen::SelfAdjointEigenSolver<Matrix> es(K);
                CHECK(es.eigenvalues().minCoeff() >= -1e-10 * K.trace());
            }
        }
}

TEST_CASE("product structure") {
    Rng rng(5);
    const std::vector<double> ls{0.2, 0.9, 0.45};
    KernelSpec se = KernelSpec::square_exponential(3, 1.6, 1.0).with_lengthscales(ls);
    KernelSpec mp = KernelSpec::matern_product(Smoothness::ThreeHalves, 3, 1.6, 1.0).with_lengthscales(ls);
    for (int t = 0; t < 200; ++t) {
        double x[3], y[3];
        for (int i = 0; i < 3; ++i) {
            x[i] = rng.uniform();
            y[i] = rng.uniform();
        }
        double pse = 1.6, pm = 1.6;
        for (int i = 0; i < 3; ++i) {
            pse *= k1(KernelSpec::square_exponential(1, 1.0, ls[i]), x[i], y[i]);
            pm *= k1(KernelSpec::matern(Smoothness::ThreeHalves, 1, 1.0, ls[i]), x[i], y[i]);
        }
        CHECK(std::abs(kernel_eval(se, Point(x), Point(y)) - pse) <= 1e-12);
        CHECK(std::abs(kernel_eval(mp, Point(x), Point(y)) - pm) <= 1e-12);
    }
    for (Smoothness nu : {Smoothness::Half, Smoothness::ThreeHalves, Smoothness::FiveHalves}) {
        const auto iso = KernelSpec::matern(nu, 1, 0.8, 0.27);
        const auto prod = KernelSpec::matern_product(nu, 1, 0.8, 0.27);
        for (int t = 0; t < 100; ++t) {
            const double x = rng.uniform(), y = rng.uniform();
            CHECK(std::abs(k1(iso, x, y) - k1(prod, x, y)) <= 1e-12);
        }
    }
}

TEST_CASE("near-coincident points keep full precision") {
    const auto m52 = KernelSpec::matern(Smoothness::FiveHalves, 2, 1.0, 0.5);
    const double x[2] = {0.3, 0.3}, y[2] = {0.3 + 1e-9, 0.3};
    const double v = kernel_eval(m52, Point(x), Point(y));
    CHECK(v < 1.0);
    CHECK(v == doctest::Approx(oracle::matern_bessel(2.5, 1e-9, 0.5, 1.0)).epsilon(1e-15));
}

TEST_CASE("kernel names round-trip") {
    for (const char* name : {"se", "matern12", "matern32", "matern52", "matern_prod12",
                             "matern_prod32", "matern_prod52", "brownian"})
        CHECK(kernel_name(parse_kernel(name)) == name);
    CHECK_THROWS_AS((void)parse_kernel("matern72"), ConfigError);
    CHECK_THROWS_AS((void)parse_kernel("rbf"), ConfigError);
}
