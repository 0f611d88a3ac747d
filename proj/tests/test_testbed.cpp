#include "bq/testbed.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace bq;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("Fourier examples") {
    const TestFunction zero = fourier_from_coefficients(Vector::Zero(25), Vector::Zero(25));
    CHECK(zero.true_integral == 0.0);
    CHECK(zero(0.37) == 0.0);
    Vector a = Vector::Zero(25);
    a(0) = 1.0;
    const TestFunction one = fourier_from_coefficients(a, Vector::Zero(25), 5.0);
    const double expect = std::sqrt(2.0) * 5.0 * std::sin(2 * kPi / 5) / (2 * kPi);
    CHECK(one.true_integral == doctest::Approx(expect).epsilon(1e-15));
    CHECK(std::abs(true_integral_oracle([&](double x) { return one(x); }, 1e-12) - expect) <= 1e-12);
    CHECK(one(0.0) == doctest::Approx(std::sqrt(2.0)));
    CHECK_THROWS((void)fourier_from_coefficients(Vector::Zero(3), Vector::Zero(2)));
}

TEST_CASE("Brownian KL examples") {
    const TestFunction zero = brownian_from_coefficients(Vector::Zero(500));
    CHECK(zero.true_integral == 0.0);
    CHECK(zero(0.8) == 0.0);
    Vector a = Vector::Zero(500);
    a(0) = 1.0;
    const TestFunction one = brownian_from_coefficients(a);
    CHECK(one.true_integral == doctest::Approx(4.0 * std::sqrt(2.0) / (kPi * kPi)).epsilon(1e-15));
    CHECK(std::abs(true_integral_oracle([&](double x) { return one(x); }, 1e-12) - one.true_integral) <= 1e-12);
    CHECK(make_brownian_path(3)(0.0) == 0.0);
}

TEST_CASE("quadrature oracle examples") {
    CHECK(std::abs(true_integral_oracle([](double x) { return x; }, 1e-12) - 0.5) <= 1e-12);
    CHECK(std::abs(true_integral_oracle([](double x) { return std::exp(x); }, 1e-12) - (std::numbers::e - 1.0)) <=
          1e-12);
    CHECK(std::abs(true_integral_oracle([](double x) { return std::sqrt(x); }, 1e-10) - 2.0 / 3.0) <= 1e-10);
    CHECK_THROWS_AS((void)true_integral_oracle([](double x) { return 1.0 / x; }, 1e-12), Error);
    CHECK_THROWS((void)true_integral_oracle([](double x) { return x; }, 0.0));
}

TEST_CASE("analytic integrals match the oracle") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        for (CoefficientScale sc : {CoefficientScale::Variance, CoefficientScale::ReciprocalVariance}) {
            const TestFunction f = make_fourier(seed, sc);
            CHECK(f.J == 25);
            CHECK(f.L == 5.0);
            CHECK(std::abs(true_integral_oracle([&](double x) { return f(x); }, 1e-10) - f.true_integral) <= 1e-9);
        }
        const TestFunction b = make_brownian_path(seed);
        CHECK(b.J == 500);
        CHECK(std::abs(true_integral_oracle([&](double x) { return b(x); }, 1e-10) - b.true_integral) <= 1e-9);
    }
}

TEST_CASE("coefficient scale and determinism") {
    const TestFunction v = make_fourier(7, CoefficientScale::Variance);
    const TestFunction r = make_fourier(7, CoefficientScale::ReciprocalVariance);
    CHECK(v.a == make_fourier(7).a);
    CHECK(v.u == make_fourier(7).u);
    CHECK(v.a != make_fourier(8).a);
    // Same normal draws, rescaled by the ratio of standard deviations 52.
    for (int j = 0; j < 25; ++j) CHECK(v.a(j) == doctest::Approx(52.0 * r.a(j)).epsilon(1e-13));
    CHECK(make_brownian_path(2).a == make_brownian_path(2).a);

    double sum2 = 0.0;
    int count = 0;
    for (std::uint64_t s = 0; s < 200; ++s) {
        const TestFunction f = make_fourier(s);
        sum2 += f.a.squaredNorm() + f.u.squaredNorm();
        count += 50;
    }
    CHECK(sum2 / count == doctest::Approx(52.0).epsilon(0.05));

    const TestFunction m1 = family_member(TestFamily::FourierSeries, 11, 1);
    const TestFunction m2 = family_member(TestFamily::FourierSeries, 11, 2);
    CHECK(m1.id == 1);
    CHECK(m2.id == 2);
    CHECK(m1.a != m2.a);
    CHECK(family_member(TestFamily::FourierSeries, 11, 1).a == m1.a);
    CHECK_THROWS((void)family_member(TestFamily::KernelCombination, 1, 1));
}

TEST_CASE("Brownian paths are Hölder one-half") {
    // E|B(x+h) − B(x)| = sqrt(2h/π) for standard Brownian motion.
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const TestFunction f = make_brownian_path(seed);
        for (int k = 6; k <= 10; ++k) {
            const double h = std::ldexp(1.0, -k);
            double s = 0.0;
            int n = 0;
            for (double x = 0.0; x + h <= 1.0; x += 1.0 / 4096) {
                s += std::abs(f(x + h) - f(x));
                ++n;
            }
            const double ratio = (s / n) / std::sqrt(2.0 * h / kPi);
            CHECK(ratio >= 1.0 / 3.0);
            CHECK(ratio <= 3.0);
        }
    }
}

TEST_CASE("kernel combinations") {
    const auto s = KernelSpec::matern(Smoothness::ThreeHalves, 1, 1.0, 0.3);
    NodeSet Z(2, 1);
    Z << 0.2, 0.6;
    Vector c(2);
    c << 1.0, -0.5;
    const TestFunction f = make_kernel_combination(s, Z, c);
    CHECK(std::abs(true_integral_oracle([&](double x) { return f(x); }, 1e-12, 64) - f.true_integral) <= 1e-11);
    const double z0[1] = {0.2}, z1[1] = {0.6};
    const double k01 = kernel_eval(s, Point(z0), Point(z1));
    CHECK(f.rkhs_norm2 == doctest::Approx(1.0 + 0.25 - k01).epsilon(1e-14));
    CHECK_THROWS((void)make_kernel_combination(KernelSpec::square_exponential(2, 1.0, 0.3), Z, c));
    CHECK(make_random_kernel_combination(s, 4, 5).c == make_random_kernel_combination(s, 4, 5).c);
    const TestFunction lin = make_linear();
    CHECK(lin(0.3) == 0.3);
    CHECK(lin.true_integral == 0.5);
}

TEST_CASE("coefficient CSV and names") {
    std::ostringstream os;
    write_coefficients_csv(os, {make_fourier(1), make_brownian_path(1, 2)});
    const std::string out = os.str();
    CHECK(out.rfind("# bq-coefficients v1\nfamily,id,j,a,u,true_integral\n", 0) == 0);
    std::size_t lines = 0;
    for (char ch : out) lines += ch == '\n';
    CHECK(lines == 2 + 25 + 500);
    for (TestFamily fam : {TestFamily::FourierSeries, TestFamily::BrownianKL, TestFamily::Linear})
        CHECK(parse_family(family_name(fam)) == fam);
    CHECK_THROWS_AS((void)parse_family("gaussian"), ConfigError);

    const TestFunction f = make_fourier(3);
    const double x[1] = {0.4};
    CHECK(f.as_function()(Point(x)) == f(0.4));
    const double xy[2] = {0.4, 0.1};
    CHECK_THROWS((void)f.eval(Point(xy)));
}
