#include "bq/hyper.hpp"
#include "bq/optimize.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <Eigen/SVD>

#include <cmath>

using namespace bq;

namespace {

Dataset sample(Rng& rng, int n, const std::function<double(double)>& f) {
    Dataset d;
    d.X = oracle::random_nodes(rng, n, 1);
    d.f.resize(n);
    for (int i = 0; i < n; ++i) d.f(i) = f(d.X(i, 0));
    return d;
}

Matrix regularized(const KernelSpec& s, const NodeSet& X, double lambda) {
    Matrix A = gram(s, X);
    A.diagonal().array() += lambda;
    return A;
}

}  // namespace

TEST_CASE("log marginal matches a dense evaluation") {
    Rng rng(5);
    const KernelSpec specs[] = {KernelSpec::square_exponential(1, 1.3, 0.2),
                                KernelSpec::matern(Smoothness::ThreeHalves, 1, 0.7, 0.4),
                                KernelSpec::brownian(2.0)};
    for (const KernelSpec& s : specs)
        for (int t = 0; t < 10; ++t) {
            const Dataset d = sample(rng, 7, [&](double x) { return std::sin(5 * x) + 0.3 * x; });
            const FactoredSystem sys = cholesky_with_nugget(gram(s, d.X), NuggetPolicy{});
            const double ref = oracle::log_marginal_dense(regularized(s, d.X, sys.lambda_used()), d.f);
            CHECK(log_marginal(s, PriorMean::zero(), d, NuggetPolicy{}) == doctest::Approx(ref).epsilon(1e-9));

            const FactoredSystem unit = cholesky_with_nugget(gram(s.with_sigma2(1.0), d.X), NuggetPolicy{});
            const Matrix A = regularized(s.with_sigma2(1.0), d.X, unit.lambda_used());
            // The dense inverse is only accurate to roughly cond(A)·ε.
            const Vector sv = Eigen::JacobiSVD<Matrix>(A).singularValues();
            const double slack = std::max(1e-9, 1e-14 * sv(0) / sv(sv.size() - 1));
            for (double s2 : {1e-3, 0.5, 40.0}) {
                const double ref2 = oracle::log_marginal_dense(s2 * A, d.f);
                CHECK(std::abs(log_marginal_scaled(unit, d.f, s2) - ref2) <= slack * (1.0 + std::abs(ref2)));
            }
        }
}

TEST_CASE("closed-form scale is the likelihood maximizer") {
    Rng rng(77);
    for (int t = 0; t < 20; ++t) {
        const KernelSpec unit = KernelSpec::matern(Smoothness::FiveHalves, 1, 1.0, 0.05 + rng.uniform());
        const double amp = std::exp(3.0 * rng.normal());
        const Dataset d = sample(rng, 3 + static_cast<int>(rng.below(15)),
                                 [&](double x) { return amp * std::cos(7 * x + rng.uniform()); });
        const double s2 = ml_scale_closed_form(unit, d, NuggetPolicy{});
        const FactoredSystem sys = cholesky_with_nugget(gram(unit, d.X), NuggetPolicy{});
        const double ref = oracle::argmax_scale_numeric(regularized(unit, d.X, sys.lambda_used()), d.f);
        CHECK(std::abs(s2 - ref) <= 1e-6 * ref);
    }
    Dataset d;
    d.X.resize(1, 1);
    d.X << 0.4;
    d.f = Vector::Constant(1, 3.0);
    CHECK_THROWS_AS((void)ml_scale_closed_form(KernelSpec::brownian(2.0), d, NuggetPolicy{}),
                    std::invalid_argument);
}

TEST_CASE("fit_ml beats a length-scale scan") {
    Rng rng(9);
    for (int t = 0; t < 5; ++t) {
        const Dataset d = sample(rng, 12, [](double x) { return std::sin(9 * x) * std::exp(x); });
        const KernelSpec init = KernelSpec::square_exponential(1, 1.0, 0.2);
        FitOptions opts;
        opts.seed = static_cast<std::uint64_t>(t);
        const HyperParams hp = fit_ml(init, d, opts);
        const double l = hp.spec.lengthscales[0];
        CHECK(l >= opts.bounds.lengthscale.lo);
        CHECK(l <= opts.bounds.lengthscale.hi);
        CHECK(hp.spec.sigma2 >= opts.bounds.sigma2.lo);
        CHECK(hp.spec.sigma2 <= opts.bounds.sigma2.hi);
        // The reported value is the likelihood of the reported parameters
        // under the regularized unit-scale system.
        const KernelSpec unit = hp.spec.with_sigma2(1.0);
        const FactoredSystem sys = cholesky_with_nugget(gram(unit, d.X), opts.policy);
        CHECK(hp.log_marginal == doctest::Approx(log_marginal_scaled(sys, d.f, hp.spec.sigma2)).epsilon(1e-12));
        CHECK(hp.spec.sigma2 == doctest::Approx(ml_scale_closed_form(unit, d, opts.policy)).epsilon(1e-12));

        for (double z = std::log(1e-3); z <= std::log(1e3); z += 0.1) {
            const KernelSpec u = init.with_lengthscales({std::exp(z)});
            double v = -std::numeric_limits<double>::infinity();
            try {
                const FactoredSystem s2 = cholesky_with_nugget(gram(u, d.X), opts.policy);
                const double q = ml_scale_closed_form(u, d, opts.policy);
                v = log_marginal_scaled(s2, d.f, opts.bounds.sigma2.clamp(q));
            } catch (const FactorizationError&) {
            }
            CHECK(hp.log_marginal >= v - 1e-6 * (1.0 + std::abs(v)));
        }
        CHECK(hp.theta().at("lengthscale_0") == l);
    }
}

TEST_CASE("fit_ml is deterministic and restart-monotone") {
    Rng rng(10);
    const Dataset d = sample(rng, 10, [](double x) { return x * x - std::cos(4 * x); });
    const KernelSpec init = KernelSpec::matern(Smoothness::ThreeHalves, 1, 1.0, 0.5);
    FitOptions opts;
    opts.seed = 42;
    const HyperParams a = fit_ml(init, d, opts), b = fit_ml(init, d, opts);
    CHECK(a.spec.lengthscales == b.spec.lengthscales);
    CHECK(a.spec.sigma2 == b.spec.sigma2);
    CHECK(a.log_marginal == b.log_marginal);
    double prev = -std::numeric_limits<double>::infinity();
    for (int r = 1; r <= 6; ++r) {
        opts.restarts = r;
        const double v = fit_ml(init, d, opts).log_marginal;
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("joint and profiled scale searches agree") {
    Rng rng(12);
    const Dataset d = sample(rng, 9, [](double x) { return 3.0 * std::sin(6 * x); });
    const KernelSpec init = KernelSpec::square_exponential(1, 1.0, 0.3);
    FitOptions prof;
    FitOptions joint;
    joint.profile_scale = false;
    joint.max_evaluations = 2000;
    const HyperParams a = fit_ml(init, d, prof), b = fit_ml(init, d, joint);
    CHECK(b.log_marginal <= a.log_marginal + 1e-6);
    CHECK(b.log_marginal >= a.log_marginal - 1e-3);
}

TEST_CASE("fit_ml edge cases") {
    Dataset one;
    one.X.resize(1, 1);
    one.X << 0.3;
    one.f = Vector::Constant(1, 2.0);
    const HyperParams h = fit_ml(KernelSpec::square_exponential(1, 1.0, 0.2), one, FitOptions{});
    CHECK(h.spec.lengthscales[0] == 0.2);
    CHECK(h.spec.sigma2 == doctest::Approx(4.0 / (1.0 + 1.01e-8)).epsilon(1e-12));

    Rng rng(1);
    const Dataset d = sample(rng, 6, [](double x) { return x; });
    const HyperParams bm = fit_ml(KernelSpec::brownian(), d, FitOptions{});
    CHECK(bm.evaluations == 2);
    CHECK(bm.spec.sigma2 == doctest::Approx(ml_scale_closed_form(KernelSpec::brownian(), d, NuggetPolicy{})));

    Dataset twin;
    twin.X.resize(2, 1);
    twin.X << 0.5, 0.5 + 1e-12;
    twin.f = Vector::Ones(2);
    FitOptions strict;
    strict.policy = NuggetPolicy::disabled();
    CHECK_THROWS_AS((void)fit_ml(KernelSpec::square_exponential(1, 1.0, 1.0), twin, strict), FactorizationError);

    FitOptions bad;
    bad.restarts = 0;
    CHECK_THROWS((void)fit_ml(KernelSpec::brownian(), d, bad));
    bad = FitOptions{};
    bad.bounds.lengthscale = {2.0, 1.0};
    CHECK_THROWS((void)fit_ml(KernelSpec::brownian(), d, bad));
}

TEST_CASE("Nelder-Mead and golden section") {
    const auto rosen = [](const std::vector<double>& z) {
        return -(100.0 * std::pow(z[1] - z[0] * z[0], 2) + std::pow(1.0 - z[0], 2));
    };
    NelderMeadOptions opts;
    opts.max_evaluations = 4000;
    opts.initial_step = 0.5;
    const OptimumResult r = nelder_mead_max(rosen, {-1.2, 1.0}, opts);
    CHECK(std::abs(r.x[0] - 1.0) < 1e-3);
    CHECK(std::abs(r.x[1] - 1.0) < 2e-3);
    CHECK(r.value >= rosen({-1.2, 1.0}));
    CHECK(r.evaluations <= 4000);

    const ScalarOptimum g = golden_section_max([](double x) { return -std::pow(x - 0.3, 2); }, 0.0, 1.0, 60);
    CHECK(std::abs(g.x - 0.3) < 1e-8);
    const ScalarOptimum e = golden_section_max([](double x) { return x; }, 0.0, 1.0, 30);
    CHECK(e.x == 1.0);
}
