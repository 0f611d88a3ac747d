#include "bq/acquisition.hpp"
#include "bq/design.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace bq;

namespace {

const Measure U1 = Measure::uniform(1);

SequentialState state_on(const KernelSpec& s, const NodeSet& X) {
    Dataset d;
    d.X = X;
    d.f = Vector::Zero(X.rows());
    return SequentialState::make(s, Measure::uniform(s.dim), d, NuggetPolicy::disabled());
}

NodeSet with_row(const NodeSet& X, Point x) {
    NodeSet Y(X.rows() + 1, X.cols());
    Y.topRows(X.rows()) = X;
    for (Eigen::Index j = 0; j < X.cols(); ++j) Y(X.rows(), j) = x[static_cast<std::size_t>(j)];
    return Y;
}

}  // namespace

TEST_CASE("acquisition transforms") {
    CHECK(acquisition_from_rho2(AcquisitionKind::MI, 0.0) == 0.0);
    CHECK(acquisition_from_rho2(AcquisitionKind::MI, 0.75) == doctest::Approx(std::log(2.0)));
    CHECK(acquisition_from_rho2(AcquisitionKind::MI, 1.0) == std::numeric_limits<double>::infinity());
    CHECK(acquisition_from_rho2(AcquisitionKind::IVR, 0.3) == 0.3);
    CHECK(acquisition_from_rho2(AcquisitionKind::NIV, 0.3) == doctest::Approx(-0.7));
    CHECK_THROWS((void)acquisition_from_rho2(AcquisitionKind::US, 0.3));
    for (AcquisitionKind k : {AcquisitionKind::MI, AcquisitionKind::IVR, AcquisitionKind::NIV,
                              AcquisitionKind::US, AcquisitionKind::PVC})
        CHECK(parse_acquisition(acquisition_name(k)) == k);
    CHECK_THROWS_AS((void)parse_acquisition("ei"), ConfigError);
    // MI, IVR and NIV are increasing in ρ² and so share maximizers.
    double prev[3] = {-1e9, -1e9, -1e9};
    for (double r = 0.0; r < 1.0; r += 0.01) {
        const double v[3] = {acquisition_from_rho2(AcquisitionKind::MI, r),
                             acquisition_from_rho2(AcquisitionKind::IVR, r),
                             acquisition_from_rho2(AcquisitionKind::NIV, r)};
        for (int i = 0; i < 3; ++i) {
            CHECK(v[i] > prev[i]);
            prev[i] = v[i];
        }
    }
}

TEST_CASE("squared correlation is the relative variance reduction") {
    Rng rng(3);
    const KernelSpec specs[] = {KernelSpec::square_exponential(1, 1.0, 0.3),
                                KernelSpec::matern(Smoothness::Half, 1, 2.0, 0.4),
                                KernelSpec::matern(Smoothness::FiveHalves, 1, 1.0, 0.2),
                                KernelSpec::brownian(),
                                KernelSpec::matern_product(Smoothness::ThreeHalves, 2, 1.0, 0.5),
                                KernelSpec::square_exponential(2, 1.0, 0.4)};
    for (const KernelSpec& s : specs)
        for (int t = 0; t < 20; ++t) {
            const NodeSet X = oracle::random_nodes(rng, 1 + static_cast<int>(rng.below(5)), s.dim);
            const SequentialState st = state_on(s, X);
            double xv[2] = {rng.uniform(), rng.uniform()};
            const Point x(xv, static_cast<std::size_t>(s.dim));
            const auto rho2 = squared_correlation(st, x);
            REQUIRE(rho2.has_value());
            const ConditionedSystem grown = condition(s, st.cache.P, with_row(X, x), NuggetPolicy::disabled());
            const double reduction = 1.0 - grown.sigma2 / st.cache.sigma2;
            CHECK(std::abs(*rho2 - reduction) <= 1e-7);
            CHECK(*rho2 >= 0.0);
            CHECK(*rho2 <= 1.0);
            NodeSet one(1, s.dim);
            for (int j = 0; j < s.dim; ++j) one(0, j) = xv[j];
            CHECK(std::abs(squared_correlation_batch(st, one) - *rho2) <= 1e-9);
            const PosteriorQuantities q = posterior_quantities(st, x);
            CHECK(acquisition_value(AcquisitionKind::US, st, x) == q.kd);
            CHECK(acquisition_value(AcquisitionKind::PVC, st, x) == q.kdp);
        }
}

TEST_CASE("batch correlation grows with the batch and matches the prior form") {
    Rng rng(8);
    const auto s = KernelSpec::matern(Smoothness::ThreeHalves, 1, 1.0, 0.3);
    Dataset empty;
    const SequentialState st0 = SequentialState::make(s, U1, empty, NuggetPolicy::disabled());
    const NodeSet C = oracle::random_nodes(rng, 6, 1);
    double prev = 0.0;
    for (Eigen::Index m = 1; m <= C.rows(); ++m) {
        const double r = squared_correlation_batch(st0, C.topRows(m));
        CHECK(r >= prev - 1e-12);
        prev = r;
    }
    const Vector kp = embed(s, U1, C).k_PX;
    const double prior = kp.dot(oracle::dense_inverse(gram(s, C)) * kp) / initial_variance(s, U1);
    CHECK(std::abs(prev - prior) <= 1e-9);

    const NodeSet X = oracle::random_nodes(rng, 3, 1);
    const SequentialState st = state_on(s, X);
    const ConditionedSystem grown = condition(s, U1, (NodeSet(9, 1) << X, C).finished(), NuggetPolicy::disabled());
    CHECK(std::abs(squared_correlation_batch(st, C) - (1.0 - grown.sigma2 / st.cache.sigma2)) <= 1e-7);
}

TEST_CASE("admissibility and exclusion") {
    const auto s = KernelSpec::square_exponential(1, 1.0, 0.2);
    NodeSet X(2, 1);
    X << 0.2, 0.7;
    const SequentialState st = state_on(s, X);
    const double at[1] = {0.2}, near[1] = {0.2 + 5e-9}, far[1] = {0.2 + 2e-8};
    CHECK_FALSE(admissible(st, Point(at)));
    CHECK_FALSE(admissible(st, Point(near)));
    CHECK(admissible(st, Point(far)));
    CHECK_FALSE(squared_correlation(st, Point(at)).has_value());
    CHECK(acquisition_value(AcquisitionKind::MI, st, Point(at)) == 0.0);
    CHECK(acquisition_value(AcquisitionKind::NIV, st, Point(at)) == -1.0);
    const double origin[1] = {0.0};
    CHECK_FALSE(admissible(state_on(KernelSpec::brownian(), X), Point(origin)));
    CHECK_THROWS((void)squared_correlation_batch(st, X));
}

TEST_CASE("maximizer beats a dense scan and respects exclusion") {
    Rng rng(15);
    const KernelSpec specs[] = {KernelSpec::square_exponential(1, 1.0, 0.1),
                                KernelSpec::matern(Smoothness::Half, 1, 1.0, 0.3),
                                KernelSpec::brownian()};
    for (const KernelSpec& s : specs)
        for (int t = 0; t < 5; ++t) {
            const NodeSet X = oracle::random_nodes(rng, 4, 1);
            SequentialState st = state_on(s, X);
            st.step = t;
            for (AcquisitionKind k : {AcquisitionKind::IVR, AcquisitionKind::US, AcquisitionKind::PVC}) {
                SearchConfig cfg;
                cfg.seed = static_cast<std::uint64_t>(t);
                const Vector x = maximize_acquisition(k, st, cfg);
                const Point p(x.data(), 1);
                CHECK(admissible(st, p));
                CHECK(x(0) >= 0.0);
                CHECK(x(0) <= 1.0);
                const double v = acquisition_value(k, st, p);
                double scan = -std::numeric_limits<double>::infinity();
                for (int i = 0; i <= 4000; ++i) {
                    const double y[1] = {i / 4000.0};
                    if (admissible(st, Point(y))) scan = std::max(scan, acquisition_value(k, st, Point(y)));
                }
                CHECK(v >= scan - 1e-4 * (1.0 + std::abs(scan)));
                CHECK(maximize_acquisition(k, st, cfg) == x);
            }
        }
}

TEST_CASE("MI, IVR and NIV choose the same point") {
    const auto s = KernelSpec::matern(Smoothness::FiveHalves, 1, 1.0, 0.25);
    NodeSet X(3, 1);
    X << 0.1, 0.45, 0.5;
    const SequentialState st = state_on(s, X);
    const SearchConfig cfg;
    const Vector a = maximize_acquisition(AcquisitionKind::MI, st, cfg);
    CHECK(maximize_acquisition(AcquisitionKind::IVR, st, cfg) == a);
    CHECK(maximize_acquisition(AcquisitionKind::NIV, st, cfg) == a);
}

TEST_CASE("sequential BQ loop") {
    const std::function<double(Point)> f = [](Point x) { return std::sin(4 * x[0]) + x[0]; };
    Problem prob{f, U1};
    ModelConfig model;
    model.kernel = KernelSpec::matern(Smoothness::ThreeHalves, 1, 1.0, 0.3);
    model.refit = false;
    model.search.candidates = 128;
    Stopping stop;
    stop.budget = 12;
    const SequentialResult r = run_sequential_bq(prob, model, AcquisitionKind::IVR, stop, 5);
    CHECK(r.n_init == 5);
    CHECK(r.data.size() == 12);
    CHECK(r.trace.size() == 8);
    CHECK(r.reason == StopReason::Budget);
    const NodeSet init = generate_design({DesignStrategy::RandomFromP, 1, 5, 5});
    CHECK(r.data.X.topRows(5) == init);
    for (std::size_t i = 1; i < r.trace.size(); ++i) {
        CHECK(r.trace[i].n == r.trace[i - 1].n + 1);
        CHECK(r.trace[i].sigma2 <= r.trace[i - 1].sigma2 + 1e-12);
    }
    const BQPosterior direct = bq_infer(model.kernel, U1, r.data, model.policy);
    CHECK(r.posterior.mu == doctest::Approx(direct.mu).epsilon(1e-12));
    CHECK(r.posterior.sigma2 == doctest::Approx(direct.sigma2).epsilon(1e-12));
    CHECK(std::abs(r.posterior.mu - (1.0 - std::cos(4.0)) / 4.0 - 0.5) < 1e-2);
    const SequentialResult again = run_sequential_bq(prob, model, AcquisitionKind::IVR, stop, 5);
    CHECK(again.data.X == r.data.X);
    CHECK(again.posterior.mu == r.posterior.mu);

    Stopping small;
    small.budget = 3;
    CHECK(run_sequential_bq(prob, model, AcquisitionKind::IVR, small, 5).n_init == 3);

    Stopping tol;
    tol.budget = 40;
    tol.variance_tol = r.trace[3].sigma2;
    const SequentialResult t = run_sequential_bq(prob, model, AcquisitionKind::IVR, tol, 5);
    CHECK(t.reason == StopReason::VarianceTolerance);
    CHECK(t.data.size() == 8);

    model.refit = true;
    const SequentialResult fitted = run_sequential_bq(prob, model, AcquisitionKind::MI, stop, 5);
    CHECK(fitted.data.size() == 12);
    CHECK(fitted.spec.lengthscales[0] != 0.3);

    Problem bad{[](Point x) { return x[0] > 0.5 ? std::nan("") : 1.0; }, U1};
    CHECK_THROWS_AS((void)run_sequential_bq(bad, model, AcquisitionKind::IVR, stop, 5), Error);
}
