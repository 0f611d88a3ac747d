#include "bq/acquisition.hpp"

#include "bq/design.hpp"
#include "bq/optimize.hpp"
#include "bq/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bq {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

bool lex_less(const Vector& a, const Vector& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

}  // namespace

AcquisitionKind parse_acquisition(std::string_view name) {
    if (name == "mi") return AcquisitionKind::MI;
    if (name == "ivr") return AcquisitionKind::IVR;
    if (name == "niv") return AcquisitionKind::NIV;
    if (name == "us") return AcquisitionKind::US;
    if (name == "pvc") return AcquisitionKind::PVC;
    throw ConfigError("unknown acquisition '" + std::string(name) + "'");
}

std::string acquisition_name(AcquisitionKind k) {
    switch (k) {
        case AcquisitionKind::MI: return "mi";
        case AcquisitionKind::IVR: return "ivr";
        case AcquisitionKind::NIV: return "niv";
        case AcquisitionKind::US: return "us";
        case AcquisitionKind::PVC: return "pvc";
    }
    return "";
}

SequentialState SequentialState::make(const KernelSpec& spec, const Measure& P, Dataset data,
                                      const NuggetPolicy& policy) {
    SequentialState s;
    if (data.X.cols() == 0) data.X.resize(0, spec.dim);
    s.cache = condition(spec, P, data.X, policy);
    s.data = std::move(data);
    s.hyper.spec = spec;
    return s;
}

PosteriorQuantities posterior_quantities(const SequentialState& state, Point x) {
    const ConditionedSystem& cs = state.cache;
    const double kxx = kernel_eval(cs.spec, x, x);
    const double kp = kernel_mean(cs.spec, cs.P, x);
    if (cs.X.rows() == 0) return {kp, kxx};
    const Vector kx = cross_kernel(cs.spec, cs.X, x);
    const Vector v = cs.sys.solve_lower(kx);
    return {kp - kx.dot(cs.w), std::max(0.0, kxx - v.squaredNorm())};
}

bool admissible(const SequentialState& state, Point x) {
    const NodeSet& X = state.data.X;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        double d2 = 0.0;
        for (Eigen::Index j = 0; j < X.cols(); ++j) {
            const double t = X(i, j) - x[static_cast<std::size_t>(j)];
            d2 += t * t;
        }
        if (std::sqrt(d2) < state.exclusion_radius) return false;
    }
    return kernel_eval(state.cache.spec, x, x) > 0.0;
}

std::optional<double> squared_correlation(const SequentialState& state, Point x) {
    if (!admissible(state, x)) return std::nullopt;
    const PosteriorQuantities q = posterior_quantities(state, x);
    const double denom = state.cache.sigma2 * q.kd;
    if (!(denom > 0.0)) return std::nullopt;
    return std::clamp(q.kdp * q.kdp / denom, 0.0, 1.0);
}

double squared_correlation_batch(const SequentialState& state, const NodeSet& candidates) {
    const ConditionedSystem& cs = state.cache;
    const Eigen::Index m = candidates.rows();
    if (m == 0) throw std::invalid_argument("squared_correlation_batch: no candidates");
    if (!(cs.sigma2 > 0.0)) return 0.0;
    Vector kdp(m);
    Matrix KD(m, m);
    Matrix V(cs.X.rows(), m);
    for (Eigen::Index a = 0; a < m; ++a) {
        if (!admissible(state, node(candidates, a)))
            throw std::invalid_argument("squared_correlation_batch: candidate coincides with a node");
        kdp(a) = kernel_mean(cs.spec, cs.P, node(candidates, a));
        if (cs.X.rows() > 0) {
            const Vector kx = cross_kernel(cs.spec, cs.X, node(candidates, a));
            kdp(a) -= kx.dot(cs.w);
            V.col(a) = cs.sys.solve_lower(kx);
        }
    }
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b <= a; ++b) {
            double v = kernel_eval(cs.spec, node(candidates, a), node(candidates, b));
            if (cs.X.rows() > 0) v -= V.col(a).dot(V.col(b));
            KD(a, b) = KD(b, a) = v;
        }
    const FactoredSystem sys = cholesky_with_nugget(KD, NuggetPolicy::disabled());
    const double rho2 = sys.solve_lower(kdp).squaredNorm() / cs.sigma2;
    return std::clamp(rho2, 0.0, 1.0);
}

double acquisition_from_rho2(AcquisitionKind kind, double rho2) {
    switch (kind) {
        case AcquisitionKind::MI:
            return rho2 >= 1.0 ? std::numeric_limits<double>::infinity() : -0.5 * std::log1p(-rho2);
        case AcquisitionKind::IVR: return rho2;
        case AcquisitionKind::NIV: return rho2 - 1.0;
        default: break;
    }
    throw std::invalid_argument("acquisition_from_rho2: US and PVC are not functions of rho^2");
}

double acquisition_value(AcquisitionKind kind, const SequentialState& state, Point x) {
    const double p = state.cache.P.density(x);
    switch (kind) {
        case AcquisitionKind::US: return posterior_quantities(state, x).kd * p * p;
        case AcquisitionKind::PVC: return posterior_quantities(state, x).kdp * p;
        default: break;
    }
    return acquisition_from_rho2(kind, squared_correlation(state, x).value_or(0.0));
}

Vector maximize_acquisition(AcquisitionKind kind, const SequentialState& state,
                            const SearchConfig& cfg) {
    const int d = state.cache.spec.dim;
    if (cfg.candidates < 1) throw std::invalid_argument("maximize_acquisition: no candidates");
    // Cranley–Patterson shifted Sobol points, so successive steps do not
    // revisit the same lattice.
    NodeSet cand = sobol_points(d, cfg.candidates);
    Rng rng(derive_seed(cfg.seed, "acq-shift", static_cast<std::uint64_t>(state.step)));
    for (int j = 0; j < d; ++j) {
        const double shift = rng.uniform();
        for (Eigen::Index i = 0; i < cand.rows(); ++i) {
            double v = cand(i, j) + shift;
            cand(i, j) = v >= 1.0 ? v - 1.0 : v;
        }
    }

    auto score = [&](const Vector& x) {
        const Point p(x.data(), static_cast<std::size_t>(x.size()));
        if (!admissible(state, p)) return kNegInf;
        return acquisition_value(kind, state, p);
    };

    struct Scored {
        Vector x;
        double v;
    };
    std::vector<Scored> scored;
    for (Eigen::Index i = 0; i < cand.rows(); ++i) {
        Vector x = cand.row(i).transpose();
        const double v = score(x);
        if (v > kNegInf) scored.push_back({std::move(x), v});
    }
    if (scored.empty()) throw Error("maximize_acquisition: every candidate is excluded");
    auto better = [](const Scored& a, const Scored& b) {
        if (a.v != b.v) return a.v > b.v;
        return lex_less(a.x, b.x);
    };
    std::sort(scored.begin(), scored.end(), better);

    const double delta = 1.0 / std::pow(static_cast<double>(cfg.candidates), 1.0 / d);
    Scored best = scored.front();
    const int k = std::min<int>(cfg.top_k, static_cast<int>(scored.size()));
    for (int t = 0; t < k; ++t) {
        Scored cur = scored[static_cast<std::size_t>(t)];
        const int sweeps = d == 1 ? 1 : 2;
        for (int sweep = 0; sweep < sweeps; ++sweep)
            for (int j = 0; j < d; ++j) {
                Vector probe = cur.x;
                const double lo = std::max(0.0, cur.x(j) - delta);
                const double hi = std::min(1.0, cur.x(j) + delta);
                const ScalarOptimum opt = golden_section_max(
                    [&](double s) {
                        probe(j) = s;
                        return score(probe);
                    },
                    lo, hi, cfg.refine_iters);
                if (opt.value > cur.v) {
                    cur.x(j) = opt.x;
                    cur.v = opt.value;
                }
            }
        if (better(cur, best)) best = cur;
    }
    return best.x;
}

SequentialResult run_sequential_bq(const Problem& problem, const ModelConfig& model,
                                   AcquisitionKind kind, const Stopping& stopping,
                                   std::uint64_t seed) {
    if (stopping.budget < 1) throw std::invalid_argument("run_sequential_bq: budget must be >= 1");
    const int d = model.kernel.dim;
    SequentialResult out;
    out.n_init = std::min(stopping.budget, kSequentialInitMax);

    auto evaluate = [&](Point x, int step) {
        const double v = problem.f(x);
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "run_sequential_bq: integrand returned " << v << " at step " << step << " (x = ";
            for (std::size_t j = 0; j < x.size(); ++j) os << (j ? ", " : "") << x[j];
            os << ")";
            throw Error(os.str());
        }
        return v;
    };

    Dataset data;
    data.X = generate_design({DesignStrategy::RandomFromP, d, out.n_init, seed});
    data.f.resize(out.n_init);
    for (int i = 0; i < out.n_init; ++i) data.f(i) = evaluate(node(data.X, i), 0);

    KernelSpec spec = model.kernel;
    auto refit = [&] {
        if (!model.refit) return;
        FitOptions fo = model.fit;
        fo.policy = model.policy;
        spec = fit_ml(spec, data, fo).spec;
    };

    refit();
    SequentialState state = SequentialState::make(spec, problem.P, data, model.policy);
    BQPosterior post = bq_posterior(state.cache, data);
    out.trace.push_back({static_cast<int>(data.size()), post.mu, post.sigma2, spec, post.lambda_used});

    auto tolerance_met = [&] { return stopping.variance_tol && post.sigma2 <= *stopping.variance_tol; };
    int step = 0;
    while (static_cast<int>(data.size()) < stopping.budget && !tolerance_met()) {
        state.step = step;
        SearchConfig sc = model.search;
        sc.seed = derive_seed(seed, "acq", static_cast<std::uint64_t>(step));
        const Vector x = maximize_acquisition(kind, state, sc);
        const Point p(x.data(), static_cast<std::size_t>(x.size()));
        ++step;
        data.append(p, evaluate(p, step));
        refit();
        state = SequentialState::make(spec, problem.P, data, model.policy);
        state.step = step;
        post = bq_posterior(state.cache, data);
        out.trace.push_back(
            {static_cast<int>(data.size()), post.mu, post.sigma2, spec, post.lambda_used});
    }
    out.reason = tolerance_met() ? StopReason::VarianceTolerance : StopReason::Budget;
    out.data = std::move(data);
    out.posterior = post;
    out.spec = spec;
    return out;
}

}  // namespace bq
