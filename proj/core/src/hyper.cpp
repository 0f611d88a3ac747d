#include "bq/hyper.hpp"

#include "bq/optimize.hpp"
#include "bq/random.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace bq {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Vector residual(const Dataset& data, const PriorMean& m) {
    Vector r(data.size());
    for (Eigen::Index i = 0; i < data.size(); ++i) r(i) = data.f(i) - m(node(data.X, i));
    return r;
}

}  // namespace

void HyperBounds::validate() const {
    for (const Interval* iv : {&lengthscale, &sigma2})
        if (!(iv->lo > 0.0) || !(iv->hi >= iv->lo))
            throw std::invalid_argument("hyper: bounds must be positive with lo <= hi");
}

std::map<std::string, double> HyperParams::theta() const {
    std::map<std::string, double> t{{"sigma2", spec.sigma2}};
    if (spec.has_lengthscales())
        for (std::size_t i = 0; i < spec.lengthscales.size(); ++i)
            t["lengthscale_" + std::to_string(i)] = spec.lengthscales[i];
    return t;
}

double log_marginal_scaled(const FactoredSystem& unit, const Vector& r, double sigma2) {
    const double n = static_cast<double>(r.size());
    const Vector v = unit.solve_lower(r);
    return -0.5 * v.squaredNorm() / sigma2 - 0.5 * (n * std::log(sigma2) + unit.log_det()) -
           0.5 * n * std::log(2.0 * std::numbers::pi);
}

double log_marginal(const KernelSpec& spec, const PriorMean& prior_mean, const Dataset& data,
                    const NuggetPolicy& policy) {
    data.validate();
    if (data.size() == 0) throw std::invalid_argument("log_marginal: empty dataset");
    const FactoredSystem sys = cholesky_with_nugget(gram(spec, data.X), policy);
    return log_marginal_scaled(sys, residual(data, prior_mean), 1.0);
}

double ml_scale_closed_form(const KernelSpec& spec_unit_scale, const Dataset& data,
                            const NuggetPolicy& policy, const PriorMean& prior_mean) {
    if (spec_unit_scale.sigma2 != 1.0)
        throw std::invalid_argument("ml_scale_closed_form: spec must have sigma2 = 1");
    data.validate();
    if (data.size() == 0) throw std::invalid_argument("ml_scale_closed_form: empty dataset");
    const FactoredSystem sys = cholesky_with_nugget(gram(spec_unit_scale, data.X), policy);
    const Vector v = sys.solve_lower(residual(data, prior_mean));
    return v.squaredNorm() / static_cast<double>(data.size());
}

HyperParams fit_ml(const KernelSpec& initial, const Dataset& data, const FitOptions& opts) {
    initial.validate();
    opts.bounds.validate();
    data.validate();
    if (opts.restarts < 1) throw std::invalid_argument("fit_ml: restarts must be >= 1");
    if (data.size() < 1) throw std::invalid_argument("fit_ml: empty dataset");

    const HyperBounds& bd = opts.bounds;
    const Vector r = residual(data, opts.prior_mean);
    const int n_ls = initial.has_lengthscales() ? initial.dim : 0;
    // Length-scales are identifiable only from two or more points.
    const bool search_ls = n_ls > 0 && data.size() >= 2;
    const int n_par = (search_ls ? n_ls : 0) + (opts.profile_scale ? 0 : 1);

    const double llo = std::log(bd.lengthscale.lo), lhi = std::log(bd.lengthscale.hi);
    const double slo = std::log(bd.sigma2.lo), shi = std::log(bd.sigma2.hi);

    int failures = 0, evaluations = 0;
    std::string last_failure;

    auto build = [&](const std::vector<double>& z, double* sigma2_out) {
        KernelSpec s = initial.with_sigma2(1.0);
        std::size_t k = 0;
        if (search_ls) {
            std::vector<double> ls(static_cast<std::size_t>(n_ls));
            for (auto& l : ls) l = std::exp(std::min(lhi, std::max(llo, z[k++])));
            s.lengthscales = std::move(ls);
        } else if (n_ls > 0) {
            for (auto& l : s.lengthscales) l = bd.lengthscale.clamp(l);
        }
        if (!opts.profile_scale) *sigma2_out = std::exp(std::min(shi, std::max(slo, z[k])));
        return s;
    };

    // Returns the log-likelihood and writes the σ² used.
    auto objective = [&](const std::vector<double>& z, double* sigma2_used) {
        ++evaluations;
        double s2 = 1.0;
        const KernelSpec unit = build(z, &s2);
        try {
            const FactoredSystem sys = cholesky_with_nugget(gram(unit, data.X), opts.policy);
            if (opts.profile_scale) {
                const double q = sys.solve_lower(r).squaredNorm() / static_cast<double>(r.size());
                s2 = bd.sigma2.clamp(q);
            }
            if (sigma2_used) *sigma2_used = s2;
            const double v = log_marginal_scaled(sys, r, s2);
            return std::isfinite(v) ? v : kNegInf;
        } catch (const FactorizationError& e) {
            ++failures;
            last_failure = e.what();
            return kNegInf;
        }
    };

    auto start_point = [&](int restart) {
        std::vector<double> z;
        Rng rng(derive_seed(opts.seed, "ml-restart", static_cast<std::uint64_t>(restart)));
        if (search_ls)
            for (int i = 0; i < n_ls; ++i)
                z.push_back(restart == 0 ? std::log(bd.lengthscale.clamp(initial.lengthscales[i]))
                                         : llo + (lhi - llo) * rng.uniform());
        if (!opts.profile_scale)
            z.push_back(restart == 0 ? std::log(bd.sigma2.clamp(initial.sigma2))
                                     : slo + (shi - slo) * rng.uniform());
        return z;
    };

    std::vector<double> best_z;
    double best_value = kNegInf;
    const int restarts = n_par == 0 ? 1 : opts.restarts;
    for (int rs = 0; rs < restarts; ++rs) {
        const std::vector<double> z0 = start_point(rs);
        OptimumResult res;
        if (n_par == 0) {
            res = {z0, objective(z0, nullptr), 1};
        } else {
            NelderMeadOptions nm;
            nm.max_evaluations = opts.max_evaluations;
            nm.initial_step = 1.0;
            res = nelder_mead_max([&](const std::vector<double>& z) { return objective(z, nullptr); },
                                  z0, nm);
        }
        if (res.value > best_value || best_z.empty()) {
            if (res.value > best_value) best_value = res.value;
            best_z = res.x;
        }
    }
    if (!(best_value > kNegInf)) {
        std::ostringstream os;
        os << "fit_ml: every objective evaluation failed (" << failures << " failures over "
           << restarts << " restarts); last: " << last_failure;
        throw FactorizationError(os.str());
    }

    HyperParams hp;
    double s2 = 1.0;
    KernelSpec unit = build(best_z, &s2);
    hp.log_marginal = objective(best_z, &s2);
    hp.spec = unit.with_sigma2(s2);
    hp.bounds = bd;
    hp.evaluations = evaluations;
    return hp;
}

}  // namespace bq
