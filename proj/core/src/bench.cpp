#include "bq/bench.hpp"

#include "bq/random.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

namespace bq {

// ---------------------------------------------------------------- scores

double quantile_linear(std::vector<double> v, double p) {
    if (v.empty()) throw std::invalid_argument("quantile: empty input");
    std::sort(v.begin(), v.end());
    const double pos = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return v[lo] + frac * (v[hi] - v[lo]);
}

FilterResult filter_outliers(const std::vector<double>& scores) {
    if (scores.size() < 4) return {scores, 0};
    const double q1 = quantile_linear(scores, 0.25), q3 = quantile_linear(scores, 0.75);
    const double iqr = q3 - q1;
    const double lo = q1 - 1.5 * iqr, hi = q3 + 1.5 * iqr;
    FilterResult r;
    for (double s : scores) {
        if (s >= lo && s <= hi)
            r.retained.push_back(s);
        else
            ++r.dropped;
    }
    return r;
}

namespace {

Score mean_after_filter(const std::vector<double>& entries, int excluded) {
    Score s;
    s.excluded = excluded;
    const FilterResult f = filter_outliers(entries);
    s.dropped = f.dropped;
    s.retained = static_cast<int>(f.retained.size());
    s.value = f.retained.empty() ? std::numeric_limits<double>::quiet_NaN()
                                 : std::accumulate(f.retained.begin(), f.retained.end(), 0.0) /
                                       static_cast<double>(f.retained.size());
    return s;
}

}  // namespace

Score error_score(const std::vector<double>& mu, const std::vector<double>& truth) {
    if (mu.size() != truth.size()) throw std::invalid_argument("error_score: length mismatch");
    std::vector<double> rel;
    int excluded = 0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (truth[i] == 0.0) {
            ++excluded;
            continue;
        }
        rel.push_back(std::abs(truth[i] - mu[i]) / std::abs(truth[i]));
    }
    return mean_after_filter(rel, excluded);
}

Score calibration_score(const std::vector<double>& mu, const std::vector<double>& sigma2,
                        const std::vector<double>& truth) {
    if (mu.size() != truth.size() || sigma2.size() != truth.size())
        throw std::invalid_argument("calibration_score: length mismatch");
    std::vector<double> z;
    int excluded = 0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const double err = std::abs(truth[i] - mu[i]);
        if (!(sigma2[i] > 0.0)) {
            if (err == 0.0)
                z.push_back(0.0);
            else
                ++excluded;
            continue;
        }
        z.push_back(err / std::sqrt(sigma2[i]));
    }
    return mean_after_filter(z, excluded);
}

// ---------------------------------------------------------------- samplers

Sampler parse_sampler(std::string_view name, AcquisitionKind active_default) {
    if (name == "active") return active_default;
    if (name == "mi" || name == "ivr" || name == "niv" || name == "us" || name == "pvc")
        return parse_acquisition(name);
    return parse_strategy(name);
}

std::string sampler_name(const Sampler& s) {
    if (const auto* d = std::get_if<DesignStrategy>(&s)) return strategy_name(*d);
    return acquisition_name(std::get<AcquisitionKind>(s));
}

// ---------------------------------------------------------------- config

namespace {

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    std::string out(s.substr(a, b - a));
    if (out.size() >= 2 && (out.front() == '"' || out.front() == '\'') && out.back() == out.front())
        out = out.substr(1, out.size() - 2);
    return out;
}

std::vector<std::string> split_list(std::string v) {
    v = trim(v);
    if (!v.empty() && v.front() == '[') {
        if (v.back() != ']') throw ConfigError("unterminated list '" + v + "'");
        v = v.substr(1, v.size() - 2);
    }
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
        if (auto t = trim(item); !t.empty()) out.push_back(t);
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
    }
}

int to_int(const std::string& key, const std::string& v) {
    const double d = to_double(key, v);
    if (d != std::floor(d) || std::abs(d) > 1e9)
        throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
    return static_cast<int>(d);
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const unsigned long long d = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': expected a nonnegative integer, got '" + v + "'");
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("key '" + key + "': expected true/false, got '" + v + "'");
}

Interval to_interval(const std::string& key, const std::string& v) {
    const auto items = split_list(v);
    if (items.size() != 2) throw ConfigError("key '" + key + "': expected 'lo, hi'");
    return {to_double(key, items[0]), to_double(key, items[1])};
}

}  // namespace

void ExperimentConfig::validate() const {
    if (kernels.empty()) throw ConfigError("config: no kernels");
    if (samplers.empty()) throw ConfigError("config: no samplers");
    for (const auto& k : kernels) (void)parse_kernel(k);
    for (const auto& s : samplers) (void)parse_sampler(s, acq_kind);
    if (T < 1) throw ConfigError("config: T must be >= 1");
    if (n_min < 1 || n_max < n_min) throw ConfigError("config: need 1 <= n_min <= n_max");
    if (n_max > n_cap) throw ConfigError("config: n_max exceeds n_cap");
    if (!(lengthscale_init > 0.0)) throw ConfigError("config: lengthscale_init must be positive");
    if (!(max_failure_fraction >= 0.0 && max_failure_fraction <= 1.0))
        throw ConfigError("config: fail.max_fraction must lie in [0, 1]");
    if (search.candidates < 1 || search.refine_iters < 0)
        throw ConfigError("config: invalid acquisition search settings");
    if (ml.restarts < 1) throw ConfigError("config: ml.restarts must be >= 1");
    try {
        nugget.validate();
        ml.bounds.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    std::map<std::string, int> seen;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string val = trim(std::string_view(line).substr(eq + 1));
        if (seen.count(key))
            throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        seen[key] = lineno;

        if (key == "kernels") cfg.kernels = split_list(val);
        else if (key == "samplers") cfg.samplers = split_list(val);
        else if (key == "family") cfg.family = parse_family(val);
        else if (key == "fourier.coeff_scale") {
            if (val == "variance") cfg.coeff_scale = CoefficientScale::Variance;
            else if (val == "reciprocal") cfg.coeff_scale = CoefficientScale::ReciprocalVariance;
            else throw ConfigError("fourier.coeff_scale must be 'variance' or 'reciprocal'");
        }
        else if (key == "T") cfg.T = to_int(key, val);
        else if (key == "n_min") cfg.n_min = to_int(key, val);
        else if (key == "n_max") cfg.n_max = to_int(key, val);
        else if (key == "n_cap") cfg.n_cap = to_int(key, val);
        else if (key == "seed") cfg.seed = to_u64(key, val);
        else if (key == "threads") cfg.threads = to_int(key, val);
        else if (key == "output") cfg.output_path = val;
        else if (key == "coefficients_output") cfg.coefficients_path = val;
        else if (key == "lengthscale_init") cfg.lengthscale_init = to_double(key, val);
        else if (key == "design.include_endpoint") cfg.include_endpoint = to_bool(key, val);
        else if (key == "fail.max_fraction") cfg.max_failure_fraction = to_double(key, val);
        else if (key == "nugget.fixed_a") cfg.nugget.fixed_a = to_double(key, val);
        else if (key == "nugget.fixed_b") cfg.nugget.fixed_b = to_double(key, val);
        else if (key == "nugget.ladder") {
            cfg.nugget.dynamic_multipliers.clear();
            for (const auto& s : split_list(val))
                cfg.nugget.dynamic_multipliers.push_back(to_double(key, s));
        }
        else if (key == "ml.restarts") cfg.ml.restarts = to_int(key, val);
        else if (key == "ml.seed") cfg.ml.seed = to_u64(key, val);
        else if (key == "ml.profile_scale") cfg.ml.profile_scale = to_bool(key, val);
        else if (key == "ml.max_evaluations") cfg.ml.max_evaluations = to_int(key, val);
        else if (key == "ml.bounds.lengthscale") cfg.ml.bounds.lengthscale = to_interval(key, val);
        else if (key == "ml.bounds.sigma2") cfg.ml.bounds.sigma2 = to_interval(key, val);
        else if (key == "acq.kind") cfg.acq_kind = parse_acquisition(val);
        else if (key == "acq.candidates") cfg.search.candidates = to_int(key, val);
        else if (key == "acq.refine_iters") cfg.search.refine_iters = to_int(key, val);
        else if (key == "stop.budget") cfg.n_max = to_int(key, val);
        else if (key == "stop.variance_tol") cfg.variance_tol = to_double(key, val);
        else throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    if (seen.count("stop.budget") && seen.count("n_max"))
        throw ConfigError("config: set either n_max or stop.budget, not both");
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

// ---------------------------------------------------------------- grid

const ScoreRow* ScoreTable::find(const std::string& kernel, const std::string& sampler, int n) const {
    for (const auto& r : rows)
        if (r.kernel == kernel && r.sampler == sampler && r.n == n) return &r;
    return nullptr;
}

namespace {

struct Outcome {
    bool ok = false;
    double mu = 0.0, sigma2 = 0.0;
    std::string error;
};

void run_pool(std::size_t jobs, int threads, const std::function<void(std::size_t)>& job) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers =
        std::min<std::size_t>(jobs, threads > 0 ? static_cast<std::size_t>(threads) : hw);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < jobs; i = next++) job(i);
    };
    if (workers <= 1) {
        work();
        return;
    }
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
}

NodeSet fixed_design(DesignStrategy s, int n, std::uint64_t seed, bool endpoint) {
    if (!endpoint) return generate_design({s, 1, n, seed});
    NodeSet X(n, 1);
    if (n > 1) X.topRows(n - 1) = generate_design({s, 1, n - 1, seed});
    X(n - 1, 0) = 1.0;
    return X;
}

}  // namespace

ScoreTable run_benchmark(const ExperimentConfig& cfg) {
    cfg.validate();
    const Measure P = Measure::uniform(1);
    const int nN = cfg.n_max - cfg.n_min + 1;
    const int K = static_cast<int>(cfg.kernels.size()), S = static_cast<int>(cfg.samplers.size());

    std::vector<TestFunction> fns;
    for (int t = 1; t <= cfg.T; ++t) fns.push_back(family_member(cfg.family, cfg.seed, t, cfg.coeff_scale));
    if (!cfg.coefficients_path.empty()) {
        std::ofstream os(cfg.coefficients_path);
        if (!os) throw Error("cannot write '" + cfg.coefficients_path + "'");
        write_coefficients_csv(os, fns);
    }

    std::vector<Sampler> samplers;
    for (const auto& s : cfg.samplers) samplers.push_back(parse_sampler(s, cfg.acq_kind));

    // Model-independent node sets, shared by every kernel and integrand.
    std::map<std::pair<int, int>, NodeSet> nodes;
    for (int s = 0; s < S; ++s)
        if (const auto* ds = std::get_if<DesignStrategy>(&samplers[static_cast<std::size_t>(s)]))
            for (int n = cfg.n_min; n <= cfg.n_max; ++n)
                nodes[{s, n}] = fixed_design(*ds, n, cfg.seed, cfg.include_endpoint);

    // outcome[((k*S + s)*T + t)*nN + (n - n_min)]
    std::vector<Outcome> outcomes(static_cast<std::size_t>(K) * S * cfg.T * nN);
    auto slot = [&](int k, int s, int t, int n) -> Outcome& {
        return outcomes[((static_cast<std::size_t>(k) * S + s) * cfg.T + t) * nN + (n - cfg.n_min)];
    };

    FitOptions fit = cfg.ml;
    fit.policy = cfg.nugget;

    const std::size_t jobs = static_cast<std::size_t>(K) * S * cfg.T;
    run_pool(jobs, cfg.threads, [&](std::size_t j) {
        const int t = static_cast<int>(j % cfg.T);
        const int s = static_cast<int>((j / cfg.T) % S);
        const int k = static_cast<int>(j / (static_cast<std::size_t>(cfg.T) * S));
        const KernelSpec init = parse_kernel(cfg.kernels[static_cast<std::size_t>(k)], 1, 1.0,
                                             cfg.lengthscale_init);
        const TestFunction& f = fns[static_cast<std::size_t>(t)];
        const Sampler& sampler = samplers[static_cast<std::size_t>(s)];

        if (const auto* kind = std::get_if<AcquisitionKind>(&sampler)) {
            ModelConfig mc;
            mc.kernel = init;
            mc.policy = cfg.nugget;
            mc.fit = fit;
            mc.search = cfg.search;
            try {
                const SequentialResult res = run_sequential_bq({f.as_function(), P}, mc, *kind,
                                                               {cfg.n_max, cfg.variance_tol}, cfg.seed);
                for (const TraceEntry& e : res.trace)
                    if (e.n >= cfg.n_min) slot(k, s, t, e.n) = {true, e.mu, e.sigma2, {}};
                // A budget below the initial design size is that design's prefix.
                for (int n = cfg.n_min; n < res.n_init; ++n) {
                    Dataset data;
                    data.X = res.data.X.topRows(n);
                    data.f = res.data.f.head(n);
                    const HyperParams hp = fit_ml(init, data, fit);
                    const BQPosterior post = bq_infer(hp.spec, P, data, cfg.nugget);
                    slot(k, s, t, n) = {true, post.mu, post.sigma2, {}};
                }
                for (int n = cfg.n_min; n <= cfg.n_max; ++n)
                    if (!slot(k, s, t, n).ok) slot(k, s, t, n).error = "sequential run stopped early";
            } catch (const std::exception& e) {
                for (int n = cfg.n_min; n <= cfg.n_max; ++n)
                    if (!slot(k, s, t, n).ok) slot(k, s, t, n).error = e.what();
            }
            return;
        }
        for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
            try {
                Dataset data;
                data.X = nodes.at({s, n});
                data.f.resize(n);
                for (int i = 0; i < n; ++i) data.f(i) = f(data.X(i, 0));
                const HyperParams hp = fit_ml(init, data, fit);
                const BQPosterior post = bq_infer(hp.spec, P, data, cfg.nugget);
                slot(k, s, t, n) = {true, post.mu, post.sigma2, {}};
            } catch (const std::exception& e) {
                slot(k, s, t, n).error = e.what();
            }
        }
    });

    ScoreTable table;
    for (int k = 0; k < K; ++k)
        for (int s = 0; s < S; ++s)
            for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
                std::vector<double> mu, s2, truth;
                ScoreRow row;
                row.kernel = cfg.kernels[static_cast<std::size_t>(k)];
                row.sampler = sampler_name(samplers[static_cast<std::size_t>(s)]);
                row.n = n;
                for (int t = 0; t < cfg.T; ++t) {
                    const Outcome& o = slot(k, s, t, n);
                    ++table.total_runs;
                    if (!o.ok) {
                        ++row.n_failures;
                        ++table.total_failures;
                        if (table.failure_messages.size() < 10)
                            table.failure_messages.push_back(row.kernel + "/" + row.sampler + "/N=" +
                                                             std::to_string(n) + ": " + o.error);
                        continue;
                    }
                    mu.push_back(o.mu);
                    s2.push_back(o.sigma2);
                    truth.push_back(fns[static_cast<std::size_t>(t)].true_integral);
                }
                const Score es = error_score(mu, truth);
                const Score cs = calibration_score(mu, s2, truth);
                row.error_score = es.value;
                row.n_outliers_dropped = es.dropped;
                row.n_retained = es.retained;
                row.n_excluded = es.excluded;
                row.calibration_score = cs.value;
                row.cal_outliers_dropped = cs.dropped;
                row.cal_excluded = cs.excluded;
                table.rows.push_back(row);
            }
    std::sort(table.rows.begin(), table.rows.end(), [](const ScoreRow& a, const ScoreRow& b) {
        return std::tie(a.kernel, a.sampler, a.n) < std::tie(b.kernel, b.sampler, b.n);
    });
    return table;
}

namespace {

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_scores_csv(std::ostream& os, const ScoreTable& table) {
    os << "# bq-scores v1\n";
    os << "kernel,sampler,N,error_score,calibration_score,n_outliers_dropped,n_retained,"
          "n_failures,n_excluded,cal_outliers_dropped,cal_excluded\n";
    for (const ScoreRow& r : table.rows)
        os << r.kernel << ',' << r.sampler << ',' << r.n << ',' << fmt(r.error_score) << ','
           << fmt(r.calibration_score) << ',' << r.n_outliers_dropped << ',' << r.n_retained << ','
           << r.n_failures << ',' << r.n_excluded << ',' << r.cal_outliers_dropped << ','
           << r.cal_excluded << '\n';
}

// ---------------------------------------------------------------- rates

NuggetPolicy parse_lambda_mode(std::string_view mode) {
    if (mode == "default") return NuggetPolicy{};
    NuggetPolicy p;
    p.fixed_a = 0.0;
    if (mode == "zero") {
        p.fixed_b = 0.0;
        return p;
    }
    double v = 0.0;
    try {
        std::size_t pos = 0;
        v = std::stod(std::string(mode), &pos);
        if (pos != mode.size() || !(v >= 0.0)) throw std::invalid_argument("lambda");
    } catch (const std::exception&) {
        throw ConfigError("lambda mode must be 'default', 'zero' or a nonnegative number");
    }
    p.fixed_b = v;
    return p;
}

void fit_convergence(ConvergenceReport& report, bool relative) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (const auto& p : report.points) {
        const double e = relative ? p.rel_error : p.error;
        if (p.failures > 0 || !(e >= kCensorBelow) || !std::isfinite(e)) continue;
        const double x = std::log(static_cast<double>(p.n)), y = std::log(e);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    report.fitted_points = m;
    report.slope = m >= 2 ? (m * sxy - sx * sy) / (m * sxx - sx * sx)
                          : std::numeric_limits<double>::quiet_NaN();
    report.floor_n.reset();
    report.floor_index.reset();
    for (std::size_t i = 1; i < report.points.size(); ++i) {
        const auto& a = report.points[i - 1];
        const auto& b = report.points[i];
        const double ea = relative ? a.rel_error : a.error;
        const double eb = relative ? b.rel_error : b.error;
        if (!(eb <= 0.95 * ea)) {
            report.floor_n = b.n;
            report.floor_index = i;
            break;
        }
    }
}

ConvergenceReport convergence_study(const KernelSpec& kernel, const Sampler& sampler,
                                    const std::vector<TestFunction>& fns,
                                    const std::vector<int>& n_list, const ConvergenceOptions& opts) {
    if (fns.empty()) throw std::invalid_argument("convergence_study: no integrands");
    if (n_list.empty()) throw std::invalid_argument("convergence_study: empty N list");
    for (std::size_t i = 1; i < n_list.size(); ++i)
        if (n_list[i] <= n_list[i - 1])
            throw std::invalid_argument("convergence_study: N list must be increasing");
    const Measure P = Measure::uniform(kernel.dim);
    FitOptions fit = opts.fit;
    fit.policy = opts.policy;

    ConvergenceReport report;
    for (int n : n_list) {
        ConvergencePoint pt;
        pt.n = n;
        int count = 0;
        bool geometry_done = false;
        for (std::uint64_t seed : opts.seeds) {
            // Fixed hyperparameters make active designs independent of f.
            std::optional<NodeSet> shared;
            for (const TestFunction& f : fns) {
                try {
                    Dataset data;
                    KernelSpec spec = kernel;
                    if (const auto* ds = std::get_if<DesignStrategy>(&sampler)) {
                        data.X = generate_design({*ds, kernel.dim, n, seed});
                        data.f.resize(n);
                        for (int i = 0; i < n; ++i) data.f(i) = f.eval(node(data.X, i));
                        if (opts.refit) spec = fit_ml(kernel, data, fit).spec;
                    } else if (!opts.refit && shared) {
                        data.X = *shared;
                        data.f.resize(n);
                        for (int i = 0; i < n; ++i) data.f(i) = f.eval(node(data.X, i));
                    } else {
                        ModelConfig mc{kernel, opts.policy, opts.refit, fit, opts.search};
                        const SequentialResult r = run_sequential_bq(
                            {f.as_function(), P}, mc, std::get<AcquisitionKind>(sampler), {n, {}}, seed);
                        data = r.data;
                        spec = r.spec;
                        shared = data.X;
                    }
                    const BQPosterior post = bq_infer(spec, P, data, opts.policy);
                    const double err = std::abs(f.true_integral - post.mu);
                    pt.error += err;
                    pt.rel_error += f.true_integral != 0.0 ? err / std::abs(f.true_integral)
                                                           : std::numeric_limits<double>::infinity();
                    pt.sigma2 += post.sigma2;
                    pt.lambda_used = std::max(pt.lambda_used, post.lambda_used);
                    if (!geometry_done && kernel.dim <= 3 && n >= 2) {
                        const DesignGeometry g = design_geometry(data.X);
                        pt.h = g.fill_distance;
                        pt.q = g.separation_radius;
                        pt.rho = g.mesh_ratio;
                        geometry_done = true;
                    }
                    ++count;
                } catch (const std::exception&) {
                    ++pt.failures;
                }
            }
        }
        if (count > 0) {
            pt.error /= count;
            pt.rel_error /= count;
            pt.sigma2 /= count;
        }
        report.points.push_back(pt);
    }
    fit_convergence(report, opts.relative);
    return report;
}

void write_convergence_csv(std::ostream& os, const ConvergenceReport& report) {
    os << "# bq-converge v1\n";
    os << "N,error,rel_error,sigma2,h,q,rho,lambda_used,failures\n";
    for (const auto& p : report.points)
        os << p.n << ',' << fmt(p.error) << ',' << fmt(p.rel_error) << ',' << fmt(p.sigma2) << ','
           << fmt(p.h) << ',' << fmt(p.q) << ',' << fmt(p.rho) << ',' << fmt(p.lambda_used) << ','
           << p.failures << '\n';
    os << "# slope," << fmt(report.slope) << '\n';
    os << "# fitted_points," << report.fitted_points << '\n';
    os << "# floor_n," << (report.floor_n ? std::to_string(*report.floor_n) : std::string("none"))
       << '\n';
}

}  // namespace bq
