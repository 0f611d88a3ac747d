// bq: command-line front end for single runs, benchmark grids and rate studies.

#include "bq/bench.hpp"
#include "bq/quadrature.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitFailures = 3;

std::vector<int> parse_n_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw bq::ConfigError("bad --n-list entry '" + item + "'");
        }
    }
    if (out.empty()) throw bq::ConfigError("--n-list is empty");
    return out;
}

// "fourier:<t>", "brownian_kl:<t>", "translate:<z>", "combination:<seed>", "linear".
bq::TestFunction parse_fn(const std::string& spec, const bq::KernelSpec& kernel,
                          std::uint64_t seed, bq::CoefficientScale scale) {
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    auto number = [&](double fallback) {
        if (arg.empty()) return fallback;
        try {
            return std::stod(arg);
        } catch (const std::exception&) {
            throw bq::ConfigError("bad --fn argument '" + arg + "'");
        }
    };
    if (head == "translate") {
        bq::NodeSet z(1, 1);
        z(0, 0) = number(0.37);
        return bq::make_kernel_combination(kernel, z, bq::Vector::Ones(1));
    }
    if (head == "combination")
        return bq::make_random_kernel_combination(kernel, static_cast<std::uint64_t>(number(0)));
    return bq::family_member(bq::parse_family(head), seed, static_cast<int>(number(1)), scale);
}

void print_theta(const bq::KernelSpec& spec) {
    std::printf("sigma2_hat   %.10g\n", spec.sigma2);
    if (spec.has_lengthscales())
        for (std::size_t i = 0; i < spec.lengthscales.size(); ++i)
            std::printf("lengthscale%zu %.10g\n", i, spec.lengthscales[i]);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian quadrature: single runs, benchmark grids and convergence studies"};
    app.require_subcommand(1);

    std::string kernel_name = "se", sampler = "legendre", fn = "fourier:1", lambda = "default";
    std::string coeff_scale = "variance";
    int n = 10, restarts = 5;
    std::uint64_t seed = 0;
    double lengthscale = 0.2, sigma2 = 1.0;
    bool no_fit = false;

    auto* integ = app.add_subcommand("integrate", "Run BQ once and print the posterior");
    integ->add_option("--kernel", kernel_name, "Kernel name")->capture_default_str();
    integ->add_option("--sampler", sampler, "Design or acquisition name")->capture_default_str();
    integ->add_option("--n", n, "Number of nodes")->capture_default_str();
    integ->add_option("--fn", fn, "Integrand, e.g. fourier:3")->capture_default_str();
    integ->add_option("--seed", seed, "Experiment seed")->capture_default_str();
    integ->add_option("--lengthscale", lengthscale, "Initial length-scale")->capture_default_str();
    integ->add_option("--sigma2", sigma2, "Initial scale")->capture_default_str();
    integ->add_option("--lambda", lambda, "Nugget: default, zero or a value")->capture_default_str();
    integ->add_option("--restarts", restarts, "ML-II restarts")->capture_default_str();
    integ->add_option("--coeff-scale", coeff_scale, "variance or reciprocal")->capture_default_str();
    integ->add_flag("--no-fit", no_fit, "Keep hyperparameters fixed");

    std::string config_path, output_override;
    int threads = -1;
    auto* bench = app.add_subcommand("benchmark", "Run a grid from a config and write CSV");
    bench->add_option("--config", config_path, "Config file")->required();
    bench->add_option("--output", output_override, "CSV path (overrides config)");
    bench->add_option("--threads", threads, "Worker threads");

    std::string n_list = "8,16,32,64,128,256", out_path, seeds = "0";
    bool fit_conv = false, relative = false;
    auto* conv = app.add_subcommand("converge", "Convergence-rate study");
    conv->add_option("--kernel", kernel_name, "Kernel name")->capture_default_str();
    conv->add_option("--sampler", sampler, "Design or acquisition name")->capture_default_str();
    conv->add_option("--fn", fn, "Integrand, e.g. translate:0.37")->capture_default_str();
    conv->add_option("--n-list", n_list, "Comma-separated N values")->capture_default_str();
    conv->add_option("--lambda", lambda, "Nugget: default, zero or a value")->capture_default_str();
    conv->add_option("--lengthscale", lengthscale, "Length-scale")->capture_default_str();
    conv->add_option("--sigma2", sigma2, "Scale")->capture_default_str();
    conv->add_option("--seeds", seeds, "Comma-separated design seeds")->capture_default_str();
    conv->add_option("--output", out_path, "CSV path (stdout if empty)");
    conv->add_flag("--fit", fit_conv, "Refit hyperparameters by ML-II at every N");
    conv->add_flag("--relative", relative, "Fit the slope on relative errors");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        const bq::CoefficientScale scale = coeff_scale == "reciprocal"
                                               ? bq::CoefficientScale::ReciprocalVariance
                                               : bq::CoefficientScale::Variance;
        if (coeff_scale != "variance" && coeff_scale != "reciprocal")
            throw bq::ConfigError("--coeff-scale must be 'variance' or 'reciprocal'");

        if (*integ) {
            if (n < 1) throw bq::ConfigError("--n must be >= 1");
            const bq::KernelSpec init = bq::parse_kernel(kernel_name, 1, sigma2, lengthscale);
            const bq::TestFunction f = parse_fn(fn, init, seed, scale);
            const bq::NuggetPolicy policy = bq::parse_lambda_mode(lambda);
            bq::FitOptions fo;
            fo.policy = policy;
            fo.restarts = restarts;
            const bq::Sampler s = bq::parse_sampler(sampler, bq::AcquisitionKind::IVR);
            const bq::Measure P = bq::Measure::uniform(1);
            bq::KernelSpec spec = init;
            bq::BQPosterior post;
            if (const auto* ds = std::get_if<bq::DesignStrategy>(&s)) {
                bq::Dataset data;
                data.X = bq::generate_design({*ds, 1, n, seed});
                data.f.resize(n);
                for (int i = 0; i < n; ++i) data.f(i) = f(data.X(i, 0));
                if (!no_fit) spec = bq::fit_ml(init, data, fo).spec;
                post = bq::bq_infer(spec, P, data, policy);
            } else {
                bq::ModelConfig mc{init, policy, !no_fit, fo, {}};
                const auto r = bq::run_sequential_bq({f.as_function(), P}, mc,
                                                     std::get<bq::AcquisitionKind>(s), {n, {}}, seed);
                spec = r.spec;
                post = r.posterior;
            }
            std::printf("kernel       %s\n", bq::kernel_name(spec).c_str());
            std::printf("sampler      %s\n", bq::sampler_name(s).c_str());
            std::printf("N            %d\n", n);
            std::printf("mu           %.17g\n", post.mu);
            std::printf("Sigma        %.17g\n", post.sigma2);
            print_theta(spec);
            std::printf("lambda_used  %.6g\n", post.lambda_used);
            std::printf("truth        %.17g\n", f.true_integral);
            std::printf("abs_error    %.6g\n", std::abs(f.true_integral - post.mu));
            return 0;
        }

        if (*bench) {
            bq::ExperimentConfig cfg = bq::load_config(config_path);
            if (!output_override.empty()) cfg.output_path = output_override;
            if (threads >= 0) cfg.threads = threads;
            const bq::ScoreTable table = bq::run_benchmark(cfg);
            if (cfg.output_path.empty()) {
                bq::write_scores_csv(std::cout, table);
            } else {
                std::ofstream os(cfg.output_path);
                if (!os) throw bq::Error("cannot write '" + cfg.output_path + "'");
                bq::write_scores_csv(os, table);
            }
            std::fprintf(stderr, "runs %d, failures %d\n", table.total_runs, table.total_failures);
            for (const auto& m : table.failure_messages) std::fprintf(stderr, "  %s\n", m.c_str());
            const double frac = table.total_runs ? static_cast<double>(table.total_failures) /
                                                       table.total_runs
                                                 : 0.0;
            return frac > cfg.max_failure_fraction ? kExitFailures : 0;
        }

        if (*conv) {
            const bq::KernelSpec spec = bq::parse_kernel(kernel_name, 1, sigma2, lengthscale);
            bq::ConvergenceOptions opts;
            opts.policy = bq::parse_lambda_mode(lambda);
            opts.refit = fit_conv;
            opts.relative = relative;
            opts.seeds.clear();
            for (int v : parse_n_list(seeds)) opts.seeds.push_back(static_cast<std::uint64_t>(v));
            const auto f = parse_fn(fn, spec, 0, scale);
            const auto report = bq::convergence_study(
                spec, bq::parse_sampler(sampler, bq::AcquisitionKind::IVR), {f}, parse_n_list(n_list), opts);
            if (out_path.empty()) {
                bq::write_convergence_csv(std::cout, report);
            } else {
                std::ofstream os(out_path);
                if (!os) throw bq::Error("cannot write '" + out_path + "'");
                bq::write_convergence_csv(os, report);
                std::printf("slope %.4f over %d points; floor at N=%s\n", report.slope,
                            report.fitted_points,
                            report.floor_n ? std::to_string(*report.floor_n).c_str() : "none");
            }
            return 0;
        }
    } catch (const bq::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "invalid argument: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
