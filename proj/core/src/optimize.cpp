#include "bq/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace bq {

OptimumResult nelder_mead_max(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> x0, const NelderMeadOptions& opts) {
    const std::size_t n = x0.size();
    OptimumResult best{x0, f(x0), 1};
    if (n == 0) return best;

    auto eval = [&](const std::vector<double>& x) {
        double v = f(x);
        if (std::isnan(v)) v = -std::numeric_limits<double>::infinity();
        ++best.evaluations;
        if (v > best.value) {
            best.value = v;
            best.x = x;
        }
        return v;
    };

    std::vector<std::vector<double>> simplex(n + 1, x0);
    std::vector<double> values(n + 1, best.value);
    for (std::size_t i = 0; i < n; ++i) {
        simplex[i + 1][i] += opts.initial_step;
        values[i + 1] = eval(simplex[i + 1]);
    }

    std::vector<std::size_t> order(n + 1);
    auto point = [&](const std::vector<double>& c, const std::vector<double>& p, double t) {
        std::vector<double> out(n);
        for (std::size_t j = 0; j < n; ++j) out[j] = c[j] + t * (p[j] - c[j]);
        return out;
    };

    while (best.evaluations < opts.max_evaluations) {
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
        const std::size_t hi = order.front(), lo = order.back(), second = order[n - 1];

        double size = 0.0;
        for (std::size_t i = 0; i <= n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                size = std::max(size, std::abs(simplex[i][j] - simplex[hi][j]));
        const double spread = values[hi] - values[lo];
        if (std::isfinite(spread) && spread <= opts.ftol * (1.0 + std::abs(values[hi])) &&
            size <= opts.xtol)
            break;
        if (size <= opts.xtol * 1e-3) break;

        std::vector<double> centroid(n, 0.0);
        for (std::size_t i = 0; i <= n; ++i)
            if (i != lo)
                for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / n;

        const auto xr = point(centroid, simplex[lo], -1.0);
        const double fr = eval(xr);
        if (fr > values[hi]) {
            const auto xe = point(centroid, simplex[lo], -2.0);
            const double fe = eval(xe);
            if (fe > fr) {
                simplex[lo] = xe;
                values[lo] = fe;
            } else {
                simplex[lo] = xr;
                values[lo] = fr;
            }
            continue;
        }
        if (fr > values[second]) {
            simplex[lo] = xr;
            values[lo] = fr;
            continue;
        }
        const bool outside = fr > values[lo];
        const auto xc = point(centroid, outside ? xr : simplex[lo], 0.5);
        const double fc = eval(xc);
        if (fc > std::max(fr, values[lo])) {
            simplex[lo] = xc;
            values[lo] = fc;
            continue;
        }
        for (std::size_t i = 0; i <= n; ++i) {
            if (i == hi) continue;
            simplex[i] = point(simplex[hi], simplex[i], 0.5);
            values[i] = eval(simplex[i]);
        }
    }
    return best;
}

ScalarOptimum golden_section_max(const std::function<double(double)>& f, double a, double b,
                                 int iterations) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    ScalarOptimum best{a, f(a)};
    auto consider = [&](double x, double v) {
        if (v > best.value || (v == best.value && x < best.x)) best = {x, v};
    };
    consider(b, f(b));
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    consider(c, fc);
    consider(d, fd);
    for (int it = 0; it < iterations; ++it) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
            consider(c, fc);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
            consider(d, fd);
        }
    }
    return best;
}

}  // namespace bq
