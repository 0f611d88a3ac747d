#include "bq/integrate.hpp"

#include "bq/types.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>

namespace bq {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
using Gauss = boost::math::quadrature::gauss<double, 7>;

struct Piece {
    double a, b, value, err, l1;
    bool operator<(const Piece& o) const { return err < o.err; }
};

// One Kronrod panel with the usual rescaled error estimate: the raw
// Kronrod–Gauss difference is very pessimistic for smooth integrands.
Piece panel(const std::function<double(double)>& f, double a, double b) {
    const auto& xk = Kronrod::abscissa();
    const auto& wk = Kronrod::weights();
    const auto& wg = Gauss::weights();
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fv[15];
    fv[0] = f(c);
    for (std::size_t i = 1; i < xk.size(); ++i) {
        fv[2 * i - 1] = f(c - h * xk[i]);
        fv[2 * i] = f(c + h * xk[i]);
    }
    // Gauss nodes are the even-indexed Kronrod abscissae (0 included).
    double rk = fv[0] * wk[0], rg = fv[0] * wg[0], rabs = std::abs(fv[0]) * wk[0];
    for (std::size_t i = 1; i < xk.size(); ++i) {
        const double s = fv[2 * i - 1] + fv[2 * i];
        rk += wk[i] * s;
        rabs += wk[i] * (std::abs(fv[2 * i - 1]) + std::abs(fv[2 * i]));
        if (i % 2 == 0) rg += wg[i / 2] * s;
    }
    const double mean = 0.5 * rk;
    double rasc = wk[0] * std::abs(fv[0] - mean);
    for (std::size_t i = 1; i < xk.size(); ++i)
        rasc += wk[i] * (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean));
    rk *= h;
    rabs *= h;
    rasc *= h;
    double err = std::abs((rk - rg * h));
    if (rasc != 0.0 && err != 0.0) err = rasc * std::min(1.0, std::pow(200.0 * err / rasc, 1.5));
    constexpr double eps = std::numeric_limits<double>::epsilon();
    err = std::max(err, 50.0 * eps * rabs);
    return {a, b, rk, err, rabs};
}

}  // namespace

double adaptive_integrate(const std::function<double(double)>& f, double a, double b, double tol,
                          const std::vector<double>& breakpoints, unsigned max_intervals) {
    if (!(tol > 0.0)) throw std::invalid_argument("adaptive_integrate: tol must be positive");
    std::vector<double> cuts{a};
    for (double c : breakpoints)
        if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::priority_queue<Piece> heap;
    double total = 0.0, total_err = 0.0, l1 = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const Piece p = panel(f, cuts[i], cuts[i + 1]);
        total += p.value;
        total_err += p.err;
        l1 += p.l1;
        heap.push(p);
    }
    constexpr double eps = std::numeric_limits<double>::epsilon();
    auto target = [&] { return std::max(tol, 100.0 * eps * l1); };
    while (total_err > target() && heap.size() < max_intervals) {
        const Piece worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;
        heap.pop();
        const Piece left = panel(f, worst.a, mid), right = panel(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        l1 += left.l1 + right.l1 - worst.l1;
        heap.push(left);
        heap.push(right);
    }
    // Recompute the sums to shed accumulated update roundoff.
    total = total_err = 0.0;
    for (auto h = heap; !h.empty(); h.pop()) {
        total += h.top().value;
        total_err += h.top().err;
    }
    if (!(total_err <= target()) || !std::isfinite(total)) {
        std::ostringstream os;
        os << "adaptive_integrate: error estimate " << total_err << " exceeds tol " << target()
           << " after " << heap.size() << " intervals";
        throw Error(os.str());
    }
    return total;
}

}  // namespace bq
