#include "bq/design.hpp"

#include "bq/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

namespace bq {

namespace {

struct DirectionEntry {
    unsigned poly;  // primitive polynomial, leading and trailing ones included
    std::array<unsigned, 6> m;
};

// Joe–Kuo direction numbers for dimensions 2..16.
constexpr std::array<DirectionEntry, kSobolMaxDim - 1> kDirections{{
    {3, {1}},
    {7, {1, 3}},
    {11, {1, 3, 1}},
    {13, {1, 1, 1}},
    {19, {1, 1, 3, 3}},
    {25, {1, 3, 5, 13}},
    {37, {1, 1, 5, 5, 17}},
    {41, {1, 1, 5, 5, 5}},
    {47, {1, 1, 7, 11, 19}},
    {55, {1, 1, 5, 1, 1}},
    {59, {1, 1, 1, 3, 11}},
    {61, {1, 3, 5, 5, 31}},
    {67, {1, 3, 3, 9, 7, 49}},
    {91, {1, 1, 1, 15, 21, 21}},
    {97, {1, 3, 1, 13, 27, 49}},
}};

constexpr int kBits = 32;

std::array<std::uint32_t, kBits> direction_vector(int axis) {
    std::array<std::uint32_t, kBits> v{};
    if (axis == 0) {
        for (int k = 0; k < kBits; ++k) v[k] = 1u << (kBits - 1 - k);
        return v;
    }
    const DirectionEntry& e = kDirections[static_cast<std::size_t>(axis - 1)];
    int s = 0;
    while ((e.poly >> (s + 1)) != 0) ++s;
    const unsigned a = (e.poly >> 1) & ((1u << (s - 1)) - 1u);
    for (int k = 0; k < s && k < kBits; ++k) v[k] = e.m[k] << (kBits - 1 - k);
    for (int k = s; k < kBits; ++k) {
        std::uint32_t x = v[k - s] ^ (v[k - s] >> s);
        for (int i = 1; i < s; ++i)
            if ((a >> (s - 1 - i)) & 1u) x ^= v[k - i];
        v[k] = x;
    }
    return v;
}

void check_tensor(int n, int dim, int& per_axis) {
    per_axis = static_cast<int>(std::lround(std::pow(static_cast<double>(n), 1.0 / dim)));
    std::int64_t total = 1;
    for (int i = 0; i < dim; ++i) total *= per_axis;
    if (total != n)
        throw std::invalid_argument("design: tensor designs need n = m^d (n=" + std::to_string(n) +
                                    ", d=" + std::to_string(dim) + ")");
}

NodeSet tensor_of(const Vector& axis, int dim) {
    const Eigen::Index m = axis.size();
    Eigen::Index n = 1;
    for (int i = 0; i < dim; ++i) n *= m;
    NodeSet X(n, dim);
    for (Eigen::Index r = 0; r < n; ++r) {
        Eigen::Index idx = r;
        for (int c = dim - 1; c >= 0; --c) {
            X(r, c) = axis(idx % m);
            idx /= m;
        }
    }
    return X;
}

}  // namespace

NodeSet sobol_points(int dim, std::int64_t n) {
    if (dim < 1 || dim > kSobolMaxDim)
        throw std::invalid_argument("sobol: dimension must be in [1, 16]");
    if (n < 1 || n > (std::int64_t{1} << kBits))
        throw std::invalid_argument("sobol: n exceeds the 2^32-point direction table");
    std::vector<std::array<std::uint32_t, kBits>> v;
    for (int j = 0; j < dim; ++j) v.push_back(direction_vector(j));
    NodeSet X(n, dim);
    std::vector<std::uint32_t> x(static_cast<std::size_t>(dim), 0u);
    for (std::int64_t i = 0; i < n; ++i) {
        for (int j = 0; j < dim; ++j) X(i, j) = static_cast<double>(x[j]) * 0x1.0p-32;
        // Gray-code step: flip by the direction of the lowest zero bit of i.
        int c = 0;
        std::uint64_t t = static_cast<std::uint64_t>(i);
        while (t & 1u) {
            t >>= 1;
            ++c;
        }
        if (c < kBits)
            for (int j = 0; j < dim; ++j) x[j] ^= v[j][static_cast<std::size_t>(c)];
    }
    return X;
}

Vector legendre_roots(int n) {
    if (n < 1) throw std::invalid_argument("legendre: n must be >= 1");
    Vector roots(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            const double dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Symmetric pair; the middle root of odd n is exactly zero.
        if (n % 2 == 1 && i == n / 2) x = 0.0;
        roots(n - 1 - i) = x;
        roots(i) = -x;
    }
    return roots;
}

NodeSet generate_design(const DesignSpec& spec) {
    if (spec.n < 1) throw std::invalid_argument("design: n must be >= 1");
    if (spec.dim < 1) throw std::invalid_argument("design: dim must be >= 1");
    const int n = spec.n, d = spec.dim;
    switch (spec.strategy) {
        case DesignStrategy::RandomFromP: {
            Rng rng(derive_seed(spec.seed, "design-random"));
            NodeSet X(n, d);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < d; ++j) X(i, j) = rng.uniform();
            return X;
        }
        case DesignStrategy::LatinHypercube: {
            Rng rng(derive_seed(spec.seed, "design-lhs"));
            NodeSet X(n, d);
            std::vector<int> perm(static_cast<std::size_t>(n));
            for (int j = 0; j < d; ++j) {
                std::iota(perm.begin(), perm.end(), 0);
                for (int i = n - 1; i > 0; --i)
                    std::swap(perm[static_cast<std::size_t>(i)],
                              perm[rng.below(static_cast<std::uint64_t>(i) + 1)]);
                for (int i = 0; i < n; ++i)
                    X(i, j) = (perm[static_cast<std::size_t>(i)] + rng.uniform()) / n;
            }
            return X;
        }
        case DesignStrategy::Sobol:
            return sobol_points(d, n);
        case DesignStrategy::LegendreRoots: {
            int m = 0;
            check_tensor(n, d, m);
            const Vector t = legendre_roots(m);
            return tensor_of(((t.array() + 1.0) / 2.0).matrix(), d);
        }
        case DesignStrategy::TensorGrid: {
            int m = 0;
            check_tensor(n, d, m);
            Vector axis(m);
            for (int i = 0; i < m; ++i) axis(i) = (i + 1.0) / (m + 1.0);
            return tensor_of(axis, d);
        }
    }
    return {};
}

DesignGeometry design_geometry(const NodeSet& X, int grid_resolution) {
    const Eigen::Index n = X.rows();
    const int d = static_cast<int>(X.cols());
    if (n < 2) throw std::invalid_argument("design_geometry: separation radius needs >= 2 nodes");
    DesignGeometry g;
    if (d == 1) {
        std::vector<double> x(X.data(), X.data() + n);
        std::sort(x.begin(), x.end());
        double h = std::max(x.front(), 1.0 - x.back());
        double gap_min = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < x.size(); ++i) {
            const double gap = x[i] - x[i - 1];
            if (!(gap > 0.0)) throw std::invalid_argument("design_geometry: duplicate nodes");
            h = std::max(h, gap / 2.0);
            gap_min = std::min(gap_min, gap);
        }
        g.fill_distance = h;
        g.separation_radius = gap_min / 2.0;
    } else {
        if (d > 3) throw std::invalid_argument("design_geometry: grid evaluation needs d <= 3");
        if (grid_resolution < 2) throw std::invalid_argument("design_geometry: resolution >= 2");
        double dmin = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < i; ++j) dmin = std::min(dmin, (X.row(i) - X.row(j)).norm());
        if (!(dmin > 0.0)) throw std::invalid_argument("design_geometry: duplicate nodes");
        g.separation_radius = dmin / 2.0;
        std::int64_t total = 1;
        for (int k = 0; k < d; ++k) total *= grid_resolution;
        double h = 0.0;
        Eigen::RowVectorXd p(d);
        for (std::int64_t r = 0; r < total; ++r) {
            std::int64_t idx = r;
            for (int k = 0; k < d; ++k) {
                p(k) = static_cast<double>(idx % grid_resolution) / (grid_resolution - 1);
                idx /= grid_resolution;
            }
            double best = std::numeric_limits<double>::infinity();
            for (Eigen::Index i = 0; i < n; ++i) best = std::min(best, (X.row(i) - p).norm());
            h = std::max(h, best);
        }
        g.fill_distance = h;
        g.fill_distance_exact = false;
    }
    g.mesh_ratio = g.fill_distance / g.separation_radius;
    return g;
}

DesignStrategy parse_strategy(std::string_view name) {
    if (name == "random") return DesignStrategy::RandomFromP;
    if (name == "lhs") return DesignStrategy::LatinHypercube;
    if (name == "sobol") return DesignStrategy::Sobol;
    if (name == "legendre") return DesignStrategy::LegendreRoots;
    if (name == "grid") return DesignStrategy::TensorGrid;
    throw ConfigError("unknown sampler '" + std::string(name) + "'");
}

std::string strategy_name(DesignStrategy s) {
    switch (s) {
        case DesignStrategy::RandomFromP: return "random";
        case DesignStrategy::LatinHypercube: return "lhs";
        case DesignStrategy::Sobol: return "sobol";
        case DesignStrategy::LegendreRoots: return "legendre";
        case DesignStrategy::TensorGrid: return "grid";
    }
    return "";
}

}  // namespace bq
