#pragma once

#include "bq/types.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace bq {

enum class DesignStrategy { RandomFromP, LatinHypercube, Sobol, LegendreRoots, TensorGrid };

struct DesignSpec {
    DesignStrategy strategy = DesignStrategy::RandomFromP;
    int dim = 1;
    int n = 1;
    std::uint64_t seed = 0;  // random strategies only
};

struct DesignGeometry {
    double fill_distance = 0.0;
    double separation_radius = 0.0;
    double mesh_ratio = 0.0;
    bool fill_distance_exact = true;
};

inline constexpr int kSobolMaxDim = 16;

// n distinct points in [0,1]^d. LegendreRoots and TensorGrid in d ≥ 2 are
// tensor products and require n to be a perfect d-th power.
[[nodiscard]] NodeSet generate_design(const DesignSpec& spec);

// First n points of the unscrambled Sobol sequence (which are the first n
// points of the enclosing power-of-two block).
[[nodiscard]] NodeSet sobol_points(int dim, std::int64_t n);

// Gauss–Legendre roots on [-1, 1], ascending.
[[nodiscard]] Vector legendre_roots(int n);

// q exact; h exact in d = 1, grid lower bound with `grid_resolution` points
// per axis (boundary included) for d ∈ {2, 3}.
[[nodiscard]] DesignGeometry design_geometry(const NodeSet& X, int grid_resolution = 101);

[[nodiscard]] DesignStrategy parse_strategy(std::string_view name);
[[nodiscard]] std::string strategy_name(DesignStrategy s);

}  // namespace bq
