#pragma once

#include <utility>
#include <vector>

namespace splineproj {

/// Gauss-Legendre rule on the reference interval [0, 1].
/// Weights are positive and sum to 1; an m-point rule integrates
/// polynomials of degree <= 2m-1 exactly.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussRule gauss_legendre(int m);

/// Materialized nodes and weights over a list of cells: each nonempty cell
/// [a, b] is split into `subdivisions` equal parts carrying a scaled
/// order-m Gauss rule, so the weights over one cell sum to b - a.
struct QuadratureRule {
    struct Cell {
        double a = 0.0, b = 0.0;
        std::vector<double> x, w;
    };
    int order = 0;
    int subdivisions = 1;
    std::vector<Cell> cells;

    static QuadratureRule over_cells(const std::vector<std::pair<double, double>>& cells,
                                     int m, int subdivisions = 1);
};

}  // namespace splineproj
