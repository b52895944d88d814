#pragma once

#include <functional>
#include <vector>

#include "splineproj/banded_matrix.hpp"
#include "splineproj/bspline.hpp"
#include "splineproj/cyclic_matrix.hpp"
#include "splineproj/quadrature.hpp"

namespace splineproj {

/// Gram matrix G_ij = integral of N_i N_j, assembled cell by cell with an
/// order-k Gauss rule (products have degree 2k-2, so the rule is exact).
/// Matrix row r corresponds to basis index first_index() + r; the bandwidth
/// is k-1.
BandedSymmetricMatrix gram_matrix(const BSplineBasis& basis);

/// Periodic Gram matrix over one period of the circle; cyclic bandwidth k-1.
CyclicBandedMatrix periodic_gram_matrix(const PeriodicBSplineBasis& basis);

/// Moments b_i = integral of f N_i with a composite order-max(k,4) Gauss
/// rule on each knot cell split into cells_per_interval parts.  values[r]
/// belongs to basis index first_index() + r.  The quadrature error estimate
/// is the largest entry change when the subdivision is doubled; the returned
/// values come from the doubled rule.
struct MomentVector {
    std::vector<double> values;
    double quad_error = 0.0;
};

/// Quadrature nodes that collide with a declared singularity are shifted by
/// 1e-12 of the cell width; a non-finite sample anywhere else raises
/// NonFiniteSample.
MomentVector moment_vector(const BSplineBasis& basis,
                           const std::function<double(double)>& f,
                           int cells_per_interval = 8,
                           const std::vector<double>& singularities = {});

/// Periodic variant; f is sampled at torus coordinates (nodes are wrapped
/// into [0, 1)).  Declared singularities are torus points.
MomentVector periodic_moment_vector(const PeriodicBSplineBasis& basis,
                                    const std::function<double(double)>& f,
                                    int cells_per_interval = 8,
                                    const std::vector<double>& singularities = {});

}  // namespace splineproj
