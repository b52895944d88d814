#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "splineproj/banded_matrix.hpp"
#include "splineproj/bspline.hpp"
#include "splineproj/cyclic_matrix.hpp"
#include "splineproj/gram.hpp"

namespace splineproj {

/// Spline in B-spline coordinates; coeffs[r] multiplies the basis function
/// with signed index first_index() + r.
class Spline {
public:
    Spline(BSplineBasis basis, std::vector<double> coeffs);

    double operator()(double x) const;

    const BSplineBasis& basis() const { return basis_; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    /// Coefficient by signed basis index.
    double coeff(int i) const;

private:
    BSplineBasis basis_;
    std::vector<double> coeffs_;
};

/// Spline on the circle; evaluation wraps the argument into [0, 1).
class PeriodicSpline {
public:
    PeriodicSpline(PeriodicBSplineBasis basis, std::vector<double> coeffs);

    double operator()(double x) const;

    const PeriodicBSplineBasis& basis() const { return basis_; }
    const std::vector<double>& coeffs() const { return coeffs_; }

private:
    PeriodicBSplineBasis basis_;
    std::vector<double> coeffs_;
};

struct Projection {
    Spline spline;
    double quad_error = 0.0;
};

struct PeriodicProjection {
    PeriodicSpline spline;
    double quad_error = 0.0;
};

/// L2-orthogonal projection of f onto the spline space: solves G c = b with
/// the Gram matrix G and moments b_i = integral of f N_i.
Projection project(const BSplineBasis& basis, const std::function<double(double)>& f,
                   int cells_per_interval = 8,
                   const std::vector<double>& singularities = {});

PeriodicProjection project(const PeriodicBSplineBasis& basis,
                           const std::function<double(double)>& f,
                           int cells_per_interval = 8,
                           const std::vector<double>& singularities = {});

/// Dual basis and projection kernel data: holds the Gram matrix and its full
/// inverse A, giving the dual functions N*_i = sum_j A_ij N_j and the kernel
/// K(x, y) = sum_ij A_ij N_i(x) N_j(y), so that (Pf)(x) = integral of
/// K(x, y) f(y) dy.
class DualBasis {
public:
    explicit DualBasis(BSplineBasis basis);

    const BSplineBasis& basis() const { return basis_; }
    const BandedSymmetricMatrix& gram() const { return gram_; }
    const DenseMatrix& inverse() const { return inv_; }

    /// Inverse Gram entry by signed basis indices.
    double inverse_entry(int i, int j) const;
    /// Dual function N*_i at x.
    double dual_value(int i, double x) const;
    double kernel(double x, double y) const;

private:
    BSplineBasis basis_;
    BandedSymmetricMatrix gram_;
    DenseMatrix inv_;
};

class PeriodicDualBasis {
public:
    explicit PeriodicDualBasis(PeriodicBSplineBasis basis);

    const PeriodicBSplineBasis& basis() const { return basis_; }
    const CyclicBandedMatrix& gram() const { return gram_; }
    const DenseMatrix& inverse() const { return inv_; }

    double inverse_entry(int i, int j) const;
    double dual_value(int i, double x) const;
    /// Kernel at torus coordinates; arguments are wrapped into [0, 1).
    double kernel(double x, double y) const;

private:
    PeriodicBSplineBasis basis_;
    CyclicBandedMatrix gram_;
    DenseMatrix inv_;
};

/// Integral of |sum_r coeffs[r] N_r| over the domain.  Integration is exact
/// per polynomial piece: sign changes are located by sampling and bisection
/// and each signed piece gets an order-k Gauss rule.  Cells whose coefficient
/// bound max|c| * length is at most cell_skip_bound are skipped (their total
/// contribution is below that bound).
double integrate_abs(const BSplineBasis& basis, const std::vector<double>& coeffs,
                     double cell_skip_bound = 0.0);

double integrate_abs(const PeriodicBSplineBasis& basis, const std::vector<double>& coeffs,
                     double cell_skip_bound = 0.0);

/// Lebesgue constant of the projector in the sup norm: the maximum of
/// integral |K(x, .)| over a nested family of evaluation grids laying
/// grid_per_cell points uniformly in every knot cell (plus the right domain
/// endpoint).  Doubling grid_per_cell refines the grid in place, so reported
/// values grow monotonically with it.
double lebesgue_constant(const DualBasis& dual, int grid_per_cell = 32);

double lebesgue_constant(const PeriodicDualBasis& dual, int grid_per_cell = 32);

/// Window selection for projecting onto a biinfinite mesh segment.
struct WindowPolicy {
    /// Cells kept on each side of supp f; 0 picks the radius automatically
    /// from the fitted inverse decay rate and tail_eps.
    int radius_cells = 0;
    double tail_eps = 1e-9;
};

struct WindowedProjection {
    Spline spline;
    int radius = 0;
    double quad_error = 0.0;
    /// Max change of the projection over the support hull of f when the
    /// window is enlarged by k cells on each side.
    double center_change = 0.0;
    /// Max residual of the normal equations, i.e. the worst violation of
    /// <Pf - f, N_i> = 0 over the window functions.
    double interior_residual = 0.0;
    /// Envelope of |Pf| by cell distance from supp f.
    std::vector<std::pair<int, double>> decay;
    /// Least-squares slope of log(envelope) per cell of distance.
    double log_decay_rate = 0.0;
};

/// Projects a compactly supported f onto the spline space of a long mesh
/// segment standing in for a biinfinite knot sequence.  points must be
/// strictly increasing and [supp_a, supp_b] must lie inside them; the window
/// keeps radius cells on each side of the support (clamped at the ends), and
/// WindowTooSmall reports a mesh too short for the requested or derived
/// radius plus the k-cell enlargement used for the stability check.
WindowedProjection project_windowed_biinfinite(
    const std::vector<double>& points, int order,
    const std::function<double(double)>& f, double supp_a, double supp_b,
    WindowPolicy policy = {}, int cells_per_interval = 8);

}  // namespace splineproj
