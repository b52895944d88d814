#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "splineproj/knots.hpp"

namespace splineproj {

/// Maps x to its representative in [0, 1).
inline double wrap01(double x) { return x - std::floor(x); }

/// Nonempty cell of a knot sequence.  left_index is the signed knot index of
/// the left endpoint, so the basis functions active on the cell are
/// N_{left_index-k+1} .. N_{left_index}.
struct Cell {
    int left_index = 0;
    double a = 0.0, b = 0.0;
};

/// Values of the k basis functions that can be nonzero at a point:
/// N_{first}, ..., N_{first+count-1}.
struct ActiveValues {
    int first = 0;
    int count = 0;
    const double* values = nullptr;
};

/// B-spline basis over a knot sequence, normalized so the functions sum to
/// one (partition of unity on the evaluation domain).  Each N_i is
/// nonnegative, supported on [t_i, t_{i+k}], and evaluation follows the
/// right-continuity convention, with the left limit taken at the right end
/// of the domain.
class BSplineBasis {
public:
    explicit BSplineBasis(KnotVector kv);

    int order() const { return kv_.order(); }
    int count() const { return kv_.num_basis(); }
    int first_index() const { return kv_.basis_begin(); }
    int last_index() const { return kv_.basis_end() - 1; }

    const KnotVector& knots() const { return kv_; }
    double domain_min() const { return kv_.domain_min(); }
    double domain_max() const { return kv_.domain_max(); }

    /// Support length of N_i.
    double kappa(int i) const { return kv_.knot(i + order()) - kv_.knot(i); }
    std::pair<double, double> support(int i) const {
        return {kv_.knot(i), kv_.knot(i + order())};
    }
    /// Length of the convex hull of supp N_i and supp N_j.
    double hull_length(int i, int j) const;

    /// Single basis function value; exact zero outside [t_i, t_{i+k}].
    double value(int i, double x) const;

    /// Nonempty cells of the evaluation domain, in increasing order.
    const std::vector<Cell>& cells() const { return cells_; }

    /// Indices i with x in supp N_i (supports closed on both ends).
    std::vector<int> index_set(double x) const { return index_set(x, x); }
    /// Indices i whose support meets the closed interval [a, b].
    std::vector<int> index_set(double a, double b) const;

private:
    friend class LocalEvaluator;

    /// Array position p of the evaluation cell of x: T[p] <= x < T[p+1],
    /// with the left limit convention at the right end of the domain.
    int locate(double x) const;

    KnotVector kv_;
    std::vector<Cell> cells_;
};

/// Evaluates all active basis values at a point in one pass of the order-k
/// triangular recursion.  Holds its own scratch buffer so evaluation does
/// not allocate; use one evaluator per thread.
class LocalEvaluator {
public:
    explicit LocalEvaluator(const BSplineBasis& basis)
        : basis_(&basis), buf_(static_cast<std::size_t>(basis.order())) {}

    /// Values of N_{first} .. N_{first+k-1} at x; the returned pointers stay
    /// valid until the next call.
    ActiveValues operator()(double x);

    const BSplineBasis& basis() const { return *basis_; }

private:
    const BSplineBasis* basis_;
    std::vector<double> buf_;
};

/// Smallest absolute index difference between two index sets.
int index_distance(const std::vector<int>& u, const std::vector<int>& v);
/// Smallest cyclic index difference modulo n.
int index_distance_cyclic(const std::vector<int>& u, const std::vector<int>& v, int n);

/// Periodic B-spline basis on the circle: n functions obtained by
/// periodizing the basis over the extended knot sequence,
/// N~_j(x) = sum_r N_{j+rn}(x) with the sum over integer translates.
/// On a sequence rotated so that s_0 = 0 this reduces to the usual two-case
/// wrap-around formula for the last k-1 functions.
class PeriodicBSplineBasis {
public:
    explicit PeriodicBSplineBasis(PeriodicKnotVector pk);

    int order() const { return pk_.order(); }
    int count() const { return pk_.size(); }

    const PeriodicKnotVector& knots() const { return pk_; }

    /// Support length on the circle: min(s_{j+k} - s_j, 1).
    double kappa(int j) const;

    /// N~_j(x) for x in [0, 1).
    double value(int j, double x) const;

    /// The lifted non-periodic basis used internally; its signed indices are
    /// the extended-sequence indices, covering every function whose support
    /// meets one period.
    const BSplineBasis& window() const { return window_; }

    /// Reduces an extended-sequence index to the periodic index in [0, n).
    int wrap_index(long i) const;

    /// One period of nonempty cells in extended coordinates
    /// [s_0, s_1], ..., [s_{n-1}, s_n]; left_index is the extended index.
    const std::vector<Cell>& cells() const { return cells_; }

    /// Periodic indices j whose support (as an arc) contains the point x.
    std::vector<int> index_set(double x) const { return index_set(x, x); }
    /// Periodic indices j whose support meets the closed arc from a to b
    /// (b - a <= 1, endpoints taken on the extended line).
    std::vector<int> index_set(double a, double b) const;

private:
    PeriodicKnotVector pk_;
    BSplineBasis window_;
    std::vector<Cell> cells_;
};

/// Active-values evaluator for the periodic basis.  Returned indices are
/// extended-sequence indices; reduce with wrap_index to get periodic ones.
class PeriodicLocalEvaluator {
public:
    explicit PeriodicLocalEvaluator(const PeriodicBSplineBasis& basis)
        : basis_(&basis), inner_(basis.window()) {}

    /// x is taken on the extended line and must lie within one period of
    /// [0, 1); assembly over cells() passes extended coordinates directly.
    ActiveValues operator()(double x) { return inner_(x); }

    const PeriodicBSplineBasis& basis() const { return *basis_; }

private:
    const PeriodicBSplineBasis* basis_;
    LocalEvaluator inner_;
};

}  // namespace splineproj
