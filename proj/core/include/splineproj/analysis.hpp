#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "splineproj/projector.hpp"
#include "splineproj/rng.hpp"

namespace splineproj {

/// Weight attached to an inverse Gram entry a_ij before fitting its decay:
/// hull uses the convex-hull length h_ij of the two supports, maxsupp uses
/// max(kappa_i, kappa_j).  Hull weighting dominates: h_ij >= max support.
enum class Weighting { hull, maxsupp };

/// Geometric-decay fit of the weighted inverse Gram magnitudes
/// |a_ij| * w_ij <= K_hat * gamma_hat^d, d the (cyclic) index distance.
/// gamma_hat is the least-squares slope of the log envelope (per distance,
/// the max weighted magnitude); K_hat is then the smallest constant making
/// the bound hold on every entry, so max_violation_ratio is 1 by
/// construction.  Entries below the relative noise floor 1e-12 are rounding
/// residue of the inversion, not decay signal, and take part in neither the
/// fit nor the constant.  A matrix whose whole off-diagonal part sits below
/// the floor (e.g. order 1) reports gamma_hat = 0 with exact_banded set.
struct DecayFit {
    double k_hat = 0.0;
    double gamma_hat = 0.0;
    double max_violation_ratio = 0.0;
    bool exact_banded = false;
    std::vector<std::pair<int, double>> envelope;
};

/// Linear-distance fit; DegenerateFit when the matrix has fewer than three
/// distinct index distances.
DecayFit fit_inverse_decay(const DualBasis& dual, Weighting weighting);
/// Cyclic-distance fit with arc-length weights (support lengths and hulls
/// measured on the circle, capped at one period).
DecayFit fit_inverse_decay(const PeriodicDualBasis& dual, Weighting weighting);

enum class PNorm { one, two, inf };

/// Bound check for localized dual expansions f = sum_{j in J} <h, N_j> N_j*:
/// each ratio is the max over sample points of |f(x)| divided by
/// K_hat * gamma_hat^{d(i(x), J)} * ||h||_p * W(x), with the three weight
/// terms W ordered weakest to strongest:
///   ratio_hull:    W = max over m in i(x), j in J of kappa_j^{1/p'} / h_jm
///   ratio_maxsupp: W = max of max(kappa_m, kappa_j)^{-1/p}
///   ratio_cell:    W = |I(x)|^{-1/p} for the knot cell I(x) containing x
/// Sample points where both |f(x)| and the bound vanish are skipped.
struct Lemma1Report {
    double ratio_hull = 0.0;
    double ratio_maxsupp = 0.0;
    double ratio_cell = 0.0;
    double h_norm = 0.0;
    double gamma_hat = 0.0;
    double k_hat = 0.0;
    int max_distance = 0;
};

/// J holds signed basis indices; EmptySet when J is empty, IndexOutOfRange
/// when it leaves the basis range.
Lemma1Report check_lemma1_bound(const DualBasis& dual, const std::vector<int>& J,
                                const std::function<double(double)>& h, PNorm p,
                                const std::vector<double>& sample_xs,
                                int cells_per_interval = 8);

/// Localization study of the periodic projector applied to a function
/// supported in the single cell [s_i, s_{i+1}], together with the two-term
/// decomposition P~f(x) = PTf(r(x)) + g(r(x)) through the lifted window
/// space: T lifts a torus function to [s_i, s_{i+n+1}], r(x) is the
/// representative of x in [s_i, s_i + 1), P the window projector, and
/// g = (T P~ - P T) f, whose moments against the window functions N_0 ..
/// N_{n-k+1} vanish.
struct Lemma2Report {
    /// (cyclic index distance from supp f, max |P~f(x)|) over sample points.
    std::vector<std::pair<int, double>> envelope;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    /// Envelope value at the largest observed distance.
    double far_field = 0.0;
    int max_distance = 0;
    double f_sup = 0.0;
    double pt_term_max = 0.0;
    double g_term_max = 0.0;
    double interior_moment_max = 0.0;
    /// Max |P~f(x) - PTf(r(x)) - g(r(x))| over sample points.
    double decomposition_error = 0.0;
};

/// f defaults to the indicator of [s_i, s_{i+1}); a custom f must be
/// supported there.  EmptyCell when s_i = s_{i+1}.
Lemma2Report check_lemma2_decay(const PeriodicBSplineBasis& basis, int i,
                                const std::vector<double>& sample_xs,
                                const std::function<double(double)>& f = {},
                                int cells_per_interval = 8);

enum class KnotLaw { uniform, seeded_random };

struct SweepEntry {
    int order = 0;
    int n = 0;
    int trial = 0;
    double lebesgue = 0.0;
};

struct SweepResult {
    std::vector<SweepEntry> entries;
    /// (order, max Lebesgue constant over all n and trials).
    std::vector<std::pair<int, double>> per_order_max;
    /// (order, n, max over trials).
    std::vector<std::tuple<int, int, double>> per_order_n_max;
};

/// Lebesgue constants of periodic projectors over the (order, n, trial)
/// grid.  The uniform law ignores trials (one deterministic run per pair);
/// the seeded-random law draws knots with minimum cell length
/// min_ratio / n via rejection sampling from fork(seed, {order, n, trial}).
SweepResult sweep_uniform_boundedness(const std::vector<int>& orders,
                                      const std::vector<int>& ns, KnotLaw law,
                                      double min_ratio, int trials, std::uint64_t seed,
                                      int grid_per_cell = 16);

/// Named torus test functions: "sin" (smooth), "hat" (C0 kink),
/// "step" (jumps at 0.3 and 0.8), "pow13" and "pow12" (integrable poles
/// |x - 1/2|^{-1/3}, |x - 1/2|^{-1/2}).  ParseError on unknown ids.
struct TestFunction {
    std::string id;
    std::function<double(double)> f;
    std::vector<double> singularities;
    bool smooth = false;
};

TestFunction make_test_function(const std::string& id);

enum class PartitionLaw { uniform, seeded_random };

struct ConvergenceRow {
    int n = 0;
    double mesh_width = 0.0;
    double sup_error = 0.0;
    double l1_error = 0.0;
    std::vector<double> tracked_errors;
};

/// Projection errors of one test function over a sequence of periodic
/// partitions.  Errors are measured on a fixed fine grid of midpoints
/// (sup and mean absolute) and at the tracked points; fitted_order is the
/// least-squares slope of log sup_error against log n, negated.
struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    std::vector<double> tracked_points;
    double fitted_order = 0.0;
};

ConvergenceTable run_convergence_experiment(const TestFunction& tf, int order,
                                            const std::vector<int>& ns,
                                            const std::vector<double>& tracked_points,
                                            PartitionLaw law, double min_ratio,
                                            std::uint64_t seed, int grid_size = 2048,
                                            int cells_per_interval = 8);

/// Random periodic knots: n sorted uniform points in [0, 1), rejection
/// sampled until every cell (wrap cell included) is at least min_ratio / n
/// long.  OutOfRange if the condition keeps failing.
PeriodicKnotVector random_periodic_knots(int order, int n, double min_ratio,
                                         SplitRng& rng);

/// Random clamped knots on [0, 1]: num_basis - order sorted interior points
/// with the same minimum-gap law relative to the cell count.
KnotVector random_clamped_knots(int order, int num_basis, double min_ratio,
                                SplitRng& rng);

/// Composite Gauss integral of f over the cells.
double integrate(const std::function<double(double)>& f,
                 const std::vector<std::pair<double, double>>& cells, int rule_order,
                 int subdivisions);

/// ||f||_p over the cells: integral-based for p in {1, 2}, sampled max
/// (64 points per cell) for p = inf.
double function_norm(const std::function<double(double)>& f,
                     const std::vector<std::pair<double, double>>& cells, PNorm p,
                     int subdivisions);

}  // namespace splineproj
