#include "splineproj/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "splineproj/errors.hpp"
#include "splineproj/gram.hpp"
#include "splineproj/quadrature.hpp"

namespace splineproj {

namespace {

constexpr double kNoiseFloor = 1e-12;  // relative to the envelope maximum
constexpr double kTwoPi = 6.283185307179586476925286766559;

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    int points = 0;
};

LineFit fit_line(const std::vector<std::pair<double, double>>& xy) {
    LineFit out;
    out.points = static_cast<int>(xy.size());
    if (xy.size() < 2) return out;
    double sx = 0.0, sy = 0.0;
    for (const auto& [x, y] : xy) {
        sx += x;
        sy += y;
    }
    const double mx = sx / xy.size(), my = sy / xy.size();
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [x, y] : xy) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if (sxx == 0.0) return out;
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    out.r2 = (syy == 0.0) ? 1.0 : (sxy * sxy) / (sxx * syy);
    return out;
}

DecayFit fit_envelope(const std::map<int, double>& env) {
    if (env.size() < 3)
        throw DegenerateFit("only " + std::to_string(env.size()) +
                            " distinct index distances");
    DecayFit fit;
    fit.envelope.assign(env.begin(), env.end());
    double vmax = 0.0;
    for (const auto& [d, v] : fit.envelope) vmax = std::max(vmax, v);
    const double floor = vmax * kNoiseFloor;
    std::vector<std::pair<double, double>> pts;
    for (const auto& [d, v] : fit.envelope)
        if (v > floor) pts.emplace_back(d, std::log(v));
    if (pts.size() < 3) {
        fit.exact_banded = true;
        fit.gamma_hat = 0.0;
        fit.k_hat = vmax;
        fit.max_violation_ratio = (vmax > 0.0) ? 1.0 : 0.0;
        return fit;
    }
    fit.gamma_hat = std::exp(fit_line(pts).slope);
    double khat = 0.0;
    for (const auto& [d, v] : fit.envelope) {
        if (v <= floor) continue;
        khat = std::max(khat, v / std::pow(fit.gamma_hat, d));
    }
    fit.k_hat = khat;
    double viol = 0.0;
    for (const auto& [d, v] : fit.envelope) {
        if (v <= floor) continue;
        viol = std::max(viol, v / (khat * std::pow(fit.gamma_hat, d)));
    }
    fit.max_violation_ratio = viol;
    return fit;
}

// Shortest arc containing both supports, capped at one period.
double cyclic_hull_length(const PeriodicBSplineBasis& basis, int i, int j) {
    const PeriodicKnotVector& pk = basis.knots();
    const int k = basis.order();
    double best = 2.0;
    for (int r = -1; r <= 1; ++r) {
        const double lo = std::min(pk.knot(i), pk.knot(j) + r);
        const double hi = std::max(pk.knot(i + static_cast<long>(k)),
                                   pk.knot(j + static_cast<long>(k)) + r);
        best = std::min(best, hi - lo);
    }
    return std::min(best, 1.0);
}

double cell_length_at(const BSplineBasis& basis, double x) {
    const std::vector<Cell>& cs = basis.cells();
    auto it = std::upper_bound(cs.begin(), cs.end(), x,
                               [](double v, const Cell& c) { return v < c.a; });
    if (it == cs.begin())
        throw DomainViolation("point " + std::to_string(x) + " below the domain");
    --it;
    return it->b - it->a;
}

}  // namespace

DecayFit fit_inverse_decay(const DualBasis& dual, Weighting weighting) {
    const BSplineBasis& basis = dual.basis();
    const DenseMatrix& inv = dual.inverse();
    const int n = basis.count();
    const int first = basis.first_index();
    std::map<int, double> env;
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const double w =
                (weighting == Weighting::hull)
                    ? basis.hull_length(first + i, first + j)
                    : std::max(basis.kappa(first + i), basis.kappa(first + j));
            double& slot = env[j - i];
            slot = std::max(slot, std::abs(inv.at(i, j)) * w);
        }
    }
    return fit_envelope(env);
}

DecayFit fit_inverse_decay(const PeriodicDualBasis& dual, Weighting weighting) {
    const PeriodicBSplineBasis& basis = dual.basis();
    const DenseMatrix& inv = dual.inverse();
    const int n = basis.count();
    std::map<int, double> env;
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const double w = (weighting == Weighting::hull)
                                 ? cyclic_hull_length(basis, i, j)
                                 : std::max(basis.kappa(i), basis.kappa(j));
            const int d = std::min(j - i, n - (j - i));
            double& slot = env[d];
            slot = std::max(slot, std::abs(inv.at(i, j)) * w);
        }
    }
    return fit_envelope(env);
}

Lemma1Report check_lemma1_bound(const DualBasis& dual, const std::vector<int>& J,
                                const std::function<double(double)>& h, PNorm p,
                                const std::vector<double>& sample_xs,
                                int cells_per_interval) {
    const BSplineBasis& basis = dual.basis();
    if (J.empty()) throw EmptySet("index set J is empty");
    if (sample_xs.empty()) throw EmptySet("no sample points");
    for (int j : J)
        if (j < basis.first_index() || j > basis.last_index())
            throw IndexOutOfRange("index " + std::to_string(j) + " outside the basis range");
    const int n = basis.count();
    const int first = basis.first_index();

    std::vector<std::pair<double, double>> cells;
    cells.reserve(basis.cells().size());
    for (const Cell& c : basis.cells()) cells.emplace_back(c.a, c.b);
    const double hnorm = function_norm(h, cells, p, cells_per_interval);

    const MomentVector mv = moment_vector(basis, h, cells_per_interval);
    const DenseMatrix& inv = dual.inverse();
    std::vector<double> coeffs(static_cast<std::size_t>(n), 0.0);
    for (int j : J) {
        const double bj = mv.values[static_cast<std::size_t>(j - first)];
        if (bj == 0.0) continue;
        for (int m = 0; m < n; ++m)
            coeffs[static_cast<std::size_t>(m)] += bj * inv.at(j - first, m);
    }
    const Spline f(basis, std::move(coeffs));

    const DecayFit fit = fit_inverse_decay(dual, Weighting::hull);
    const double invp = (p == PNorm::one) ? 1.0 : (p == PNorm::two) ? 0.5 : 0.0;
    const double invq = 1.0 - invp;

    Lemma1Report rep;
    rep.h_norm = hnorm;
    rep.gamma_hat = fit.gamma_hat;
    rep.k_hat = fit.k_hat;
    auto bump = [](double& slot, double fx, double denom) {
        if (denom > 0.0)
            slot = std::max(slot, fx / denom);
        else if (fx > 0.0)
            slot = std::numeric_limits<double>::infinity();
    };
    for (double x : sample_xs) {
        const double fx = std::abs(f(x));
        const std::vector<int> ix = basis.index_set(x);
        const int d = index_distance(ix, J);
        rep.max_distance = std::max(rep.max_distance, d);
        double w1 = 0.0, w2 = 0.0;
        for (int m : ix) {
            for (int j : J) {
                w1 = std::max(w1, std::pow(basis.kappa(j), invq) / basis.hull_length(j, m));
                w2 = std::max(w2, std::pow(std::max(basis.kappa(m), basis.kappa(j)), -invp));
            }
        }
        const double w3 = std::pow(cell_length_at(basis, x), -invp);
        const double base = fit.k_hat * std::pow(fit.gamma_hat, d) * hnorm;
        bump(rep.ratio_hull, fx, base * w1);
        bump(rep.ratio_maxsupp, fx, base * w2);
        bump(rep.ratio_cell, fx, base * w3);
    }
    return rep;
}

Lemma2Report check_lemma2_decay(const PeriodicBSplineBasis& basis, int i,
                                const std::vector<double>& sample_xs,
                                const std::function<double(double)>& f_in,
                                int cells_per_interval) {
    const PeriodicKnotVector& pk = basis.knots();
    const int n = basis.count();
    const int k = basis.order();
    if (i < 0 || i >= n)
        throw IndexOutOfRange("cell index " + std::to_string(i) + " outside [0, " +
                              std::to_string(n) + ")");
    const double si = pk.knot(i);
    const double arc = pk.knot(i + 1L) - si;
    if (!(arc > 0.0)) throw EmptyCell("cell " + std::to_string(i) + " has zero length");
    if (sample_xs.empty()) throw EmptySet("no sample points");

    std::function<double(double)> f = f_in;
    if (!f)
        f = [si, arc](double x) { return (wrap01(x - si) < arc) ? 1.0 : 0.0; };

    Lemma2Report rep;
    for (int q = 0; q < 256; ++q)
        rep.f_sup = std::max(rep.f_sup, std::abs(f(wrap01(si + arc * (q + 0.5) / 256))));

    const PeriodicProjection pp = project(basis, f, cells_per_interval);

    const std::vector<int> supp_set = basis.index_set(si, si + arc);
    std::map<int, double> env;
    for (double x : sample_xs) {
        const double xt = wrap01(x);
        const double val = std::abs(pp.spline(xt));
        const int d = index_distance_cyclic(basis.index_set(xt), supp_set, n);
        double& slot = env[d];
        slot = std::max(slot, val);
    }
    rep.envelope.assign(env.begin(), env.end());
    double vmax = 0.0;
    for (const auto& [d, v] : rep.envelope) vmax = std::max(vmax, v);
    std::vector<std::pair<double, double>> pts;
    for (const auto& [d, v] : rep.envelope)
        if (v > vmax * 1e-13) pts.emplace_back(d, std::log(v));
    const LineFit lf = fit_line(pts);
    rep.slope = lf.slope;
    rep.intercept = lf.intercept;
    rep.r_squared = lf.r2;
    if (!rep.envelope.empty()) {
        rep.max_distance = rep.envelope.back().first;
        rep.far_field = rep.envelope.back().second;
    }

    // Window decomposition P~f(x) = PTf(r(x)) + g(r(x)) on [s_i, s_{i+n+1}].
    const BSplineBasis wb{lift_window(pk, i)};
    auto lift_f = [&f](double t) { return f(wrap01(t)); };
    const Projection ptf = project(wb, lift_f, cells_per_interval);
    auto lift_pf = [&pp](double t) { return pp.spline(t); };
    const MomentVector tm = moment_vector(wb, lift_pf, cells_per_interval);
    const BandedSymmetricMatrix gw = gram_matrix(wb);
    std::vector<double> cg = cholesky_solve(gw, tm.values);
    const std::vector<double>& cp = ptf.spline.coeffs();
    for (std::size_t r = 0; r < cg.size(); ++r) cg[r] -= cp[r];
    const std::vector<double> mg = gw.multiply(cg);
    // interior moments <g, N_j> = 0 for j = 0 .. n-k+1; window rows start at -k+1
    for (int j = 0; j <= n - k + 1; ++j)
        rep.interior_moment_max =
            std::max(rep.interior_moment_max, std::abs(mg[static_cast<std::size_t>(j + k - 1)]));
    const Spline g(wb, std::move(cg));

    for (double x : sample_xs) {
        const double xt = wrap01(x);
        const double y = si + wrap01(xt - si);  // representative in [s_i, s_i + 1)
        const double ptv = ptf.spline(y);
        const double gv = g(y);
        rep.pt_term_max = std::max(rep.pt_term_max, std::abs(ptv));
        rep.g_term_max = std::max(rep.g_term_max, std::abs(gv));
        rep.decomposition_error =
            std::max(rep.decomposition_error, std::abs(pp.spline(xt) - ptv - gv));
    }
    return rep;
}

SweepResult sweep_uniform_boundedness(const std::vector<int>& orders,
                                      const std::vector<int>& ns, KnotLaw law,
                                      double min_ratio, int trials, std::uint64_t seed,
                                      int grid_per_cell) {
    if (orders.empty() || ns.empty()) throw EmptySet("orders and ns must be non-empty");
    if (trials < 1) throw OutOfRange("trials must be positive");
    if (law == KnotLaw::seeded_random && !(min_ratio > 0.0))
        throw OutOfRange("min_ratio must be positive");
    SweepResult out;
    for (int k : orders) {
        double kmax = 0.0;
        for (int n : ns) {
            const int t_eff = (law == KnotLaw::uniform) ? 1 : trials;
            double nmax = 0.0;
            for (int trial = 0; trial < t_eff; ++trial) {
                PeriodicKnotVector pk = [&] {
                    if (law == KnotLaw::uniform) return uniform_periodic_knots(k, n);
                    SplitRng rng = SplitRng::fork(
                        seed, {0x6b6e6f74ULL, static_cast<std::uint64_t>(k),
                               static_cast<std::uint64_t>(n),
                               static_cast<std::uint64_t>(trial)});
                    return random_periodic_knots(k, n, min_ratio, rng);
                }();
                const PeriodicDualBasis dual{PeriodicBSplineBasis(std::move(pk))};
                const double leb = lebesgue_constant(dual, grid_per_cell);
                out.entries.push_back(SweepEntry{k, n, trial, leb});
                nmax = std::max(nmax, leb);
            }
            out.per_order_n_max.emplace_back(k, n, nmax);
            kmax = std::max(kmax, nmax);
        }
        out.per_order_max.emplace_back(k, kmax);
    }
    return out;
}

TestFunction make_test_function(const std::string& id) {
    TestFunction tf;
    tf.id = id;
    if (id == "sin") {
        tf.f = [](double x) { return std::sin(kTwoPi * x); };
        tf.smooth = true;
    } else if (id == "hat") {
        tf.f = [](double x) { return 1.0 - 2.0 * std::abs(wrap01(x) - 0.5); };
    } else if (id == "step") {
        tf.f = [](double x) {
            const double t = wrap01(x);
            return (t >= 0.3 && t < 0.8) ? 1.0 : 0.0;
        };
        tf.singularities = {0.3, 0.8};
    } else if (id == "pow13") {
        tf.f = [](double x) { return std::pow(std::abs(wrap01(x) - 0.5), -1.0 / 3.0); };
        tf.singularities = {0.5};
    } else if (id == "pow12") {
        tf.f = [](double x) { return std::pow(std::abs(wrap01(x) - 0.5), -0.5); };
        tf.singularities = {0.5};
    } else {
        throw ParseError("unknown test function '" + id +
                         "' (expected sin, hat, step, pow13, pow12)");
    }
    return tf;
}

ConvergenceTable run_convergence_experiment(const TestFunction& tf, int order,
                                            const std::vector<int>& ns,
                                            const std::vector<double>& tracked_points,
                                            PartitionLaw law, double min_ratio,
                                            std::uint64_t seed, int grid_size,
                                            int cells_per_interval) {
    if (ns.empty()) throw EmptySet("ns must be non-empty");
    for (std::size_t j = 1; j < ns.size(); ++j)
        if (ns[j] <= ns[j - 1]) throw NotSorted("ns must be strictly increasing");
    if (grid_size < 1) throw OutOfRange("grid_size must be positive");
    for (double t : tracked_points) {
        if (!(t >= 0.0 && t < 1.0))
            throw OutOfRange("tracked point " + std::to_string(t) + " outside [0, 1)");
        for (double s : tf.singularities)
            if (std::abs(t - s) < 1e-9)
                throw OutOfRange("tracked point " + std::to_string(t) +
                                 " coincides with a singularity");
    }

    ConvergenceTable table;
    table.tracked_points = tracked_points;
    std::vector<std::pair<double, double>> fitpts;
    for (int n : ns) {
        PeriodicKnotVector pk = [&] {
            if (law == PartitionLaw::uniform) return uniform_periodic_knots(order, n);
            SplitRng rng = SplitRng::fork(seed, {0x636f6e76ULL,
                                                 static_cast<std::uint64_t>(order),
                                                 static_cast<std::uint64_t>(n)});
            return random_periodic_knots(order, n, min_ratio, rng);
        }();
        ConvergenceRow row;
        row.n = n;
        row.mesh_width = pk.mesh_width();
        const PeriodicBSplineBasis basis(std::move(pk));
        const PeriodicProjection pp =
            project(basis, tf.f, cells_per_interval, tf.singularities);
        for (int g = 0; g < grid_size; ++g) {
            const double x = (g + 0.5) / grid_size;
            const double err = std::abs(pp.spline(x) - tf.f(x));
            row.sup_error = std::max(row.sup_error, err);
            row.l1_error += err / grid_size;
        }
        for (double t : tracked_points)
            row.tracked_errors.push_back(std::abs(pp.spline(t) - tf.f(t)));
        if (row.sup_error > 0.0)
            fitpts.emplace_back(std::log(static_cast<double>(n)), std::log(row.sup_error));
        table.rows.push_back(std::move(row));
    }
    table.fitted_order = -fit_line(fitpts).slope;
    return table;
}

PeriodicKnotVector random_periodic_knots(int order, int n, double min_ratio,
                                         SplitRng& rng) {
    if (!(min_ratio > 0.0)) throw OutOfRange("min_ratio must be positive");
    if (n < order)
        throw TooFewKnots("periodic sequence needs at least " + std::to_string(order) +
                          " knots");
    if (min_ratio >= 1.0)
        throw OutOfRange("min_ratio " + std::to_string(min_ratio) +
                         " leaves no room for " + std::to_string(n) + " cells");
    const double gap = min_ratio / n;
    std::vector<double> s(static_cast<std::size_t>(n));
    for (int attempt = 0; attempt < 1000000; ++attempt) {
        for (double& v : s) v = rng.uniform();
        std::sort(s.begin(), s.end());
        bool ok = true;
        for (int j = 0; j + 1 < n; ++j) {
            if (s[static_cast<std::size_t>(j + 1)] - s[static_cast<std::size_t>(j)] < gap) {
                ok = false;
                break;
            }
        }
        if (ok && n >= 1 && 1.0 - s[static_cast<std::size_t>(n - 1)] + s[0] < gap)
            ok = false;
        if (ok) return PeriodicKnotVector(order, s);
    }
    throw OutOfRange("rejection sampling failed: min_ratio " + std::to_string(min_ratio) +
                     " with n = " + std::to_string(n) + " is too restrictive");
}

KnotVector random_clamped_knots(int order, int num_basis, double min_ratio,
                                SplitRng& rng) {
    if (!(min_ratio > 0.0)) throw OutOfRange("min_ratio must be positive");
    const int k = order;
    if (num_basis < k)
        throw TooFewKnots("need at least " + std::to_string(k) + " basis functions");
    const int cells = num_basis - k + 1;
    const int interior = cells - 1;
    const double gap = min_ratio / cells;
    std::vector<double> p(static_cast<std::size_t>(interior));
    for (int attempt = 0; attempt < 1000000; ++attempt) {
        for (double& v : p) v = rng.uniform();
        std::sort(p.begin(), p.end());
        bool ok = true;
        double prev = 0.0;
        for (double v : p) {
            if (v - prev < gap) {
                ok = false;
                break;
            }
            prev = v;
        }
        if (ok && 1.0 - prev < gap) ok = false;
        if (!ok) continue;
        std::vector<double> t;
        t.reserve(static_cast<std::size_t>(num_basis + k));
        for (int c = 0; c < k; ++c) t.push_back(0.0);
        t.insert(t.end(), p.begin(), p.end());
        for (int c = 0; c < k; ++c) t.push_back(1.0);
        return KnotVector(k, std::move(t));
    }
    throw OutOfRange("rejection sampling failed: min_ratio " + std::to_string(min_ratio) +
                     " with " + std::to_string(num_basis) + " functions is too restrictive");
}

double integrate(const std::function<double(double)>& f,
                 const std::vector<std::pair<double, double>>& cells, int rule_order,
                 int subdivisions) {
    const QuadratureRule qr = QuadratureRule::over_cells(cells, rule_order, subdivisions);
    double acc = 0.0;
    for (const auto& c : qr.cells)
        for (std::size_t q = 0; q < c.x.size(); ++q) acc += c.w[q] * f(c.x[q]);
    return acc;
}

double function_norm(const std::function<double(double)>& f,
                     const std::vector<std::pair<double, double>>& cells, PNorm p,
                     int subdivisions) {
    switch (p) {
        case PNorm::one:
            return integrate([&f](double x) { return std::abs(f(x)); }, cells, 8,
                             subdivisions);
        case PNorm::two:
            return std::sqrt(integrate([&f](double x) { return f(x) * f(x); }, cells, 8,
                                       subdivisions));
        case PNorm::inf: {
            double m = 0.0;
            for (const auto& [a, b] : cells) {
                if (!(b > a)) continue;
                for (int q = 0; q < 64; ++q)
                    m = std::max(m, std::abs(f(a + (b - a) * (q + 0.5) / 64)));
            }
            return m;
        }
    }
    return 0.0;
}

}  // namespace splineproj
