#include "splineproj/projector.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "splineproj/errors.hpp"
#include "splineproj/quadrature.hpp"

namespace splineproj {

Spline::Spline(BSplineBasis basis, std::vector<double> coeffs)
    : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
    if (static_cast<int>(coeffs_.size()) != basis_.count())
        throw OutOfRange("coefficient count " + std::to_string(coeffs_.size()) +
                         " does not match basis size " + std::to_string(basis_.count()));
}

double Spline::operator()(double x) const {
    LocalEvaluator ev(basis_);
    const ActiveValues av = ev(x);
    const int row0 = av.first - basis_.first_index();
    double s = 0.0;
    for (int r = 0; r < av.count; ++r)
        s += coeffs_[static_cast<std::size_t>(row0 + r)] * av.values[r];
    return s;
}

double Spline::coeff(int i) const {
    if (i < basis_.first_index() || i > basis_.last_index())
        throw IndexOutOfRange("coefficient index " + std::to_string(i) + " outside [" +
                              std::to_string(basis_.first_index()) + ", " +
                              std::to_string(basis_.last_index()) + "]");
    return coeffs_[static_cast<std::size_t>(i - basis_.first_index())];
}

PeriodicSpline::PeriodicSpline(PeriodicBSplineBasis basis, std::vector<double> coeffs)
    : basis_(std::move(basis)), coeffs_(std::move(coeffs)) {
    if (static_cast<int>(coeffs_.size()) != basis_.count())
        throw OutOfRange("coefficient count " + std::to_string(coeffs_.size()) +
                         " does not match basis size " + std::to_string(basis_.count()));
}

double PeriodicSpline::operator()(double x) const {
    const double t = wrap01(x);
    LocalEvaluator ev(basis_.window());
    const ActiveValues av = ev(t);
    double s = 0.0;
    for (int r = 0; r < av.count; ++r)
        s += coeffs_[static_cast<std::size_t>(basis_.wrap_index(av.first + r))] * av.values[r];
    return s;
}

Projection project(const BSplineBasis& basis, const std::function<double(double)>& f,
                   int cells_per_interval, const std::vector<double>& singularities) {
    MomentVector mv = moment_vector(basis, f, cells_per_interval, singularities);
    std::vector<double> c = cholesky_solve(gram_matrix(basis), std::move(mv.values));
    return Projection{Spline(basis, std::move(c)), mv.quad_error};
}

PeriodicProjection project(const PeriodicBSplineBasis& basis,
                           const std::function<double(double)>& f,
                           int cells_per_interval, const std::vector<double>& singularities) {
    MomentVector mv = periodic_moment_vector(basis, f, cells_per_interval, singularities);
    std::vector<double> c = cholesky_solve(periodic_gram_matrix(basis), std::move(mv.values));
    return PeriodicProjection{PeriodicSpline(basis, std::move(c)), mv.quad_error};
}

DualBasis::DualBasis(BSplineBasis basis)
    : basis_(std::move(basis)), gram_(gram_matrix(basis_)), inv_(full_inverse(gram_)) {}

double DualBasis::inverse_entry(int i, int j) const {
    const int first = basis_.first_index();
    if (i < first || i > basis_.last_index() || j < first || j > basis_.last_index())
        throw IndexOutOfRange("inverse Gram index outside basis range");
    return inv_.at(i - first, j - first);
}

double DualBasis::dual_value(int i, double x) const {
    const int first = basis_.first_index();
    if (i < first || i > basis_.last_index())
        throw IndexOutOfRange("dual basis index " + std::to_string(i) + " outside range");
    LocalEvaluator ev(basis_);
    const ActiveValues av = ev(x);
    double s = 0.0;
    for (int r = 0; r < av.count; ++r)
        s += inv_.at(i - first, av.first - first + r) * av.values[r];
    return s;
}

double DualBasis::kernel(double x, double y) const {
    LocalEvaluator ex(basis_), ey(basis_);
    const ActiveValues ax = ex(x);
    const ActiveValues ay = ey(y);
    const int first = basis_.first_index();
    double s = 0.0;
    for (int r = 0; r < ax.count; ++r) {
        const int row = ax.first - first + r;
        double acc = 0.0;
        for (int q = 0; q < ay.count; ++q)
            acc += inv_.at(row, ay.first - first + q) * ay.values[q];
        s += ax.values[r] * acc;
    }
    return s;
}

PeriodicDualBasis::PeriodicDualBasis(PeriodicBSplineBasis basis)
    : basis_(std::move(basis)),
      gram_(periodic_gram_matrix(basis_)),
      inv_(full_inverse(gram_)) {}

double PeriodicDualBasis::inverse_entry(int i, int j) const {
    const int n = basis_.count();
    if (i < 0 || i >= n || j < 0 || j >= n)
        throw IndexOutOfRange("inverse Gram index outside [0, n)");
    return inv_.at(i, j);
}

double PeriodicDualBasis::dual_value(int i, double x) const {
    if (i < 0 || i >= basis_.count())
        throw IndexOutOfRange("dual basis index " + std::to_string(i) + " outside [0, n)");
    LocalEvaluator ev(basis_.window());
    const ActiveValues av = ev(wrap01(x));
    double s = 0.0;
    for (int r = 0; r < av.count; ++r)
        s += inv_.at(i, basis_.wrap_index(av.first + r)) * av.values[r];
    return s;
}

double PeriodicDualBasis::kernel(double x, double y) const {
    LocalEvaluator ex(basis_.window()), ey(basis_.window());
    const ActiveValues ax = ex(wrap01(x));
    const ActiveValues ay = ey(wrap01(y));
    double s = 0.0;
    for (int r = 0; r < ax.count; ++r) {
        const int row = basis_.wrap_index(ax.first + r);
        double acc = 0.0;
        for (int q = 0; q < ay.count; ++q)
            acc += inv_.at(row, basis_.wrap_index(ay.first + q)) * ay.values[q];
        s += ax.values[r] * acc;
    }
    return s;
}

namespace {

template <typename ValueAt>
double gauss_piece(const GaussRule& rule, ValueAt&& s, double a, double b) {
    const double len = b - a;
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
        acc += len * rule.weights[q] * s(a + len * rule.nodes[q]);
    return acc;
}

// Power-basis coefficients (ascending) of the polynomial interpolating
// (ts[j], fs[j]); Gaussian elimination with partial pivoting on the small
// Vandermonde system.
void vandermonde_fit(const std::vector<double>& ts, const std::vector<double>& fs,
                     std::vector<double>& c) {
    const int k = static_cast<int>(ts.size());
    std::vector<double> a(static_cast<std::size_t>(k) * k);
    c.assign(static_cast<std::size_t>(k), 0.0);
    for (int j = 0; j < k; ++j) {
        double p = 1.0;
        for (int i = 0; i < k; ++i) {
            a[static_cast<std::size_t>(j) * k + i] = p;
            p *= ts[static_cast<std::size_t>(j)];
        }
        c[static_cast<std::size_t>(j)] = fs[static_cast<std::size_t>(j)];
    }
    for (int col = 0; col < k; ++col) {
        int piv = col;
        for (int r = col + 1; r < k; ++r)
            if (std::abs(a[static_cast<std::size_t>(r) * k + col]) >
                std::abs(a[static_cast<std::size_t>(piv) * k + col]))
                piv = r;
        for (int i = 0; i < k; ++i)
            std::swap(a[static_cast<std::size_t>(col) * k + i],
                      a[static_cast<std::size_t>(piv) * k + i]);
        std::swap(c[static_cast<std::size_t>(col)], c[static_cast<std::size_t>(piv)]);
        const double diag = a[static_cast<std::size_t>(col) * k + col];
        for (int r = col + 1; r < k; ++r) {
            const double f = a[static_cast<std::size_t>(r) * k + col] / diag;
            if (f == 0.0) continue;
            for (int i = col; i < k; ++i)
                a[static_cast<std::size_t>(r) * k + i] -= f * a[static_cast<std::size_t>(col) * k + i];
            c[static_cast<std::size_t>(r)] -= f * c[static_cast<std::size_t>(col)];
        }
    }
    for (int col = k - 1; col >= 0; --col) {
        double s = c[static_cast<std::size_t>(col)];
        for (int i = col + 1; i < k; ++i)
            s -= a[static_cast<std::size_t>(col) * k + i] * c[static_cast<std::size_t>(i)];
        c[static_cast<std::size_t>(col)] = s / a[static_cast<std::size_t>(col) * k + col];
    }
}

double poly_eval(const std::vector<double>& c, double t) {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) v = v * t + c[i];
    return v;
}

// All roots of the polynomial (ascending power coefficients) in [lo, hi].
// Critical points come from recursing on the derivative; between consecutive
// critical points the polynomial is monotone, so every root sits in a
// bracket with a sign change and none can hide.
void poly_roots_in(std::vector<double> c, double lo, double hi, std::vector<double>& out) {
    double scale = 0.0;
    for (double v : c) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) return;
    while (c.size() > 1 && std::abs(c.back()) <= 1e-14 * scale) c.pop_back();
    const int deg = static_cast<int>(c.size()) - 1;
    if (deg == 0) return;
    if (deg == 1) {
        const double r = -c[0] / c[1];
        if (r >= lo && r <= hi) out.push_back(r);
        return;
    }
    std::vector<double> d(static_cast<std::size_t>(deg));
    for (int i = 1; i <= deg; ++i)
        d[static_cast<std::size_t>(i - 1)] = c[static_cast<std::size_t>(i)] * i;
    std::vector<double> brackets{lo};
    poly_roots_in(d, lo, hi, brackets);
    brackets.push_back(hi);
    std::sort(brackets.begin(), brackets.end());
    for (std::size_t j = 0; j + 1 < brackets.size(); ++j) {
        double u = brackets[j], v = brackets[j + 1];
        double fu = poly_eval(c, u), fv = poly_eval(c, v);
        if (fu == 0.0) out.push_back(u);
        if (fv == 0.0 && j + 2 == brackets.size()) out.push_back(v);
        if (fu == 0.0 || fv == 0.0 || (fu > 0.0) == (fv > 0.0)) continue;
        for (int it = 0; it < 100 && v - u > 1e-16 * (std::abs(u) + 1.0); ++it) {
            const double mid = 0.5 * (u + v);
            if (mid <= u || mid >= v) break;
            const double fm = poly_eval(c, mid);
            if (fm == 0.0) {
                u = v = mid;
                break;
            }
            if ((fm > 0.0) == (fu > 0.0)) {
                u = mid;
                fu = fm;
            } else {
                v = mid;
            }
        }
        out.push_back(0.5 * (u + v));
    }
}

// Shared by the clamped and periodic wrappers; row_of maps a signed active
// index to a coefficient slot.
template <typename Ev, typename RowOf>
double integrate_abs_impl(const std::vector<Cell>& cells, int k, Ev& ev, RowOf row_of,
                          const std::vector<double>& coeffs, double skip) {
    const GaussRule rule = gauss_legendre(k);
    auto value_at = [&](double x) {
        const ActiveValues av = ev(x);
        double s = 0.0;
        for (int r = 0; r < av.count; ++r)
            s += coeffs[static_cast<std::size_t>(row_of(av.first + r))] * av.values[r];
        return s;
    };
    std::vector<double> ts(static_cast<std::size_t>(k)), fs(static_cast<std::size_t>(k));
    std::vector<double> poly, cuts;
    double total = 0.0;
    for (const Cell& cell : cells) {
        double cmax = 0.0;
        for (int r = 0; r < k; ++r) {
            const double c = coeffs[static_cast<std::size_t>(row_of(cell.left_index - k + 1 + r))];
            cmax = std::max(cmax, std::abs(c));
        }
        const double len = cell.b - cell.a;
        if (cmax * len <= skip) continue;  // partition of unity bounds |s| by cmax

        // the restriction to one cell is a single degree k-1 polynomial:
        // recover it from k samples in normalized coordinates and cut the
        // cell at its roots
        for (int j = 0; j < k; ++j) {
            ts[static_cast<std::size_t>(j)] = (j + 0.5) / k;
            fs[static_cast<std::size_t>(j)] =
                value_at(cell.a + len * ts[static_cast<std::size_t>(j)]);
        }
        vandermonde_fit(ts, fs, poly);
        cuts.clear();
        poly_roots_in(poly, 0.0, 1.0, cuts);
        std::sort(cuts.begin(), cuts.end());

        double left = cell.a;
        for (double t : cuts) {
            const double cut = cell.a + len * t;
            if (cut <= left || cut >= cell.b) continue;
            total += std::abs(gauss_piece(rule, value_at, left, cut));
            left = cut;
        }
        total += std::abs(gauss_piece(rule, value_at, left, cell.b));
    }
    return total;
}

}  // namespace

double integrate_abs(const BSplineBasis& basis, const std::vector<double>& coeffs,
                     double cell_skip_bound) {
    if (static_cast<int>(coeffs.size()) != basis.count())
        throw OutOfRange("coefficient count does not match basis size");
    LocalEvaluator ev(basis);
    const int first = basis.first_index();
    return integrate_abs_impl(basis.cells(), basis.order(), ev,
                              [first](int i) { return i - first; }, coeffs,
                              cell_skip_bound);
}

double integrate_abs(const PeriodicBSplineBasis& basis, const std::vector<double>& coeffs,
                     double cell_skip_bound) {
    if (static_cast<int>(coeffs.size()) != basis.count())
        throw OutOfRange("coefficient count does not match basis size");
    PeriodicLocalEvaluator ev(basis);
    return integrate_abs_impl(basis.cells(), basis.order(), ev,
                              [&basis](int i) { return basis.wrap_index(i); }, coeffs,
                              cell_skip_bound);
}

namespace {

// Contribution of skipped cells in the Lebesgue scan stays below
// n * kSkip, far under the reported precision.
constexpr double kSkip = 1e-16;

}  // namespace

double lebesgue_constant(const DualBasis& dual, int grid_per_cell) {
    if (grid_per_cell < 1) throw OutOfRange("grid_per_cell must be positive");
    const BSplineBasis& basis = dual.basis();
    const int n = basis.count();
    const int first = basis.first_index();
    const DenseMatrix& inv = dual.inverse();
    LocalEvaluator ev(basis);
    std::vector<double> c(static_cast<std::size_t>(n));
    double best = 0.0;
    auto scan = [&](double x) {
        const ActiveValues av = ev(x);
        const int r0 = av.first - first;
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (int r = 0; r < av.count; ++r)
                acc += inv.at(r0 + r, j) * av.values[r];
            c[static_cast<std::size_t>(j)] = acc;
        }
        best = std::max(best, integrate_abs(basis, c, kSkip));
    };
    for (const Cell& cell : basis.cells())
        for (int g = 0; g < grid_per_cell; ++g)
            scan(cell.a + (cell.b - cell.a) * g / grid_per_cell);
    scan(basis.domain_max());
    return best;
}

double lebesgue_constant(const PeriodicDualBasis& dual, int grid_per_cell) {
    if (grid_per_cell < 1) throw OutOfRange("grid_per_cell must be positive");
    const PeriodicBSplineBasis& basis = dual.basis();
    const int n = basis.count();
    const DenseMatrix& inv = dual.inverse();
    PeriodicLocalEvaluator ev(basis);
    std::vector<double> c(static_cast<std::size_t>(n));
    double best = 0.0;
    for (const Cell& cell : basis.cells()) {
        for (int g = 0; g < grid_per_cell; ++g) {
            const double x = cell.a + (cell.b - cell.a) * g / grid_per_cell;
            const ActiveValues av = ev(x);
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int r = 0; r < av.count; ++r)
                    acc += inv.at(basis.wrap_index(av.first + r), j) * av.values[r];
                c[static_cast<std::size_t>(j)] = acc;
            }
            best = std::max(best, integrate_abs(basis, c, kSkip));
        }
    }
    return best;
}

namespace {

BSplineBasis window_basis(const std::vector<double>& points, int k, int lo, int hi) {
    std::vector<double> t;
    t.reserve(static_cast<std::size_t>(hi - lo + 1 + 2 * (k - 1)));
    for (int c = 0; c < k - 1; ++c) t.push_back(points[static_cast<std::size_t>(lo)]);
    for (int j = lo; j <= hi; ++j) t.push_back(points[static_cast<std::size_t>(j)]);
    for (int c = 0; c < k - 1; ++c) t.push_back(points[static_cast<std::size_t>(hi)]);
    return BSplineBasis(KnotVector(k, std::move(t), lo - (k - 1)));
}

double envelope_slope(const std::vector<std::pair<int, double>>& env, double floor,
                      int min_distance) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int m = 0;
    for (const auto& [d, v] : env) {
        if (d < min_distance || v <= floor) continue;
        const double yy = std::log(v);
        sx += d;
        sy += yy;
        sxx += static_cast<double>(d) * d;
        sxy += d * yy;
        ++m;
    }
    if (m < 3) return 0.0;
    const double det = m * sxx - sx * sx;
    if (det == 0.0) return 0.0;
    return (m * sxy - sx * sy) / det;
}

// Decay rate of the inverse Gram along its middle row, used to derive the
// window radius: gamma_hat = exp(slope of log |A_{c, c+d}|).
double pilot_decay_rate(const DualBasis& dual) {
    const int n = dual.basis().count();
    const DenseMatrix& inv = dual.inverse();
    const int c = n / 2;
    std::vector<std::pair<int, double>> env;
    const int dmax = std::min(n - 1 - c, c);
    for (int d = 1; d <= dmax; ++d)
        env.emplace_back(d, std::max(std::abs(inv.at(c, c + d)), std::abs(inv.at(c, c - d))));
    const double slope = envelope_slope(env, 1e-280, 1);
    if (slope >= 0.0) return 0.0;
    return std::exp(slope);
}

}  // namespace

WindowedProjection project_windowed_biinfinite(
    const std::vector<double>& points, int order,
    const std::function<double(double)>& f, double supp_a, double supp_b,
    WindowPolicy policy, int cells_per_interval) {
    const int k = order;
    if (k < 1) throw OutOfRange("order must be positive");
    if (points.size() < 2) throw TooFewKnots("mesh needs at least two points");
    for (std::size_t j = 1; j < points.size(); ++j)
        if (!(points[j - 1] < points[j]))
            throw NotSorted("mesh points must be strictly increasing");
    if (!(supp_a < supp_b)) throw OutOfRange("empty support interval");
    if (supp_a < points.front() || supp_b > points.back())
        throw WindowTooSmall("support [" + std::to_string(supp_a) + ", " +
                             std::to_string(supp_b) + "] not inside the mesh");
    const int last = static_cast<int>(points.size()) - 1;
    int la = static_cast<int>(std::upper_bound(points.begin(), points.end(), supp_a) -
                              points.begin()) - 1;
    la = std::max(la, 0);
    int rb = static_cast<int>(std::lower_bound(points.begin(), points.end(), supp_b) -
                              points.begin());
    rb = std::min(rb, last);
    const int avail = std::min(la, last - rb);

    int radius = policy.radius_cells;
    if (radius <= 0) {
        if (avail < 11 * k)
            throw WindowTooSmall("mesh supplies " + std::to_string(avail) +
                                 " cells beside the support; automatic choice needs " +
                                 std::to_string(11 * k));
        const DualBasis pilot(window_basis(points, k, la - 10 * k, rb + 10 * k));
        const double rate = pilot_decay_rate(pilot);
        double derived = 0.0;
        if (rate > 0.0 && rate < 1.0)
            derived = 3.0 * std::log(policy.tail_eps) / std::log(rate);
        radius = std::max(10 * k, static_cast<int>(std::ceil(derived)));
    }
    if (radius + k > avail)
        throw WindowTooSmall("window radius " + std::to_string(radius) + " plus " +
                             std::to_string(k) + " enlargement cells exceeds the " +
                             std::to_string(avail) + " available beside the support");

    const BSplineBasis wb = window_basis(points, k, la - radius, rb + radius);
    MomentVector mv = moment_vector(wb, f, cells_per_interval);
    BandedSymmetricMatrix g = gram_matrix(wb);
    std::vector<double> c = cholesky_solve(g, mv.values);
    const std::vector<double> gc = g.multiply(c);
    double resid = 0.0;
    for (std::size_t j = 0; j < gc.size(); ++j)
        resid = std::max(resid, std::abs(gc[j] - mv.values[j]));
    Spline pf(wb, std::move(c));

    const Projection big =
        project(window_basis(points, k, la - radius - k, rb + radius + k), f,
                cells_per_interval);
    double center_change = 0.0;
    const int samples = 128;
    for (int j = 0; j <= samples; ++j) {
        const double x = supp_a + (supp_b - supp_a) * j / samples;
        center_change = std::max(center_change, std::abs(pf(x) - big.spline(x)));
    }

    std::map<int, double> env;
    for (const Cell& cell : wb.cells()) {
        int d = 0;
        if (cell.left_index < la) d = la - cell.left_index;
        else if (cell.left_index > rb - 1) d = cell.left_index - (rb - 1);
        double peak = 0.0;
        for (int j = 0; j < 8; ++j) {
            const double x = cell.a + (cell.b - cell.a) * (j + 0.5) / 8;
            peak = std::max(peak, std::abs(pf(x)));
        }
        auto [it, fresh] = env.emplace(d, peak);
        if (!fresh) it->second = std::max(it->second, peak);
    }
    std::vector<std::pair<int, double>> decay(env.begin(), env.end());
    double vmax = 0.0;
    for (const auto& [d, v] : decay) vmax = std::max(vmax, v);
    const double slope = envelope_slope(decay, 1e-15 * vmax, 1);

    WindowedProjection out{std::move(pf), radius,        mv.quad_error, center_change,
                           resid,         std::move(decay), slope};
    return out;
}

}  // namespace splineproj
