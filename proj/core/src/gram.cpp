#include "splineproj/gram.hpp"

#include <cmath>
#include <string>

#include "splineproj/errors.hpp"

namespace splineproj {

BandedSymmetricMatrix gram_matrix(const BSplineBasis& basis) {
    const int k = basis.order();
    const int n = basis.count();
    BandedSymmetricMatrix g(n, k - 1);
    const GaussRule rule = gauss_legendre(k);
    LocalEvaluator ev(basis);
    for (const Cell& cell : basis.cells()) {
        const double len = cell.b - cell.a;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double x = cell.a + len * rule.nodes[q];
            const double w = len * rule.weights[q];
            const ActiveValues av = ev(x);
            const int row0 = av.first - basis.first_index();
            for (int r = 0; r < av.count; ++r) {
                for (int s = r; s < av.count; ++s) {
                    g.add(row0 + r, row0 + s, w * av.values[r] * av.values[s]);
                }
            }
        }
    }
    return g;
}

CyclicBandedMatrix periodic_gram_matrix(const PeriodicBSplineBasis& basis) {
    const int k = basis.order();
    const int n = basis.count();
    CyclicBandedMatrix g(n, k - 1);
    const GaussRule rule = gauss_legendre(k);
    PeriodicLocalEvaluator ev(basis);
    for (const Cell& cell : basis.cells()) {
        const double len = cell.b - cell.a;
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double x = cell.a + len * rule.nodes[q];
            const double w = len * rule.weights[q];
            const ActiveValues av = ev(x);
            for (int r = 0; r < av.count; ++r) {
                const int i = basis.wrap_index(av.first + r);
                for (int s = r; s < av.count; ++s) {
                    const int j = basis.wrap_index(av.first + s);
                    g.add(i, j, w * av.values[r] * av.values[s]);
                }
            }
        }
    }
    return g;
}

namespace {

// Nodes landing within eps of a declared singularity are nudged off it,
// away from the singular point.
double shifted_node(double x, const std::vector<double>& singularities, double eps,
                    bool torus) {
    for (double s : singularities) {
        double d = x - s;
        if (torus) d -= std::round(d);
        if (std::abs(d) < eps) {
            const double dir = (d >= 0.0) ? 1.0 : -1.0;
            x = torus ? wrap01(s + dir * eps) : s + dir * eps;
        }
    }
    return x;
}

template <typename Evaluator, typename RowMap>
std::vector<double> assemble_moments(const std::vector<Cell>& cells, int n,
                                     const GaussRule& rule, int depth,
                                     const std::function<double(double)>& f,
                                     const std::vector<double>& singularities,
                                     bool torus, Evaluator& ev, RowMap row_of) {
    std::vector<double> values(static_cast<std::size_t>(n), 0.0);
    for (const Cell& cell : cells) {
        const double eps = 1e-12 * (cell.b - cell.a);
        // The torus lift of f breaks at integer points, which land strictly
        // inside the wrap cell of an extended window; integrate the two arcs
        // separately so no rule straddles the seam.
        std::pair<double, double> pieces[2] = {{cell.a, cell.b}, {0.0, 0.0}};
        int npieces = 1;
        if (torus) {
            const double seam = std::ceil(cell.a);
            if (seam > cell.a && seam < cell.b) {
                pieces[0] = {cell.a, seam};
                pieces[1] = {seam, cell.b};
                npieces = 2;
            }
        }
        for (int piece = 0; piece < npieces; ++piece) {
            const double len = pieces[piece].second - pieces[piece].first;
            for (int part = 0; part < depth; ++part) {
                const double pa = pieces[piece].first + len * part / depth;
                const double pw = len / depth;
                for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                    const double x = pa + pw * rule.nodes[q];
                    const double w = pw * rule.weights[q];
                    double xs = torus ? wrap01(x) : x;
                    xs = shifted_node(xs, singularities, eps, torus);
                    const double fx = f(xs);
                    if (!std::isfinite(fx)) {
                        throw NonFiniteSample("integrand not finite at x = " +
                                              std::to_string(xs));
                    }
                    const ActiveValues av = ev(x);
                    for (int r = 0; r < av.count; ++r) {
                        values[static_cast<std::size_t>(row_of(av.first + r))] +=
                            w * fx * av.values[r];
                    }
                }
            }
        }
    }
    return values;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

MomentVector moment_vector(const BSplineBasis& basis,
                           const std::function<double(double)>& f,
                           int cells_per_interval,
                           const std::vector<double>& singularities) {
    if (cells_per_interval < 1) throw OutOfRange("cells_per_interval must be positive");
    const GaussRule rule = gauss_legendre(std::max(basis.order(), 4));
    LocalEvaluator ev(basis);
    const int first = basis.first_index();
    auto row_of = [first](int i) { return i - first; };
    const auto coarse = assemble_moments(basis.cells(), basis.count(), rule,
                                         cells_per_interval, f, singularities,
                                         false, ev, row_of);
    auto fine = assemble_moments(basis.cells(), basis.count(), rule,
                                 2 * cells_per_interval, f, singularities,
                                 false, ev, row_of);
    MomentVector out;
    out.quad_error = max_abs_diff(coarse, fine);
    out.values = std::move(fine);
    return out;
}

MomentVector periodic_moment_vector(const PeriodicBSplineBasis& basis,
                                    const std::function<double(double)>& f,
                                    int cells_per_interval,
                                    const std::vector<double>& singularities) {
    if (cells_per_interval < 1) throw OutOfRange("cells_per_interval must be positive");
    const GaussRule rule = gauss_legendre(std::max(basis.order(), 4));
    PeriodicLocalEvaluator ev(basis);
    auto row_of = [&basis](long i) { return basis.wrap_index(i); };
    const auto coarse = assemble_moments(basis.cells(), basis.count(), rule,
                                         cells_per_interval, f, singularities,
                                         true, ev, row_of);
    auto fine = assemble_moments(basis.cells(), basis.count(), rule,
                                 2 * cells_per_interval, f, singularities,
                                 true, ev, row_of);
    MomentVector out;
    out.quad_error = max_abs_diff(coarse, fine);
    out.values = std::move(fine);
    return out;
}

}  // namespace splineproj
