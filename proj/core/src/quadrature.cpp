#include "splineproj/quadrature.hpp"

#include <cmath>

#include "splineproj/errors.hpp"

namespace splineproj {

GaussRule gauss_legendre(int m) {
    if (m < 1) throw OutOfRange("Gauss rule needs at least one node");
    GaussRule r;
    r.nodes.resize(m);
    r.weights.resize(m);
    // Newton iteration on the Legendre polynomial P_m over [-1, 1],
    // then mapped to [0, 1].  Roots come in symmetric pairs.
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (m + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < m; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = m * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        r.nodes[i] = 0.5 * (1.0 - z);
        r.nodes[m - 1 - i] = 0.5 * (1.0 + z);
        const double w = 1.0 / ((1.0 - z * z) * pp * pp);
        r.weights[i] = w;
        r.weights[m - 1 - i] = w;
    }
    return r;
}

QuadratureRule QuadratureRule::over_cells(const std::vector<std::pair<double, double>>& cells,
                                          int m, int subdivisions) {
    if (subdivisions < 1) throw OutOfRange("subdivisions must be at least 1");
    const GaussRule g = gauss_legendre(m);
    QuadratureRule q;
    q.order = m;
    q.subdivisions = subdivisions;
    q.cells.reserve(cells.size());
    for (const auto& [a, b] : cells) {
        if (!(b > a)) continue;
        Cell c;
        c.a = a;
        c.b = b;
        const double step = (b - a) / subdivisions;
        c.x.reserve(static_cast<std::size_t>(m) * subdivisions);
        c.w.reserve(static_cast<std::size_t>(m) * subdivisions);
        for (int s = 0; s < subdivisions; ++s) {
            const double lo = a + s * step;
            for (int j = 0; j < m; ++j) {
                c.x.push_back(lo + step * g.nodes[j]);
                c.w.push_back(step * g.weights[j]);
            }
        }
        q.cells.push_back(std::move(c));
    }
    return q;
}

}  // namespace splineproj
