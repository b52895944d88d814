#include "splineproj/banded_matrix.hpp"

#include <algorithm>
#include <string>

#include "splineproj/errors.hpp"

namespace splineproj {

std::vector<double> DenseMatrix::multiply(const std::vector<double>& x) const {
    std::vector<double> y(static_cast<std::size_t>(r_), 0.0);
    for (int i = 0; i < r_; ++i) {
        double s = 0.0;
        for (int j = 0; j < c_; ++j) s += at(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

BandedSymmetricMatrix::BandedSymmetricMatrix(int dim, int bandwidth)
    : n_(dim), b_(bandwidth) {
    if (dim < 1) throw OutOfRange("matrix dimension must be positive");
    if (bandwidth < 0 || bandwidth >= dim)
        b_ = std::max(0, std::min(bandwidth, dim - 1));
    a_.assign(static_cast<std::size_t>(n_) * (b_ + 1), 0.0);
}

std::size_t BandedSymmetricMatrix::slot(int i, int j) const {
    return static_cast<std::size_t>(i) * (b_ + 1) + (i - j);
}

double BandedSymmetricMatrix::get(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_)
        throw IndexOutOfRange("banded entry (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    if (i < j) std::swap(i, j);
    if (i - j > b_) return 0.0;
    return a_[slot(i, j)];
}

void BandedSymmetricMatrix::set(int i, int j, double v) {
    if (i < j) std::swap(i, j);
    if (i < 0 || i >= n_ || i - j > b_)
        throw IndexOutOfRange("banded entry (" + std::to_string(i) + ", " + std::to_string(j) +
                              ") outside band " + std::to_string(b_));
    a_[slot(i, j)] = v;
}

void BandedSymmetricMatrix::add(int i, int j, double v) {
    if (i < j) std::swap(i, j);
    if (i < 0 || i >= n_ || i - j > b_)
        throw IndexOutOfRange("banded entry (" + std::to_string(i) + ", " + std::to_string(j) +
                              ") outside band " + std::to_string(b_));
    a_[slot(i, j)] += v;
}

std::vector<double> BandedSymmetricMatrix::multiply(const std::vector<double>& x) const {
    std::vector<double> y(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        const int lo = std::max(0, i - b_);
        const int hi = std::min(n_ - 1, i + b_);
        for (int j = lo; j <= hi; ++j) s += get(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

double BandedSymmetricMatrix::max_diagonal() const {
    double m = 0.0;
    for (int i = 0; i < n_; ++i) m = std::max(m, a_[slot(i, i)]);
    return m;
}

BandedLdlt::BandedLdlt(const BandedSymmetricMatrix& m, double pivot_tol)
    : n_(m.dim()), b_(m.bandwidth()) {
    if (pivot_tol < 0.0) pivot_tol = 1e-13 * m.max_diagonal();
    f_.assign(static_cast<std::size_t>(n_) * (b_ + 1), 0.0);
    auto F = [&](int i, int d) -> double& { return f_[static_cast<std::size_t>(i) * (b_ + 1) + d]; };
    for (int j = 0; j < n_; ++j) {
        double d = m.get(j, j);
        for (int t = std::max(0, j - b_); t < j; ++t) {
            const double l = F(j, j - t);
            d -= l * l * F(t, 0);
        }
        if (!(d > pivot_tol))
            throw NotPositiveDefinite("pivot " + std::to_string(d) + " at column " + std::to_string(j));
        F(j, 0) = d;
        const int iend = std::min(n_ - 1, j + b_);
        for (int i = j + 1; i <= iend; ++i) {
            double s = m.get(i, j);
            for (int t = std::max(0, i - b_); t < j; ++t)
                s -= F(i, i - t) * F(j, j - t) * F(t, 0);
            F(i, i - j) = s / d;
        }
    }
}

void BandedLdlt::solve_in_place(std::vector<double>& rhs) const {
    auto F = [&](int i, int d) -> double { return f_[static_cast<std::size_t>(i) * (b_ + 1) + d]; };
    for (int i = 0; i < n_; ++i) {
        double s = rhs[i];
        for (int t = std::max(0, i - b_); t < i; ++t) s -= F(i, i - t) * rhs[t];
        rhs[i] = s;
    }
    for (int i = 0; i < n_; ++i) rhs[i] /= F(i, 0);
    for (int i = n_ - 1; i >= 0; --i) {
        double s = rhs[i];
        const int mend = std::min(n_ - 1, i + b_);
        for (int t = i + 1; t <= mend; ++t) s -= F(t, t - i) * rhs[t];
        rhs[i] = s;
    }
}

std::vector<double> BandedLdlt::solve(std::vector<double> rhs) const {
    solve_in_place(rhs);
    return rhs;
}

DenseLdlt::DenseLdlt(const DenseMatrix& m, double pivot_tol) : n_(m.rows()) {
    double maxd = 0.0;
    for (int i = 0; i < n_; ++i) maxd = std::max(maxd, m.at(i, i));
    if (pivot_tol < 0.0) pivot_tol = 1e-13 * maxd;
    f_.assign(static_cast<std::size_t>(n_) * n_, 0.0);
    auto F = [&](int i, int j) -> double& { return f_[static_cast<std::size_t>(i) * n_ + j]; };
    for (int j = 0; j < n_; ++j) {
        double d = m.at(j, j);
        for (int t = 0; t < j; ++t) d -= F(j, t) * F(j, t) * F(t, t);
        if (!(d > pivot_tol))
            throw NotPositiveDefinite("pivot " + std::to_string(d) + " at column " + std::to_string(j));
        F(j, j) = d;
        for (int i = j + 1; i < n_; ++i) {
            double s = m.at(i, j);
            for (int t = 0; t < j; ++t) s -= F(i, t) * F(j, t) * F(t, t);
            F(i, j) = s / d;
        }
    }
}

void DenseLdlt::solve_in_place(std::vector<double>& rhs) const {
    auto F = [&](int i, int j) -> double { return f_[static_cast<std::size_t>(i) * n_ + j]; };
    for (int i = 0; i < n_; ++i) {
        double s = rhs[i];
        for (int t = 0; t < i; ++t) s -= F(i, t) * rhs[t];
        rhs[i] = s;
    }
    for (int i = 0; i < n_; ++i) rhs[i] /= F(i, i);
    for (int i = n_ - 1; i >= 0; --i) {
        double s = rhs[i];
        for (int t = i + 1; t < n_; ++t) s -= F(t, i) * rhs[t];
        rhs[i] = s;
    }
}

std::vector<double> DenseLdlt::solve(std::vector<double> rhs) const {
    solve_in_place(rhs);
    return rhs;
}

std::vector<double> cholesky_solve(const BandedSymmetricMatrix& m, std::vector<double> rhs) {
    if (static_cast<int>(rhs.size()) != m.dim())
        throw IndexOutOfRange("right-hand side length does not match matrix dimension");
    BandedLdlt f(m);
    f.solve_in_place(rhs);
    return rhs;
}

DenseMatrix full_inverse(const BandedSymmetricMatrix& m) {
    const int n = m.dim();
    if (n > 4096)
        throw DimensionTooLarge("full inverse limited to dimension 4096, got " + std::to_string(n));
    BandedLdlt f(m);
    DenseMatrix inv(n, n);
    std::vector<double> col(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        std::fill(col.begin(), col.end(), 0.0);
        col[j] = 1.0;
        f.solve_in_place(col);
        for (int i = 0; i < n; ++i) inv.at(i, j) = col[i];
    }
    return inv;
}

}  // namespace splineproj
