#include "splineproj/cyclic_matrix.hpp"

#include <algorithm>
#include <string>

#include "splineproj/errors.hpp"

namespace splineproj {

CyclicBandedMatrix::CyclicBandedMatrix(int dim, int bandwidth) : n_(dim), b_(bandwidth) {
    if (dim < 1) throw OutOfRange("matrix dimension must be positive");
    if (bandwidth < 0) throw OutOfRange("bandwidth must be nonnegative");
    boff_ = std::min(b_, n_ / 2);
    a_.assign(static_cast<std::size_t>(n_) * (boff_ + 1), 0.0);
}

int CyclicBandedMatrix::distance(int i, int j) const {
    int d = std::abs(i - j) % n_;
    return std::min(d, n_ - d);
}

// Reduces (i, j) to canonical storage coordinates: returns false when the
// pair lies outside the cyclic band.  On success, i is the storage row and
// off the canonical offset.
bool CyclicBandedMatrix::canonical(int& i, int& j, int& off) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_)
        throw IndexOutOfRange("cyclic entry (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    int d = j - i;
    d %= n_;
    if (d < 0) d += n_;
    const int dc = std::min(d, n_ - d);
    if (dc > b_) return false;
    if (d == dc) {
        if (2 * d == n_) i = std::min(i, j);  // antipodal tie: one slot for the pair
        off = d;
    } else {
        i = j;
        off = n_ - d;
    }
    return true;
}

double CyclicBandedMatrix::get(int i, int j) const {
    int off = 0;
    if (!canonical(i, j, off)) return 0.0;
    return a_[static_cast<std::size_t>(i) * (boff_ + 1) + off];
}

void CyclicBandedMatrix::set(int i, int j, double v) {
    int off = 0;
    if (!canonical(i, j, off))
        throw IndexOutOfRange("cyclic entry (" + std::to_string(i) + ", " + std::to_string(j) +
                              ") outside cyclic band " + std::to_string(b_));
    a_[static_cast<std::size_t>(i) * (boff_ + 1) + off] = v;
}

void CyclicBandedMatrix::add(int i, int j, double v) {
    int off = 0;
    if (!canonical(i, j, off))
        throw IndexOutOfRange("cyclic entry (" + std::to_string(i) + ", " + std::to_string(j) +
                              ") outside cyclic band " + std::to_string(b_));
    a_[static_cast<std::size_t>(i) * (boff_ + 1) + off] += v;
}

std::vector<double> CyclicBandedMatrix::multiply(const std::vector<double>& x) const {
    std::vector<double> y(static_cast<std::size_t>(n_), 0.0);
    if (2 * b_ + 1 >= n_) {
        for (int i = 0; i < n_; ++i) {
            double s = 0.0;
            for (int j = 0; j < n_; ++j) s += get(i, j) * x[j];
            y[i] = s;
        }
        return y;
    }
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int d = -b_; d <= b_; ++d) {
            int j = (i + d) % n_;
            if (j < 0) j += n_;
            s += get(i, j) * x[j];
        }
        y[i] = s;
    }
    return y;
}

double CyclicBandedMatrix::max_diagonal() const {
    double m = 0.0;
    for (int i = 0; i < n_; ++i) m = std::max(m, get(i, i));
    return m;
}

CyclicSolver::CyclicSolver(const CyclicBandedMatrix& m, Mode mode) : n_(m.dim()), b_(m.bandwidth()) {
    const double tol = 1e-13 * m.max_diagonal();
    const bool bordered_ok = n_ > 3 * b_ && b_ > 0;
    if (mode == Mode::automatic) mode = (n_ <= 256 || !bordered_ok) ? Mode::dense : Mode::bordered;
    if (mode == Mode::bordered && !bordered_ok)
        throw OutOfRange("bordered elimination needs dim > 3 * bandwidth");
    mode_ = mode;

    if (mode_ == Mode::dense || b_ == 0) {
        DenseMatrix full(n_, n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) full.at(i, j) = m.get(i, j);
        dense_ = std::make_unique<DenseLdlt>(full, tol);
        mode_ = Mode::dense;
        return;
    }

    // Interior block: indices 0..n-b-1 carry no wrap coupling among
    // themselves, so they form an ordinary band matrix.
    const int mi = n_ - b_;
    BandedSymmetricMatrix a11(mi, b_);
    for (int i = 0; i < mi; ++i)
        for (int j = std::max(0, i - b_); j <= i; ++j) a11.set(i, j, m.get(i, j));
    interior_ = std::make_unique<BandedLdlt>(a11, tol);

    coupling_ = DenseMatrix(mi, b_);
    for (int i = 0; i < mi; ++i)
        for (int j = 0; j < b_; ++j) coupling_.at(i, j) = m.get(i, mi + j);

    y_ = DenseMatrix(mi, b_);
    std::vector<double> col(static_cast<std::size_t>(mi));
    for (int j = 0; j < b_; ++j) {
        for (int i = 0; i < mi; ++i) col[i] = coupling_.at(i, j);
        interior_->solve_in_place(col);
        for (int i = 0; i < mi; ++i) y_.at(i, j) = col[i];
    }

    DenseMatrix schur(b_, b_);
    for (int r = 0; r < b_; ++r)
        for (int c = 0; c <= r; ++c) {
            double s = m.get(mi + r, mi + c);
            for (int i = 0; i < mi; ++i) s -= coupling_.at(i, r) * y_.at(i, c);
            schur.at(r, c) = s;
            schur.at(c, r) = s;
        }
    schur_ = std::make_unique<DenseLdlt>(schur, tol);
}

std::vector<double> CyclicSolver::solve(std::vector<double> rhs) const {
    if (static_cast<int>(rhs.size()) != n_)
        throw IndexOutOfRange("right-hand side length does not match matrix dimension");
    if (mode_ == Mode::dense) {
        dense_->solve_in_place(rhs);
        return rhs;
    }
    const int mi = n_ - b_;
    std::vector<double> u(rhs.begin(), rhs.begin() + mi);
    interior_->solve_in_place(u);
    std::vector<double> t(static_cast<std::size_t>(b_));
    for (int j = 0; j < b_; ++j) {
        double s = rhs[mi + j];
        for (int i = 0; i < mi; ++i) s -= coupling_.at(i, j) * u[i];
        t[j] = s;
    }
    schur_->solve_in_place(t);
    for (int i = 0; i < mi; ++i) {
        double s = u[i];
        for (int j = 0; j < b_; ++j) s -= y_.at(i, j) * t[j];
        rhs[i] = s;
    }
    for (int j = 0; j < b_; ++j) rhs[mi + j] = t[j];
    return rhs;
}

std::vector<double> cholesky_solve(const CyclicBandedMatrix& m, std::vector<double> rhs) {
    CyclicSolver s(m);
    return s.solve(std::move(rhs));
}

DenseMatrix full_inverse(const CyclicBandedMatrix& m) {
    const int n = m.dim();
    if (n > 4096)
        throw DimensionTooLarge("full inverse limited to dimension 4096, got " + std::to_string(n));
    CyclicSolver s(m);
    DenseMatrix inv(n, n);
    std::vector<double> col(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        std::fill(col.begin(), col.end(), 0.0);
        col[j] = 1.0;
        col = s.solve(std::move(col));
        for (int i = 0; i < n; ++i) inv.at(i, j) = col[i];
    }
    return inv;
}

}  // namespace splineproj
