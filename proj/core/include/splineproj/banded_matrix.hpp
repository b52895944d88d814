#pragma once

#include <vector>

namespace splineproj {

/// Dense row-major matrix; used for full inverses, Schur complements and
/// small fallbacks.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(int rows, int cols) : r_(rows), c_(cols), a_(static_cast<std::size_t>(rows) * cols, 0.0) {}

    int rows() const { return r_; }
    int cols() const { return c_; }
    double& at(int i, int j) { return a_[static_cast<std::size_t>(i) * c_ + j]; }
    double at(int i, int j) const { return a_[static_cast<std::size_t>(i) * c_ + j]; }

    std::vector<double> multiply(const std::vector<double>& x) const;

private:
    int r_ = 0, c_ = 0;
    std::vector<double> a_;
};

/// Symmetric band matrix in packed lower-band storage: entry (i, j) with
/// 0 <= i - j <= bandwidth lives at row i, offset i - j.
class BandedSymmetricMatrix {
public:
    BandedSymmetricMatrix(int dim, int bandwidth);

    int dim() const { return n_; }
    int bandwidth() const { return b_; }

    double get(int i, int j) const;
    void set(int i, int j, double v);
    void add(int i, int j, double v);

    std::vector<double> multiply(const std::vector<double>& x) const;
    double max_diagonal() const;

private:
    std::size_t slot(int i, int j) const;  // requires 0 <= i - j <= b_

    int n_ = 0, b_ = 0;
    std::vector<double> a_;
};

/// Root-free Cholesky factorization A = L D L^T of a banded SPD matrix.
/// A pivot at or below `pivot_tol` (default 1e-13 times the largest diagonal
/// entry of A) raises NotPositiveDefinite.
class BandedLdlt {
public:
    explicit BandedLdlt(const BandedSymmetricMatrix& m, double pivot_tol = -1.0);

    int dim() const { return n_; }
    void solve_in_place(std::vector<double>& rhs) const;
    std::vector<double> solve(std::vector<double> rhs) const;

private:
    int n_ = 0, b_ = 0;
    std::vector<double> f_;  // packed factors: offset 0 holds D, offsets >= 1 hold L
};

/// Dense L D L^T factorization (lower triangle of the input is used).
class DenseLdlt {
public:
    explicit DenseLdlt(const DenseMatrix& m, double pivot_tol = -1.0);

    int dim() const { return n_; }
    void solve_in_place(std::vector<double>& rhs) const;
    std::vector<double> solve(std::vector<double> rhs) const;

private:
    int n_ = 0;
    std::vector<double> f_;
};

std::vector<double> cholesky_solve(const BandedSymmetricMatrix& m, std::vector<double> rhs);

/// Full inverse, computed column by column from one factorization.
/// Guarded to desk scale: dim <= 4096.
DenseMatrix full_inverse(const BandedSymmetricMatrix& m);

}  // namespace splineproj
