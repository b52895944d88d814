#pragma once

#include <memory>
#include <vector>

#include "splineproj/banded_matrix.hpp"

namespace splineproj {

/// Symmetric matrix with band structure on the cycle: entries may be nonzero
/// only at cyclic index distance <= bandwidth.  Storage is packed per row by
/// canonical offset, so small dimensions (where the cyclic band covers the
/// whole matrix) work transparently.
class CyclicBandedMatrix {
public:
    CyclicBandedMatrix(int dim, int bandwidth);

    int dim() const { return n_; }
    int bandwidth() const { return b_; }

    /// Cyclic index distance min(|i-j| mod n, n - |i-j| mod n).
    int distance(int i, int j) const;

    double get(int i, int j) const;
    void set(int i, int j, double v);
    void add(int i, int j, double v);

    std::vector<double> multiply(const std::vector<double>& x) const;
    double max_diagonal() const;

private:
    bool canonical(int& i, int& j, int& off) const;

    int n_ = 0, b_ = 0, boff_ = 0;
    std::vector<double> a_;
};

/// Solver for cyclic banded SPD systems.  Small systems are eliminated
/// densely; larger ones use corner-block (bordered) elimination: the wrap
/// coupling is confined to the last `bandwidth` unknowns, leaving a banded
/// leading block plus a small Schur complement.
class CyclicSolver {
public:
    enum class Mode { automatic, dense, bordered };

    explicit CyclicSolver(const CyclicBandedMatrix& m, Mode mode = Mode::automatic);

    int dim() const { return n_; }
    Mode mode() const { return mode_; }
    std::vector<double> solve(std::vector<double> rhs) const;

private:
    int n_ = 0, b_ = 0;
    Mode mode_ = Mode::dense;
    std::unique_ptr<DenseLdlt> dense_;
    std::unique_ptr<BandedLdlt> interior_;
    DenseMatrix coupling_;  // A12, interior rows x border columns
    DenseMatrix y_;         // A11^{-1} A12
    std::unique_ptr<DenseLdlt> schur_;
};

std::vector<double> cholesky_solve(const CyclicBandedMatrix& m, std::vector<double> rhs);

/// Full inverse of a cyclic banded SPD matrix; dim <= 4096.
DenseMatrix full_inverse(const CyclicBandedMatrix& m);

}  // namespace splineproj
