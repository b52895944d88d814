#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace splineproj {

enum class KnotMode { clamped, periodic };

/// Non-decreasing knot sequence (t_i) for splines of order k, with signed
/// index bookkeeping: the first stored knot carries index first_index(),
/// which may be negative.  B-splines N_i live on [t_i, t_{i+k}] for
/// i = basis_begin() .. basis_end()-1, and the evaluation domain is
/// [t_{first+k-1}, t_{last-k+1}] (for a clamped sequence this is the full
/// interval between the boundary knots).
class KnotVector {
public:
    /// Validating constructor for clamped sequences: at least 2k knots,
    /// non-decreasing, no value repeated more than k times (t_i < t_{i+k}),
    /// and both boundary values with multiplicity exactly k.
    KnotVector(int order, std::vector<double> knots, int first_index = 0);

    /// Builds without the clamped-boundary and multiplicity checks.  Used for
    /// internal window constructions whose shape is fixed by the caller;
    /// sortedness and minimum length are still enforced.
    static KnotVector unchecked(int order, std::vector<double> knots, int first_index);

    int order() const { return order_; }
    int size() const { return static_cast<int>(knots_.size()); }
    int first_index() const { return first_; }
    int last_index() const { return first_ + size() - 1; }

    /// Knot by signed index, i in [first_index(), last_index()].
    double knot(int i) const;

    int basis_begin() const { return first_; }
    int basis_end() const { return first_ + size() - order_; }
    int num_basis() const { return size() - order_; }

    double domain_min() const { return knots_[order_ - 1]; }
    double domain_max() const { return knots_[size() - order_]; }

    /// Largest cell length inside the evaluation domain.
    double mesh_width() const;

    bool is_clamped() const { return clamped_; }
    const std::vector<double>& values() const { return knots_; }

private:
    KnotVector() = default;

    int order_ = 0;
    int first_ = 0;
    bool clamped_ = false;
    std::vector<double> knots_;
};

/// Knot sequence (s_j), j = 0..n-1, on the circle of circumference 1,
/// identified with [0,1).  The sequence extends to all integers j by
/// s_{j+rn} = r + s_j; the extension is computed on demand.
class PeriodicKnotVector {
public:
    /// Validates: n >= k, all values in [0,1), non-decreasing, and
    /// s_j < s_{j+k} under the periodic extension.
    PeriodicKnotVector(int order, std::vector<double> knots);

    int order() const { return order_; }
    int size() const { return static_cast<int>(s_.size()); }

    /// Extended knot s_j for any integer j.
    double knot(long j) const;

    /// Largest cell length over one period.
    double mesh_width() const;

    const std::vector<double>& values() const { return s_; }

private:
    int order_ = 0;
    std::vector<double> s_;
};

KnotVector validate_clamped_knots(int order, std::vector<double> raw);
PeriodicKnotVector validate_periodic_knots(int order, std::vector<double> raw);

/// One-period window around cell i of a periodic sequence: interior knots
/// t_j = s_{i+j} for j = 0..n+1, padded to boundary multiplicity k with
/// copies of s_i on the left and s_{i+n+1} on the right.  Indices run
/// j = -k+1 .. n+k and the window basis is N_{-k+1} .. N_n.
/// The result satisfies the clamped validation rules whenever
/// s_i < s_{i+1}; for a degenerate cell (s_i = s_{i+1}) the returned
/// sequence is still structurally well formed but carries the boundary
/// value with multiplicity k+1, so callers skip such cells.
KnotVector lift_window(const PeriodicKnotVector& pk, int i);

/// Cut of a periodic sequence at the seam: knots t_j = s_j for j = 0..n-1
/// plus the boundary points 0 and 1, where 1 gets multiplicity k and 0 is
/// padded with m extra copies so that its total multiplicity is exactly k.
/// Indices run j = -m .. n+k-1 and the basis is N_{-m} .. N_{n-1}.
KnotVector lift_cut(const PeriodicKnotVector& pk);

/// Plain-text knot file: a header line "k <order> <clamped|periodic>"
/// followed by one decimal knot value per line.  Lines starting with '#'
/// and blank lines are ignored.  Parsing and formatting are
/// locale-independent ('.' decimal separator).
struct KnotFile {
    int order = 0;
    KnotMode mode = KnotMode::clamped;
    std::vector<double> values;
};

KnotFile parse_knot_file(std::istream& in, const std::string& name = "<stream>");
KnotFile read_knot_file(const std::string& path);
std::string format_knot_file(const KnotFile& kf);
void write_knot_file(const std::string& path, const KnotFile& kf);

/// Clamped sequence on [0, 1] with num_basis functions and equally spaced
/// interior knots.
KnotVector uniform_clamped_knots(int order, int num_basis);

/// Periodic sequence s_j = j / n.
PeriodicKnotVector uniform_periodic_knots(int order, int n);

}  // namespace splineproj
