#include "splineproj/bspline.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <string>

#include "splineproj/errors.hpp"

namespace splineproj {

namespace {

// Triangular recursion: writes the k values N_{p-k+1..p} (array positions)
// at x into out.  Requires T[p] <= x <= T[p+1] with T[p] < T[p+1]; every
// denominator then contains the cell [T[p], T[p+1]] and stays positive.
void local_values(const double* T, int p, int k, double x, double* out) {
    out[0] = 1.0;
    for (int j = 1; j < k; ++j) {
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            const double tr = T[p + r + 1];
            const double tl = T[p + r + 1 - j];
            const double term = out[r] / (tr - tl);
            out[r] = saved + (tr - x) * term;
            saved = (x - tl) * term;
        }
        out[j] = saved;
    }
}

}  // namespace

BSplineBasis::BSplineBasis(KnotVector kv) : kv_(std::move(kv)) {
    const int k = kv_.order();
    const auto& T = kv_.values();
    const int S = kv_.size();
    for (int p = 0; p + k < S; ++p)
        if (!(T[p] < T[p + k]))
            throw MultiplicityViolation("basis function with empty support: value " +
                                        std::to_string(T[p]) + " has multiplicity above " +
                                        std::to_string(k));
    cells_.reserve(static_cast<std::size_t>(S - 2 * k + 1));
    for (int p = k - 1; p < S - k; ++p)
        if (T[p] < T[p + 1])
            cells_.push_back(Cell{kv_.first_index() + p, T[p], T[p + 1]});
}

int BSplineBasis::locate(double x) const {
    const auto& T = kv_.values();
    const int k = kv_.order();
    const int S = kv_.size();
    if (!(x >= domain_min() && x <= domain_max()))
        throw DomainViolation("x = " + std::to_string(x) + " outside [" +
                              std::to_string(domain_min()) + ", " + std::to_string(domain_max()) + "]");
    int p = static_cast<int>(std::upper_bound(T.begin(), T.end(), x) - T.begin()) - 1;
    p = std::clamp(p, k - 1, S - k - 1);
    while (p > k - 1 && T[p] == T[p + 1]) --p;  // left limit at the right end
    return p;
}

double BSplineBasis::value(int i, double x) const {
    if (i < first_index() || i > last_index())
        throw IndexOutOfRange("basis index " + std::to_string(i) + " outside [" +
                              std::to_string(first_index()) + ", " + std::to_string(last_index()) + "]");
    const int k = kv_.order();
    const int p = locate(x);
    const int pos = i - kv_.first_index();
    if (pos < p - k + 1 || pos > p) return 0.0;
    double stack[24];
    std::vector<double> heap;
    double* buf = stack;
    if (k > 24) {
        heap.resize(static_cast<std::size_t>(k));
        buf = heap.data();
    }
    local_values(kv_.values().data(), p, k, x, buf);
    return buf[pos - (p - k + 1)];
}

double BSplineBasis::hull_length(int i, int j) const {
    const int k = order();
    return std::max(kv_.knot(i + k), kv_.knot(j + k)) - std::min(kv_.knot(i), kv_.knot(j));
}

std::vector<int> BSplineBasis::index_set(double a, double b) const {
    if (!(a <= b)) std::swap(a, b);
    std::vector<int> out;
    const int k = order();
    for (int i = first_index(); i <= last_index(); ++i)
        if (kv_.knot(i) <= b && kv_.knot(i + k) >= a) out.push_back(i);
    return out;
}

ActiveValues LocalEvaluator::operator()(double x) {
    const int k = basis_->order();
    const int p = basis_->locate(x);
    local_values(basis_->knots().values().data(), p, k, x, buf_.data());
    return ActiveValues{basis_->knots().first_index() + p - k + 1, k, buf_.data()};
}

int index_distance(const std::vector<int>& u, const std::vector<int>& v) {
    if (u.empty() || v.empty()) throw EmptySet("index_distance of an empty index set");
    int best = std::numeric_limits<int>::max();
    for (int a : u)
        for (int b : v) best = std::min(best, std::abs(a - b));
    return best;
}

int index_distance_cyclic(const std::vector<int>& u, const std::vector<int>& v, int n) {
    if (u.empty() || v.empty()) throw EmptySet("index_distance of an empty index set");
    if (n < 1) throw OutOfRange("cyclic distance needs n >= 1");
    int best = std::numeric_limits<int>::max();
    for (int a : u)
        for (int b : v) {
            int d = std::abs(a - b) % n;
            d = std::min(d, n - d);
            best = std::min(best, d);
        }
    return best;
}

namespace {

// Extended knot window wide enough that every basis function whose support
// meets [0, 1) is built from true extension values: indices -3k .. n+3k.
KnotVector extended_window(const PeriodicKnotVector& pk) {
    const int k = pk.order();
    const int n = pk.size();
    std::vector<double> t;
    t.reserve(static_cast<std::size_t>(n + 6 * k + 1));
    for (long j = -3L * k; j <= static_cast<long>(n) + 3L * k; ++j) t.push_back(pk.knot(j));
    return KnotVector::unchecked(k, std::move(t), -3 * k);
}

}  // namespace

PeriodicBSplineBasis::PeriodicBSplineBasis(PeriodicKnotVector pk)
    : pk_(std::move(pk)), window_(extended_window(pk_)) {
    const int n = pk_.size();
    cells_.reserve(static_cast<std::size_t>(n));
    for (int mu = 0; mu < n; ++mu) {
        const double a = pk_.knot(mu);
        const double b = pk_.knot(mu + 1);
        if (a < b) cells_.push_back(Cell{mu, a, b});
    }
}

double PeriodicBSplineBasis::kappa(int j) const {
    if (j < 0 || j >= count())
        throw IndexOutOfRange("periodic basis index " + std::to_string(j) +
                              " outside [0, " + std::to_string(count() - 1) + "]");
    return std::min(1.0, pk_.knot(j + static_cast<long>(order())) - pk_.knot(j));
}

int PeriodicBSplineBasis::wrap_index(long i) const {
    const long n = count();
    long r = i % n;
    if (r < 0) r += n;
    return static_cast<int>(r);
}

double PeriodicBSplineBasis::value(int j, double x) const {
    if (j < 0 || j >= count())
        throw IndexOutOfRange("periodic basis index " + std::to_string(j) +
                              " outside [0, " + std::to_string(count() - 1) + "]");
    if (!(x >= 0.0 && x < 1.0))
        throw DomainViolation("periodic evaluation point " + std::to_string(x) + " outside [0, 1)");
    LocalEvaluator ev(window_);
    const ActiveValues av = ev(x);
    double sum = 0.0;
    for (int r = 0; r < av.count; ++r)
        if (wrap_index(av.first + r) == j) sum += av.values[r];
    return sum;
}

std::vector<int> PeriodicBSplineBasis::index_set(double a, double b) const {
    if (!(a <= b)) std::swap(a, b);
    if (!(b - a <= 1.0)) throw OutOfRange("arc longer than one period");
    const double a0 = wrap01(a);
    const double b0 = a0 + (b - a);
    const int k = order();
    std::vector<int> out;
    for (int j = 0; j < count(); ++j) {
        const double lo = pk_.knot(j);
        const double hi = pk_.knot(j + static_cast<long>(k));
        bool hit = false;
        for (int r = -1; r <= 1 && !hit; ++r)
            hit = (lo <= b0 + r) && (hi >= a0 + r);
        if (hit || hi - lo >= 1.0) out.push_back(j);
    }
    return out;
}

}  // namespace splineproj
