#include "splineproj/knots.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "splineproj/errors.hpp"

namespace splineproj {

namespace {

void check_sorted(const std::vector<double>& v, const char* what) {
    for (std::size_t p = 1; p < v.size(); ++p)
        if (!(v[p - 1] <= v[p]))
            throw NotSorted(std::string(what) + " not non-decreasing at position " + std::to_string(p));
    for (double x : v)
        if (!std::isfinite(x))
            throw OutOfRange(std::string(what) + " contains a non-finite value");
}

}  // namespace

KnotVector::KnotVector(int order, std::vector<double> knots, int first_index) {
    if (order < 1) throw OutOfRange("order must be at least 1");
    const int k = order;
    const int sz = static_cast<int>(knots.size());
    if (sz < 2 * k)
        throw TooFewKnots("clamped sequence of order " + std::to_string(k) +
                          " needs at least " + std::to_string(2 * k) + " knots, got " + std::to_string(sz));
    check_sorted(knots, "knots");
    for (int p = 0; p + k < sz; ++p)
        if (!(knots[p] < knots[p + k]))
            throw MultiplicityViolation("value " + std::to_string(knots[p]) +
                                        " repeated more than " + std::to_string(k) + " times");
    if (knots[0] != knots[k - 1])
        throw MultiplicityViolation("left boundary knot must have multiplicity exactly " + std::to_string(k));
    if (knots[sz - k] != knots[sz - 1])
        throw MultiplicityViolation("right boundary knot must have multiplicity exactly " + std::to_string(k));
    order_ = k;
    first_ = first_index;
    clamped_ = true;
    knots_ = std::move(knots);
}

KnotVector KnotVector::unchecked(int order, std::vector<double> knots, int first_index) {
    if (order < 1) throw OutOfRange("order must be at least 1");
    if (static_cast<int>(knots.size()) < order + 1)
        throw TooFewKnots("need at least order+1 knots");
    check_sorted(knots, "knots");
    KnotVector kv;
    kv.order_ = order;
    kv.first_ = first_index;
    kv.clamped_ = false;
    kv.knots_ = std::move(knots);
    return kv;
}

double KnotVector::knot(int i) const {
    const int p = i - first_;
    if (p < 0 || p >= size())
        throw IndexOutOfRange("knot index " + std::to_string(i) + " outside [" +
                              std::to_string(first_) + ", " + std::to_string(last_index()) + "]");
    return knots_[p];
}

double KnotVector::mesh_width() const {
    double w = 0.0;
    for (int p = order_ - 1; p < size() - order_; ++p)
        w = std::max(w, knots_[p + 1] - knots_[p]);
    return w;
}

PeriodicKnotVector::PeriodicKnotVector(int order, std::vector<double> knots) {
    if (order < 1) throw OutOfRange("order must be at least 1");
    const int k = order;
    const int n = static_cast<int>(knots.size());
    if (n < k)
        throw TooFewKnots("periodic sequence of order " + std::to_string(k) +
                          " needs at least " + std::to_string(k) + " knots, got " + std::to_string(n));
    for (double x : knots)
        if (!(x >= 0.0 && x < 1.0))
            throw OutOfRange("periodic knot " + std::to_string(x) + " outside [0, 1)");
    check_sorted(knots, "periodic knots");
    order_ = k;
    s_ = std::move(knots);
    // multiplicity under the extension: s_j < s_{j+k}
    for (int j = 0; j < n; ++j) {
        const double a = s_[j];
        const double b = knot(j + k);
        if (!(a < b))
            throw MultiplicityViolation("periodic value " + std::to_string(a) +
                                        " repeated more than " + std::to_string(k) + " times");
    }
}

double PeriodicKnotVector::knot(long j) const {
    const long n = size();
    long r = j / n;
    long rem = j - r * n;
    if (rem < 0) {
        rem += n;
        r -= 1;
    }
    return static_cast<double>(r) + s_[static_cast<std::size_t>(rem)];
}

double PeriodicKnotVector::mesh_width() const {
    double w = 0.0;
    for (int j = 0; j < size(); ++j)
        w = std::max(w, knot(j + 1) - knot(j));
    return w;
}

KnotVector validate_clamped_knots(int order, std::vector<double> raw) {
    return KnotVector(order, std::move(raw));
}

PeriodicKnotVector validate_periodic_knots(int order, std::vector<double> raw) {
    return PeriodicKnotVector(order, std::move(raw));
}

KnotVector lift_window(const PeriodicKnotVector& pk, int i) {
    const int k = pk.order();
    const int n = pk.size();
    std::vector<double> t;
    t.reserve(n + 2 * k);
    for (int j = -k + 1; j <= -1; ++j) t.push_back(pk.knot(i));
    for (int j = 0; j <= n + 1; ++j) t.push_back(pk.knot(i + j));
    for (int j = n + 2; j <= n + k; ++j) t.push_back(pk.knot(i + n + 1));
    return KnotVector::unchecked(k, std::move(t), -k + 1);
}

KnotVector lift_cut(const PeriodicKnotVector& pk) {
    const int k = pk.order();
    const int n = pk.size();
    int q = 0;  // multiplicity of the point 0 already present
    while (q < n && pk.values()[q] == 0.0) ++q;
    const int m = k - q;
    std::vector<double> t;
    t.reserve(n + k + m);
    for (int j = 0; j < m; ++j) t.push_back(0.0);
    for (double s : pk.values()) t.push_back(s);
    for (int j = 0; j < k; ++j) t.push_back(1.0);
    return KnotVector(k, std::move(t), -m);
}

namespace {

double parse_double_token(const std::string& tok, const std::string& where) {
    double out = 0.0;
    const char* b = tok.data();
    const char* e = tok.data() + tok.size();
    auto [p, ec] = std::from_chars(b, e, out);
    if (ec != std::errc() || p != e)
        throw ParseError(where + ": bad numeric value '" + tok + "'");
    return out;
}

}  // namespace

KnotFile parse_knot_file(std::istream& in, const std::string& name) {
    KnotFile kf;
    std::string line;
    bool have_header = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;  // blank or comment-only line
        const std::string where = name + ":" + std::to_string(lineno);
        if (!have_header) {
            if (tok != "k")
                throw ParseError(where + ": expected header 'k <order> <clamped|periodic>'");
            std::string order_tok, mode_tok;
            if (!(ls >> order_tok >> mode_tok))
                throw ParseError(where + ": incomplete header");
            int order = 0;
            auto [p, ec] = std::from_chars(order_tok.data(), order_tok.data() + order_tok.size(), order);
            if (ec != std::errc() || p != order_tok.data() + order_tok.size() || order < 1)
                throw ParseError(where + ": bad order '" + order_tok + "'");
            if (mode_tok == "clamped")
                kf.mode = KnotMode::clamped;
            else if (mode_tok == "periodic")
                kf.mode = KnotMode::periodic;
            else
                throw ParseError(where + ": mode must be 'clamped' or 'periodic', got '" + mode_tok + "'");
            kf.order = order;
            std::string extra;
            if (ls >> extra) throw ParseError(where + ": trailing token '" + extra + "' after header");
            have_header = true;
            continue;
        }
        kf.values.push_back(parse_double_token(tok, where));
        std::string extra;
        if (ls >> extra) throw ParseError(where + ": one knot per line, got extra token '" + extra + "'");
    }
    if (!have_header) throw ParseError(name + ": missing header line");
    return kf;
}

KnotFile read_knot_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open knot file '" + path + "'");
    return parse_knot_file(in, path);
}

std::string format_knot_file(const KnotFile& kf) {
    std::string out = "k " + std::to_string(kf.order) + " " +
                      (kf.mode == KnotMode::clamped ? "clamped" : "periodic") + "\n";
    char buf[64];
    for (double v : kf.values) {
        auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
        (void)ec;
        out.append(buf, p);
        out.push_back('\n');
    }
    return out;
}

void write_knot_file(const std::string& path, const KnotFile& kf) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open '" + path + "' for writing");
    out << format_knot_file(kf);
}

KnotVector uniform_clamped_knots(int order, int num_basis) {
    if (order < 1) throw OutOfRange("order must be positive");
    if (num_basis < order)
        throw TooFewKnots("need at least " + std::to_string(order) + " basis functions");
    const int cells = num_basis - order + 1;
    std::vector<double> t;
    t.reserve(static_cast<std::size_t>(num_basis + order));
    for (int c = 0; c < order; ++c) t.push_back(0.0);
    for (int j = 1; j < cells; ++j) t.push_back(static_cast<double>(j) / cells);
    for (int c = 0; c < order; ++c) t.push_back(1.0);
    return KnotVector(order, std::move(t));
}

PeriodicKnotVector uniform_periodic_knots(int order, int n) {
    if (n < 1) throw TooFewKnots("need at least one periodic knot");
    std::vector<double> s(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) s[static_cast<std::size_t>(j)] = static_cast<double>(j) / n;
    return PeriodicKnotVector(order, std::move(s));
}

}  // namespace splineproj
