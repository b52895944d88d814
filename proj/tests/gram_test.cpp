#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "splineproj/analysis.hpp"
#include "splineproj/bspline.hpp"
#include "splineproj/errors.hpp"
#include "splineproj/gram.hpp"
#include "splineproj/knots.hpp"
#include "splineproj/rng.hpp"

namespace sp = splineproj;

namespace {

sp::BSplineBasis random_clamped(int order, int num_basis, sp::SplitRng& rng) {
    return sp::BSplineBasis(sp::random_clamped_knots(order, num_basis, 1e-2, rng));
}

sp::PeriodicBSplineBasis random_periodic(int order, int n, sp::SplitRng& rng) {
    return sp::PeriodicBSplineBasis(sp::random_periodic_knots(order, n, 1e-2, rng));
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

TEST_CASE("order one gram is the diagonal of cell lengths") {
    sp::BSplineBasis uni(sp::uniform_clamped_knots(1, 2));
    auto g = sp::gram_matrix(uni);
    REQUIRE(g.dim() == 2);
    CHECK(g.bandwidth() == 0);
    CHECK(g.get(0, 0) == 0.5);
    CHECK(g.get(1, 1) == 0.5);
    CHECK(g.get(0, 1) == 0.0);

    auto rng = sp::SplitRng::fork(42, {20});
    auto basis = random_clamped(1, 12, rng);
    auto gr = sp::gram_matrix(basis);
    for (int r = 0; r < gr.dim(); ++r) {
        const int i = basis.first_index() + r;
        CHECK(std::abs(gr.get(r, r) - basis.kappa(i)) <= 1e-15);
    }
}

TEST_CASE("order two gram rows are the frozen hat integrals") {
    // (0, 0, 0.5, 1, 1): two half hats around a full hat, integrals by hand
    sp::KnotVector kv(2, {0.0, 0.0, 0.5, 1.0, 1.0});
    auto g = sp::gram_matrix(sp::BSplineBasis(kv));
    REQUIRE(g.dim() == 3);
    CHECK(g.bandwidth() == 1);
    CHECK(std::abs(g.get(0, 0) - 1.0 / 6.0) <= 1e-16);
    CHECK(std::abs(g.get(1, 1) - 1.0 / 3.0) <= 1e-16);
    CHECK(std::abs(g.get(2, 2) - 1.0 / 6.0) <= 1e-16);
    CHECK(std::abs(g.get(0, 1) - 1.0 / 12.0) <= 1e-16);
    CHECK(std::abs(g.get(1, 2) - 1.0 / 12.0) <= 1e-16);
    CHECK(g.get(0, 2) == 0.0);

    const int n = 8;
    const double h = 1.0 / n;
    auto gu = sp::gram_matrix(sp::BSplineBasis(sp::uniform_clamped_knots(2, n + 1)));
    REQUIRE(gu.dim() == n + 1);
    CHECK(std::abs(gu.get(0, 0) - h / 3.0) <= 1e-16);
    CHECK(std::abs(gu.get(n, n) - h / 3.0) <= 1e-16);
    for (int r = 1; r < n; ++r) CHECK(std::abs(gu.get(r, r) - 2.0 * h / 3.0) <= 1e-15);
    for (int r = 0; r < n; ++r) CHECK(std::abs(gu.get(r, r + 1) - h / 6.0) <= 1e-15);
}

TEST_CASE("gram row sums integrate the basis functions") {
    auto rng = sp::SplitRng::fork(42, {21});
    for (int order : {1, 2, 3, 4, 5}) {
        auto basis = random_clamped(order, order + rng.uniform_int(4, 12), rng);
        auto g = sp::gram_matrix(basis);
        CHECK(g.bandwidth() == order - 1);
        for (int r = 0; r < g.dim(); ++r) {
            double sum = 0.0;
            for (int c = 0; c < g.dim(); ++c) sum += g.get(r, c);
            const int i = basis.first_index() + r;
            CHECK(std::abs(sum - basis.kappa(i) / order) <= 1e-13);
        }
    }
}

TEST_CASE("gram matrices factor as positive definite") {
    auto rng = sp::SplitRng::fork(42, {22});
    for (int order : {1, 3, 5}) {
        auto basis = random_clamped(order, order + 9, rng);
        auto g = sp::gram_matrix(basis);
        CHECK_NOTHROW(sp::BandedLdlt{g});

        std::vector<double> x(static_cast<std::size_t>(g.dim()));
        for (double& v : x) v = rng.uniform(-1.0, 1.0);
        auto gx = g.multiply(x);
        double quad = 0.0;
        for (int i = 0; i < g.dim(); ++i) quad += x[i] * gx[i];
        CHECK(quad > 0.0);
    }
}

TEST_CASE("moments of the constant recover the basis integrals") {
    auto rng = sp::SplitRng::fork(42, {23});
    for (int order : {1, 2, 4}) {
        auto basis = random_clamped(order, order + 7, rng);
        auto mv = sp::moment_vector(basis, [](double) { return 1.0; });
        REQUIRE(static_cast<int>(mv.values.size()) == basis.count());
        for (int r = 0; r < basis.count(); ++r) {
            const int i = basis.first_index() + r;
            CHECK(std::abs(mv.values[r] - basis.kappa(i) / order) <= 1e-13);
        }
        CHECK(mv.quad_error <= 1e-14);
    }
}

TEST_CASE("moments of a basis function recover a gram column") {
    auto rng = sp::SplitRng::fork(42, {24});
    for (int order : {2, 3, 5}) {
        auto basis = random_clamped(order, order + 8, rng);
        auto g = sp::gram_matrix(basis);
        const int j = basis.first_index() + basis.count() / 2;
        auto mv = sp::moment_vector(basis, [&](double x) { return basis.value(j, x); });
        const int jr = j - basis.first_index();
        for (int r = 0; r < basis.count(); ++r)
            CHECK(std::abs(mv.values[r] - g.get(r, jr)) <= 1e-13);
    }
}

TEST_CASE("moment refinement is stable for smooth integrands") {
    auto rng = sp::SplitRng::fork(42, {25});
    auto basis = random_clamped(3, 11, rng);
    auto f = [](double x) { return std::sin(kTwoPi * x); };
    auto coarse = sp::moment_vector(basis, f, 4);
    auto fine = sp::moment_vector(basis, f, 8);
    REQUIRE(coarse.values.size() == fine.values.size());
    for (std::size_t r = 0; r < fine.values.size(); ++r)
        CHECK(std::abs(coarse.values[r] - fine.values[r]) <= 1e-12);
    CHECK(fine.quad_error <= 1e-13);
}

TEST_CASE("declared singularities integrate with honest error estimates") {
    // indicator cells around the pole at 1/2: the exact moment is sqrt(2)
    sp::BSplineBasis basis(sp::uniform_clamped_knots(1, 2));
    auto pole = [](double x) { return std::pow(std::abs(x - 0.5), -0.5); };

    auto shallow = sp::moment_vector(basis, pole, 4, {0.5});
    auto deep = sp::moment_vector(basis, pole, 32, {0.5});
    const double exact = std::sqrt(2.0);
    for (auto& mv : {shallow, deep}) {
        REQUIRE(mv.values.size() == 2);
        CHECK(std::isfinite(mv.values[0]));
        CHECK(std::abs(mv.values[0] - exact) <= 0.06);
        CHECK(std::abs(mv.values[1] - exact) <= 0.06);
        CHECK(mv.quad_error > 1e-6);
    }
    CHECK(std::abs(deep.values[0] - exact) < std::abs(shallow.values[0] - exact));
    CHECK(deep.quad_error < shallow.quad_error);
}

TEST_CASE("non-finite samples are reported") {
    sp::BSplineBasis basis(sp::uniform_clamped_knots(2, 5));
    auto bad_everywhere = [](double) { return std::numeric_limits<double>::quiet_NaN(); };
    CHECK_THROWS_AS(sp::moment_vector(basis, bad_everywhere), sp::NonFiniteSample);

    auto bad_right = [](double x) {
        return x > 0.9 ? std::numeric_limits<double>::infinity() : 1.0;
    };
    CHECK_THROWS_AS(sp::moment_vector(basis, bad_right), sp::NonFiniteSample);

    sp::PeriodicBSplineBasis pb(sp::uniform_periodic_knots(2, 4));
    CHECK_THROWS_AS(sp::periodic_moment_vector(pb, bad_everywhere), sp::NonFiniteSample);
}

TEST_CASE("periodic order one gram is the diagonal of cell lengths") {
    sp::PeriodicBSplineBasis pb(sp::uniform_periodic_knots(1, 4));
    auto g = sp::periodic_gram_matrix(pb);
    REQUIRE(g.dim() == 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(g.get(i, j) == (i == j ? 0.25 : 0.0));
}

TEST_CASE("periodic order two uniform gram is the frozen cyclic trinomial") {
    const int n = 8;
    const double h = 1.0 / n;
    sp::PeriodicBSplineBasis pb(sp::uniform_periodic_knots(2, n));
    auto g = sp::periodic_gram_matrix(pb);
    REQUIRE(g.dim() == n);
    CHECK(g.bandwidth() == 1);
    for (int i = 0; i < n; ++i) {
        CHECK(std::abs(g.get(i, i) - 2.0 * h / 3.0) <= 1e-15);
        CHECK(std::abs(g.get(i, (i + 1) % n) - h / 6.0) <= 1e-15);
        CHECK(g.get(i, (i + 2) % n) == 0.0);
    }
}

TEST_CASE("periodic gram entries sum to one") {
    auto rng = sp::SplitRng::fork(42, {26});
    for (int order : {1, 2, 3, 5}) {
        auto basis = random_periodic(order, order + rng.uniform_int(5, 14), rng);
        auto g = sp::periodic_gram_matrix(basis);
        double total = 0.0;
        for (int i = 0; i < g.dim(); ++i) {
            double row = 0.0;
            for (int j = 0; j < g.dim(); ++j) row += g.get(i, j);
            CHECK(std::abs(row - basis.kappa(i) / order) <= 1e-13);
            total += row;
        }
        CHECK(std::abs(total - 1.0) <= 1e-13);
    }
}

TEST_CASE("uniform periodic gram is circulant") {
    for (int order : {2, 3, 4}) {
        const int n = 16;
        sp::PeriodicBSplineBasis pb(sp::uniform_periodic_knots(order, n));
        auto g = sp::periodic_gram_matrix(pb);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const int d = ((i - j) % n + n) % n;
                CHECK(std::abs(g.get(i, j) - g.get(d, 0)) <= 1e-14);
            }
    }
}

TEST_CASE("periodic moments of the constant recover arc lengths") {
    auto rng = sp::SplitRng::fork(42, {27});
    for (int order : {1, 3, 4}) {
        auto basis = random_periodic(order, order + 8, rng);
        auto mv = sp::periodic_moment_vector(basis, [](double) { return 1.0; });
        REQUIRE(static_cast<int>(mv.values.size()) == basis.count());
        for (int j = 0; j < basis.count(); ++j)
            CHECK(std::abs(mv.values[j] - basis.kappa(j) / order) <= 1e-13);
        CHECK(mv.quad_error <= 1e-14);
    }
}

TEST_CASE("periodic moments handle a pole at the seam") {
    sp::PeriodicBSplineBasis pb(sp::uniform_periodic_knots(2, 8));
    auto pole = [](double x) {
        double d = x - std::round(x);  // torus distance to 0
        return std::pow(std::abs(d), -0.5);
    };
    auto mv = sp::periodic_moment_vector(pb, pole, 8, {0.0});
    for (double v : mv.values) {
        CHECK(std::isfinite(v));
        CHECK(v > 0.0);
    }
    CHECK(mv.quad_error > 0.0);
}
