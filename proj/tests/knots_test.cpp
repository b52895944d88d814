#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <splineproj/errors.hpp>
#include <splineproj/knots.hpp>
#include <splineproj/rng.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

using namespace splineproj;

TEST_CASE("clamped validation accepts the canonical hat sequence") {
    KnotVector kv = validate_clamped_knots(2, {0.0, 0.0, 0.5, 1.0, 1.0});
    CHECK(kv.order() == 2);
    CHECK(kv.num_basis() == 3);
    CHECK(kv.first_index() == 0);
    CHECK(kv.domain_min() == 0.0);
    CHECK(kv.domain_max() == 1.0);
    CHECK(kv.mesh_width() == 0.5);
    CHECK(kv.is_clamped());
}

TEST_CASE("clamped validation rejects malformed sequences") {
    CHECK_THROWS_AS(validate_clamped_knots(2, {0.0, 0.5, 0.25, 1.0, 1.0}), NotSorted);
    // interior value with multiplicity k+1
    CHECK_THROWS_AS(validate_clamped_knots(2, {0.0, 0.0, 0.5, 0.5, 0.5, 1.0, 1.0}),
                    MultiplicityViolation);
    // boundary multiplicity below k
    CHECK_THROWS_AS(validate_clamped_knots(2, {0.0, 0.5, 1.0, 1.0}), MultiplicityViolation);
    CHECK_THROWS_AS(validate_clamped_knots(2, {0.0, 0.0, 0.5, 1.0}), MultiplicityViolation);
    CHECK_THROWS_AS(validate_clamped_knots(3, {0.0, 0.0, 0.0, 1.0, 1.0}), TooFewKnots);
    CHECK_THROWS_AS(validate_clamped_knots(0, {0.0, 1.0}), OutOfRange);
}

TEST_CASE("signed knot indexing") {
    KnotVector kv(2, {0.0, 0.0, 0.5, 1.0, 1.0}, -1);
    CHECK(kv.first_index() == -1);
    CHECK(kv.last_index() == 3);
    CHECK(kv.knot(-1) == 0.0);
    CHECK(kv.knot(1) == 0.5);
    CHECK(kv.knot(3) == 1.0);
    CHECK(kv.basis_begin() == -1);
    CHECK(kv.basis_end() == 2);
    CHECK_THROWS_AS(kv.knot(-2), IndexOutOfRange);
    CHECK_THROWS_AS(kv.knot(4), IndexOutOfRange);
}

TEST_CASE("periodic validation and the extension accessor") {
    PeriodicKnotVector pk = validate_periodic_knots(2, {0.0, 0.25, 0.5, 0.75});
    CHECK(pk.size() == 4);
    CHECK(pk.knot(4) == 1.0);
    CHECK(pk.knot(-1) == -0.25);
    CHECK(pk.knot(9) == 2.25);
    CHECK(pk.mesh_width() == 0.25);

    // repeated values are allowed up to multiplicity k under the extension
    CHECK_NOTHROW(validate_periodic_knots(3, {0.0, 0.0, 0.0, 0.5}));
    CHECK_THROWS_AS(validate_periodic_knots(2, {0.0, 0.0, 0.0, 0.5}), MultiplicityViolation);

    CHECK_THROWS_AS(validate_periodic_knots(2, {0.0, 1.0}), OutOfRange);
    CHECK_THROWS_AS(validate_periodic_knots(2, {-0.1, 0.5}), OutOfRange);
    CHECK_THROWS_AS(validate_periodic_knots(3, {0.0, 0.5}), TooFewKnots);
    CHECK_THROWS_AS(validate_periodic_knots(2, {0.5, 0.25, 0.75}), NotSorted);
}

TEST_CASE("periodic extension is bit-exact over whole periods") {
    SplitRng rng = SplitRng::fork(91, {7});
    for (int trial = 0; trial < 20; ++trial) {
        const int n = rng.uniform_int(4, 40);
        std::vector<double> s;
        for (int j = 0; j < n; ++j) s.push_back(rng.uniform());
        std::sort(s.begin(), s.end());
        PeriodicKnotVector pk(1, s);
        for (long j = -3L * n; j <= 3L * n; ++j) {
            const double diff = pk.knot(j + n) - pk.knot(j);
            CHECK(std::abs(diff - 1.0) <= std::ldexp(1.0, -50));
        }
    }
}

TEST_CASE("lift_window reproduces the one-period clamped construction") {
    PeriodicKnotVector pk(2, {0.0, 0.25, 0.5, 0.75});
    KnotVector w = lift_window(pk, 1);
    CHECK(w.first_index() == -1);
    CHECK(w.values() == std::vector<double>{0.25, 0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.5});
    CHECK(w.num_basis() == 6);  // N_{-1} .. N_4
    CHECK(w.domain_min() == 0.25);
    CHECK(w.domain_max() == 1.5);

    // the window data always passes clamped validation for a non-degenerate cell
    CHECK_NOTHROW(validate_clamped_knots(2, w.values()));
}

TEST_CASE("lift_window domain for a uniform torus mesh") {
    PeriodicKnotVector pk = uniform_periodic_knots(3, 8);
    KnotVector w = lift_window(pk, 0);
    CHECK(w.domain_min() == 0.0);
    CHECK(w.domain_max() == doctest::Approx(1.125).epsilon(1e-15));
    CHECK(w.first_index() == -2);
    CHECK(w.last_index() == 11);  // j = -k+1 .. n+k
}

TEST_CASE("lift_window tolerates a degenerate cell") {
    PeriodicKnotVector pk(2, {0.0, 0.25, 0.25, 0.75});
    KnotVector w = lift_window(pk, 1);
    // boundary value carries multiplicity k+1; callers skip the empty cell
    CHECK(w.values() == std::vector<double>{0.25, 0.25, 0.25, 0.75, 1.0, 1.25, 1.25, 1.25});
    CHECK_THROWS_AS(validate_clamped_knots(2, w.values()), MultiplicityViolation);
}

TEST_CASE("lift_window over random periodic sequences validates as clamped") {
    SplitRng rng = SplitRng::fork(91, {8});
    for (int trial = 0; trial < 20; ++trial) {
        const int k = rng.uniform_int(1, 4);
        const int n = rng.uniform_int(k + 1, 24);
        std::vector<double> s;
        for (int j = 0; j < n; ++j) s.push_back(rng.uniform());
        std::sort(s.begin(), s.end());
        // de-duplicate so every cell is non-degenerate
        for (int j = 1; j < n; ++j)
            if (s[j] - s[j - 1] < 1e-6) s[j] = s[j - 1] + 1e-6;
        if (s.back() >= 1.0) continue;
        PeriodicKnotVector pk(k, s);
        for (int i = 0; i < n; ++i) {
            KnotVector w = lift_window(pk, i);
            CHECK_NOTHROW(validate_clamped_knots(k, w.values()));
            CHECK(w.num_basis() == n + k);
        }
    }
}

TEST_CASE("lift_cut pads the seam to multiplicity k") {
    PeriodicKnotVector a(2, {0.0, 0.5});
    KnotVector ca = lift_cut(a);
    CHECK(ca.values() == std::vector<double>{0.0, 0.0, 0.5, 1.0, 1.0});
    CHECK(ca.first_index() == -1);  // m = 1: 0 already present once

    PeriodicKnotVector b(2, {0.1, 0.6});
    KnotVector cb = lift_cut(b);
    CHECK(cb.values() == std::vector<double>{0.0, 0.0, 0.1, 0.6, 1.0, 1.0});
    CHECK(cb.first_index() == -2);  // m = 2: 0 absent

    PeriodicKnotVector c(3, {0.0, 0.0, 0.5});
    KnotVector cc = lift_cut(c);
    CHECK(cc.values() == std::vector<double>{0.0, 0.0, 0.0, 0.5, 1.0, 1.0, 1.0});
    CHECK(cc.first_index() == -1);  // m = 1: 0 present twice
    CHECK(cc.num_basis() == 4);     // #knots - k
}

TEST_CASE("lift_cut dimension matches the basis-count rule") {
    SplitRng rng = SplitRng::fork(91, {9});
    for (int trial = 0; trial < 20; ++trial) {
        const int k = rng.uniform_int(1, 4);
        const int n = rng.uniform_int(k, 20);
        std::vector<double> s;
        for (int j = 0; j < n; ++j) s.push_back(rng.uniform(0.001, 0.999));
        std::sort(s.begin(), s.end());
        for (int j = 1; j < n; ++j)
            if (s[j] - s[j - 1] < 1e-6) s[j] = s[j - 1] + 1e-6;
        if (s.back() >= 1.0) continue;
        PeriodicKnotVector pk(k, s);
        KnotVector cut = lift_cut(pk);
        CHECK(cut.num_basis() == cut.size() - k);
        CHECK(cut.domain_min() == 0.0);
        CHECK(cut.domain_max() == 1.0);
        CHECK(cut.is_clamped());
    }
}

TEST_CASE("knot file parsing") {
    std::istringstream in(
        "# example file\n"
        "k 2 clamped\n"
        "0\n"
        "0 # repeated boundary\n"
        "0.5\n"
        "\n"
        "1\n"
        "1\n");
    KnotFile kf = parse_knot_file(in, "test");
    CHECK(kf.order == 2);
    CHECK(kf.mode == KnotMode::clamped);
    CHECK(kf.values == std::vector<double>{0.0, 0.0, 0.5, 1.0, 1.0});
}

TEST_CASE("knot file rejects malformed input") {
    auto parse = [](const char* text) {
        std::istringstream in(text);
        return parse_knot_file(in, "test");
    };
    CHECK_THROWS_AS(parse("0.5\n1.0\n"), ParseError);             // missing header
    CHECK_THROWS_AS(parse("k x clamped\n"), ParseError);          // bad order
    CHECK_THROWS_AS(parse("k 2 open\n0\n"), ParseError);          // bad mode
    CHECK_THROWS_AS(parse("k 2 clamped\n0 0.5\n"), ParseError);   // two knots per line
    CHECK_THROWS_AS(parse("k 2 clamped\nabc\n"), ParseError);     // bad value
    CHECK_THROWS_AS(parse(""), ParseError);                       // empty
}

TEST_CASE("knot file round-trips through format and parse") {
    KnotFile kf;
    kf.order = 3;
    kf.mode = KnotMode::periodic;
    kf.values = {0.0, 0.1, 1.0 / 3.0, 0.625, 0.9999999999999999};
    std::istringstream in(format_knot_file(kf));
    KnotFile back = parse_knot_file(in, "roundtrip");
    CHECK(back.order == kf.order);
    CHECK(back.mode == kf.mode);
    REQUIRE(back.values.size() == kf.values.size());
    for (std::size_t i = 0; i < kf.values.size(); ++i) CHECK(back.values[i] == kf.values[i]);
}

TEST_CASE("uniform constructors") {
    KnotVector kv = uniform_clamped_knots(3, 8);
    CHECK(kv.num_basis() == 8);
    CHECK(kv.order() == 3);
    CHECK(kv.domain_min() == 0.0);
    CHECK(kv.domain_max() == 1.0);
    CHECK(kv.mesh_width() == doctest::Approx(1.0 / 6.0).epsilon(1e-15));

    PeriodicKnotVector pk = uniform_periodic_knots(3, 8);
    CHECK(pk.size() == 8);
    for (int j = 0; j < 8; ++j) CHECK(pk.values()[j] == j / 8.0);

    CHECK_THROWS_AS(uniform_clamped_knots(3, 2), TooFewKnots);
}
