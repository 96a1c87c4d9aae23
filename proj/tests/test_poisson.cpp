#include <catch2/catch_amalgamated.hpp>

#include <bpt/measure.hpp>
#include <bpt/poisson.hpp>

using namespace bpt;

TEST_CASE("aligned transform values") {
    ProblemInstance q2d2{2, 2};
    CHECK(value_aligned_series(q2d2, 0) == 3);
    CHECK(value_aligned_rearranged(q2d2, 0) == 3);
    CHECK(transform_geometric(q2d2, EdgeClass::make_aligned(0)) == 3);

    CHECK(value_aligned_series(q2d2, -1) == ratio(3, 2));
    CHECK(value_aligned_series(q2d2, 1) == 3);

    ProblemInstance q2d1{2, 1};
    CHECK(value_aligned_series(q2d1, 0) == 2);

    // Degenerate segment: everything vanishes.
    ProblemInstance q3d0{3, 0};
    CHECK(transform_geometric(q3d0, EdgeClass::make_aligned(0)) == 0);
    CHECK(value_aligned_series(q3d0, 2) == 0);
}

TEST_CASE("transverse transform values") {
    ProblemInstance q2d2{2, 2};
    for (long long j = 1; j <= 4; ++j) {
        CHECK(value_transverse_series(q2d2, 1, j) == 0);
        CHECK(value_transverse_closed(q2d2, 1, j) == 0);
    }

    ProblemInstance q2d4{2, 4};
    CHECK(value_transverse_series(q2d4, 1, 1) == ratio(3, 4));
    CHECK(value_transverse_closed(q2d4, 1, 1) == ratio(3, 4));
    CHECK(value_transverse_series(q2d4, 3, 1) == ratio(-3, 4));
    CHECK(value_transverse_series(q2d4, 2, 5) == 0);

    CHECK_THROWS_AS(value_transverse_series(q2d4, 0, 1), InvalidParameters);
    CHECK_THROWS_AS(value_transverse_series(q2d4, 4, 1), InvalidParameters);
    CHECK_THROWS_AS(value_transverse_series(q2d4, 1, 0), InvalidParameters);
}

TEST_CASE("orientation reverses the sign") {
    ProblemInstance inst{3, 3};
    for (long long i = -3; i <= 6; ++i) {
        EdgeClass fwd = EdgeClass::make_aligned(i);
        EdgeClass rev = EdgeClass::make_aligned(i, true);
        CHECK(transform_series(inst, rev) == -transform_series(inst, fwd));
        CHECK(transform_geometric(inst, rev) == -transform_geometric(inst, fwd));
    }
    EdgeClass tf = EdgeClass::make_transverse(1, 2);
    EdgeClass tr = EdgeClass::make_transverse(1, 2, true);
    CHECK(transform_series(inst, tr) == -transform_series(inst, tf));
    CHECK(transform_geometric(inst, tr) == -transform_geometric(inst, tf));
}

TEST_CASE("all three routes agree on a window of classes") {
    for (long long q : {2, 3}) {
        for (long long d = 1; d <= 4; ++d) {
            ProblemInstance inst{q, d};
            for (long long i = -4; i <= d + 4; ++i) {
                for (bool rev : {false, true}) {
                    EdgeClass cls = EdgeClass::make_aligned(i, rev);
                    Rational a = transform_series(inst, cls);
                    REQUIRE(transform_rearranged(inst, cls) == a);
                    REQUIRE(transform_geometric(inst, cls) == a);
                    REQUIRE(rational_abs(a) <= per_edge_bound(inst, cls));
                }
            }
            for (long long i = 1; i <= d - 1; ++i) {
                for (long long j = 1; j <= 4; ++j) {
                    for (bool rev : {false, true}) {
                        EdgeClass cls = EdgeClass::make_transverse(i, j, rev);
                        Rational a = transform_series(inst, cls);
                        REQUIRE(transform_rearranged(inst, cls) == a);
                        REQUIRE(transform_geometric(inst, cls) == a);
                        REQUIRE(rational_abs(a) <= per_edge_bound(inst, cls));
                    }
                }
            }
        }
    }
}

TEST_CASE("per-edge envelopes take their closed-form values") {
    ProblemInstance q2d3{2, 3};
    // Interior aligned classes share one envelope: 2(q+1)/(q-1).
    CHECK(per_edge_bound(q2d3, EdgeClass::make_aligned(0)) == 6);
    CHECK(per_edge_bound(q2d3, EdgeClass::make_aligned(2)) == 6);
    // One step outside the segment the envelope halves with each step.
    CHECK(per_edge_bound(q2d3, EdgeClass::make_aligned(-1)) == 2);
    CHECK(per_edge_bound(q2d3, EdgeClass::make_aligned(-2)) == 1);
    CHECK(per_edge_bound(ProblemInstance{2, 4}, EdgeClass::make_transverse(1, 1)) == 1);

    // Orientation does not change the envelope.
    CHECK(per_edge_bound(q2d3, EdgeClass::make_aligned(1, true)) ==
          per_edge_bound(q2d3, EdgeClass::make_aligned(1)));
}

TEST_CASE("interior aligned values stay at least 2") {
    for (long long q : {2, 3, 5}) {
        for (long long d = 1; d <= 6; ++d) {
            ProblemInstance inst{q, d};
            for (long long i = 0; i < d; ++i) {
                REQUIRE(value_aligned_series(inst, i) >= 2);
            }
        }
    }
}

TEST_CASE("locally constant integration") {
    ProblemInstance inst{2, 2};
    EdgeClass cls = EdgeClass::make_aligned(0);

    // A constant function integrates to zero against the balanced measure.
    std::map<Vertex, Rational> flat;
    for (const auto& u : sphere_vertices(inst, 3)) flat[u] = ratio(7, 3);
    CHECK(transform_locally_constant(inst, 3, flat, cls) == 0);

    // The cocycle's own profile, sampled at depth d, reproduces the
    // shadow-integration route.
    for (long long q : {2, 3}) {
        for (long long d = 1; d <= 3; ++d) {
            ProblemInstance in{q, d};
            auto profile = busemann_profile(in, d);
            for (long long i = -2; i <= d + 2; ++i) {
                EdgeClass c = EdgeClass::make_aligned(i);
                REQUIRE(transform_locally_constant(in, d, profile, c) ==
                        transform_geometric(in, c));
            }
            if (d >= 2) {
                EdgeClass c = EdgeClass::make_transverse(1, 1);
                REQUIRE(transform_locally_constant(in, d, profile, c) ==
                        transform_geometric(in, c));
            }
        }
    }

    // A single indicator integrates to the measure of its shadow.
    Vertex top = spine_vertex(3);
    std::map<Vertex, Rational> one;
    for (const auto& u : sphere_vertices(inst, 3)) one[u] = Rational(u == top ? 1 : 0);
    auto [w, z] = realize_edge(inst, cls);
    CHECK(transform_locally_constant(inst, 3, one, cls) ==
          edge_measure_shadow(inst, w, z, Shadow{spine_vertex(0), top}));

    // Missing sphere values and bad radii are reported.
    std::map<Vertex, Rational> partial = one;
    partial.erase(top);
    CHECK_THROWS_AS(transform_locally_constant(inst, 3, partial, cls), IncompleteCover);
    CHECK_THROWS_AS(transform_locally_constant(inst, 0, one, cls), InvalidParameters);
}

TEST_CASE("values are square-summable across classes") {
    // A crude check that the tail of sum n(i) P(i)^2 decays: the last windowed
    // increments shrink geometrically.
    ProblemInstance inst{2, 3};
    Rational prev;
    bool have_prev = false;
    for (long long m = 4; m <= 10; ++m) {
        Rational inc = Rational(count_edges(inst, EdgeClass::make_aligned(-m))) *
                       value_aligned_series(inst, -m) * value_aligned_series(inst, -m);
        if (have_prev) REQUIRE(inc < prev);
        prev = inc;
        have_prev = true;
    }
}
