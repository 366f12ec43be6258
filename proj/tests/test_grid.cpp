#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fibercz/error.hpp"
#include "fibercz/grid.hpp"

#include <cmath>
#include <limits>

using namespace fcz;

TEST_CASE("grid construction and points") {
    const Grid1D g(-1.0, 0.25, 8);
    CHECK(g.extent() == 2.0);
    CHECK(g.end() == 1.0);
    CHECK(g.point(3) == -0.25);
    CHECK(g.depth() == 3);
    CHECK_THROWS_AS(Grid1D(0.0, 0.0, 4), Error);
    CHECK_THROWS_AS(Grid1D(0.0, -1.0, 4), Error);
    CHECK_THROWS_AS(Grid1D(0.0, 1.0, 0), Error);
    CHECK_THROWS_AS(Grid1D(std::nan(""), 1.0, 4), Error);
    CHECK(is_power_of_two(64));
    CHECK_FALSE(is_power_of_two(48));
    CHECK_FALSE(is_power_of_two(0));
}

TEST_CASE("sampled function norms") {
    const Grid1D g(0.0, 0.5, 4);
    const SampledFunction1D f(g, {1.0, -2.0, 0.0, 3.0});
    CHECK(f.l1_norm() == 3.0);
    CHECK(f.sup_norm() == 3.0);
    CHECK(f.integral() == 1.0);
    CHECK_THROWS_AS(SampledFunction1D(g, {1.0, 2.0}), Error);
    CHECK_THROWS_AS(SampledFunction1D(g, {1.0, std::numeric_limits<double>::infinity(), 0.0, 0.0}), Error);
}

TEST_CASE("dyadic intervals") {
    const Grid1D g(0.0, 0.25, 4);  // [0, 1), L = 2
    const DyadicInterval root{0, 0};
    auto [a, b] = dyadic_children(root, g);
    CHECK(a == DyadicInterval{1, 0});
    CHECK(b == DyadicInterval{1, 1});
    auto [c, d] = dyadic_children(DyadicInterval{1, 1}, g);
    CHECK(c == DyadicInterval{2, 2});
    CHECK(d == DyadicInterval{2, 3});
    CHECK_THROWS_WITH_AS(dyadic_children(DyadicInterval{2, 1}, g), doctest::Contains("atomic interval"), Error);

    const DyadicInterval q{1, 1};
    CHECK(q.first_index(g) == 2);
    CHECK(q.last_index(g) == 4);
    CHECK(q.length(g) == 0.5);
    CHECK(q.center(g) == 0.75);
    CHECK(q.radius(g) == 0.25);
    CHECK_THROWS_AS(DyadicInterval({3, 0}).validate(g), Error);
    CHECK_THROWS_AS(DyadicInterval({1, 2}).validate(g), Error);
}

TEST_CASE("doubled intervals are clipped to the extent") {
    const Grid1D g(0.0, 1.0 / 16.0, 16);
    SUBCASE("interior") {
        const DoubledInterval d = double_interval(Interval{0.25, 0.5}, g);
        CHECK(d.full.lo == 0.125);
        CHECK(d.full.hi == 0.625);
        CHECK(d.clipped.lo == 0.125);
        CHECK(d.clipped.hi == 0.625);
        CHECK(d.first == 2);
        CHECK(d.last == 10);
    }
    SUBCASE("root") {
        const DoubledInterval d = double_interval(DyadicInterval{0, 0}, g);
        CHECK(d.clipped.lo == 0.0);
        CHECK(d.clipped.hi == 1.0);
        CHECK(d.first == 0);
        CHECK(d.last == 16);
    }
    SUBCASE("left edge") {
        const DoubledInterval d = double_interval(Interval{0.0, 0.25}, g);
        CHECK(d.full.lo == -0.125);
        CHECK(d.clipped.lo == 0.0);
        CHECK(d.clipped.hi == 0.375);
        CHECK(d.last == 6);
    }
}

TEST_CASE("lebesgue measure of index sets") {
    const std::vector<std::size_t> four{0, 1, 2, 3};
    CHECK(lebesgue_measure(four, Grid1D(0.0, 0.25, 8)) == 1.0);
    CHECK(lebesgue_measure({}, Grid1D(0.0, 0.25, 8)) == 0.0);
    const std::vector<std::size_t> all{0, 1, 2, 3, 4, 5, 6, 7};
    CHECK(lebesgue_measure(all, Grid1D(0.0, 0.5, 8)) == 4.0);
    const std::vector<std::size_t> bad{9};
    CHECK_THROWS_AS(lebesgue_measure(bad, Grid1D(0.0, 0.5, 8)), Error);
}

TEST_CASE("materialize tensor functions") {
    const Grid1D g(0.0, 0.25, 4);
    SUBCASE("single term of ones") {
        const TensorFunction2D f(g, g, {TensorTerm{SampledFunction1D(g, {1, 1, 1, 1}), {0, 1}}});
        const DenseFunction2D d = materialize(f);
        for (std::size_t m = 0; m < 4; ++m) {
            CHECK(d(m, 0) == 1.0);
            CHECK(d(m, 1) == 1.0);
            CHECK(d(m, 2) == 0.0);
            CHECK(d(m, 3) == 0.0);
        }
        CHECK(f.l1_norm() == doctest::Approx(0.5));
    }
    SUBCASE("empty") {
        const DenseFunction2D d = materialize(TensorFunction2D(g, g, {}));
        for (double v : d.values()) CHECK(v == 0.0);
    }
    SUBCASE("two disjoint terms") {
        const SampledFunction1D v(g, {1, 2, 3, 4});
        const SampledFunction1D w(g, {-1, 0, 5, 0});
        const TensorFunction2D f(g, g, {TensorTerm{v, {0}}, TensorTerm{w, {1}}});
        const DenseFunction2D d = materialize(f);
        for (std::size_t m = 0; m < 4; ++m) {
            CHECK(d(m, 0) == v[m]);
            CHECK(d(m, 1) == w[m]);
        }
        CHECK(f.row_owner()[0] == 0);
        CHECK(f.row_owner()[1] == 1);
        CHECK(f.row_owner()[2] == -1);
    }
    SUBCASE("invalid index sets") {
        const SampledFunction1D v(g, {1, 2, 3, 4});
        CHECK_THROWS_AS(TensorFunction2D(g, g, {TensorTerm{v, {0, 1}}, TensorTerm{v, {1}}}), Error);
        CHECK_THROWS_AS(TensorFunction2D(g, g, {TensorTerm{v, {0, 0}}}), Error);
        CHECK_THROWS_AS(TensorFunction2D(g, g, {TensorTerm{v, {4}}}), Error);
        CHECK_THROWS_AS(TensorFunction2D(g, g, {TensorTerm{SampledFunction1D(Grid1D(0.0, 0.5, 4), {1, 2, 3, 4}), {0}}}),
                        Error);
    }
}

TEST_CASE("dense function layout") {
    const Grid1D gx(0.0, 0.5, 4);
    const Grid1D gy(0.0, 0.25, 2);
    DenseFunction2D d(gx, gy, {1, 2, 3, 4, 5, 6, 7, 8});
    CHECK(d(0, 1) == 5.0);
    CHECK(d(2, 0) == 3.0);
    CHECK(d.row(1)[1] == 6.0);
    CHECK(d.cell_area() == 0.125);
    CHECK_THROWS_AS(DenseFunction2D(gx, gy, {1, 2, 3}), Error);
}
