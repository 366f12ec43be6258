#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fibercz/error.hpp"
#include "fibercz/operators.hpp"
#include "fibercz/random.hpp"

#include <cmath>
#include <numbers>

using namespace fcz;

namespace {

const ParaproductConfig kCfg = default_config();

std::vector<double> oracle_maximal(std::span<const double> g) {
    const std::size_t n = g.size();
    std::vector<double> out(n, 0.0);
    // every interval [a, b], summed left to right, credited to each of its points
    for (std::size_t a = 0; a < n; ++a) {
        double sum = 0.0;
        for (std::size_t b = a; b < n; ++b) {
            sum += std::abs(g[b]);
            const double avg = sum / static_cast<double>(b - a + 1);
            for (std::size_t u = a; u <= b; ++u) out[u] = std::max(out[u], avg);
        }
    }
    return out;
}

// T by direct summation over scales, x-slices and y-slices.
DenseFunction2D oracle_T(const DenseFunction2D& f, const DenseFunction2D& g, const ParaproductConfig& cfg) {
    const Grid1D& gx = f.grid_x();
    const Grid1D& gy = f.grid_y();
    const auto nx = static_cast<std::ptrdiff_t>(gx.count());
    const auto ny = static_cast<std::ptrdiff_t>(gy.count());
    DenseFunction2D out(gx, gy);
    for (double t : cfg.ladder_for(gx, gy).scales()) {
        const DilatedFilter psi(cfg.psi, t, gx.step());
        const DilatedFilter phi(cfg.second(), t, gy.step());
        for (std::ptrdiff_t n = 0; n < ny; ++n) {
            for (std::ptrdiff_t m = 0; m < nx; ++m) {
                double a = 0.0;
                for (std::ptrdiff_t k = 0; k < nx; ++k) {
                    a += psi.tap(m - k) * f(static_cast<std::size_t>(k), static_cast<std::size_t>(n));
                }
                double b = 0.0;
                for (std::ptrdiff_t k = 0; k < ny; ++k) {
                    b += phi.tap(n - k) * g(static_cast<std::size_t>(m), static_cast<std::size_t>(k));
                }
                out(static_cast<std::size_t>(m), static_cast<std::size_t>(n)) +=
                    std::numbers::ln2 * (a * gx.step()) * (b * gy.step());
            }
        }
    }
    return out;
}

double sup_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double max_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

DenseFunction2D constant(const Grid1D& gx, const Grid1D& gy, double c) {
    return DenseFunction2D(gx, gy, std::vector<double>(gx.count() * gy.count(), c));
}

} // namespace

TEST_CASE("axis convolution") {
    const Grid1D g(0.0, 0.25, 8);
    Rng rng(3);
    const DenseFunction2D f = random_dense(g, g, rng);
    SUBCASE("discrete delta is the identity") {
        const SampledFunction1D delta(Grid1D(0.0, 0.25, 1), {4.0});
        for (Axis axis : {Axis::X, Axis::Y}) {
            const DenseFunction2D out = convolve_axis(f, delta, axis);
            CHECK(max_diff(out.values(), f.values()) <= 1e-12 * sup_abs(f.values()));
        }
    }
    SUBCASE("impulse response") {
        DenseFunction2D point(g, g);
        point(3, 5) = 1.0;
        const SampledFunction1D k(Grid1D(-0.5, 0.25, 4), {1.0, 2.0, 3.0, 4.0});
        const DenseFunction2D ox = convolve_axis(point, k, Axis::X);
        // out[m] = step * k[m - 3]
        CHECK(ox(1, 5) == 0.25 * 1.0);
        CHECK(ox(4, 5) == 0.25 * 4.0);
        CHECK(ox(5, 5) == 0.0);
        CHECK(ox(3, 4) == 0.0);
        const DenseFunction2D oy = convolve_axis(point, k, Axis::Y);
        CHECK(oy(3, 3) == 0.25 * 1.0);
        CHECK(oy(3, 6) == 0.25 * 4.0);
    }
    SUBCASE("unit-mass phi preserves constants in the interior") {
        const Grid1D fine(0.0, 1.0 / 64.0, 64);
        const DenseFunction2D c = constant(fine, fine, 2.5);
        const DilatedFilter phi(kCfg.phi, 0.125, fine.step());
        const DenseFunction2D out = convolve_axis(c, phi.taps(), Axis::Y);
        for (std::size_t n = 8; n < 56; ++n) CHECK(std::abs(out(10, n) - 2.5) <= 1e-12);
    }
    SUBCASE("misaligned kernel") {
        const SampledFunction1D k(Grid1D(0.1, 0.25, 2), {1.0, 1.0});
        CHECK_THROWS_AS(convolve_axis(f, k, Axis::X), Error);
        const SampledFunction1D wrong_step(Grid1D(0.0, 0.5, 2), {1.0, 1.0});
        CHECK_THROWS_AS(convolve_axis(f, wrong_step, Axis::X), Error);
    }
}

TEST_CASE("classical paraproduct") {
    const Grid1D g(0.0, 1.0 / 256.0, 256);
    Rng rng(11);
    const SampledFunction1D f = random_signal(g, rng);
    const SampledFunction1D zero(g);
    const SampledFunction1D one(g, std::vector<double>(256, 1.0));
    {
        const auto out = paraproduct_pi(zero, f, kCfg);
        for (double v : out.values()) CHECK(v == 0.0);
    }

    const ScaleLadder ladder = kCfg.ladder_for(g, g);
    const auto reach = DilatedFilter(kCfg.psi, ladder.scales().back(), g.step()).half_width();
    const SampledFunction1D flat = paraproduct_pi(one, f, kCfg);
    for (auto i = reach; i < 256 - reach; ++i) CHECK(std::abs(flat[static_cast<std::size_t>(i)]) <= 1e-12);

    const SampledFunction1D with_one = paraproduct_pi(f, one, kCfg);
    std::vector<double> expected(256, 0.0);
    for (double t : ladder.scales()) {
        const auto c = convolve_line(f.values(), DilatedFilter(kCfg.psi, t, g.step()).taps(255));
        for (std::size_t i = 0; i < 256; ++i) expected[i] += std::numbers::ln2 * c[i];
    }
    for (auto i = reach; i < 256 - reach; ++i) {
        const auto k = static_cast<std::size_t>(i);
        CHECK(with_one[k] == doctest::Approx(expected[k]).epsilon(1e-12).scale(sup_abs(expected)));
    }
}

TEST_CASE("bi-dimensional paraproduct") {
    const Grid1D g(0.0, 1.0 / 64.0, 64);
    Rng rng(17);
    SUBCASE("zero operands") {
        const DenseFunction2D f = random_dense(g, g, rng);
        {
            const auto out = paraproduct_T(DenseFunction2D(g, g), f, kCfg);
            for (double v : out.values()) CHECK(v == 0.0);
        }
        {
            const auto out = paraproduct_T(f, DenseFunction2D(g, g), kCfg);
            for (double v : out.values()) CHECK(v == 0.0);
        }
    }
    SUBCASE("matches the brute-force oracle") {
        for (int k = 0; k < 3; ++k) {
            const DenseFunction2D f = random_dense(g, g, rng);
            const DenseFunction2D gg = random_dense(g, g, rng);
            const DenseFunction2D t = paraproduct_T(f, gg, kCfg, 2);
            const DenseFunction2D o = oracle_T(f, gg, kCfg);
            CHECK(max_diff(t.values(), o.values()) <= 1e-12 * sup_abs(o.values()));
        }
    }
    SUBCASE("separated variables give a tensor") {
        std::vector<double> u(64);
        std::vector<double> v(64);
        for (auto& x : u) x = rng.normal();
        for (auto& x : v) x = rng.normal();
        DenseFunction2D f(g, g);
        DenseFunction2D gg(g, g);
        for (std::size_t n = 0; n < 64; ++n) {
            for (std::size_t m = 0; m < 64; ++m) {
                f(m, n) = u[m];
                gg(m, n) = v[n];
            }
        }
        const DenseFunction2D t = paraproduct_T(f, gg, kCfg);
        DenseFunction2D expected(g, g);
        for (double s : kCfg.ladder_for(g, g).scales()) {
            const auto a = convolve_line(u, DilatedFilter(kCfg.psi, s, g.step()).taps(63));
            const auto b = convolve_line(v, DilatedFilter(kCfg.phi, s, g.step()).taps(63));
            for (std::size_t n = 0; n < 64; ++n) {
                for (std::size_t m = 0; m < 64; ++m) expected(m, n) += std::numbers::ln2 * a[m] * b[n];
            }
        }
        CHECK(max_diff(t.values(), expected.values()) <= 1e-12 * sup_abs(expected.values()));
    }
    SUBCASE("fiber-wise evaluation is bit-identical") {
        for (int k = 0; k < 5; ++k) {
            const TensorFunction2D f = random_tensor(g, g, rng);
            const DenseFunction2D gg = random_dense(g, g, rng);
            const DenseFunction2D dense = paraproduct_T(materialize(f), gg, kCfg);
            const DenseFunction2D fiber = paraproduct_T_fiberwise(f, gg, kCfg, 1);
            const DenseFunction2D fiber4 = paraproduct_T_fiberwise(f, gg, kCfg, 4);
            CHECK(std::equal(dense.values().begin(), dense.values().end(), fiber.values().begin()));
            CHECK(std::equal(fiber.values().begin(), fiber.values().end(), fiber4.values().begin()));
        }
    }
    SUBCASE("split of one dense function into two terms") {
        std::vector<double> w(64);
        for (auto& x : w) x = rng.normal();
        const SampledFunction1D fiber(g, w);
        std::vector<std::size_t> even;
        std::vector<std::size_t> odd;
        for (std::size_t n = 0; n < 64; ++n) (n % 2 ? odd : even).push_back(n);
        const TensorFunction2D split(g, g, {TensorTerm{fiber, even}, TensorTerm{fiber, odd}});
        const TensorFunction2D whole(g, g, {TensorTerm{fiber, [] {
                                                 std::vector<std::size_t> all(64);
                                                 for (std::size_t n = 0; n < 64; ++n) all[n] = n;
                                                 return all;
                                             }()}});
        const DenseFunction2D gg = random_dense(g, g, rng);
        const DenseFunction2D a = paraproduct_T_fiberwise(split, gg, kCfg);
        const DenseFunction2D b = paraproduct_T_fiberwise(whole, gg, kCfg);
        const DenseFunction2D c = paraproduct_T(materialize(whole), gg, kCfg);
        CHECK(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
        CHECK(std::equal(a.values().begin(), a.values().end(), c.values().begin()));
    }
    SUBCASE("zero tensor") {
        const DenseFunction2D gg = random_dense(g, g, rng);
        {
            const auto out = paraproduct_T_fiberwise(TensorFunction2D(g, g, {}), gg, kCfg);
            for (double v : out.values()) CHECK(v == 0.0);
        }
    }
    SUBCASE("strict mode uses psi in both slots") {
        const DenseFunction2D f = random_dense(g, g, rng);
        const DenseFunction2D gg = random_dense(g, g, rng);
        const ParaproductConfig strict = default_config(true);
        const DenseFunction2D t = paraproduct_T(f, gg, strict);
        const DenseFunction2D o = oracle_T(f, gg, strict);
        CHECK(max_diff(t.values(), o.values()) <= 1e-12 * sup_abs(o.values()));
    }
    CHECK_THROWS_AS(paraproduct_T(DenseFunction2D(g, g), DenseFunction2D(Grid1D(0.0, 0.5, 64), g), kCfg), Error);
}

TEST_CASE("dual operators") {
    const Grid1D g(0.0, 1.0 / 32.0, 32);
    Rng rng(23);
    SUBCASE("adjoint identities on random triples") {
        for (int k = 0; k < 20; ++k) {
            const DenseFunction2D f = random_dense(g, g, rng);
            const DenseFunction2D gg = random_dense(g, g, rng);
            const DenseFunction2D h = random_dense(g, g, rng);
            // left side by direct summation against the oracle T
            const DenseFunction2D t = oracle_T(f, gg, kCfg);
            double lhs = 0.0;
            for (std::size_t i = 0; i < t.values().size(); ++i) lhs += t.values()[i] * h.values()[i];
            lhs *= g.step() * g.step();
            const double mid = inner_product(f, dual_T1(h, gg, kCfg));
            const double rhs = inner_product(gg, dual_T2(f, h, kCfg));
            CHECK(std::abs(lhs - mid) <= 1e-10 * std::abs(lhs));
            CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(lhs));
        }
    }
    SUBCASE("zero inputs") {
        const DenseFunction2D gg = random_dense(g, g, rng);
        {
            const auto out = dual_T1(DenseFunction2D(g, g), gg, kCfg);
            for (double v : out.values()) CHECK(v == 0.0);
        }
        {
            const auto out = dual_T2(DenseFunction2D(g, g), gg, kCfg);
            for (double v : out.values()) CHECK(v == 0.0);
        }
    }
    const Grid1D fine(0.0, 1.0 / 64.0, 64);
    const ScaleLadder ladder = kCfg.ladder_for(fine, fine);
    const auto reach = static_cast<std::size_t>(DilatedFilter(kCfg.psi, ladder.scales().back(), fine.step()).half_width());
    SUBCASE("T*1 with g = 1 reduces to reflected psi convolutions") {
        const DenseFunction2D h = random_dense(fine, fine, rng);
        const DenseFunction2D out = dual_T1(h, constant(fine, fine, 1.0), kCfg);
        DenseFunction2D expected(fine, fine);
        for (double t : ladder.scales()) {
            const DenseFunction2D c =
                convolve_axis(h, DilatedFilter(kCfg.psi, t, fine.step()).taps(63).reflected(), Axis::X);
            for (std::size_t i = 0; i < c.values().size(); ++i) expected.values()[i] += std::numbers::ln2 * c.values()[i];
        }
        for (std::size_t n = reach; n < 64 - reach; ++n) {
            for (std::size_t m = 0; m < 64; ++m) CHECK(std::abs(out(m, n) - expected(m, n)) <= 1e-12);
        }
    }
    SUBCASE("T*2 with f = 1 vanishes where psi sees only the constant") {
        const DenseFunction2D h = random_dense(fine, fine, rng);
        const DenseFunction2D out = dual_T2(constant(fine, fine, 1.0), h, kCfg);
        for (std::size_t n = 0; n < 64; ++n) {
            for (std::size_t m = reach; m < 64 - reach; ++m) CHECK(std::abs(out(m, n)) <= 1e-12);
        }
    }
}

TEST_CASE("maximal function") {
    SUBCASE("small slice") {
        const std::vector<double> g{0.0, 1.0, 0.0, 0.0};
        const auto m = hl_maximal_1d(g);
        CHECK(m == std::vector<double>{0.5, 1.0, 0.5, 1.0 / 3.0});
        CHECK(m == oracle_maximal(g));
    }
    SUBCASE("constants") {
        const Grid1D g(0.0, 0.25, 8);
        {
            const auto out = hl_maximal_axis(constant(g, g, -1.5), Axis::Y);
            for (double v : out.values()) CHECK(v == 1.5);
        }
    }
    SUBCASE("oracle equivalence on random slices") {
        Rng rng(31);
        for (int k = 0; k < 50; ++k) {
            const auto n = static_cast<std::size_t>(rng.integer(1, 256));
            std::vector<double> g(n);
            for (auto& x : g) x = rng.normal();
            CHECK(hl_maximal_1d(g) == oracle_maximal(g));
        }
    }
    SUBCASE("axis slices") {
        Rng rng(37);
        const Grid1D gx(0.0, 0.25, 8);
        const Grid1D gy(0.0, 0.5, 16);
        const DenseFunction2D g = random_dense(gx, gy, rng);
        const DenseFunction2D my = hl_maximal_axis(g, Axis::Y);
        const DenseFunction2D mx = hl_maximal_axis(g, Axis::X);
        for (std::size_t m = 0; m < 8; ++m) {
            std::vector<double> col(16);
            for (std::size_t n = 0; n < 16; ++n) col[n] = g(m, n);
            const auto o = oracle_maximal(col);
            for (std::size_t n = 0; n < 16; ++n) CHECK(my(m, n) == o[n]);
        }
        for (std::size_t n = 0; n < 16; ++n) {
            const auto o = oracle_maximal(g.row(n));
            for (std::size_t m = 0; m < 8; ++m) CHECK(mx(m, n) == o[m]);
        }
    }
    SUBCASE("phi_t is dominated by the maximal function") {
        Rng rng(41);
        const Grid1D g(0.0, 1.0 / 64.0, 64);
        const DenseFunction2D gg = random_dense(g, g, rng);
        const DenseFunction2D m = hl_maximal_axis(gg, Axis::Y);
        double c_phi = 0.0;
        for (double t : kCfg.ladder_for(g, g).scales()) {
            const DenseFunction2D c = convolve_axis(gg, DilatedFilter(kCfg.phi, t, g.step()).taps(63), Axis::Y);
            for (std::size_t i = 0; i < c.values().size(); ++i) c_phi = std::max(c_phi, std::abs(c.values()[i]) / m.values()[i]);
        }
        CHECK(c_phi <= 1.0);
    }
}

TEST_CASE("majorant H") {
    const Grid1D gx(0.0, 1.0 / 4096.0, 4096);
    const Grid1D gy(0.0, 1.0, 2);
    SUBCASE("no atoms") {
        const TensorFunction2D f(gx, gy, {TensorTerm{SampledFunction1D(gx, std::vector<double>(4096, 0.5)), {0, 1}}});
        {
            const auto out = h_majorant(fiberwise_decompose(f, 1.0));
            for (double v : out.values()) CHECK(v == 0.0);
        }
    }
    SUBCASE("single atom row integral is |Q| up to discretization") {
        std::vector<double> v(4096, 0.0);
        v[2049] = 1.0;
        const TensorFunction2D f(gx, gy, {TensorTerm{SampledFunction1D(gx, v), {1}}});
        const FiberDecomposition d = fiberwise_decompose(f, 1.0 / 12.0);
        REQUIRE(d.per_term[0].atoms.size() == 1);
        const Interval q = d.per_term[0].atoms[0].interval.span(gx);
        CHECK(q.length() == 8.0 / 4096.0);
        const DenseFunction2D h = h_majorant(d);
        double row0 = 0.0;
        double row1 = 0.0;
        for (std::size_t m = 0; m < 4096; ++m) {
            row0 += h(m, 0) * gx.step();
            row1 += h(m, 1) * gx.step();
        }
        CHECK(row0 == 0.0);
        CHECK(row1 == doctest::Approx(q.length()).epsilon(0.1));
        // inside 2Q the majorant is zero, just outside it is |Q| r / (2r)^2
        CHECK(h(2048, 1) == 0.0);
        const double c = q.center();
        const double r = q.radius();
        const auto edge = static_cast<std::size_t>(std::round((c + 2 * r) / gx.step()));
        const double dx = gx.point(edge) - c;
        CHECK(h(edge, 1) == doctest::Approx(q.length() * r / (dx * dx)));
    }
}
