#include "fibercz/operators.hpp"

#include "fibercz/error.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>

namespace fcz {

namespace {

bool same_step(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(a, b); }

KernelTaps taps_from_function(const SampledFunction1D& kernel) {
    const Grid1D& g = kernel.grid();
    const double lo = std::round(g.origin() / g.step());
    if (std::abs(g.origin() - lo * g.step()) > 1e-9 * g.step()) {
        throw Error("kernel grid is not aligned with the lattice step*Z");
    }
    KernelTaps t;
    t.lo = static_cast<std::ptrdiff_t>(lo);
    t.step = g.step();
    t.w.assign(kernel.values().begin(), kernel.values().end());
    return t;
}

const Grid1D& axis_grid(const DenseFunction2D& f, Axis axis) {
    return axis == Axis::X ? f.grid_x() : f.grid_y();
}

void require_same_grid(const DenseFunction2D& a, const DenseFunction2D& b) {
    if (!a.same_grid(b)) throw Error("operands live on different grids");
}

// Filter taps clipped to the offsets an n-sample operand can reach.
KernelTaps filter_taps(const MotherFilter& mother, double t, const Grid1D& grid) {
    return DilatedFilter(mother, t, grid.step()).taps(static_cast<std::ptrdiff_t>(grid.count()) - 1);
}

} // namespace

ScaleLadder ParaproductConfig::ladder_for(const Grid1D& grid_x, const Grid1D& grid_y) const {
    return ladder ? *ladder : default_ladder(grid_x, grid_y);
}

ParaproductConfig default_config(bool strict) {
    const Grid1D profile_grid(0.0, 1.0 / 64.0, 1);
    ParaproductConfig cfg;
    cfg.psi = make_mother_psi(kDefaultSupportRadius, profile_grid);
    cfg.phi = make_mother_phi(kDefaultSupportRadius, profile_grid);
    cfg.strict = strict;
    return cfg;
}

std::vector<double> convolve_line(std::span<const double> in, const KernelTaps& kernel) {
    const auto n = static_cast<std::ptrdiff_t>(in.size());
    std::vector<double> out(in.size(), 0.0);
    for (std::ptrdiff_t m = 0; m < n; ++m) {
        // m - d in [0, n)
        const std::ptrdiff_t d_lo = std::max(kernel.lo, m - n + 1);
        const std::ptrdiff_t d_hi = std::min(kernel.hi(), m + 1);
        double acc = 0.0;
        for (std::ptrdiff_t d = d_lo; d < d_hi; ++d) {
            acc += kernel.w[static_cast<std::size_t>(d - kernel.lo)] * in[static_cast<std::size_t>(m - d)];
        }
        out[static_cast<std::size_t>(m)] = acc * kernel.step;
    }
    return out;
}

DenseFunction2D convolve_axis(const DenseFunction2D& f, const KernelTaps& kernel, Axis axis) {
    if (!same_step(kernel.step, axis_grid(f, axis).step())) {
        throw Error("kernel step does not match the operand step on that axis");
    }
    DenseFunction2D out(f.grid_x(), f.grid_y());
    const std::size_t nx = f.count_x();
    const std::size_t ny = f.count_y();
    if (axis == Axis::X) {
        for (std::size_t n = 0; n < ny; ++n) {
            const auto line = convolve_line(f.row(n), kernel);
            std::copy(line.begin(), line.end(), out.row(n).begin());
        }
    } else {
        std::vector<double> column(ny);
        for (std::size_t m = 0; m < nx; ++m) {
            for (std::size_t n = 0; n < ny; ++n) column[n] = f(m, n);
            const auto line = convolve_line(column, kernel);
            for (std::size_t n = 0; n < ny; ++n) out(m, n) = line[n];
        }
    }
    return out;
}

DenseFunction2D convolve_axis(const DenseFunction2D& f, const SampledFunction1D& kernel, Axis axis) {
    return convolve_axis(f, taps_from_function(kernel), axis);
}

SampledFunction1D paraproduct_pi(const SampledFunction1D& f, const SampledFunction1D& g,
                                 const ParaproductConfig& cfg) {
    if (!(f.grid() == g.grid())) throw Error("operands live on different grids");
    const Grid1D& grid = f.grid();
    const ScaleLadder ladder = cfg.ladder_for(grid, grid);
    const double w = ScaleLadder::weight();
    std::vector<double> out(grid.count(), 0.0);
    for (double t : ladder.scales()) {
        const auto a = convolve_line(f.values(), filter_taps(cfg.psi, t, grid));
        const auto b = convolve_line(g.values(), filter_taps(cfg.second(), t, grid));
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += (w * a[i]) * b[i];
    }
    return SampledFunction1D(grid, std::move(out));
}

DenseFunction2D paraproduct_T(const DenseFunction2D& f, const DenseFunction2D& g,
                              const ParaproductConfig& cfg, unsigned threads) {
    require_same_grid(f, g);
    const auto scales = cfg.ladder_for(f.grid_x(), f.grid_y()).scales();
    const double w = ScaleLadder::weight();
    std::vector<DenseFunction2D> first(scales.size());
    std::vector<DenseFunction2D> second(scales.size());
    detail::parallel_for(scales.size(), threads, [&](std::size_t j) {
        first[j] = convolve_axis(f, filter_taps(cfg.psi, scales[j], f.grid_x()), Axis::X);
        second[j] = convolve_axis(g, filter_taps(cfg.second(), scales[j], g.grid_y()), Axis::Y);
    });
    DenseFunction2D out(f.grid_x(), f.grid_y());
    auto acc = out.values();
    for (std::size_t j = 0; j < scales.size(); ++j) {
        const auto a = first[j].values();
        const auto b = second[j].values();
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += (w * a[i]) * b[i];
    }
    return out;
}

DenseFunction2D paraproduct_T_fiberwise(const TensorFunction2D& f, const DenseFunction2D& g,
                                        const ParaproductConfig& cfg, unsigned threads) {
    if (!(f.grid_x() == g.grid_x()) || !(f.grid_y() == g.grid_y())) {
        throw Error("operands live on different grids");
    }
    const auto scales = cfg.ladder_for(f.grid_x(), f.grid_y()).scales();
    const double w = ScaleLadder::weight();
    const auto& terms = f.terms();

    std::vector<DenseFunction2D> second(scales.size());
    // fiber_conv[j][s]: psi_{t_s} * f^1_j, computed once per term
    std::vector<std::vector<std::vector<double>>> fiber_conv(terms.size());
    detail::parallel_for(scales.size(), threads, [&](std::size_t s) {
        second[s] = convolve_axis(g, filter_taps(cfg.second(), scales[s], g.grid_y()), Axis::Y);
    });
    detail::parallel_for(terms.size(), threads, [&](std::size_t j) {
        fiber_conv[j].resize(scales.size());
        for (std::size_t s = 0; s < scales.size(); ++s) {
            fiber_conv[j][s] = convolve_line(terms[j].fiber.values(), filter_taps(cfg.psi, scales[s], f.grid_x()));
        }
    });

    DenseFunction2D out(f.grid_x(), f.grid_y());
    const std::size_t nx = f.grid_x().count();
    for (std::size_t j = 0; j < terms.size(); ++j) {
        for (std::size_t n : terms[j].index_set) {
            auto row = out.row(n);
            for (std::size_t s = 0; s < scales.size(); ++s) {
                const auto& a = fiber_conv[j][s];
                const auto b = second[s].row(n);
                for (std::size_t m = 0; m < nx; ++m) row[m] += (w * a[m]) * b[m];
            }
        }
    }
    return out;
}

DenseFunction2D dual_T1(const DenseFunction2D& h, const DenseFunction2D& g, const ParaproductConfig& cfg) {
    require_same_grid(h, g);
    const auto scales = cfg.ladder_for(h.grid_x(), h.grid_y()).scales();
    const double w = ScaleLadder::weight();
    DenseFunction2D out(h.grid_x(), h.grid_y());
    auto acc = out.values();
    for (double t : scales) {
        DenseFunction2D prod = convolve_axis(g, filter_taps(cfg.second(), t, g.grid_y()), Axis::Y);
        auto p = prod.values();
        const auto hv = h.values();
        for (std::size_t i = 0; i < p.size(); ++i) p[i] *= hv[i];
        const auto c = convolve_axis(prod, filter_taps(cfg.psi, t, h.grid_x()).reflected(), Axis::X);
        const auto cv = c.values();
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * cv[i];
    }
    return out;
}

DenseFunction2D dual_T2(const DenseFunction2D& f, const DenseFunction2D& h, const ParaproductConfig& cfg) {
    require_same_grid(f, h);
    const auto scales = cfg.ladder_for(f.grid_x(), f.grid_y()).scales();
    const double w = ScaleLadder::weight();
    DenseFunction2D out(f.grid_x(), f.grid_y());
    auto acc = out.values();
    for (double t : scales) {
        DenseFunction2D prod = convolve_axis(f, filter_taps(cfg.psi, t, f.grid_x()), Axis::X);
        auto p = prod.values();
        const auto hv = h.values();
        for (std::size_t i = 0; i < p.size(); ++i) p[i] *= hv[i];
        const auto c = convolve_axis(prod, filter_taps(cfg.second(), t, f.grid_y()).reflected(), Axis::Y);
        const auto cv = c.values();
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * cv[i];
    }
    return out;
}

double inner_product(const DenseFunction2D& a, const DenseFunction2D& b) {
    require_same_grid(a, b);
    double sum = 0.0;
    const auto av = a.values();
    const auto bv = b.values();
    for (std::size_t i = 0; i < av.size(); ++i) sum += av[i] * bv[i];
    return sum * a.cell_area();
}

std::vector<double> hl_maximal_1d(std::span<const double> g) {
    const std::size_t n = g.size();
    std::vector<double> out(n, 0.0);
    std::vector<double> best(n);
    for (std::size_t a = 0; a < n; ++a) {
        double sum = 0.0;
        for (std::size_t b = a; b < n; ++b) {
            sum += std::abs(g[b]);
            best[b] = sum / static_cast<double>(b - a + 1);
        }
        // best[u] becomes the largest average over [a, b] with b >= u
        for (std::size_t u = n - 1; u > a; --u) best[u - 1] = std::max(best[u - 1], best[u]);
        for (std::size_t u = a; u < n; ++u) out[u] = std::max(out[u], best[u]);
    }
    return out;
}

DenseFunction2D hl_maximal_axis(const DenseFunction2D& g, Axis axis) {
    DenseFunction2D out(g.grid_x(), g.grid_y());
    const std::size_t nx = g.count_x();
    const std::size_t ny = g.count_y();
    if (axis == Axis::X) {
        for (std::size_t n = 0; n < ny; ++n) {
            const auto line = hl_maximal_1d(g.row(n));
            std::copy(line.begin(), line.end(), out.row(n).begin());
        }
    } else {
        std::vector<double> column(ny);
        for (std::size_t m = 0; m < nx; ++m) {
            for (std::size_t n = 0; n < ny; ++n) column[n] = g(m, n);
            const auto line = hl_maximal_1d(column);
            for (std::size_t n = 0; n < ny; ++n) out(m, n) = line[n];
        }
    }
    return out;
}

DenseFunction2D h_majorant(const FiberDecomposition& d) {
    const Grid1D& gx = d.good_part.grid_x();
    DenseFunction2D out(gx, d.good_part.grid_y());
    const auto& terms = d.good_part.terms();
    for (std::size_t j = 0; j < terms.size(); ++j) {
        std::vector<double> row(gx.count(), 0.0);
        for (const auto& atom : d.per_term[j].atoms) {
            const Interval q = atom.interval.span(gx);
            const double c = q.center();
            const double r = q.radius();
            const double len = q.length();
            for (std::size_t m = 0; m < gx.count(); ++m) {
                const double x = gx.point(m);
                if (x >= c - 2.0 * r && x < c + 2.0 * r) continue;
                const double dx = x - c;
                row[m] += len * r / (dx * dx);
            }
        }
        for (std::size_t n : terms[j].index_set) std::copy(row.begin(), row.end(), out.row(n).begin());
    }
    return out;
}

} // namespace fcz
