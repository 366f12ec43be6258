#include "fibercz/random.hpp"

#include "fibercz/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace fcz {

std::int64_t Rng::integer(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw Error("empty integer range");
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(engine_());
    // rejection sampling to avoid modulo bias
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t v;
    do {
        v = engine_();
    } while (v >= limit);
    return lo + static_cast<std::int64_t>(v % span);
}

double Rng::normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

SampledFunction1D random_fiber(const Grid1D& grid, Rng& rng, const GeneratorOptions& opts) {
    const std::size_t n = grid.count();
    std::vector<double> v(n, 0.0);
    const auto lo = static_cast<std::size_t>(std::floor(opts.support_lo * static_cast<double>(n)));
    const auto hi = std::max(lo + 1, std::min(n, static_cast<std::size_t>(std::ceil(opts.support_hi * static_cast<double>(n)))));
    const auto width = static_cast<double>(hi - lo);

    const auto bumps = rng.integer(1, 3);
    for (std::int64_t b = 0; b < bumps; ++b) {
        const double center = static_cast<double>(lo) + rng.uniform() * width;
        const double radius = std::max(2.0, rng.uniform(0.02, 0.25) * width);
        const double amp = rng.uniform(-1.0, 1.0) * rng.uniform(0.5, 4.0);
        for (std::size_t i = lo; i < hi; ++i) {
            const double u = (static_cast<double>(i) - center) / radius;
            v[i] += amp * std::exp(-0.5 * u * u);
        }
    }
    const auto spikes = rng.integer(1, 6);
    for (std::int64_t s = 0; s < spikes; ++s) {
        const auto at = static_cast<std::size_t>(rng.integer(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi) - 1));
        const double amp = rng.uniform(2.0, 40.0) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
        if (rng.uniform() < 0.5 || at + 1 >= hi) {
            v[at] += amp;
        } else {
            // Haar pair
            v[at] += amp;
            v[at + 1] -= amp;
        }
    }
    return SampledFunction1D(grid, std::move(v));
}

TensorFunction2D random_tensor(const Grid1D& grid_x, const Grid1D& grid_y, Rng& rng, const GeneratorOptions& opts) {
    const std::size_t ny = grid_y.count();
    std::vector<std::size_t> rows(ny);
    for (std::size_t n = 0; n < ny; ++n) rows[n] = n;
    // Fisher-Yates with our own variates
    for (std::size_t k = ny; k > 1; --k) {
        const auto j = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(k) - 1));
        std::swap(rows[k - 1], rows[j]);
    }
    const auto used = std::max<std::size_t>(1, static_cast<std::size_t>(std::round(opts.row_fill * static_cast<double>(ny))));
    const auto want = rng.integer(opts.min_terms, opts.max_terms);
    const auto terms = static_cast<std::size_t>(std::min<std::int64_t>(want, static_cast<std::int64_t>(used)));

    // cut the first `used` shuffled rows into `terms` nonempty groups
    std::vector<std::size_t> cuts{0};
    std::vector<std::size_t> candidates;
    for (std::size_t c = 1; c < used; ++c) candidates.push_back(c);
    for (std::size_t k = 1; k < terms; ++k) {
        const auto j = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(candidates.size()) - 1));
        cuts.push_back(candidates[j]);
        candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(j));
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(used);

    std::vector<TensorTerm> out;
    for (std::size_t k = 0; k < terms; ++k) {
        TensorTerm term{random_fiber(grid_x, rng, opts), {}};
        term.index_set.assign(rows.begin() + static_cast<std::ptrdiff_t>(cuts[k]),
                              rows.begin() + static_cast<std::ptrdiff_t>(cuts[k + 1]));
        out.push_back(std::move(term));
    }
    return TensorFunction2D(grid_x, grid_y, std::move(out));
}

DenseFunction2D random_dense(const Grid1D& grid_x, const Grid1D& grid_y, Rng& rng) {
    std::vector<double> v(grid_x.count() * grid_y.count());
    for (double& x : v) x = rng.normal();
    return DenseFunction2D(grid_x, grid_y, std::move(v));
}

SampledFunction1D random_signal(const Grid1D& grid, Rng& rng) {
    std::vector<double> v(grid.count());
    for (double& x : v) x = rng.normal();
    return SampledFunction1D(grid, std::move(v));
}

} // namespace fcz
