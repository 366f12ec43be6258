#pragma once

#include "fibercz/grid.hpp"

#include <cstdint>
#include <random>

namespace fcz {

/// mt19937_64 with hand-rolled variates so streams are identical across
/// standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// integer in [lo, hi]
    std::int64_t integer(std::int64_t lo, std::int64_t hi);
    /// standard normal by Box-Muller
    double normal();

private:
    std::mt19937_64 engine_;
};

struct GeneratorOptions {
    int min_terms = 1;
    int max_terms = 8;
    // fibers are placed inside [support_lo, support_hi) as fractions of the x extent
    double support_lo = 0.0;
    double support_hi = 1.0;
    // fraction of y rows covered by some index set
    double row_fill = 0.75;
};

/// Random sum of scaled smooth bumps and Haar-type spikes on `grid`.
SampledFunction1D random_fiber(const Grid1D& grid, Rng& rng, const GeneratorOptions& opts = {});
/// Random tensor function with min_terms..max_terms terms and disjoint
/// random index sets.
TensorFunction2D random_tensor(const Grid1D& grid_x, const Grid1D& grid_y, Rng& rng,
                               const GeneratorOptions& opts = {});
/// i.i.d. N(0, 1) samples.
DenseFunction2D random_dense(const Grid1D& grid_x, const Grid1D& grid_y, Rng& rng);
SampledFunction1D random_signal(const Grid1D& grid, Rng& rng);

} // namespace fcz
