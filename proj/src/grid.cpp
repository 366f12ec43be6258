#include "fibercz/grid.hpp"

#include "fibercz/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace fcz {

bool is_power_of_two(std::size_t n) { return n != 0 && std::has_single_bit(n); }

Grid1D::Grid1D(double origin, double step, std::size_t count)
    : origin_(origin), step_(step), count_(count) {
    if (!std::isfinite(origin)) throw Error("grid origin must be finite");
    if (!(step > 0.0) || !std::isfinite(step)) throw Error("grid step must be positive");
    if (!is_power_of_two(count)) {
        throw Error("grid count must be a power of two, got " + std::to_string(count));
    }
}

unsigned Grid1D::depth() const { return static_cast<unsigned>(std::countr_zero(count_)); }

SampledFunction1D::SampledFunction1D(Grid1D grid)
    : grid_(grid), values_(grid.count(), 0.0) {}

SampledFunction1D::SampledFunction1D(Grid1D grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.count()) {
        throw Error("sample count " + std::to_string(values_.size()) +
                    " does not match grid count " + std::to_string(grid_.count()));
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw Error("non-finite sample value");
    }
}

double SampledFunction1D::l1_norm() const {
    double sum = 0.0;
    for (double v : values_) sum += std::abs(v);
    return grid_.step() * sum;
}

double SampledFunction1D::sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double SampledFunction1D::integral() const {
    double sum = 0.0;
    for (double v : values_) sum += v;
    return grid_.step() * sum;
}

Interval DyadicInterval::span(const Grid1D& grid) const {
    const double lo = grid.point(first_index(grid));
    const double len = grid.extent() / static_cast<double>(std::size_t{1} << generation);
    return {lo, lo + len};
}

void DyadicInterval::validate(const Grid1D& grid) const {
    if (generation > grid.depth()) throw Error("dyadic generation exceeds grid depth");
    if (offset >= (std::size_t{1} << generation)) throw Error("dyadic offset out of range");
}

std::pair<DyadicInterval, DyadicInterval> dyadic_children(const DyadicInterval& q, const Grid1D& grid) {
    q.validate(grid);
    if (q.generation >= grid.depth()) throw Error("atomic interval");
    return {DyadicInterval{q.generation + 1, 2 * q.offset},
            DyadicInterval{q.generation + 1, 2 * q.offset + 1}};
}

DoubledInterval double_interval(const Interval& q, const Grid1D& grid) {
    DoubledInterval d;
    const double c = q.center();
    const double r = q.radius();
    d.full = {c - 2.0 * r, c + 2.0 * r};
    d.clipped = {std::max(d.full.lo, grid.origin()), std::min(d.full.hi, grid.end())};
    if (d.clipped.hi < d.clipped.lo) d.clipped.hi = d.clipped.lo;

    // first index with x_i >= lo, first index with x_i >= hi
    auto first_at_or_after = [&](double x) -> std::size_t {
        const double k = std::ceil((x - grid.origin()) / grid.step());
        if (k <= 0.0) return 0;
        auto i = static_cast<std::size_t>(k);
        i = std::min(i, grid.count());
        // guard against rounding in the division
        while (i > 0 && grid.point(i - 1) >= x) --i;
        while (i < grid.count() && grid.point(i) < x) ++i;
        return i;
    };
    d.first = first_at_or_after(d.clipped.lo);
    d.last = std::max(d.first, first_at_or_after(d.clipped.hi));
    return d;
}

DoubledInterval double_interval(const DyadicInterval& q, const Grid1D& grid) {
    q.validate(grid);
    return double_interval(q.span(grid), grid);
}

double lebesgue_measure(std::span<const std::size_t> indices, const Grid1D& grid) {
    for (std::size_t i : indices) {
        if (i >= grid.count()) throw Error("grid index out of range");
    }
    return grid.step() * static_cast<double>(indices.size());
}

DenseFunction2D::DenseFunction2D(Grid1D grid_x, Grid1D grid_y)
    : grid_x_(grid_x), grid_y_(grid_y), values_(grid_x.count() * grid_y.count(), 0.0) {}

DenseFunction2D::DenseFunction2D(Grid1D grid_x, Grid1D grid_y, std::vector<double> values)
    : grid_x_(grid_x), grid_y_(grid_y), values_(std::move(values)) {
    if (values_.size() != grid_x_.count() * grid_y_.count()) {
        throw Error("dense value count does not match count_x * count_y");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw Error("non-finite sample value");
    }
}

std::span<const double> DenseFunction2D::row(std::size_t n) const {
    return std::span<const double>(values_).subspan(n * count_x(), count_x());
}

std::span<double> DenseFunction2D::row(std::size_t n) {
    return std::span<double>(values_).subspan(n * count_x(), count_x());
}

bool DenseFunction2D::same_grid(const DenseFunction2D& other) const {
    return grid_x_ == other.grid_x_ && grid_y_ == other.grid_y_;
}

TensorFunction2D::TensorFunction2D(Grid1D grid_x, Grid1D grid_y, std::vector<TensorTerm> terms)
    : grid_x_(grid_x), grid_y_(grid_y), terms_(std::move(terms)),
      row_owner_(grid_y.count(), -1) {
    for (std::size_t j = 0; j < terms_.size(); ++j) {
        auto& term = terms_[j];
        if (!(term.fiber.grid() == grid_x_)) {
            throw Error("tensor term " + std::to_string(j) + " fiber is not on the x grid");
        }
        std::sort(term.index_set.begin(), term.index_set.end());
        for (std::size_t k = 0; k < term.index_set.size(); ++k) {
            const std::size_t n = term.index_set[k];
            if (n >= grid_y_.count()) throw Error("tensor index set entry out of range");
            if (k > 0 && term.index_set[k - 1] == n) throw Error("duplicate row in tensor index set");
            if (row_owner_[n] >= 0) {
                throw Error("tensor index sets overlap at row " + std::to_string(n));
            }
            row_owner_[n] = static_cast<std::ptrdiff_t>(j);
        }
    }
}

double TensorFunction2D::l1_norm() const {
    double sum = 0.0;
    for (const auto& term : terms_) {
        sum += term.fiber.l1_norm() * static_cast<double>(term.index_set.size());
    }
    return sum * grid_y_.step();
}

DenseFunction2D materialize(const TensorFunction2D& f) {
    DenseFunction2D out(f.grid_x(), f.grid_y());
    for (const auto& term : f.terms()) {
        const auto fiber = term.fiber.values();
        for (std::size_t n : term.index_set) {
            std::copy(fiber.begin(), fiber.end(), out.row(n).begin());
        }
    }
    return out;
}

} // namespace fcz
