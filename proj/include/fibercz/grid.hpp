#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace fcz {

/// Uniform grid of `count` samples starting at `origin`. Sample i sits at
/// origin + i*step and stands for the cell [x_i, x_i + step).
class Grid1D {
public:
    Grid1D() = default;
    /// Throws fcz::Error unless step > 0 and count is a power of two.
    Grid1D(double origin, double step, std::size_t count);

    double origin() const { return origin_; }
    double step() const { return step_; }
    std::size_t count() const { return count_; }
    /// Depth L of the complete dyadic tree, count = 2^L.
    unsigned depth() const;
    double extent() const { return step_ * static_cast<double>(count_); }
    double end() const { return origin_ + extent(); }
    double point(std::size_t i) const { return origin_ + step_ * static_cast<double>(i); }

    bool operator==(const Grid1D&) const = default;

private:
    double origin_ = 0.0;
    double step_ = 1.0;
    std::size_t count_ = 1;
};

bool is_power_of_two(std::size_t n);

/// Real samples on a Grid1D; the discrete stand-in for a function in L^1(R),
/// extended by zero outside the grid.
class SampledFunction1D {
public:
    SampledFunction1D() = default;
    explicit SampledFunction1D(Grid1D grid);
    SampledFunction1D(Grid1D grid, std::vector<double> values);

    const Grid1D& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

    /// step * sum |f_i| (left-endpoint Riemann sum).
    double l1_norm() const;
    double sup_norm() const;
    /// step * sum f_i
    double integral() const;

private:
    Grid1D grid_;
    std::vector<double> values_;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    double center() const { return 0.5 * (lo + hi); }
    double radius() const { return 0.5 * (hi - lo); }
    bool contains(double x) const { return lo <= x && x < hi; }
};

/// Node of the dyadic tree over a grid's root interval.
struct DyadicInterval {
    unsigned generation = 0;
    std::size_t offset = 0;

    bool operator==(const DyadicInterval&) const = default;

    std::size_t sample_count(const Grid1D& grid) const { return grid.count() >> generation; }
    std::size_t first_index(const Grid1D& grid) const { return offset * sample_count(grid); }
    std::size_t last_index(const Grid1D& grid) const { return first_index(grid) + sample_count(grid); }
    Interval span(const Grid1D& grid) const;
    double length(const Grid1D& grid) const { return span(grid).length(); }
    double center(const Grid1D& grid) const { return span(grid).center(); }
    double radius(const Grid1D& grid) const { return span(grid).radius(); }

    /// Throws unless generation <= depth and offset < 2^generation.
    void validate(const Grid1D& grid) const;
};

std::pair<DyadicInterval, DyadicInterval> dyadic_children(const DyadicInterval& q, const Grid1D& grid);

struct DoubledInterval {
    Interval full;     // c +- 2r, unclipped
    Interval clipped;  // intersected with the grid extent
    std::size_t first = 0;  // covered grid indices [first, last)
    std::size_t last = 0;
};

/// Concentric interval of twice the radius. A grid index is covered when its
/// sample point lies in the clipped interval.
DoubledInterval double_interval(const Interval& q, const Grid1D& grid);
DoubledInterval double_interval(const DyadicInterval& q, const Grid1D& grid);

/// step * cardinality; throws on out-of-range indices.
double lebesgue_measure(std::span<const std::size_t> indices, const Grid1D& grid);

/// 2D samples indexed (m, n) = (x index, y index), stored row-major with one
/// row per y index.
class DenseFunction2D {
public:
    DenseFunction2D() = default;
    DenseFunction2D(Grid1D grid_x, Grid1D grid_y);
    DenseFunction2D(Grid1D grid_x, Grid1D grid_y, std::vector<double> values);

    const Grid1D& grid_x() const { return grid_x_; }
    const Grid1D& grid_y() const { return grid_y_; }
    std::size_t count_x() const { return grid_x_.count(); }
    std::size_t count_y() const { return grid_y_.count(); }
    double cell_area() const { return grid_x_.step() * grid_y_.step(); }

    double operator()(std::size_t m, std::size_t n) const { return values_[n * count_x() + m]; }
    double& operator()(std::size_t m, std::size_t n) { return values_[n * count_x() + m]; }

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    std::span<const double> row(std::size_t n) const;
    std::span<double> row(std::size_t n);

    bool same_grid(const DenseFunction2D& other) const;

private:
    Grid1D grid_x_;
    Grid1D grid_y_;
    std::vector<double> values_;
};

struct TensorTerm {
    SampledFunction1D fiber;               // f^1_j on the x grid
    std::vector<std::size_t> index_set;    // E_j, sorted y indices
};

/// Finite sum f(x, y) = sum_j f^1_j(x) 1_{E_j}(y) with pairwise disjoint E_j.
class TensorFunction2D {
public:
    TensorFunction2D() = default;
    /// Sorts each index set; throws on overlap, duplicates, out-of-range rows
    /// or fibers living on a different x grid.
    TensorFunction2D(Grid1D grid_x, Grid1D grid_y, std::vector<TensorTerm> terms);

    const Grid1D& grid_x() const { return grid_x_; }
    const Grid1D& grid_y() const { return grid_y_; }
    const std::vector<TensorTerm>& terms() const { return terms_; }

    /// term index owning each y row, -1 for rows outside every E_j.
    const std::vector<std::ptrdiff_t>& row_owner() const { return row_owner_; }

    double l1_norm() const;

private:
    Grid1D grid_x_;
    Grid1D grid_y_;
    std::vector<TensorTerm> terms_;
    std::vector<std::ptrdiff_t> row_owner_;
};

DenseFunction2D materialize(const TensorFunction2D& f);

} // namespace fcz
