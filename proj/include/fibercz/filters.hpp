#pragma once

#include "fibercz/grid.hpp"

#include <cstddef>
#include <vector>

namespace fcz {

enum class FilterKind { Psi, Phi };

/// psi: mean-zero oscillating bump (first slot, x axis).
/// phi: nonnegative unit-mass bump (second slot, y axis).
class MotherFilter {
public:
    enum class Shape { MexicanHat, Bump, Sampled };

    MotherFilter() = default;

    FilterKind kind() const { return kind_; }
    Shape shape() const { return shape_; }
    double support_radius() const { return support_radius_; }
    int decay_order() const { return decay_order_; }
    /// Discretely normalized samples of the mother on a grid centered at 0.
    const SampledFunction1D& profile() const { return profile_; }

    /// Continuous mother before discrete normalization; zero for |x| >= radius.
    double evaluate(double x) const;

    friend MotherFilter make_mother_psi(double, const Grid1D&, int);
    friend MotherFilter make_mother_phi(double, const Grid1D&, int);
    friend MotherFilter make_mother_from_profile(FilterKind, const SampledFunction1D&, int);

private:
    FilterKind kind_ = FilterKind::Phi;
    Shape shape_ = Shape::Bump;
    double support_radius_ = 1.0;
    int decay_order_ = 2;
    SampledFunction1D profile_;
    SampledFunction1D custom_;  // Shape::Sampled only, linear interpolation
};

inline constexpr int kDefaultDecayOrder = 2;

/// Mexican hat (1 - (x/s)^2) exp(-x^2 / 2s^2), s = radius/4, tapered by a C^inf
/// bump so it vanishes at +-radius. The profile grid only sets the step.
MotherFilter make_mother_psi(double support_radius, const Grid1D& grid, int decay_order = kDefaultDecayOrder);
/// exp(-1 / (1 - (x/radius)^2)) on (-radius, radius).
MotherFilter make_mother_phi(double support_radius, const Grid1D& grid, int decay_order = kDefaultDecayOrder);
/// Mother from samples; its support radius is the farthest nonzero sample.
MotherFilter make_mother_from_profile(FilterKind kind, const SampledFunction1D& profile,
                                      int decay_order = kDefaultDecayOrder);

/// Unnormalized C^inf bump, exp(-1/(1-u^2)) for |u| < 1.
double bump(double u);

/// Kernel taps w[k - lo] at offsets k*step, k in [lo, lo + w.size()).
struct KernelTaps {
    std::ptrdiff_t lo = 0;
    std::vector<double> w;
    double step = 1.0;

    double at(std::ptrdiff_t k) const {
        const std::ptrdiff_t i = k - lo;
        return (i < 0 || i >= static_cast<std::ptrdiff_t>(w.size())) ? 0.0 : w[static_cast<std::size_t>(i)];
    }
    std::ptrdiff_t hi() const { return lo + static_cast<std::ptrdiff_t>(w.size()); }
    /// k~(x) = k(-x)
    KernelTaps reflected() const;
};

/// zeta_t(u) = t^-1 zeta(u/t), normalized on the sampling lattice step*Z so
/// that its discrete integral is exactly the mother's (0 for psi, 1 for phi).
/// psi is corrected by subtracting a multiple of the dilated bump, which keeps
/// the compact support and smoothness.
class DilatedFilter {
public:
    DilatedFilter(const MotherFilter& mother, double t, double step);

    double scale() const { return t_; }
    double step() const { return step_; }
    FilterKind kind() const { return kind_; }
    const MotherFilter& mother() const { return mother_; }
    double support_radius() const { return t_ * radius_; }
    /// Largest k with a possibly nonzero tap at k*step.
    std::ptrdiff_t half_width() const { return half_width_; }

    /// Continuous value, consistent with the taps at lattice points.
    double operator()(double u) const;
    double tap(std::ptrdiff_t k) const { return (*this)(static_cast<double>(k) * step_); }

    /// All taps with |k| <= min(half_width, max_offset).
    KernelTaps taps(std::ptrdiff_t max_offset) const;
    KernelTaps taps() const { return taps(half_width_); }
    /// Taps on a power-of-two grid with origin -(N/2)*step.
    SampledFunction1D as_function() const;

private:
    MotherFilter mother_;
    FilterKind kind_;
    double t_;
    double step_;
    double radius_;
    std::ptrdiff_t half_width_ = 0;
    double scale_ = 1.0;       // phi normalization
    double correction_ = 0.0;  // psi bump coefficient
};

/// dilate(zeta, t, grid): samples of the normalized t^-1 zeta(x/t) with the
/// grid's step.
SampledFunction1D dilate(const MotherFilter& zeta, double t, const Grid1D& grid);

/// Dyadic truncation of int_0^inf dt/t: t_j = 2^j, j in [j_min, j_max],
/// each scale weighted by ln 2.
struct ScaleLadder {
    int j_min = 0;
    int j_max = 0;

    ScaleLadder() = default;
    ScaleLadder(int j_min, int j_max);

    std::vector<double> scales() const;
    static double weight();
    std::size_t size() const { return static_cast<std::size_t>(j_max - j_min + 1); }
};

/// j_min = ceil(log2(4 * step)), j_max = floor(log2(extent / 4)) over both axes.
ScaleLadder default_ladder(const Grid1D& grid_x, const Grid1D& grid_y);

/// Smallest C with sup_{z in Q} |zeta_t(x - z) - zeta_t(x - c_Q)|
///   <= C (r_Q / t^2) (1 + |x - c_Q| / t)^-M
/// over all grid points x outside 2Q, z ranging over grid points of Q.
/// Returns 0 when Q holds no grid point or every grid point lies in 2Q.
/// Throws when decay exceeds the mother's decay order.
double kernel_regularity_check(const DilatedFilter& zeta, const Grid1D& grid, const Interval& q, int decay);

/// Fraction of the discrete spectral energy of the mother profile carried by
/// frequencies with low <= |xi| <= high (cycles per unit length).
double spectral_energy_fraction(const MotherFilter& zeta, double low, double high);
/// Frequency of largest |zeta^(xi)|.
double spectral_peak(const MotherFilter& zeta);

} // namespace fcz
