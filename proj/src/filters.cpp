#include "fibercz/filters.hpp"

#include "fibercz/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numbers>

namespace fcz {

double bump(double u) {
    const double a = 1.0 - u * u;
    return a > 0.0 ? std::exp(-1.0 / a) : 0.0;
}

double MotherFilter::evaluate(double x) const {
    if (!(std::abs(x) < support_radius_)) return 0.0;
    switch (shape_) {
    case Shape::MexicanHat: {
        const double u = x / (0.25 * support_radius_);
        // e * bump(0) == 1, so the taper leaves the peak at 1
        return (1.0 - u * u) * std::exp(-0.5 * u * u) * std::numbers::e * bump(x / support_radius_);
    }
    case Shape::Bump:
        return bump(x / support_radius_);
    case Shape::Sampled: {
        const Grid1D& g = custom_.grid();
        const double pos = (x - g.origin()) / g.step();
        if (pos < 0.0 || pos > static_cast<double>(g.count() - 1)) return 0.0;
        const auto i = static_cast<std::size_t>(std::floor(pos));
        const double frac = pos - static_cast<double>(i);
        const double left = custom_[i];
        const double right = i + 1 < g.count() ? custom_[i + 1] : 0.0;
        return left + frac * (right - left);
    }
    }
    return 0.0;
}

namespace {

void require_resolved(double radius, const Grid1D& grid) {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw Error("support radius must be positive");
    if (radius < 4.0 * grid.step()) {
        throw Error("support radius must be at least 4 grid steps");
    }
}

} // namespace

MotherFilter make_mother_psi(double support_radius, const Grid1D& grid, int decay_order) {
    require_resolved(support_radius, grid);
    if (decay_order < 1) throw Error("decay order must be positive");
    MotherFilter m;
    m.kind_ = FilterKind::Psi;
    m.shape_ = MotherFilter::Shape::MexicanHat;
    m.support_radius_ = support_radius;
    m.decay_order_ = decay_order;
    m.profile_ = DilatedFilter(m, 1.0, grid.step()).as_function();
    return m;
}

MotherFilter make_mother_phi(double support_radius, const Grid1D& grid, int decay_order) {
    require_resolved(support_radius, grid);
    if (decay_order < 1) throw Error("decay order must be positive");
    MotherFilter m;
    m.kind_ = FilterKind::Phi;
    m.shape_ = MotherFilter::Shape::Bump;
    m.support_radius_ = support_radius;
    m.decay_order_ = decay_order;
    m.profile_ = DilatedFilter(m, 1.0, grid.step()).as_function();
    return m;
}

MotherFilter make_mother_from_profile(FilterKind kind, const SampledFunction1D& profile, int decay_order) {
    if (decay_order < 1) throw Error("decay order must be positive");
    const Grid1D& g = profile.grid();
    double radius = 0.0;
    for (std::size_t i = 0; i < g.count(); ++i) {
        if (profile[i] != 0.0) radius = std::max(radius, std::abs(g.point(i)) + g.step());
    }
    if (radius == 0.0) throw Error("filter profile is identically zero");
    MotherFilter m;
    m.kind_ = kind;
    m.shape_ = MotherFilter::Shape::Sampled;
    m.support_radius_ = radius;
    m.decay_order_ = decay_order;
    m.custom_ = profile;
    m.profile_ = DilatedFilter(m, 1.0, g.step()).as_function();
    return m;
}

KernelTaps KernelTaps::reflected() const {
    KernelTaps out;
    out.step = step;
    out.w.assign(w.rbegin(), w.rend());
    out.lo = -(hi() - 1);
    return out;
}

DilatedFilter::DilatedFilter(const MotherFilter& mother, double t, double step)
    : mother_(mother), kind_(mother.kind()), t_(t), step_(step), radius_(mother.support_radius()) {
    if (!(t > 0.0) || !std::isfinite(t)) throw Error("dilation scale must be positive");
    if (!(step > 0.0)) throw Error("sampling step must be positive");
    const double reach = t * radius_ / step;
    if (reach > static_cast<double>(1 << 24)) throw Error("dilated support too wide for the grid step");
    // taps at |k| step = t r vanish, so stop one short of an exact boundary
    half_width_ = std::max<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(std::ceil(reach)) - 1, 0);

    double raw_sum = 0.0;
    double bump_sum = 0.0;
    for (std::ptrdiff_t k = -half_width_; k <= half_width_; ++k) {
        const double u = static_cast<double>(k) * step / t;
        raw_sum += mother_.evaluate(u);
        bump_sum += bump(u / radius_);
    }
    if (kind_ == FilterKind::Phi) {
        if (!(raw_sum != 0.0)) throw Error("phi filter has zero mass on this lattice");
        scale_ = t / (step * raw_sum);
    } else {
        correction_ = bump_sum > 0.0 ? raw_sum / bump_sum : 0.0;
    }
}

double DilatedFilter::operator()(double u) const {
    const double v = u / t_;
    if (kind_ == FilterKind::Phi) return scale_ * mother_.evaluate(v) / t_;
    return (mother_.evaluate(v) - correction_ * bump(v / radius_)) / t_;
}

KernelTaps DilatedFilter::taps(std::ptrdiff_t max_offset) const {
    const std::ptrdiff_t k = std::min(half_width_, std::max<std::ptrdiff_t>(max_offset, 0));
    KernelTaps out;
    out.lo = -k;
    out.step = step_;
    out.w.resize(static_cast<std::size_t>(2 * k + 1));
    for (std::ptrdiff_t i = -k; i <= k; ++i) out.w[static_cast<std::size_t>(i + k)] = tap(i);
    return out;
}

SampledFunction1D DilatedFilter::as_function() const {
    const auto n = std::bit_ceil(static_cast<std::size_t>(2 * half_width_ + 2));
    const auto half = static_cast<std::ptrdiff_t>(n / 2);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = tap(static_cast<std::ptrdiff_t>(i) - half);
    return SampledFunction1D(Grid1D(-static_cast<double>(half) * step_, step_, n), std::move(v));
}

SampledFunction1D dilate(const MotherFilter& zeta, double t, const Grid1D& grid) {
    return DilatedFilter(zeta, t, grid.step()).as_function();
}

ScaleLadder::ScaleLadder(int j_min, int j_max) : j_min(j_min), j_max(j_max) {
    if (j_min > j_max) throw Error("scale ladder needs jMin <= jMax");
    if (j_min < -60 || j_max > 60) throw Error("scale ladder exponents out of range");
}

std::vector<double> ScaleLadder::scales() const {
    std::vector<double> out;
    for (int j = j_min; j <= j_max; ++j) out.push_back(std::ldexp(1.0, j));
    return out;
}

double ScaleLadder::weight() { return std::numbers::ln2; }

ScaleLadder default_ladder(const Grid1D& grid_x, const Grid1D&) {
    const int lo = static_cast<int>(std::ceil(std::log2(4.0 * grid_x.step()) - 1e-12));
    const int hi = static_cast<int>(std::floor(std::log2(grid_x.extent() / 4.0) + 1e-12));
    if (lo > hi) throw Error("x grid too coarse for a default scale ladder");
    return ScaleLadder(lo, hi);
}

double kernel_regularity_check(const DilatedFilter& zeta, const Grid1D& grid, const Interval& q, int decay) {
    if (decay < 0 || decay > zeta.mother().decay_order()) throw Error("decay exponent exceeds the filter's decay order");
    std::vector<double> zs;
    for (std::size_t i = 0; i < grid.count(); ++i) {
        if (q.contains(grid.point(i))) zs.push_back(grid.point(i));
    }
    if (zs.empty()) return 0.0;
    const double c = q.center();
    const double r = q.radius();
    const double t = zeta.scale();
    double constant = 0.0;
    for (std::size_t i = 0; i < grid.count(); ++i) {
        const double x = grid.point(i);
        const double d = std::abs(x - c);
        if (x >= c - 2.0 * r && x < c + 2.0 * r) continue;  // half-open 2Q
        double lhs = 0.0;
        const double at_center = zeta(x - c);
        for (double z : zs) lhs = std::max(lhs, std::abs(zeta(x - z) - at_center));
        if (lhs == 0.0) continue;
        const double rhs = (r / (t * t)) * std::pow(1.0 + d / t, -static_cast<double>(decay));
        constant = std::max(constant, lhs / rhs);
    }
    return constant;
}

namespace {

std::vector<double> spectrum(const MotherFilter& zeta, std::vector<double>& freqs) {
    const SampledFunction1D& p = zeta.profile();
    const Grid1D& g = p.grid();
    const double nyquist = 0.5 / g.step();
    const std::size_t bins = 2048;
    freqs.resize(bins + 1);
    std::vector<double> mag(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b) {
        const double xi = nyquist * static_cast<double>(b) / static_cast<double>(bins);
        std::complex<double> acc = 0.0;
        for (std::size_t i = 0; i < g.count(); ++i) {
            acc += p[i] * std::polar(1.0, -2.0 * std::numbers::pi * xi * g.point(i));
        }
        freqs[b] = xi;
        mag[b] = std::abs(acc) * g.step();
    }
    return mag;
}

} // namespace

double spectral_energy_fraction(const MotherFilter& zeta, double low, double high) {
    std::vector<double> freqs;
    const auto mag = spectrum(zeta, freqs);
    double inside = 0.0;
    double total = 0.0;
    for (std::size_t b = 0; b < mag.size(); ++b) {
        const double e = mag[b] * mag[b];
        total += e;
        if (freqs[b] >= low && freqs[b] <= high) inside += e;
    }
    return total > 0.0 ? inside / total : 0.0;
}

double spectral_peak(const MotherFilter& zeta) {
    std::vector<double> freqs;
    const auto mag = spectrum(zeta, freqs);
    const auto it = std::max_element(mag.begin(), mag.end());
    return freqs[static_cast<std::size_t>(it - mag.begin())];
}

} // namespace fcz
