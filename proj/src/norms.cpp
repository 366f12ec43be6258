#include "fibercz/norms.hpp"

#include "fibercz/error.hpp"

#include <algorithm>
#include <cmath>

namespace fcz {

double lp_norm(std::span<const double> values, double cell, double p) {
    if (!(p >= 1.0)) throw Error("Lp norm needs p >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : values) m = std::max(m, std::abs(v));
        return m;
    }
    double sum = 0.0;
    for (double v : values) sum += std::pow(std::abs(v), p);
    return std::pow(sum * cell, 1.0 / p);
}

double lp_norm(const DenseFunction2D& f, double p) { return lp_norm(f.values(), f.cell_area(), p); }
double lp_norm(const SampledFunction1D& f, double p) { return lp_norm(f.values(), f.grid().step(), p); }

double superlevel_measure(std::span<const double> values, double cell, double alpha) {
    if (!(alpha >= 0.0)) throw Error("superlevel threshold must be nonnegative");
    std::size_t count = 0;
    for (double v : values) {
        if (std::abs(v) > alpha) ++count;
    }
    return cell * static_cast<double>(count);
}

double superlevel_measure(const DenseFunction2D& f, double alpha) {
    return superlevel_measure(f.values(), f.cell_area(), alpha);
}
double superlevel_measure(const SampledFunction1D& f, double alpha) {
    return superlevel_measure(f.values(), f.grid().step(), alpha);
}

WeakNormEstimate weak_lp_quasinorm(std::span<const double> values, double cell, double p,
                                   std::span<const double> levels) {
    if (!(p >= 1.0)) throw Error("weak Lp quasi-norm needs p >= 1");
    if (levels.empty()) throw Error("empty level grid");
    for (std::size_t k = 0; k < levels.size(); ++k) {
        if (!(levels[k] > 0.0)) throw Error("levels must be positive");
        if (k > 0 && !(levels[k] > levels[k - 1])) throw Error("levels must be increasing");
    }
    // one sort, then a sweep over the levels
    std::vector<double> mags(values.size());
    std::transform(values.begin(), values.end(), mags.begin(), [](double v) { return std::abs(v); });
    std::sort(mags.begin(), mags.end());

    WeakNormEstimate out;
    out.p = p;
    out.alphas.assign(levels.begin(), levels.end());
    out.measures.reserve(levels.size());
    for (double alpha : levels) {
        const auto above = static_cast<std::size_t>(mags.end() - std::upper_bound(mags.begin(), mags.end(), alpha));
        const double measure = cell * static_cast<double>(above);
        out.measures.push_back(measure);
        const double value = std::isinf(p) ? (measure > 0.0 ? alpha : 0.0) : alpha * std::pow(measure, 1.0 / p);
        out.quasi_norm = std::max(out.quasi_norm, value);
    }
    return out;
}

WeakNormEstimate weak_lp_quasinorm(const DenseFunction2D& f, double p, std::span<const double> levels) {
    return weak_lp_quasinorm(f.values(), f.cell_area(), p, levels);
}
WeakNormEstimate weak_lp_quasinorm(const SampledFunction1D& f, double p, std::span<const double> levels) {
    return weak_lp_quasinorm(f.values(), f.grid().step(), p, levels);
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0) || !(hi >= lo)) throw Error("log-spaced range needs 0 < lo <= hi");
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = lo;
        return out;
    }
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (std::size_t k = 0; k < count; ++k) {
        out[k] = std::exp(a + (b - a) * static_cast<double>(k) / static_cast<double>(count - 1));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

std::vector<double> default_levels(std::span<const double> values, std::size_t count) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    if (m == 0.0) return {};
    return log_spaced(m * 1e-6, m, count);
}

ExponentTriple exponent_algebra(double p, double q) {
    if (!(p >= 1.0) || !(q >= 1.0)) throw Error("exponents must satisfy p, q >= 1");
    ExponentTriple e;
    e.p = p;
    e.q = q;
    const double ip = 1.0 / p;
    const double iq = 1.0 / q;
    e.r = 1.0 / (ip + iq);
    e.s = 1.0 / (1.0 + iq);
    e.s_dual = 1.0 / (ip + 1.0);
    e.p_conj = 1.0 / (1.0 - ip);
    e.q_conj = 1.0 / (1.0 - iq);
    if (std::isfinite(e.r) && std::isfinite(e.p_conj)) {
        e.relation_residual = std::abs(e.s * e.r / e.p_conj - (e.r - e.s));
    } else {
        e.relation_residual = std::abs(1.0 / e.s - 1.0 / e.r - 1.0 / e.p_conj);
    }
    return e;
}

ExtensionKind extension_kind(double p, double q, double p0, double q0) {
    if (!(p0 > 1.0) || !(q0 > 1.0) || std::isinf(p0) || std::isinf(q0)) {
        throw Error("assumed exponents must lie in (1, infinity)");
    }
    if (!(p >= 1.0 && p <= p0 && q >= 1.0 && q <= q0)) return ExtensionKind::NotAdmissible;
    const double inv_r = 1.0 / p + 1.0 / q;
    const double inv_r0 = 1.0 / p0 + 1.0 / q0;
    if (!(inv_r > inv_r0 && inv_r <= 2.0)) return ExtensionKind::NotAdmissible;
    return (p > 1.0 && q > 1.0) ? ExtensionKind::Strong : ExtensionKind::Weak;
}

} // namespace fcz
