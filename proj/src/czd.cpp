#include "fibercz/czd.hpp"

#include "fibercz/error.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>

namespace fcz {

double cz_scale(double alpha, double f_l1, double s) {
    if (!(alpha > 0.0) || !(f_l1 > 0.0) || !(s > 0.0) || s > 1.0) {
        throw Error("cz_scale needs alpha > 0, ||f||_1 > 0 and s in (0, 1]");
    }
    return std::pow(alpha, s) * std::pow(f_l1, 1.0 - s);
}

SampledFunction1D Atom::as_function(const Grid1D& grid) const {
    std::vector<double> v(grid.count(), 0.0);
    std::copy(values.begin(), values.end(), v.begin() + static_cast<std::ptrdiff_t>(interval.first_index(grid)));
    return SampledFunction1D(grid, std::move(v));
}

std::vector<DyadicInterval> CZDecomposition::selected() const {
    std::vector<DyadicInterval> out;
    out.reserve(atoms.size());
    for (const auto& a : atoms) out.push_back(a.interval);
    return out;
}

SampledFunction1D CZDecomposition::bad(const Grid1D& grid) const {
    std::vector<double> v(grid.count(), 0.0);
    for (const auto& a : atoms) {
        const std::size_t first = a.interval.first_index(grid);
        for (std::size_t k = 0; k < a.values.size(); ++k) v[first + k] += a.values[k];
    }
    return SampledFunction1D(grid, std::move(v));
}

namespace {

double mean_abs(std::span<const double> v) {
    double sum = 0.0;
    for (double x : v) sum += std::abs(x);
    return sum / static_cast<double>(v.size());
}

double mean(std::span<const double> v) {
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum / static_cast<double>(v.size());
}

struct StoppingTime {
    const SampledFunction1D& f;
    double gamma;
    std::vector<double>& good;
    std::vector<Atom>& atoms;

    void visit(const DyadicInterval& q) {
        const Grid1D& grid = f.grid();
        const auto samples = f.values().subspan(q.first_index(grid), q.sample_count(grid));
        if (mean_abs(samples) > gamma) {
            select(q, samples);
            return;
        }
        if (q.generation == grid.depth()) return;
        const auto [left, right] = dyadic_children(q, grid);
        visit(left);
        visit(right);
    }

    void select(const DyadicInterval& q, std::span<const double> samples) {
        // Second pass removes the rounding residue of the first mean so the
        // atom's discrete integral vanishes to working precision.
        const double m = mean(samples);
        Atom atom{q, std::vector<double>(samples.size())};
        for (std::size_t k = 0; k < samples.size(); ++k) atom.values[k] = samples[k] - m;
        const double residue = mean(atom.values);
        for (double& a : atom.values) a -= residue;
        const double level = m + residue;
        const std::size_t first = q.first_index(f.grid());
        std::fill_n(good.begin() + static_cast<std::ptrdiff_t>(first), samples.size(), level);
        atoms.push_back(std::move(atom));
    }
};

} // namespace

CZDecomposition cz_decompose_1d(const SampledFunction1D& f, double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw Error("gamma must be positive and finite");
    for (double v : f.values()) {
        if (!std::isfinite(v)) throw Error("non-finite sample value");
    }
    std::vector<double> good(f.values().begin(), f.values().end());
    std::vector<Atom> atoms;
    StoppingTime{f, gamma, good, atoms}.visit(DyadicInterval{0, 0});
    return CZDecomposition{gamma, SampledFunction1D(f.grid(), std::move(good)), std::move(atoms)};
}

CZReport verify_cz_invariants(const CZDecomposition& d, const SampledFunction1D& f) {
    const Grid1D& grid = f.grid();
    CZReport r;
    const double f_l1 = f.l1_norm();
    const double f_sup = f.sup_norm();
    const double gamma = d.gamma;

    r.good_l1_ratio = f_l1 > 0.0 ? d.good.l1_norm() / f_l1 : 0.0;
    r.good_l1_ok = d.good.l1_norm() <= f_l1 * (1.0 + 1e-12);
    r.good_sup_ratio = d.good.sup_norm() / gamma;
    r.good_sup_ok = d.good.sup_norm() <= kGoodSupConstant * gamma * (1.0 + 1e-12);

    double measure = 0.0;
    for (const auto& a : d.atoms) measure += a.interval.length(grid);
    r.measure_ratio = f_l1 > 0.0 ? measure * gamma / f_l1 : 0.0;
    r.measure_ok = measure * gamma <= f_l1 * (1.0 + 1e-12);

    r.atom_mean_ok = true;
    r.atom_l1_ok = true;
    for (const auto& a : d.atoms) {
        double sum = 0.0;
        double sum_abs = 0.0;
        for (double v : a.values) {
            sum += v;
            sum_abs += std::abs(v);
        }
        const double rel_mean = sum_abs > 0.0 ? std::abs(sum) / sum_abs : 0.0;
        r.max_atom_mean = std::max(r.max_atom_mean, rel_mean);
        const double len = a.interval.length(grid);
        const double ratio = sum_abs * grid.step() / (gamma * len);
        r.max_atom_l1_ratio = std::max(r.max_atom_l1_ratio, ratio);
    }
    r.atom_mean_ok = r.max_atom_mean <= kAtomMeanTolerance;
    r.atom_l1_ok = r.max_atom_l1_ratio <= kAtomL1Constant * (1.0 + 1e-12);

    const SampledFunction1D bad = d.bad(grid);
    double err = 0.0;
    for (std::size_t i = 0; i < grid.count(); ++i) {
        err = std::max(err, std::abs(d.good[i] + bad[i] - f[i]));
    }
    r.reconstruction_error = f_sup > 0.0 ? err / f_sup : err;
    r.reconstruction_ok = f_sup > 0.0 ? err <= kReconstructionTolerance * f_sup : err == 0.0;

    auto sorted = d.selected();
    std::sort(sorted.begin(), sorted.end(), [&](const auto& a, const auto& b) {
        return a.first_index(grid) < b.first_index(grid);
    });
    r.disjoint_ok = true;
    for (std::size_t k = 1; k < sorted.size(); ++k) {
        if (sorted[k].first_index(grid) < sorted[k - 1].last_index(grid)) r.disjoint_ok = false;
    }
    r.maximal_ok = true;
    for (const auto& q : sorted) {
        const auto own = f.values().subspan(q.first_index(grid), q.sample_count(grid));
        if (!(mean_abs(own) > gamma)) r.maximal_ok = false;
        if (q.generation == 0) continue;
        const DyadicInterval parent{q.generation - 1, q.offset / 2};
        const auto samples = f.values().subspan(parent.first_index(grid), parent.sample_count(grid));
        if (mean_abs(samples) > gamma) r.maximal_ok = false;
    }
    return r;
}

DenseFunction2D FiberDecomposition::bad_part() const {
    const Grid1D& gx = good_part.grid_x();
    DenseFunction2D out(gx, good_part.grid_y());
    const auto& terms = good_part.terms();
    for (std::size_t j = 0; j < terms.size(); ++j) {
        const SampledFunction1D bad = per_term[j].bad(gx);
        for (std::size_t n : terms[j].index_set) {
            std::copy(bad.values().begin(), bad.values().end(), out.row(n).begin());
        }
    }
    return out;
}

FiberDecomposition fiberwise_decompose(const TensorFunction2D& f, double gamma, unsigned threads) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw Error("gamma must be positive and finite");
    const auto& terms = f.terms();
    std::vector<CZDecomposition> per_term(terms.size());
    detail::parallel_for(terms.size(), threads, [&](std::size_t j) {
        per_term[j] = cz_decompose_1d(terms[j].fiber, gamma);
    });
    std::vector<TensorTerm> good_terms;
    good_terms.reserve(terms.size());
    for (std::size_t j = 0; j < terms.size(); ++j) {
        good_terms.push_back(TensorTerm{per_term[j].good, terms[j].index_set});
    }
    return FiberDecomposition{gamma, TensorFunction2D(f.grid_x(), f.grid_y(), std::move(good_terms)),
                              std::move(per_term)};
}

ExceptionalSet exceptional_set(const FiberDecomposition& d) {
    const Grid1D& gx = d.good_part.grid_x();
    const Grid1D& gy = d.good_part.grid_y();
    ExceptionalSet out;
    out.per_row.resize(gy.count());
    out.row_measure.assign(gy.count(), 0.0);

    const auto& terms = d.good_part.terms();
    for (std::size_t j = 0; j < terms.size(); ++j) {
        std::vector<Interval> spans;
        std::vector<bool> covered(gx.count(), false);
        for (const auto& atom : d.per_term[j].atoms) {
            const DoubledInterval dbl = double_interval(atom.interval, gx);
            spans.push_back(dbl.clipped);
            for (std::size_t i = dbl.first; i < dbl.last; ++i) covered[i] = true;
        }
        std::sort(spans.begin(), spans.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
        double length = 0.0;
        double lo = 0.0;
        double hi = 0.0;
        bool open = false;
        for (const auto& s : spans) {
            if (!open) {
                lo = s.lo;
                hi = s.hi;
                open = true;
            } else if (s.lo <= hi) {
                hi = std::max(hi, s.hi);
            } else {
                length += hi - lo;
                lo = s.lo;
                hi = s.hi;
            }
        }
        if (open) length += hi - lo;

        std::vector<std::size_t> indices;
        for (std::size_t i = 0; i < gx.count(); ++i) {
            if (covered[i]) indices.push_back(i);
        }
        for (std::size_t n : terms[j].index_set) {
            out.per_row[n] = indices;
            out.row_measure[n] = length;
        }
    }
    for (std::size_t n = 0; n < gy.count(); ++n) out.measure += gy.step() * out.row_measure[n];
    return out;
}

} // namespace fcz
