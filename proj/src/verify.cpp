#include "fibercz/verify.hpp"

#include "fibercz/czd.hpp"
#include "fibercz/error.hpp"
#include "fibercz/filters.hpp"
#include "fibercz/norms.hpp"
#include "fibercz/operators.hpp"
#include "fibercz/random.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace fcz {

using io::Json;

bool SuiteReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

Json to_json(const SuiteReport& r) {
    Json checks = Json::array();
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    return Json{{"suite", r.suite}, {"seed", r.seed}, {"checks", checks}, {"data", r.data}, {"passed", r.passed()}};
}

namespace {

std::vector<std::uint64_t> draw_seeds(std::uint64_t seed, std::size_t n) {
    Rng master(seed);
    std::vector<std::uint64_t> out(n);
    for (auto& s : out) s = static_cast<std::uint64_t>(master.integer(0, std::numeric_limits<std::int64_t>::max()));
    return out;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double sup_abs(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

// Per-trial maxima, folded after the parallel section so the result does not
// depend on scheduling.
template <std::size_t N>
std::array<double, N> fold_max(const std::vector<std::array<double, N>>& rows) {
    std::array<double, N> out{};
    for (const auto& r : rows) {
        for (std::size_t k = 0; k < N; ++k) out[k] = std::max(out[k], r[k]);
    }
    return out;
}

} // namespace

SuiteReport verify_czd(std::uint64_t seed, unsigned threads) {
    SuiteReport rep;
    rep.suite = "czd";
    rep.seed = seed;

    // 1D invariants: 100 signals, 8 gammas each between the root average and ||f||_inf.
    const Grid1D g1(0.0, 1.0 / 1024.0, 1024);
    constexpr std::size_t kSignals = 100;
    constexpr std::size_t kGammas = 8;
    const auto seeds = draw_seeds(seed, kSignals);
    // recon, sup ratio, l1 ratio, measure ratio, atom mean, atom l1, disjoint fails, maximal fails
    std::vector<std::array<double, 8>> rows(kSignals);
    detail::parallel_for(kSignals, threads, [&](std::size_t k) {
        Rng rng(seeds[k]);
        // alternate rough and structured inputs
        const SampledFunction1D f = k % 2 == 0 ? random_signal(g1, rng) : random_fiber(g1, rng);
        const double lo = f.l1_norm() / g1.extent();
        const double hi = f.sup_norm();
        auto& row = rows[k];
        for (double gamma : log_spaced(lo, hi, kGammas)) {
            const CZReport r = verify_cz_invariants(cz_decompose_1d(f, gamma), f);
            row[0] = std::max(row[0], r.reconstruction_error);
            row[1] = std::max(row[1], r.good_sup_ratio);
            row[2] = std::max(row[2], r.good_l1_ratio);
            row[3] = std::max(row[3], r.measure_ratio);
            row[4] = std::max(row[4], r.max_atom_mean);
            row[5] = std::max(row[5], r.max_atom_l1_ratio);
            row[6] += r.disjoint_ok ? 0.0 : 1.0;
            row[7] += r.maximal_ok ? 0.0 : 1.0;
        }
    });
    const auto m = fold_max(rows);
    double disjoint_fail = 0.0;
    double maximal_fail = 0.0;
    for (const auto& r : rows) {
        disjoint_fail += r[6];
        maximal_fail += r[7];
    }
    rep.checks.push_back(check_le("1d reconstruction error / ||f||_inf", m[0], kReconstructionTolerance));
    rep.checks.push_back(check_le("1d ||b||_inf / gamma", m[1], kGoodSupConstant));
    rep.checks.push_back(check_le("1d ||b||_1 / ||f||_1", m[2], 1.0 + kReconstructionTolerance));
    rep.checks.push_back(check_le("1d sum|Q| gamma / ||f||_1", m[3], 1.0));
    rep.checks.push_back(check_le("1d atom |mean| (scale-relative)", m[4], kAtomMeanTolerance));
    rep.checks.push_back(check_le("1d ||a||_1 / (gamma |Q|)", m[5], kAtomL1Constant));
    rep.checks.push_back(check_le("1d overlapping selections", disjoint_fail, 0.0));
    rep.checks.push_back(check_le("1d non-maximal selections", maximal_fail, 0.0));

    // Fiber-wise: 20 tensors on 64x64.
    const Grid1D gx(0.0, 1.0 / 64.0, 64);
    const Grid1D gy(0.0, 1.0 / 64.0, 64);
    constexpr std::size_t kTensors = 20;
    const auto tseeds = draw_seeds(seed ^ 0x5bd1e995u, kTensors);
    // row mismatches, reconstruction error, exceptional measure constant
    std::vector<std::array<double, 3>> trows(kTensors);
    detail::parallel_for(kTensors, threads, [&](std::size_t k) {
        Rng rng(tseeds[k]);
        const TensorFunction2D f = random_tensor(gx, gy, rng);
        const double rho = root_average(f);
        const double gamma = rng.uniform(1.0, 4.0) * rho;
        const FiberDecomposition d = fiberwise_decompose(f, gamma);
        const DenseFunction2D good = materialize(d.good_part);
        const DenseFunction2D fd = materialize(f);
        std::size_t mismatches = 0;
        for (const auto& term : f.terms()) {
            const CZDecomposition row_cz = cz_decompose_1d(term.fiber, gamma);
            for (std::size_t n : term.index_set) {
                const auto row = good.row(n);
                for (std::size_t i = 0; i < row.size(); ++i) {
                    if (row[i] != row_cz.good[i]) ++mismatches;
                }
            }
        }
        const DenseFunction2D bad = d.bad_part();
        double err = 0.0;
        for (std::size_t i = 0; i < fd.values().size(); ++i) {
            err = std::max(err, std::abs(good.values()[i] + bad.values()[i] - fd.values()[i]));
        }
        const double fsup = sup_abs(fd.values());
        trows[k] = {static_cast<double>(mismatches), fsup > 0.0 ? err / fsup : 0.0,
                    exceptional_set(d).measure * gamma / f.l1_norm()};
    });
    const auto t = fold_max(trows);
    rep.checks.push_back(check_le("fiber-wise good part vs per-row 1d (mismatching samples)", t[0], 0.0));
    rep.checks.push_back(check_le("fiber-wise reconstruction error / ||f||_inf", t[1], kReconstructionTolerance));
    rep.checks.push_back(check_le("exceptional set measure gamma / ||f||_1", t[2], kExceptionalSetConstant));
    rep.data = Json{{"signals", kSignals}, {"gammasPerSignal", kGammas}, {"tensors", kTensors}};
    return rep;
}

SuiteReport verify_filters(std::uint64_t seed, unsigned threads) {
    (void)threads;
    SuiteReport rep;
    rep.suite = "filters";
    rep.seed = seed;
    const ParaproductConfig cfg = default_config();
    const Grid1D grid(0.0, 1.0 / 1024.0, 1024);
    const ScaleLadder ladder = default_ladder(grid, grid);
    const double h = grid.step();

    double psi_integral = 0.0;
    double phi_integral = 0.0;
    double support_leak = 0.0;
    double sup_scaling = 0.0;
    double constant_error = 0.0;
    const double psi_sup = sup_abs(cfg.psi.profile().values());
    const double phi_sup = sup_abs(cfg.phi.profile().values());
    for (double t : ladder.scales()) {
        const DilatedFilter psi(cfg.psi, t, h);
        const DilatedFilter phi(cfg.phi, t, h);
        const KernelTaps pt = psi.taps();
        const KernelTaps ft = phi.taps();
        double sum = 0.0;
        double abs_sum = 0.0;
        for (double w : pt.w) {
            sum += w;
            abs_sum += std::abs(w);
        }
        psi_integral = std::max(psi_integral, std::abs(sum) / abs_sum);
        sum = 0.0;
        for (double w : ft.w) sum += w;
        phi_integral = std::max(phi_integral, std::abs(h * sum - 1.0));
        for (const KernelTaps* taps : {&pt, &ft}) {
            for (std::ptrdiff_t k = taps->lo; k < taps->hi(); ++k) {
                if (std::abs(static_cast<double>(k) * h) >= t * kDefaultSupportRadius && taps->at(k) != 0.0) {
                    support_leak = std::max(support_leak, std::abs(taps->at(k)));
                }
            }
        }
        if (t >= 4.0 * h) {
            sup_scaling = std::max(sup_scaling, std::abs(t * sup_abs(pt.w) / psi_sup - 1.0));
            sup_scaling = std::max(sup_scaling, std::abs(t * sup_abs(ft.w) / phi_sup - 1.0));
        }
        // phi_t * constant = constant away from the boundary
        const std::vector<double> ones(grid.count(), 1.0);
        const auto conv = convolve_line(ones, ft);
        for (std::size_t i = 0; i < conv.size(); ++i) {
            const auto k = static_cast<std::ptrdiff_t>(i);
            if (k + ft.lo >= 0 && k + ft.hi() <= static_cast<std::ptrdiff_t>(grid.count())) {
                constant_error = std::max(constant_error, std::abs(conv[i] - 1.0));
            }
        }
    }
    rep.checks.push_back(check_le("psi_t discrete integral (relative)", psi_integral, 1e-12));
    rep.checks.push_back(check_le("|phi_t discrete integral - 1|", phi_integral, 1e-12));
    rep.checks.push_back(check_le("taps outside [-tR, tR]", support_leak, 0.0));
    rep.checks.push_back(check_le("sup-norm scaling error, t >= 4 step", sup_scaling, 0.05));
    rep.checks.push_back(check_le("phi_t * 1 - 1 in the interior", constant_error, 1e-12));

    // Certified kernel constant: t = 1, Q = [-1/8, 1/8), M = 2.
    const Grid1D wide(-4.0, 1.0 / 64.0, 512);
    const double certified =
        kernel_regularity_check(DilatedFilter(cfg.psi, 1.0, wide.step()), wide, Interval{-0.125, 0.125}, 2);
    rep.checks.push_back(check_ge("certified kernel constant (finite, positive)", certified, 1e-300));
    rep.checks.push_back(check_le("certified kernel constant (finite, positive) upper", certified, 1e300));
    const double zero_constant =
        kernel_regularity_check(DilatedFilter(cfg.psi, 1.0, wide.step()), wide, Interval{0.01, 0.011}, 2);
    rep.checks.push_back(check_le("kernel constant for Q without grid points", zero_constant, 0.0));

    // Corona: reported, not asserted.
    const double peak = spectral_peak(cfg.psi);
    rep.data = Json{{"ladder", {{"jMin", ladder.j_min}, {"jMax", ladder.j_max}}},
                    {"certifiedKernelConstant", certified},
                    {"psiSpectralPeak", peak},
                    {"psiEnergyInOctave", spectral_energy_fraction(cfg.psi, peak / 2.0, 2.0 * peak)},
                    {"phiEnergyBelowPsiPeak", spectral_energy_fraction(cfg.phi, 0.0, peak)}};
    return rep;
}

SuiteReport verify_operators(std::uint64_t seed, unsigned threads) {
    SuiteReport rep;
    rep.suite = "operators";
    rep.seed = seed;
    const ParaproductConfig cfg = default_config();

    constexpr std::size_t kTrials = 20;
    const auto seeds = draw_seeds(seed, kTrials);
    // bilinearity, fiberwise vs dense, locality failures, adjoint 1, adjoint 2, maximal domination
    std::vector<std::array<double, 6>> rows(kTrials);
    detail::parallel_for(kTrials, threads, [&](std::size_t k) {
        Rng rng(seeds[k]);
        auto& row = rows[k];
        {
            const Grid1D g(0.0, 1.0 / 32.0, 32);
            const DenseFunction2D f1 = random_dense(g, g, rng);
            const DenseFunction2D f2 = random_dense(g, g, rng);
            const DenseFunction2D g1 = random_dense(g, g, rng);
            const DenseFunction2D h = random_dense(g, g, rng);
            const double a = rng.uniform(-2.0, 2.0);
            const double b = rng.uniform(-2.0, 2.0);
            DenseFunction2D mix(g, g);
            for (std::size_t i = 0; i < mix.values().size(); ++i) {
                mix.values()[i] = a * f1.values()[i] + b * f2.values()[i];
            }
            const DenseFunction2D t1 = paraproduct_T(f1, g1, cfg);
            const DenseFunction2D t2 = paraproduct_T(f2, g1, cfg);
            const DenseFunction2D tm = paraproduct_T(mix, g1, cfg);
            double err = 0.0;
            double scale = 0.0;
            for (std::size_t i = 0; i < tm.values().size(); ++i) {
                err = std::max(err, std::abs(tm.values()[i] - a * t1.values()[i] - b * t2.values()[i]));
                scale = std::max(scale, std::abs(a * t1.values()[i]) + std::abs(b * t2.values()[i]));
            }
            row[0] = scale > 0.0 ? err / scale : 0.0;

            const double lhs = inner_product(t1, h);
            const double mid = inner_product(f1, dual_T1(h, g1, cfg));
            const double rhs = inner_product(g1, dual_T2(f1, h, cfg));
            const double denom = std::max({std::abs(lhs), std::abs(mid), std::abs(rhs)});
            row[3] = denom > 0.0 ? std::abs(lhs - mid) / denom : 0.0;
            row[4] = denom > 0.0 ? std::abs(lhs - rhs) / denom : 0.0;

            const DenseFunction2D maximal = hl_maximal_axis(g1, Axis::Y);
            const ScaleLadder ladder = cfg.ladder_for(g, g);
            for (double t : ladder.scales()) {
                const DenseFunction2D conv = convolve_axis(
                    g1, DilatedFilter(cfg.phi, t, g.step()).taps(static_cast<std::ptrdiff_t>(g.count()) - 1), Axis::Y);
                for (std::size_t i = 0; i < conv.values().size(); ++i) {
                    row[5] = std::max(row[5], std::abs(conv.values()[i]) - maximal.values()[i]);
                }
            }
        }
        {
            const Grid1D g(0.0, 1.0 / 64.0, 64);
            const TensorFunction2D f = random_tensor(g, g, rng);
            const DenseFunction2D gg = random_dense(g, g, rng);
            const DenseFunction2D dense = paraproduct_T(materialize(f), gg, cfg);
            const DenseFunction2D fiber = paraproduct_T_fiberwise(f, gg, cfg);
            const double s = sup_abs(dense.values());
            row[1] = s > 0.0 ? max_abs_diff(dense.values(), fiber.values()) / s : 0.0;
            // rows outside every E_j carry no f, so T vanishes there exactly;
            // rows of one term only see that term's fiber
            std::size_t fails = 0;
            const auto& owner = f.row_owner();
            for (std::size_t n = 0; n < g.count(); ++n) {
                if (owner[n] < 0) {
                    for (double v : fiber.row(n)) fails += v != 0.0 ? 1 : 0;
                }
            }
            if (!f.terms().empty()) {
                const TensorTerm& first = f.terms().front();
                const TensorFunction2D alone(g, g, {first});
                const DenseFunction2D t_alone = paraproduct_T_fiberwise(alone, gg, cfg);
                for (std::size_t n : first.index_set) {
                    const auto a = t_alone.row(n);
                    const auto b = fiber.row(n);
                    for (std::size_t i = 0; i < a.size(); ++i) fails += a[i] != b[i] ? 1 : 0;
                }
            }
            row[2] = static_cast<double>(fails);
        }
    });
    const auto m = fold_max(rows);
    rep.checks.push_back(check_le("bilinearity in f (relative)", m[0], 1e-10));
    rep.checks.push_back(check_le("fiber-wise T vs dense T (relative)", m[1], 1e-12));
    rep.checks.push_back(check_le("fiber locality violations", m[2], 0.0));
    rep.checks.push_back(check_le("<T(f,g),h> vs <f,T*1(h,g)> (relative)", m[3], 1e-10));
    rep.checks.push_back(check_le("<T(f,g),h> vs <g,T*2(f,h)> (relative)", m[4], 1e-10));
    rep.checks.push_back(check_le("max(|phi_t *_y g| - M_y g)", m[5], 1e-12));

    // Majorant row integral for one small atom: |Q| in the continuum.
    {
        const Grid1D gx(0.0, 1.0 / 4096.0, 4096);
        const Grid1D gy(0.0, 1.0, 1);
        std::vector<double> v(gx.count(), 0.0);
        v[2049] = 1.0;
        const TensorFunction2D f(gx, gy, {TensorTerm{SampledFunction1D(gx, v), {0}}});
        const double gamma = 1.0 / 12.0;  // average 1/8 on the 8-sample interval, 1/16 on its parent
        const FiberDecomposition d = fiberwise_decompose(f, gamma);
        double q_len = 0.0;
        for (const auto& a : d.per_term[0].atoms) q_len += a.interval.length(gx);
        const DenseFunction2D h = h_majorant(d);
        double integral = 0.0;
        for (double x : h.values()) integral += x * gx.step();
        const double rel = q_len > 0.0 ? std::abs(integral / q_len - 1.0) : 1.0;
        rep.checks.push_back(check_le("single-atom H row integral vs |Q| (relative)", rel, 0.1));
        rep.data["majorantRowIntegral"] = integral;
        rep.data["atomIntervalLength"] = q_len;
    }
    rep.data["trials"] = kTrials;
    return rep;
}

SuiteReport verify_norms(std::uint64_t seed, unsigned threads) {
    (void)threads;
    SuiteReport rep;
    rep.suite = "norms";
    rep.seed = seed;
    Rng rng(seed);
    const Grid1D g(0.0, 1.0 / 64.0, 64);
    std::size_t chebyshev_fail = 0;
    std::size_t checked = 0;
    for (int k = 0; k < 10; ++k) {
        const DenseFunction2D f = random_dense(g, g, rng);
        for (double p : {1.0, 2.0, 4.0}) {
            const double np = std::pow(lp_norm(f, p), p);
            for (double alpha : default_levels(f.values(), 32)) {
                ++checked;
                if (superlevel_measure(f, alpha) > np / std::pow(alpha, p) * (1.0 + 1e-12)) ++chebyshev_fail;
            }
        }
    }
    rep.checks.push_back(check_le("Chebyshev violations", static_cast<double>(chebyshev_fail), 0.0));

    // constant c on the unit square: ||c||_p = |c|
    const DenseFunction2D c(g, g, std::vector<double>(g.count() * g.count(), -3.0));
    double const_err = 0.0;
    for (double p : {1.0, 1.5, 2.0, 3.0, kInfinity}) const_err = std::max(const_err, std::abs(lp_norm(c, p) - 3.0) / 3.0);
    rep.checks.push_back(check_le("||c||_p on the unit square (relative)", const_err, 1e-12));
    rep.checks.push_back(check_le("superlevel at the maximum (strict)", superlevel_measure(c, 3.0), 0.0));

    // 1/x on midpoints of (0, 64]: weak L^1 quasi-norm 1
    const Grid1D mid(1.0 / 128.0, 1.0 / 64.0, 4096);
    std::vector<double> inv(mid.count());
    for (std::size_t i = 0; i < inv.size(); ++i) inv[i] = 1.0 / mid.point(i);
    const SampledFunction1D fx(mid, inv);
    const auto levels = log_spaced(0.1, 10.0, 16);
    const WeakNormEstimate w = weak_lp_quasinorm(fx, 1.0, levels);
    rep.checks.push_back(check_le("weak L^1 quasi-norm of 1/x vs 1", std::abs(w.quasi_norm - 1.0), 0.05));

    double residual = 0.0;
    for (double p : {1.0, 1.5, 2.0, 4.0}) {
        for (double q : {1.0, 2.0, 3.0, kInfinity}) residual = std::max(residual, exponent_algebra(p, q).relation_residual);
    }
    rep.checks.push_back(check_le("exponent relation residual", residual, 1e-12));
    rep.checks.push_back(check_le("s(q = 2) - 2/3", std::abs(exponent_algebra(1.0, 2.0).s - 2.0 / 3.0), 1e-15));
    rep.data = Json{{"chebyshevChecks", checked}, {"inverseWeakNorm", w.quasi_norm}};
    return rep;
}

std::vector<std::string> suite_names() { return {"czd", "filters", "operators", "norms"}; }

std::vector<SuiteReport> run_verify(const std::string& suite, std::uint64_t seed, unsigned threads) {
    std::vector<SuiteReport> out;
    auto one = [&](const std::string& name) {
        if (name == "czd") return verify_czd(seed, threads);
        if (name == "filters") return verify_filters(seed, threads);
        if (name == "operators") return verify_operators(seed, threads);
        if (name == "norms") return verify_norms(seed, threads);
        throw Error("unknown suite '" + name + "'");
    };
    if (suite == "all") {
        for (const auto& n : suite_names()) out.push_back(one(n));
    } else {
        out.push_back(one(suite));
    }
    return out;
}

} // namespace fcz
