#pragma once

#include "fibercz/grid.hpp"

#include <limits>
#include <span>
#include <vector>

namespace fcz {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// (sum |F|^p * cell)^(1/p); p = infinity gives max |F|. Throws for p < 1.
double lp_norm(std::span<const double> values, double cell, double p);
double lp_norm(const DenseFunction2D& f, double p);
double lp_norm(const SampledFunction1D& f, double p);

/// cell * #{|F| > alpha}
double superlevel_measure(std::span<const double> values, double cell, double alpha);
double superlevel_measure(const DenseFunction2D& f, double alpha);
double superlevel_measure(const SampledFunction1D& f, double alpha);

struct WeakNormEstimate {
    double p = 1.0;
    std::vector<double> alphas;
    std::vector<double> measures;
    double quasi_norm = 0.0;  // max over the levels of alpha * measure^(1/p)
};

/// Lower bound for the L^{p,infinity} quasi-norm sampled at `levels`, which
/// must be positive and strictly increasing.
WeakNormEstimate weak_lp_quasinorm(std::span<const double> values, double cell, double p,
                                   std::span<const double> levels);
WeakNormEstimate weak_lp_quasinorm(const DenseFunction2D& f, double p, std::span<const double> levels);
WeakNormEstimate weak_lp_quasinorm(const SampledFunction1D& f, double p, std::span<const double> levels);

/// `count` log-spaced levels over [max * 1e-6, max]; empty when max == 0.
std::vector<double> default_levels(std::span<const double> values, std::size_t count = 64);
std::vector<double> log_spaced(double lo, double hi, std::size_t count);

/// Exponents of the extension argument, with 1/infinity = 0 throughout.
struct ExponentTriple {
    double p = 1.0;
    double q = 1.0;
    double r = 1.0;        // 1/r = 1/p + 1/q
    double s = 1.0;        // 1/s = 1 + 1/q, target of L^1 x L^q
    double s_dual = 1.0;   // 1/s = 1/p + 1, target of L^p x L^1
    double p_conj = 1.0;   // 1/p + 1/p' = 1
    double q_conj = 1.0;
    /// |s r / p' - (r - s)| when finite, else the reciprocal residual
    /// |1/s - 1/r - 1/p'|.
    double relation_residual = 0.0;
};

ExponentTriple exponent_algebra(double p, double q);

enum class ExtensionKind { NotAdmissible, Strong, Weak };

/// Classifies (p, q) against an assumed bound at (p0, q0): admissible when
/// p in [1, p0], q in [1, q0] and 1/r0 < 1/r <= 2. Strong L^r when p, q > 1,
/// weak L^{r,infinity} otherwise.
ExtensionKind extension_kind(double p, double q, double p0, double q0);

} // namespace fcz
