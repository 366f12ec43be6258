#pragma once

#include "fibercz/grid.hpp"

#include <cstddef>
#include <vector>

namespace fcz {

/// Sharp dyadic constants in one dimension. A selected interval has half the
/// measure of its unselected parent, so averages on it are at most 2*gamma;
/// an atom's L1 norm is at most twice the L1 mass of f on the interval.
inline constexpr double kGoodSupConstant = 2.0;
inline constexpr double kAtomL1Constant = 4.0;
inline constexpr double kAtomMeanTolerance = 1e-10;
inline constexpr double kReconstructionTolerance = 1e-12;
/// |union of 2Q_i| <= 2 sum |Q_i| <= 2 gamma^-1 ||f||_1; the reported bound
/// keeps the factor 4 of the measured-constant criterion.
inline constexpr double kExceptionalSetConstant = 4.0;

/// gamma = alpha^s * ||f||_1^(1-s)
double cz_scale(double alpha, double f_l1, double s);

struct Atom {
    DyadicInterval interval;
    std::vector<double> values;  // samples on the interval's indices, zero elsewhere

    SampledFunction1D as_function(const Grid1D& grid) const;
};

struct CZDecomposition {
    double gamma = 0.0;
    SampledFunction1D good;
    std::vector<Atom> atoms;  // one per selected interval, in left-to-right order

    std::vector<DyadicInterval> selected() const;
    /// Sum of all atoms as one sampled function.
    SampledFunction1D bad(const Grid1D& grid) const;
};

/// Dyadic stopping time at threshold gamma: an interval is selected when the
/// average of |f| over it exceeds gamma (strictly) and no ancestor was
/// selected. The root is eligible too.
CZDecomposition cz_decompose_1d(const SampledFunction1D& f, double gamma);

struct CZReport {
    double good_l1_ratio = 0.0;      // ||b||_1 / ||f||_1
    double good_sup_ratio = 0.0;     // ||b||_inf / gamma
    double measure_ratio = 0.0;      // sum |Q_i| * gamma / ||f||_1
    double max_atom_mean = 0.0;      // max |mean a_i| / (||a_i||_1 / |Q_i|)
    double max_atom_l1_ratio = 0.0;  // max ||a_i||_1 / (gamma |Q_i|)
    double reconstruction_error = 0.0;  // max |b + sum a - f| / ||f||_inf

    bool good_l1_ok = false;
    bool good_sup_ok = false;
    bool measure_ok = false;
    bool atom_mean_ok = false;
    bool atom_l1_ok = false;
    bool reconstruction_ok = false;
    bool disjoint_ok = false;
    bool maximal_ok = false;

    bool all_passed() const {
        return good_l1_ok && good_sup_ok && measure_ok && atom_mean_ok && atom_l1_ok &&
               reconstruction_ok && disjoint_ok && maximal_ok;
    }
};

CZReport verify_cz_invariants(const CZDecomposition& d, const SampledFunction1D& f);

struct FiberDecomposition {
    double gamma = 0.0;
    TensorFunction2D good_part;               // sum_j b^1_j(x) 1_{E_j}(y)
    std::vector<CZDecomposition> per_term;    // decomposition of f^1_j

    /// materialize(f) - materialize(good_part), assembled from atom sums.
    DenseFunction2D bad_part() const;
};

/// Decomposes each tensor fiber once; the good part reuses the index sets.
FiberDecomposition fiberwise_decompose(const TensorFunction2D& f, double gamma, unsigned threads = 1);

struct ExceptionalSet {
    std::vector<std::vector<std::size_t>> per_row;  // x indices covered by the union of 2Q_{i,y}
    std::vector<double> row_measure;                // exact length of that union on the x axis
    double measure = 0.0;                           // sum over rows of step_y * row_measure
};

ExceptionalSet exceptional_set(const FiberDecomposition& d);

} // namespace fcz
