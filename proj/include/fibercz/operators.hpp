#pragma once

#include "fibercz/czd.hpp"
#include "fibercz/filters.hpp"
#include "fibercz/grid.hpp"

#include <optional>
#include <span>
#include <vector>

namespace fcz {

enum class Axis { X, Y };

/// Each slice along `axis` is replaced by step * sum_n F(n) k(m - n), with
/// zero extension. The kernel grid must share the axis step and sit on the
/// lattice step*Z.
DenseFunction2D convolve_axis(const DenseFunction2D& f, const SampledFunction1D& kernel, Axis axis);
DenseFunction2D convolve_axis(const DenseFunction2D& f, const KernelTaps& kernel, Axis axis);
/// 1D discrete convolution, same conventions.
std::vector<double> convolve_line(std::span<const double> in, const KernelTaps& kernel);

/// (psi, phi, ladder). With `strict` the second slot also uses psi.
struct ParaproductConfig {
    MotherFilter psi;
    MotherFilter phi;
    std::optional<ScaleLadder> ladder;  // default_ladder of the operand grids when empty
    bool strict = false;

    const MotherFilter& second() const { return strict ? psi : phi; }
    ScaleLadder ladder_for(const Grid1D& grid_x, const Grid1D& grid_y) const;
};

inline constexpr double kDefaultSupportRadius = 1.0;

/// Default mothers of radius 1 sampled at step 1/64.
ParaproductConfig default_config(bool strict = false);

/// Pi(f, g) = ln2 sum_j (psi_{t_j} * f)(phi_{t_j} * g)
SampledFunction1D paraproduct_pi(const SampledFunction1D& f, const SampledFunction1D& g,
                                 const ParaproductConfig& cfg);

/// T(f, g) = ln2 sum_j (psi_{t_j} *_x f)(phi_{t_j} *_y g), scale-major order.
DenseFunction2D paraproduct_T(const DenseFunction2D& f, const DenseFunction2D& g,
                              const ParaproductConfig& cfg, unsigned threads = 1);

/// Same operator evaluated row by row from the tensor fibers only; the x
/// convolutions run once per term and scale. Bit-identical to the dense path.
DenseFunction2D paraproduct_T_fiberwise(const TensorFunction2D& f, const DenseFunction2D& g,
                                        const ParaproductConfig& cfg, unsigned threads = 1);

/// T*1(h, g) = ln2 sum_j psi~_{t_j} *_x [h (phi_{t_j} *_y g)]
DenseFunction2D dual_T1(const DenseFunction2D& h, const DenseFunction2D& g, const ParaproductConfig& cfg);
/// T*2(f, h) = ln2 sum_j phi~_{t_j} *_y [(psi_{t_j} *_x f) h]
DenseFunction2D dual_T2(const DenseFunction2D& f, const DenseFunction2D& h, const ParaproductConfig& cfg);

/// <a, b> = cell_area * sum a b
double inner_product(const DenseFunction2D& a, const DenseFunction2D& b);

/// Uncentered maximal function over all grid intervals containing each point.
std::vector<double> hl_maximal_1d(std::span<const double> g);
DenseFunction2D hl_maximal_axis(const DenseFunction2D& g, Axis axis);

/// H(x, y) = sum_i |Q_i| r_i / |x - c_i|^2 1_{(2Q_i)^c}(x) over the intervals
/// selected in row y's fiber.
DenseFunction2D h_majorant(const FiberDecomposition& d);

} // namespace fcz
