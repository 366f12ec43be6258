#pragma once

#include "fibercz/filters.hpp"
#include "fibercz/grid.hpp"
#include "fibercz/io.hpp"
#include "fibercz/random.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fcz {

struct Tolerances {
    double slope = 0.1;        // additive, on fitted log-log slopes
    double uniformity = 2.0;   // max/min of a measured constant over a sweep
    double identity = 1e-10;   // relative, on algebraic identities
    double exact = 1e-12;      // relative, on same-path evaluations
    double h_margin = 0.1;     // ||H||_1 gamma / ||f||_1 <= 2 (1 + h_margin)
    double tail_slope = 0.2;   // weak-type tail slope <= -s + tail_slope
};

/// Missing grids, ladder or sweep values fall back to per-experiment defaults.
struct ExperimentConfig {
    std::optional<Grid1D> grid_x;
    std::optional<Grid1D> grid_y;
    std::optional<ScaleLadder> ladder;
    double p = 2.0;
    double q = 2.0;
    std::uint64_t seed = 1;
    std::string sweep_param = "gamma";
    std::vector<double> sweep_values;
    std::optional<int> trials;
    std::optional<GeneratorOptions> generator;
    Tolerances tolerances;
    std::string out;
    unsigned threads = 1;
};

/// {gridX:{origin,step,count}, gridY:{...}, ladder:{jMin,jMax}, exponents:{p,q}, seed,
///  sweep:{param, values:[...]}, trials, tolerances:{...}, out}
ExperimentConfig experiment_config_from_json(const io::Json& j);

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;
    std::size_t point_count = 0;
};

/// Least squares of log y against log x over the pairs with x, y > 0.
/// Throws when fewer than 3 such pairs remain.
FitResult fit_log_log(std::span<const double> x, std::span<const double> y);

struct Check {
    std::string name;
    double measured = 0.0;
    double limit = 0.0;
    std::string relation;  // "<=" or ">="
    bool passed = false;
};

Check check_le(std::string name, double measured, double limit);
Check check_ge(std::string name, double measured, double limit);

struct ExperimentResult {
    std::string name;
    std::string note;
    FitResult fit;
    std::vector<Check> checks;
    io::Json data;

    bool passed() const;
};

io::Json to_json(const FitResult& f);
io::Json to_json(const Check& c);
io::Json to_json(const ExperimentResult& r);
/// Plot data of a result as CSV with a header line.
std::string experiment_csv(const ExperimentResult& r);

/// Largest per-term root average, max_j ||f^1_j||_1 / extent_x.
double root_average(const TensorFunction2D& f);

/// ||b||_p against gamma: slope 1/p' and bounded ratio ||b||_p / (gamma^{1/p'} ||f||_1^{1/p}).
ExperimentResult experiment_good_part_bound(const ExperimentConfig& cfg);
/// |exceptional set| against gamma: constant <= 4, slope >= -1 - tol.
ExperimentResult experiment_bad_set_measure(const ExperimentConfig& cfg);
/// ||H||_1 against gamma: constant <= 2 (1 + margin), slope >= -1 - tol.
ExperimentResult experiment_h_l1_bound(const ExperimentConfig& cfg);
/// Tail of the distribution function of T(f, g) with ||g||_q = 1.
ExperimentResult experiment_weak_type_scaling(const ExperimentConfig& cfg);
/// Pointwise domination of T(a, g) outside 2Q for a single atom a.
ExperimentResult experiment_atom_decay(const ExperimentConfig& cfg);

/// Dispatch by name: good_part, bad_set, h_l1, weak_type, atom_decay.
ExperimentResult run_experiment(const std::string& name, const ExperimentConfig& cfg);
std::vector<std::string> experiment_names();

} // namespace fcz
