#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "collspin/integrator.hpp"
#include "collspin/model.hpp"

namespace collspin {

/// Where the initial state comes from: the built-in reference configuration
/// or a plain-text state file.
enum class InitialCondition { Reference, File };

/// Batch-run configuration, parsed from a flat key = value text file.
struct ExperimentConfig {
    int n = 30;
    double length = 30.0;
    std::vector<double> masses;  ///< uniform `mass` if empty
    double mass = 1.0;
    double lj_depth = 1.0;       ///< U0
    double lj_rest = 1.0;        ///< r_m
    double coupling_strength = 10.0;  ///< J0
    double coupling_cutoff = 1.5;     ///< r_c
    double step = 0.01;
    double t_end = 100.0;
    std::size_t stride = 1;
    std::string output = "energies.dat";
    double fp_tolerance = 1e-12;
    int max_iterations = 200;
    InitialCondition initial = InitialCondition::Reference;
    std::string initial_file;

    SleChainModel make_model() const;
    SolverSettings solver() const { return SolverSettings{step, fp_tolerance, max_iterations}; }
};

/// Parses `key = value` lines; `#` starts a comment, blank lines are
/// ignored. Unknown keys, malformed values and invalid parameter ranges
/// throw ParseError with the offending line number.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

/// One output row of the energy series.
struct EnergyRecord {
    double time = 0.0;
    double magnetic = 0.0;
    double potential = 0.0;
    double kinetic = 0.0;

    double total() const { return magnetic + potential + kinetic; }
};

/// The built-in reference initial state: q_k = k, p_k = 0 and unit spins
///
///   w_k ~ (0.8 cos(2 pi k / n) + 0.5 sin(4 pi k / n),
///          0.8 sin(2 pi k / n) + 0.5 cos(4 pi k / n),
///          1),          k = 1..n,
///
/// each normalized by its own positive factor.
SpinLatticeState reference_initial_state(int n);

/// Reads/writes a state as one `q p w1 w2 w3` row per particle.
SpinLatticeState read_state_file(const std::string& path);
void write_state_file(const std::string& path, const SpinLatticeState& state);

/// Result summary of a simulate run.
struct SimulateResult {
    std::vector<EnergyRecord> series;
    SpinLatticeState final_state;
    double max_energy_deviation = 0.0;  ///< max |Htot(t) - Htot(0)| over the series
    int max_iterations = 0;             ///< worst fixed-point iteration count
};

/// Runs the time loop with the configured model and initial state, writing
/// the energy series to config.output (header `T Hmag Hpot Hkin`) and the
/// final state to config.output + ".state". Returns the series and summary
/// statistics. All numbers are written with 17 significant digits so files
/// round-trip exactly.
SimulateResult simulate(const ExperimentConfig& config);

/// One row of the step-size study.
struct ConvergenceRow {
    double step = 0.0;
    double error = 0.0;  ///< Euclidean norm of the full state difference
};

/// Result of a convergence study.
struct ConvergenceResult {
    std::vector<ConvergenceRow> rows;
    double slope = 0.0;  ///< least-squares slope of log(error) vs log(h)
};

/// Integrates from the configured initial state to config.t_end once per
/// step size in `h_list` and once at `reference_h`, measuring each error as
/// the Euclidean norm of the concatenated (w, q, p) difference against the
/// reference run. Writes rows `H Err` to config.output. reference_h must be
/// smaller than every entry of h_list and all runs must cover t_end in whole
/// steps.
ConvergenceResult converge(const ExperimentConfig& config, const std::vector<double>& h_list,
                           double reference_h);

/// Flattens (w, q, p) into one vector for norm computations.
Eigen::VectorXd flatten_state(const SpinLatticeState& state);

}  // namespace collspin
