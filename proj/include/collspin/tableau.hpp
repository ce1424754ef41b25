#pragma once

#include <Eigen/Core>
#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "collspin/errors.hpp"

namespace collspin {

/// Exact rational coefficient type; all tableau verdicts are computed in
/// exact arithmetic, so they carry no tolerance.
using Rational = boost::multiprecision::cpp_rational;

/// Runge-Kutta coefficients a (s x s) and b (s), stored as exact rationals.
struct ButcherTableau {
    std::vector<std::vector<Rational>> a;
    std::vector<Rational> b;

    int stages() const { return static_cast<int>(b.size()); }
};

/// A partitioned pair: tableau `primary` advances the positions, `hat` the
/// momenta.
struct TableauPair {
    ButcherTableau primary;
    ButcherTableau hat;
};

/// One component of a multi-component scheme: either a plain Runge-Kutta
/// method acting on a symplectic block, or a partitioned pair acting on a
/// position/momentum split block.
using SchemeComponent = std::variant<ButcherTableau, TableauPair>;

/// An N-component partitioned scheme; all components must share one stage
/// count.
struct PartitionedScheme {
    std::vector<SchemeComponent> components;
};

/// Location of a violated algebraic condition.
struct ConditionViolation {
    int component = 0;   ///< component index, 0-based
    int condition = 1;   ///< 1 = coupling identity, 2 = b == b_hat, 3 = cross-component b
    int i = 0;           ///< stage indices, 0-based (condition 1), stage (2, 3)
    int j = 0;
};

/// Verdict of a coefficient check; empty violations means pass.
struct CheckResult {
    std::vector<ConditionViolation> violations;

    bool pass() const { return violations.empty(); }
};

/// Exact check of b_i b_j == b_i a_ij + b_j a_ji for all i, j: the condition
/// under which the method preserves quadratic invariants (and is symplectic
/// for Hamiltonian systems on a symplectic block).
CheckResult check_rk_symplectic(const ButcherTableau& t);

/// Exact check of the partitioned conditions
///   (1) bh_i b_j == bh_i a_ij + b_j ah_ji  for all i, j
///   (2) b_i == bh_i                        for all i.
/// Throws StageMismatchError when the stage counts differ.
CheckResult check_partitioned_pair(const TableauPair& pair);

/// Runs the per-component checks plus the cross-component condition that all
/// b vectors coincide. Throws StageMismatchError when components disagree on
/// the stage count. Violations are tagged with their component index; the
/// cross-component condition reports component -1.
CheckResult check_scheme(const PartitionedScheme& scheme);

/// The scheme the production stepper implements: the reducible two-stage
/// midpoint method for the symplectic block paired with Stoermer-Verlet for
/// the position/momentum block.
PartitionedScheme production_scheme();

/// Explicit Euler in every role; fails the coupling condition.
PartitionedScheme explicit_euler_scheme();

// ---------------------------------------------------------------------------
// Empirical quadratic-invariant harness (verification tool, not the
// production stepper). Integrates random linear Hamiltonian systems that
// possess a blockwise quadratic first integral and measures how well the
// scheme preserves it.
// ---------------------------------------------------------------------------

/// A linear Hamiltonian test system: one block per scheme component. Block k
/// evolves as  dy^k/dt = K_k (S y)^k  with K_k skew and S symmetric over the
/// stacked y, constructed so that I(y) = sum_k y^k^T B_k y^k is a first
/// integral. For pair components K_k is the canonical [[0, I], [-I, 0]] and
/// B_k couples only positions with momenta (the class of invariants a
/// compatible partitioned pair preserves).
struct LinearInvariantSystem {
    std::vector<int> block_sizes;
    std::vector<Eigen::MatrixXd> skew;      // K_k per block
    std::vector<Eigen::MatrixXd> invariant; // B_k per block
    Eigen::MatrixXd hamiltonian;            // S, full
    Eigen::VectorXd initial;

    double invariant_value(const Eigen::VectorXd& y) const;
};

/// One step of the generic N-component partitioned Runge-Kutta update on a
/// linear system, stages solved by fixed-point iteration. A dense, slow
/// verification path; not the production stepper.
Eigen::VectorXd prk_linear_step(const PartitionedScheme& scheme,
                                const LinearInvariantSystem& system,
                                const Eigen::VectorXd& y, double h);

/// Draws `trials` random systems matching the scheme's component structure
/// (deterministic for a fixed seed), advances each a few steps at step h,
/// and returns the largest per-step drift of the quadratic invariant.
/// Schemes satisfying the coefficient conditions stay at rounding level;
/// schemes violating them drift by orders of magnitude more.
double empirical_invariant_test(const PartitionedScheme& scheme, int trials,
                                double h = 0.1, int steps_per_trial = 5,
                                std::uint64_t seed = 20240901u);

}  // namespace collspin
