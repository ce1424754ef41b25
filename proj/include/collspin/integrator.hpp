#pragma once

#include <cstdint>
#include <functional>

#include "collspin/geometry.hpp"
#include "collspin/model.hpp"

namespace collspin {

/// Fixed-step solver parameters. The step may be negative (the scheme is
/// time-symmetric); the tolerance bounds the max-norm change of the implicit
/// unknowns between fixed-point sweeps.
struct SolverSettings {
    double step = 0.01;
    double fp_tolerance = 1e-12;
    int max_iterations = 200;
};

/// Outcome of one implicit step.
template <typename State>
struct StepReport {
    State state;
    int iterations = 0;
    double residual = 0.0;
};

/// One step of the reduced scheme on (S^2)^n x T*R^m: the spherical midpoint
/// update for the spins coupled with a Stoermer-Verlet update for (q, p),
///
///   P   = p - (h/2) dH1/dq(q, W)
///   qn  = q + h M^{-1} P
///   W   = rho_1(w + wn)            (componentwise)
///   wn_i = w_i + (h/2) W_i x [g_i(W, q) + g_i(W, qn)]
///   pn  = P - (h/2) dH1/dq(qn, W)
///
/// solved by fixed-point iteration on (W, qn), initialized with W = w and
/// qn = q + h M^{-1} p. Spin norms are preserved up to the solver tolerance
/// because each increment is a cross product with W_i, which is parallel to
/// w_i + wn_i at the fixed point.
///
/// Throws NoConvergenceError when the iteration budget is exhausted,
/// ZeroSpinError when some w_i + wn_i drops below norm 1e-8 (antipodal
/// breakdown; reduce the step), and NonpositiveSeparationError from the
/// model on particle crossing.
StepReport<SpinLatticeState> step_reduced(const ExtendedHamiltonian& model,
                                          const SpinLatticeState& state,
                                          const SolverSettings& settings);

/// One step of the collective scheme on C^{2n} x T*R^m: the implicit
/// midpoint rule for z (as the reducible two-stage method with a = [[1/4,
/// 1/4], [1/4, 1/4]], b = [1/2, 1/2]) paired with Stoermer-Verlet for
/// (q, p), applied to the pulled-back Hamiltonian H2(z, q) = H1(hopf(z), q):
///
///   P   = p - (h/2) dH2/dq(q, Z)
///   qn  = q + h M^{-1} P
///   Z   = z + (h/4) X_z(q, Z) + (h/4) X_z(qn, Z)
///   zn  = 2 Z - z
///   pn  = P - (h/2) dH2/dq(qn, Z)
///
/// where X_z is the canonical Hamiltonian field of H2 in the z-variables,
/// with the real part of each z component taken as position and the
/// imaginary part as its conjugate momentum. The fiber radii |z1|^2 + |z2|^2
/// are quadratic invariants of X_z and are preserved up to the solver
/// tolerance; projected through the Hopf map, the step coincides with
/// step_reduced.
///
/// Throws NoConvergenceError and ZeroSpinError (stage spin norm below 1e-8).
StepReport<CollectiveState> step_collective(const ExtendedHamiltonian& model,
                                            const CollectiveState& state,
                                            const SolverSettings& settings);

/// Called by integrate with (time, state, energies) every `stride` steps.
using Observer =
    std::function<void(double, const SpinLatticeState&, const EnergyTerms&)>;

/// Aggregate counters from a time loop.
struct IntegrateStats {
    std::size_t steps = 0;
    int max_iterations = 0;
};

/// Repeated step_reduced from t = 0 to t_end (t_end / h must be a whole
/// number of steps within 1e-9). The observer, when set, fires on the
/// initial state and after every `stride`-th step. Step failures are
/// rethrown as IntegrationError carrying the 1-based step index.
SpinLatticeState integrate(const ExtendedHamiltonian& model, SpinLatticeState state,
                           const SolverSettings& settings, double t_end,
                           const Observer& observer = {}, std::size_t stride = 1,
                           IntegrateStats* stats = nullptr);

}  // namespace collspin
