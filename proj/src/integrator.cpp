#include "collspin/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace collspin {

namespace {

constexpr double kAntipodalFloor = 1e-8;

void validate(const SolverSettings& s) {
    if (s.step == 0.0) throw std::invalid_argument("step must be nonzero");
    if (!(s.fp_tolerance > 0.0)) throw std::invalid_argument("fp tolerance must be positive");
    if (s.max_iterations < 1) throw std::invalid_argument("need at least one iteration");
}

double max_abs_diff(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

StepReport<SpinLatticeState> step_reduced(const ExtendedHamiltonian& model,
                                          const SpinLatticeState& state,
                                          const SolverSettings& settings) {
    validate(settings);
    const double h = settings.step;
    const MassMatrix& mass = model.mass_matrix();
    const std::size_t n = state.spins.size();

    const Eigen::VectorXd& q = state.lattice.q;
    const Eigen::VectorXd& p = state.lattice.p;

    SpinConfiguration mid = state.spins;  // W, the normalized spin midpoints
    SpinConfiguration next(n);            // w-tilde
    Eigen::VectorXd q_next = q + h * mass.apply_inverse(p);
    Eigen::VectorXd momentum_half = p;

    double residual = 0.0;
    int iterations = 0;
    for (;; ++iterations) {
        if (iterations >= settings.max_iterations)
            throw NoConvergenceError(iterations, residual);

        momentum_half = p - 0.5 * h * model.position_gradient(mid, q);
        const Eigen::VectorXd q_new = q + h * mass.apply_inverse(momentum_half);

        const SpinConfiguration field_q = model.effective_field(mid, q);
        const SpinConfiguration field_qn = model.effective_field(mid, q_new);
        double spin_change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] = state.spins[i] +
                      0.5 * h * mid[i].cross(field_q[i] + field_qn[i]);
            const Spin sum = state.spins[i] + next[i];
            const double norm = sum.norm();
            if (norm < kAntipodalFloor) throw ZeroSpinError(i, "antipodal midpoint");
            const Spin mid_new = sum / norm;
            spin_change = std::max(spin_change, (mid_new - mid[i]).cwiseAbs().maxCoeff());
            mid[i] = mid_new;
        }

        residual = std::max(spin_change, max_abs_diff(q_new, q_next));
        q_next = q_new;
        if (residual <= settings.fp_tolerance) {
            ++iterations;
            break;
        }
    }

    StepReport<SpinLatticeState> report;
    report.state.spins = std::move(next);
    report.state.lattice.q = q_next;
    report.state.lattice.p = momentum_half - 0.5 * h * model.position_gradient(mid, q_next);
    report.iterations = iterations;
    report.residual = residual;
    return report;
}

namespace {

// dH2/dz for one pair, as the 4-vector of partials with respect to
// (a, b, c, d) = (Re z1, Im z1, Re z2, Im z2). `ambient_gradient` is the
// gradient of the ray-constant H1 at the ambient spin hopf(z).
Eigen::Vector4d pullback_gradient(const CollectiveSpinPair& z, const Spin& ambient_gradient) {
    const double a = z.z1.real(), b = z.z1.imag();
    const double c = z.z2.real(), d = z.z2.imag();
    const Spin& u = ambient_gradient;
    return Eigen::Vector4d(0.5 * (u.x() * c - u.y() * d + u.z() * a),
                           0.5 * (u.x() * d + u.y() * c + u.z() * b),
                           0.5 * (u.x() * a + u.y() * b - u.z() * c),
                           0.5 * (u.x() * b - u.y() * a - u.z() * d));
}

struct StageGeometry {
    SpinConfiguration unit_spins;   // rho_1(hopf(Z))
    std::vector<Spin> ambient;      // hopf(Z)
    std::vector<double> norms;      // |hopf(Z)|
};

StageGeometry stage_geometry(const std::vector<CollectiveSpinPair>& pairs) {
    StageGeometry g;
    const std::size_t n = pairs.size();
    g.unit_spins.resize(n);
    g.ambient.resize(n);
    g.norms.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        g.ambient[i] = hopf(pairs[i]);
        g.norms[i] = g.ambient[i].norm();
        if (g.norms[i] < kAntipodalFloor) throw ZeroSpinError(i, "collective stage");
        g.unit_spins[i] = g.ambient[i] / g.norms[i];
    }
    return g;
}

// Canonical z-field of H2 at stage pairs Z and positions q: per pair,
// (da/dt, db/dt, dc/dt, dd/dt) = (dH/db, -dH/da, dH/dd, -dH/dc), with the
// gradient of H1 pulled through the normalization and the Hopf map.
std::vector<Eigen::Vector4d> z_field(const ExtendedHamiltonian& model,
                                     const std::vector<CollectiveSpinPair>& pairs,
                                     const StageGeometry& geom, const Eigen::VectorXd& q) {
    const std::size_t n = pairs.size();
    const SpinConfiguration raw_field = model.effective_field(geom.unit_spins, q);
    std::vector<Eigen::Vector4d> field(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Spin& unit = geom.unit_spins[i];
        const Spin ambient_grad =
            (raw_field[i] - unit.dot(raw_field[i]) * unit) / geom.norms[i];
        const Eigen::Vector4d grad = pullback_gradient(pairs[i], ambient_grad);
        field[i] = Eigen::Vector4d(grad[1], -grad[0], grad[3], -grad[2]);
    }
    return field;
}

}  // namespace

StepReport<CollectiveState> step_collective(const ExtendedHamiltonian& model,
                                            const CollectiveState& state,
                                            const SolverSettings& settings) {
    validate(settings);
    const double h = settings.step;
    const MassMatrix& mass = model.mass_matrix();
    const std::size_t n = state.pairs.size();

    const Eigen::VectorXd& q = state.lattice.q;
    const Eigen::VectorXd& p = state.lattice.p;

    std::vector<CollectiveSpinPair> stage = state.pairs;  // Z
    Eigen::VectorXd q_next = q + h * mass.apply_inverse(p);
    Eigen::VectorXd momentum_half = p;
    StageGeometry geom = stage_geometry(stage);

    double residual = 0.0;
    int iterations = 0;
    for (;; ++iterations) {
        if (iterations >= settings.max_iterations)
            throw NoConvergenceError(iterations, residual);

        momentum_half = p - 0.5 * h * model.position_gradient(geom.unit_spins, q);
        const Eigen::VectorXd q_new = q + h * mass.apply_inverse(momentum_half);

        const std::vector<Eigen::Vector4d> field_q = z_field(model, stage, geom, q);
        const std::vector<Eigen::Vector4d> field_qn = z_field(model, stage, geom, q_new);
        double z_change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Eigen::Vector4d incr = 0.25 * h * (field_q[i] + field_qn[i]);
            CollectiveSpinPair updated{
                state.pairs[i].z1 + std::complex<double>(incr[0], incr[1]),
                state.pairs[i].z2 + std::complex<double>(incr[2], incr[3])};
            z_change = std::max(z_change,
                                std::max(std::abs(updated.z1 - stage[i].z1),
                                         std::abs(updated.z2 - stage[i].z2)));
            stage[i] = updated;
        }

        residual = std::max(z_change, max_abs_diff(q_new, q_next));
        q_next = q_new;
        geom = stage_geometry(stage);
        if (residual <= settings.fp_tolerance) {
            ++iterations;
            break;
        }
    }

    StepReport<CollectiveState> report;
    report.state.pairs.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        report.state.pairs[i].z1 = 2.0 * stage[i].z1 - state.pairs[i].z1;
        report.state.pairs[i].z2 = 2.0 * stage[i].z2 - state.pairs[i].z2;
    }
    report.state.lattice.q = q_next;
    report.state.lattice.p =
        momentum_half - 0.5 * h * model.position_gradient(geom.unit_spins, q_next);
    report.iterations = iterations;
    report.residual = residual;
    return report;
}

SpinLatticeState integrate(const ExtendedHamiltonian& model, SpinLatticeState state,
                           const SolverSettings& settings, double t_end,
                           const Observer& observer, std::size_t stride,
                           IntegrateStats* stats) {
    validate(settings);
    if (stride == 0) throw std::invalid_argument("stride must be >= 1");
    const double ratio = t_end / settings.step;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9)
        throw std::invalid_argument("t_end is not a whole number of steps");
    if (rounded < 0.0) throw std::invalid_argument("t_end and step have opposite signs");
    const std::size_t steps = static_cast<std::size_t>(rounded);

    if (stats) *stats = IntegrateStats{steps, 0};
    if (observer) observer(0.0, state, energy_terms(model, state));

    for (std::size_t k = 1; k <= steps; ++k) {
        try {
            auto report = step_reduced(model, state, settings);
            state = std::move(report.state);
            if (stats) stats->max_iterations = std::max(stats->max_iterations, report.iterations);
        } catch (const Error& e) {
            throw IntegrationError(k, e.what());
        }
        if (observer && k % stride == 0)
            observer(static_cast<double>(k) * settings.step, state, energy_terms(model, state));
    }
    return state;
}

}  // namespace collspin
