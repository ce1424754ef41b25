#include "collspin/model.hpp"

#include <cmath>
#include <stdexcept>

namespace collspin {

MassMatrix::MassMatrix(std::vector<double> masses, int block_dim)
    : masses_(std::move(masses)), block_dim_(block_dim) {
    if (block_dim_ < 1) throw std::invalid_argument("block dimension must be >= 1");
    for (double m : masses_)
        if (!(m > 0.0)) throw std::invalid_argument("masses must be positive");
}

MassMatrix MassMatrix::uniform(int particle_count, double mass, int block_dim) {
    return MassMatrix(std::vector<double>(static_cast<std::size_t>(particle_count), mass),
                      block_dim);
}

Eigen::VectorXd MassMatrix::apply_inverse(const Eigen::VectorXd& v) const {
    if (v.size() != dimension()) throw std::invalid_argument("mass matrix dimension mismatch");
    Eigen::VectorXd out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = v[i] / masses_[i / block_dim_];
    return out;
}

double MassMatrix::kinetic_energy(const Eigen::VectorXd& p) const {
    if (p.size() != dimension()) throw std::invalid_argument("mass matrix dimension mismatch");
    double t = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) t += p[i] * p[i] / (2.0 * masses_[i / block_dim_]);
    return t;
}

PairValue lennard_jones(double r, double depth, double rest) {
    if (!(r > 0.0)) throw NonpositiveSeparationError(0, r);
    const double s = rest / r;
    const double s3 = s * s * s;
    const double s6 = s3 * s3;
    const double s12 = s6 * s6;
    return PairValue{depth * (s12 - 2.0 * s6), depth * 12.0 * (s6 - s12) / r};
}

PairValue coupling(double r, double strength, double cutoff) {
    if (r >= cutoff) return PairValue{0.0, 0.0};
    const double u = 1.0 - r / cutoff;
    return PairValue{strength * u * u * u, -3.0 * strength * u * u / cutoff};
}

SleChainModel::SleChainModel(SleChainParams params) : params_(std::move(params)) {
    if (params_.n < 2) throw std::invalid_argument("chain needs at least two particles");
    if (!(params_.length > 0.0)) throw std::invalid_argument("period must be positive");
    if (!(params_.lj_rest > 0.0)) throw std::invalid_argument("rest distance must be positive");
    if (!(params_.coupling_cutoff > 0.0)) throw std::invalid_argument("cutoff must be positive");
    if (params_.masses.empty()) {
        mass_matrix_ = MassMatrix::uniform(params_.n, 1.0);
    } else {
        if (static_cast<int>(params_.masses.size()) != params_.n)
            throw std::invalid_argument("need one mass per particle");
        mass_matrix_ = MassMatrix(params_.masses);
    }
}

Eigen::VectorXd SleChainModel::gaps(const Eigen::VectorXd& q) const {
    const int n = params_.n;
    if (q.size() != n) throw std::invalid_argument("position vector has wrong length");
    Eigen::VectorXd g(n);
    for (int i = 0; i < n; ++i) {
        g[i] = (i + 1 < n) ? q[i + 1] - q[i] : q[0] + params_.length - q[n - 1];
        if (!(g[i] > 0.0)) throw NonpositiveSeparationError(static_cast<std::size_t>(i), g[i]);
    }
    return g;
}

double SleChainModel::potential_energy(const Eigen::VectorXd& q) const {
    const Eigen::VectorXd g = gaps(q);
    double u = 0.0;
    for (int i = 0; i < params_.n; ++i)
        u += lennard_jones(g[i], params_.lj_depth, params_.lj_rest).value;
    return u;
}

double SleChainModel::magnetic_energy(const SpinConfiguration& spins,
                                      const Eigen::VectorXd& q) const {
    const int n = params_.n;
    if (static_cast<int>(spins.size()) != n)
        throw std::invalid_argument("spin configuration has wrong length");
    const Eigen::VectorXd g = gaps(q);
    const double sign = params_.sign == MagneticSign::Positive ? 1.0 : -1.0;
    double h = 0.0;
    for (int i = 0; i < n; ++i) {
        const double j = coupling(g[i], params_.coupling_strength, params_.coupling_cutoff).value;
        h += j * spins[i].dot(spins[(i + 1) % n]);
    }
    return sign * h;
}

Eigen::VectorXd SleChainModel::position_gradient(const SpinConfiguration& spins,
                                                 const Eigen::VectorXd& q) const {
    const int n = params_.n;
    if (static_cast<int>(spins.size()) != n)
        throw std::invalid_argument("spin configuration has wrong length");
    const Eigen::VectorXd g = gaps(q);
    const double sign = params_.sign == MagneticSign::Positive ? 1.0 : -1.0;

    // d/dq_i of a per-bond energy E(g_b): bond b = i-1 contributes +E'(g_b),
    // bond b = i contributes -E'(g_b) (gap b runs from particle b to b+1).
    Eigen::VectorXd bond(n);
    for (int b = 0; b < n; ++b) {
        const double lj = lennard_jones(g[b], params_.lj_depth, params_.lj_rest).derivative;
        const double jd =
            coupling(g[b], params_.coupling_strength, params_.coupling_cutoff).derivative;
        bond[b] = lj + sign * jd * spins[b].dot(spins[(b + 1) % n]);
    }
    Eigen::VectorXd grad(n);
    for (int i = 0; i < n; ++i) grad[i] = bond[(i + n - 1) % n] - bond[i];
    return grad;
}

SpinConfiguration SleChainModel::effective_field(const SpinConfiguration& spins,
                                                 const Eigen::VectorXd& q) const {
    const int n = params_.n;
    if (static_cast<int>(spins.size()) != n)
        throw std::invalid_argument("spin configuration has wrong length");
    const Eigen::VectorXd g = gaps(q);
    const double sign = params_.sign == MagneticSign::Positive ? 1.0 : -1.0;

    Eigen::VectorXd j(n);
    for (int b = 0; b < n; ++b)
        j[b] = coupling(g[b], params_.coupling_strength, params_.coupling_cutoff).value;

    SpinConfiguration field(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const int prev = (i + n - 1) % n;
        const int next = (i + 1) % n;
        field[i] = sign * (j[prev] * spins[prev] + j[i] * spins[next]);
    }
    return field;
}

EnergyTerms energy_terms(const ExtendedHamiltonian& model, const SpinLatticeState& state) {
    EnergyTerms e;
    e.kinetic = model.kinetic_energy(state.lattice.p);
    e.potential = model.potential_energy(state.lattice.q);
    e.magnetic = model.magnetic_energy(state.spins, state.lattice.q);
    e.total = e.kinetic + e.potential + e.magnetic;
    return e;
}

}  // namespace collspin
