#include "collspin/geometry.hpp"

#include <cmath>

namespace collspin {

Spin hopf(const CollectiveSpinPair& pair) {
    const std::complex<double> cross = pair.z1 * std::conj(pair.z2);
    return Spin(0.5 * cross.real(),
                0.5 * cross.imag(),
                0.25 * (std::norm(pair.z1) - std::norm(pair.z2)));
}

std::pair<SpinConfiguration, LatticeState> hopf_all(const CollectiveState& state) {
    SpinConfiguration spins;
    spins.reserve(state.pairs.size());
    for (const auto& pair : state.pairs) spins.push_back(hopf(pair));
    return {std::move(spins), state.lattice};
}

CollectiveSpinPair lift(const Spin& spin, std::size_t index) {
    const double r = spin.norm();
    if (r == 0.0) throw ZeroSpinError(index, "lift");

    CollectiveSpinPair pair;
    if (r + spin.z() >= r - spin.z()) {
        const double z1 = std::sqrt(2.0 * r + 2.0 * spin.z());
        pair.z1 = z1;
        pair.z2 = std::complex<double>(2.0 * spin.x() / z1, -2.0 * spin.y() / z1);
    } else {
        const double z2 = std::sqrt(2.0 * r - 2.0 * spin.z());
        pair.z1 = std::complex<double>(2.0 * spin.x() / z2, 2.0 * spin.y() / z2);
        pair.z2 = z2;
    }
    return pair;
}

CollectiveState lift_all(const SpinLatticeState& state) {
    CollectiveState out;
    out.pairs.reserve(state.spins.size());
    for (std::size_t i = 0; i < state.spins.size(); ++i)
        out.pairs.push_back(lift(state.spins[i], i));
    out.lattice = state.lattice;
    return out;
}

SpinConfiguration normalize_spins(const SpinConfiguration& spins) {
    SpinConfiguration out;
    out.reserve(spins.size());
    for (std::size_t i = 0; i < spins.size(); ++i) {
        const double n = spins[i].norm();
        if (n == 0.0) throw ZeroSpinError(i, "normalize_spins");
        out.push_back(spins[i] / n);
    }
    return out;
}

SpinLatticeState project(const SpinConfiguration& ambient_spins, const LatticeState& lattice) {
    return SpinLatticeState{normalize_spins(ambient_spins), lattice};
}

namespace {

// Analytic gradients of the Hopf components with respect to the real
// coordinates (a, b, c, d) = (Re z1, Im z1, Re z2, Im z2).
// J1 = (ac + bd)/2, J2 = (bc - ad)/2, J3 = (a^2 + b^2 - c^2 - d^2)/4.
Eigen::Matrix<double, 3, 4> hopf_jacobian(const CollectiveSpinPair& pair) {
    const double a = pair.z1.real(), b = pair.z1.imag();
    const double c = pair.z2.real(), d = pair.z2.imag();
    Eigen::Matrix<double, 3, 4> jac;
    jac << 0.5 * c, 0.5 * d, 0.5 * a, 0.5 * b,
          -0.5 * d, 0.5 * c, 0.5 * b, -0.5 * a,
           0.5 * a, 0.5 * b, -0.5 * c, -0.5 * d;
    return jac;
}

}  // namespace

Eigen::Matrix3d verify_hopf_poisson(const CollectiveSpinPair& pair) {
    const Eigen::Matrix<double, 3, 4> jac = hopf_jacobian(pair);
    const Spin w = hopf(pair);

    // Canonical bracket with (q, p) = (Im z_k, Re z_k):
    //   {f, g} = sum_k  df/db dg/da - df/da dg/db   (per pair (a,b), (c,d)).
    Eigen::Matrix3d residual;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            const double bracket = jac(i, 1) * jac(j, 0) - jac(i, 0) * jac(j, 1) +
                                   jac(i, 3) * jac(j, 2) - jac(i, 2) * jac(j, 3);
            const Spin ei = Spin::Unit(i), ej = Spin::Unit(j);
            residual(i, j) = bracket - w.dot(ei.cross(ej));
        }
    }
    return residual;
}

}  // namespace collspin
