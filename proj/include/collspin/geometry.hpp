#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <complex>
#include <utility>
#include <vector>

#include "collspin/errors.hpp"

namespace collspin {

/// A magnetic moment direction. Unit norm when it represents a point of the
/// sphere; any nonzero vector when it represents a point of the ambient
/// Poisson space R^3 \ {0}.
using Spin = Eigen::Vector3d;

/// Ordered list of n spins.
using SpinConfiguration = std::vector<Spin>;

/// Cotangent-bundle part of the state: positions q and conjugate momenta p,
/// both of length m.
struct LatticeState {
    Eigen::VectorXd q;
    Eigen::VectorXd p;

    Eigen::Index dimension() const { return q.size(); }
};

/// A point of the phase space (S^2)^n x T*R^m: unit spins plus lattice.
struct SpinLatticeState {
    SpinConfiguration spins;
    LatticeState lattice;
};

/// One lifted spin: a pair (z1, z2) in C^2. The spin it represents is
/// recovered by the Hopf map; pairs differing by a common unit phase
/// represent the same spin (the fiber direction).
struct CollectiveSpinPair {
    std::complex<double> z1;
    std::complex<double> z2;

    /// |z1|^2 + |z2|^2; equals four times the norm of the mapped spin.
    double squared_radius() const { return std::norm(z1) + std::norm(z2); }
};

/// A point of the canonical space C^{2n} x T*R^m.
struct CollectiveState {
    std::vector<CollectiveSpinPair> pairs;
    LatticeState lattice;
};

/// The Hopf map C^2 -> R^3,
///
///   (z1, z2) |-> (1/4) * (2 Re(z1 conj(z2)), 2 Im(z1 conj(z2)), |z1|^2 - |z2|^2).
///
/// With the 1/4 prefactor used throughout this library, a spin of norm r
/// pulls back to pairs with |z1|^2 + |z2|^2 = 4r; in particular unit spins
/// correspond to pairs of squared radius 4. The map is invariant under a
/// common phase rotation of (z1, z2).
Spin hopf(const CollectiveSpinPair& pair);

/// Applies the Hopf map componentwise and passes the lattice through
/// unchanged. The returned spins are ambient (not normalized).
std::pair<SpinConfiguration, LatticeState> hopf_all(const CollectiveState& state);

/// A right inverse (section) of the Hopf map: hopf(lift(w)) == w for every
/// nonzero w. The section picks the branch that avoids dividing by a small
/// number near either pole: with r = |w|, if r + w3 >= r - w3 it sets
/// z1 = sqrt(2r + 2 w3) real and z2 = 2 (w1 - i w2) / z1, otherwise
/// z2 = sqrt(2r - 2 w3) real and z1 = 2 (w1 + i w2) / z2.
///
/// Throws ZeroSpinError when |w| = 0.
CollectiveSpinPair lift(const Spin& spin, std::size_t index = 0);

/// Lifts every spin of an on-leaf state; the lattice passes through.
CollectiveState lift_all(const SpinLatticeState& state);

/// Projects each spin to the unit sphere (the map rho_1). Throws
/// ZeroSpinError naming the first offending index if any spin is zero.
SpinConfiguration normalize_spins(const SpinConfiguration& spins);

/// The projection rho from the ambient space to the leaf: normalizes the
/// spins and passes the lattice through.
SpinLatticeState project(const SpinConfiguration& ambient_spins, const LatticeState& lattice);

/// Verification utility: the 3x3 matrix of residuals
///
///   R[a][b] = {J_a, J_b}(z) - <w, e_a x e_b>,    w = hopf(z),
///
/// where {.,.} is the canonical Poisson bracket on C^2 = T*R^2 (pairing the
/// imaginary part of each z_k as position with the real part as momentum)
/// and J_a are the components of the Hopf map, both evaluated from analytic
/// gradients. All residuals vanish identically; the returned matrix measures
/// rounding only.
Eigen::Matrix3d verify_hopf_poisson(const CollectiveSpinPair& pair);

}  // namespace collspin
