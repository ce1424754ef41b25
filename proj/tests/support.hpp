#pragma once

// Shared helpers for the test suites: deterministic random states and
// finite-difference oracles, independent of the library's own gradients.

#include <Eigen/Core>
#include <functional>
#include <random>

#include "collspin/geometry.hpp"
#include "collspin/model.hpp"

namespace collspin::testing {

inline Spin random_unit_spin(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Spin w;
    do {
        w = Spin(gauss(rng), gauss(rng), gauss(rng));
    } while (w.norm() < 0.1);
    return w / w.norm();
}

inline CollectiveSpinPair random_pair(std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    CollectiveSpinPair pair;
    do {
        pair.z1 = {gauss(rng), gauss(rng)};
        pair.z2 = {gauss(rng), gauss(rng)};
    } while (pair.squared_radius() < 0.1);
    return pair;
}

/// An on-leaf chain state with positive gaps: positions jittered around
/// integer spacing, small random momenta, random unit spins.
inline SpinLatticeState random_chain_state(std::mt19937_64& rng, int n,
                                           double jitter = 0.1, double momentum = 0.3) {
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    SpinLatticeState state;
    state.lattice.q.resize(n);
    state.lattice.p.resize(n);
    for (int i = 0; i < n; ++i) {
        state.lattice.q[i] = (i + 1) + jitter * uni(rng);
        state.lattice.p[i] = momentum * uni(rng);
    }
    for (int i = 0; i < n; ++i) state.spins.push_back(random_unit_spin(rng));
    return state;
}

/// Central finite difference of a scalar function of one coordinate.
inline double central_difference(const std::function<double(double)>& f, double x,
                                 double scale = 1.0) {
    const double delta = 1e-5 * std::max(1.0, std::abs(scale));
    return (f(x + delta) - f(x - delta)) / (2.0 * delta);
}

}  // namespace collspin::testing
