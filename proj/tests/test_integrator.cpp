#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "collspin/integrator.hpp"
#include "support.hpp"

using namespace collspin;

namespace {

SleChainModel chain(int n, double j0 = 10.0, double u0 = 1.0) {
    SleChainParams params;
    params.n = n;
    params.length = static_cast<double>(n);
    params.lj_depth = u0;
    params.lj_rest = 1.0;
    params.coupling_strength = j0;
    params.coupling_cutoff = 1.5;
    return SleChainModel(params);
}

// Plain Stoermer-Verlet on the chain potential alone; the oracle for the
// decoupled (q, p) dynamics.
void verlet_step(const SleChainModel& model, const SpinConfiguration& spins,
                 Eigen::VectorXd& q, Eigen::VectorXd& p, double h) {
    const Eigen::VectorXd half = p - 0.5 * h * model.position_gradient(spins, q);
    q += h * model.mass_matrix().apply_inverse(half);
    p = half - 0.5 * h * model.position_gradient(spins, q);
}

double state_distance(const SpinLatticeState& a, const SpinLatticeState& b) {
    double d = (a.lattice.q - b.lattice.q).cwiseAbs().maxCoeff();
    d = std::max(d, (a.lattice.p - b.lattice.p).cwiseAbs().maxCoeff());
    for (std::size_t i = 0; i < a.spins.size(); ++i)
        d = std::max(d, (a.spins[i] - b.spins[i]).cwiseAbs().maxCoeff());
    return d;
}

double collective_distance(const CollectiveState& a, const CollectiveState& b) {
    double d = (a.lattice.q - b.lattice.q).cwiseAbs().maxCoeff();
    d = std::max(d, (a.lattice.p - b.lattice.p).cwiseAbs().maxCoeff());
    for (std::size_t i = 0; i < a.pairs.size(); ++i) {
        d = std::max(d, std::abs(a.pairs[i].z1 - b.pairs[i].z1));
        d = std::max(d, std::abs(a.pairs[i].z2 - b.pairs[i].z2));
    }
    return d;
}

}  // namespace

TEST_CASE("free flight: no potential, no coupling") {
    const SleChainModel model = chain(2, 0.0, 0.0);
    std::mt19937_64 rng(101);
    SpinLatticeState state = testing::random_chain_state(rng, 2, 0.0, 0.2);

    SolverSettings settings{0.25, 1e-12, 50};
    const auto report = step_reduced(model, state, settings);

    CHECK((report.state.lattice.q -
           (state.lattice.q + 0.25 * state.lattice.p)).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK(report.state.lattice.p == state.lattice.p);
    for (int i = 0; i < 2; ++i) CHECK(report.state.spins[i] == state.spins[i]);
}

TEST_CASE("without couplings the lattice follows classical Verlet exactly") {
    const SleChainModel model = chain(4, 0.0, 1.0);
    std::mt19937_64 rng(103);
    SpinLatticeState state = testing::random_chain_state(rng, 4, 0.05, 0.3);

    Eigen::VectorXd q = state.lattice.q, p = state.lattice.p;
    SolverSettings settings{0.01, 1e-13, 100};
    for (int step = 0; step < 100; ++step) {
        const auto report = step_reduced(model, state, settings);
        state = report.state;
        verlet_step(model, state.spins, q, p, settings.step);
        CHECK((state.lattice.q - q).cwiseAbs().maxCoeff() <= 1e-13);
        CHECK((state.lattice.p - p).cwiseAbs().maxCoeff() <= 1e-13);
    }
}

TEST_CASE("frozen lattice spins match a high-accuracy reference") {
    // Two spins with effectively immobile particles: the spin subsystem
    // reduces to dw_i/dt = w_i x g_i with constant couplings. Reference by
    // classical RK4 at a far smaller step.
    SleChainParams params;
    params.n = 2;
    params.length = 2.0;
    params.masses = {1e12, 1e12};
    params.lj_depth = 1.0;
    params.lj_rest = 1.0;
    params.coupling_strength = 10.0;
    params.coupling_cutoff = 1.5;
    const SleChainModel model(params);

    std::mt19937_64 rng(107);
    SpinLatticeState state;
    state.lattice.q = Eigen::Vector2d(1.0, 2.0);
    state.lattice.p = Eigen::Vector2d::Zero();
    state.spins = {testing::random_unit_spin(rng), testing::random_unit_spin(rng)};

    // reference: RK4 on the spin block at h = 1e-5
    const Eigen::VectorXd q0 = state.lattice.q;
    const auto derivative = [&](const SpinConfiguration& w) {
        const SpinConfiguration field = model.effective_field(w, q0);
        SpinConfiguration dot(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) dot[i] = w[i].cross(field[i]);
        return dot;
    };
    SpinConfiguration reference = state.spins;
    const double h_ref = 1e-5;
    const int ref_steps = 100000;  // t = 1
    for (int step = 0; step < ref_steps; ++step) {
        const SpinConfiguration k1 = derivative(reference);
        SpinConfiguration tmp(2);
        for (int i = 0; i < 2; ++i) tmp[i] = reference[i] + 0.5 * h_ref * k1[i];
        const SpinConfiguration k2 = derivative(tmp);
        for (int i = 0; i < 2; ++i) tmp[i] = reference[i] + 0.5 * h_ref * k2[i];
        const SpinConfiguration k3 = derivative(tmp);
        for (int i = 0; i < 2; ++i) tmp[i] = reference[i] + h_ref * k3[i];
        const SpinConfiguration k4 = derivative(tmp);
        for (int i = 0; i < 2; ++i)
            reference[i] += h_ref / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }

    SolverSettings settings{1e-3, 1e-13, 100};
    for (int step = 0; step < 1000; ++step) state = step_reduced(model, state, settings).state;

    for (int i = 0; i < 2; ++i)
        CHECK((state.spins[i] - reference[i]).norm() <= 1e-5);
}

TEST_CASE("collective step: free flight keeps the pairs") {
    const SleChainModel model = chain(2, 0.0, 0.0);
    std::mt19937_64 rng(109);
    CollectiveState state = lift_all(testing::random_chain_state(rng, 2, 0.0, 0.2));

    SolverSettings settings{0.2, 1e-12, 50};
    const auto report = step_collective(model, state, settings);
    for (int i = 0; i < 2; ++i) {
        CHECK(report.state.pairs[i].z1 == state.pairs[i].z1);
        CHECK(report.state.pairs[i].z2 == state.pairs[i].z2);
    }
    CHECK((report.state.lattice.q -
           (state.lattice.q + 0.2 * state.lattice.p)).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("collective step preserves the pair radii") {
    const SleChainModel model = chain(3);
    std::mt19937_64 rng(113);
    SolverSettings settings{0.02, 1e-13, 200};
    for (int trial = 0; trial < 10; ++trial) {
        CollectiveState state = lift_all(testing::random_chain_state(rng, 3, 0.05, 0.3));
        const auto report = step_collective(model, state, settings);
        for (int i = 0; i < 3; ++i)
            CHECK(report.state.pairs[i].squared_radius() ==
                  doctest::Approx(state.pairs[i].squared_radius()).epsilon(1e-12));
    }
}

TEST_CASE("collective and reduced steps coincide through the Hopf map") {
    const SleChainModel model = chain(4);
    std::mt19937_64 rng(127);
    SolverSettings settings{0.01, 1e-13, 300};
    for (int trial = 0; trial < 20; ++trial) {
        const SpinLatticeState state = testing::random_chain_state(rng, 4, 0.05, 0.3);

        const SpinLatticeState reduced = step_reduced(model, state, settings).state;
        const CollectiveState collective =
            step_collective(model, lift_all(state), settings).state;
        const auto [ambient, lattice] = hopf_all(collective);
        const SpinLatticeState projected = project(ambient, lattice);

        CHECK(state_distance(projected, reduced) <= 100.0 * settings.fp_tolerance);
    }
}

TEST_CASE("a phase on one pair commutes with the collective step") {
    const SleChainModel model = chain(3);
    std::mt19937_64 rng(131);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    SolverSettings settings{0.01, 1e-13, 300};

    for (int trial = 0; trial < 20; ++trial) {
        const CollectiveState state = lift_all(testing::random_chain_state(rng, 3, 0.05, 0.3));
        const std::complex<double> phase = std::polar(1.0, angle(rng));

        CollectiveState rotated = state;
        rotated.pairs[1].z1 *= phase;
        rotated.pairs[1].z2 *= phase;

        CollectiveState stepped_then_rotated = step_collective(model, state, settings).state;
        stepped_then_rotated.pairs[1].z1 *= phase;
        stepped_then_rotated.pairs[1].z2 *= phase;

        const CollectiveState rotated_then_stepped =
            step_collective(model, rotated, settings).state;

        CHECK(collective_distance(stepped_then_rotated, rotated_then_stepped) <=
              10.0 * settings.fp_tolerance);
    }
}

TEST_CASE("spin norms survive every accepted step") {
    const SleChainModel model = chain(5);
    std::mt19937_64 rng(137);
    SolverSettings settings{0.02, 1e-12, 200};
    for (int trial = 0; trial < 10; ++trial) {
        SpinLatticeState state = testing::random_chain_state(rng, 5, 0.05, 0.3);
        for (int step = 0; step < 20; ++step) {
            state = step_reduced(model, state, settings).state;
            for (const Spin& w : state.spins)
                CHECK(std::abs(w.norm() - 1.0) <= 10.0 * settings.fp_tolerance);
        }
    }
}

TEST_CASE("a step forward and a step back return to the start") {
    const SleChainModel model = chain(4);
    std::mt19937_64 rng(139);
    SolverSettings forward{0.01, 1e-13, 300};
    SolverSettings backward = forward;
    backward.step = -forward.step;

    for (int trial = 0; trial < 20; ++trial) {
        const SpinLatticeState state = testing::random_chain_state(rng, 4, 0.05, 0.3);
        const SpinLatticeState there = step_reduced(model, state, forward).state;
        const SpinLatticeState back = step_reduced(model, there, backward).state;
        CHECK(state_distance(back, state) <= 100.0 * forward.fp_tolerance);
    }
}

TEST_CASE("integrate") {
    const SleChainModel model = chain(3);
    std::mt19937_64 rng(149);
    const SpinLatticeState state = testing::random_chain_state(rng, 3, 0.05, 0.3);
    SolverSettings settings{0.01, 1e-12, 200};

    SUBCASE("zero steps returns the input") {
        const SpinLatticeState out = integrate(model, state, settings, 0.0);
        CHECK(state_distance(out, state) == 0.0);
    }

    SUBCASE("fractional step counts are rejected") {
        CHECK_THROWS_AS(integrate(model, state, settings, 0.0153), std::invalid_argument);
    }

    SUBCASE("observer fires on the stride") {
        int calls = 0;
        double last_time = -1.0;
        const Observer observer = [&](double t, const SpinLatticeState&, const EnergyTerms& e) {
            ++calls;
            last_time = t;
            CHECK(e.total == e.kinetic + e.potential + e.magnetic);
        };
        integrate(model, state, settings, 0.1, observer, 5);
        CHECK(calls == 3);  // t = 0, 0.05, 0.1
        CHECK(last_time == doctest::Approx(0.1));
    }

    SUBCASE("step failures carry the step index") {
        SolverSettings starved{0.01, 1e-14, 2};
        try {
            integrate(model, state, starved, 1.0);
            FAIL("expected IntegrationError");
        } catch (const IntegrationError& e) {
            CHECK(e.step() >= 1);
            CHECK(std::string(e.what()).find("converge") != std::string::npos);
        }
    }

    SUBCASE("stats report the worst iteration count") {
        IntegrateStats stats;
        integrate(model, state, settings, 0.1, {}, 1, &stats);
        CHECK(stats.steps == 10);
        CHECK(stats.max_iterations >= 2);
        CHECK(stats.max_iterations <= settings.max_iterations);
    }
}

TEST_CASE("the solver reports when it cannot converge") {
    // Frozen lattice, so only the spin fixed point is in play; a step this
    // large rotates spins by more than pi per step and the midpoint map has
    // no fixed point to find.
    SleChainParams params;
    params.n = 2;
    params.length = 2.0;
    params.masses = {1e12, 1e12};
    params.coupling_strength = 10.0;
    params.coupling_cutoff = 1.5;
    const SleChainModel model(params);

    std::mt19937_64 rng(151);
    SpinLatticeState state;
    state.lattice.q = Eigen::Vector2d(1.0, 2.0);
    state.lattice.p = Eigen::Vector2d::Zero();
    state.spins = {testing::random_unit_spin(rng), testing::random_unit_spin(rng)};

    SolverSettings settings{5.0, 1e-12, 100};
    try {
        step_reduced(model, state, settings);
        FAIL("expected NoConvergenceError");
    } catch (const NoConvergenceError& e) {
        CHECK(e.iterations() == 100);
        CHECK(e.residual() > settings.fp_tolerance);
    }
}

TEST_CASE("antipodal midpoints abort with a zero-spin error") {
    // A crafted single-spin field that first throws the iterate far away and
    // then places the next iterate almost exactly opposite the initial spin,
    // driving w + w_next under the breakdown floor.
    static constexpr double kFling = 1e12;
    class AdversarialField final : public ExtendedHamiltonian {
      public:
        explicit AdversarialField(double h) : mass_({1.0}), h_(h) {}
        int spin_count() const override { return 1; }
        int lattice_dimension() const override { return 1; }
        const MassMatrix& mass_matrix() const override { return mass_; }
        double potential_energy(const Eigen::VectorXd&) const override { return 0.0; }
        double magnetic_energy(const SpinConfiguration&, const Eigen::VectorXd&) const override {
            return 0.0;
        }
        Eigen::VectorXd position_gradient(const SpinConfiguration&,
                                          const Eigen::VectorXd& q) const override {
            return Eigen::VectorXd::Zero(q.size());
        }
        SpinConfiguration effective_field(const SpinConfiguration& w,
                                          const Eigen::VectorXd&) const override {
            const Spin x = Spin::UnitX();
            if (w[0].dot(x) > 0.5) return {Spin(0.0, 0.0, kFling / h_)};
            const Spin v = -2.0 * x + 2.0 * x.dot(w[0]) * w[0];
            return {v.cross(w[0]) / h_};
        }

      private:
        MassMatrix mass_;
        double h_;
    };

    const double h = 0.5;
    AdversarialField model(h);
    SpinLatticeState state;
    state.spins = {Spin::UnitX()};
    state.lattice.q = Eigen::VectorXd::Zero(1);
    state.lattice.p = Eigen::VectorXd::Zero(1);

    SolverSettings settings{h, 1e-12, 50};
    CHECK_THROWS_AS(step_reduced(model, state, settings), ZeroSpinError);
}

TEST_CASE("collective step rejects collapsed pairs") {
    const SleChainModel model = chain(2);
    CollectiveState state;
    state.pairs = {{{0.0, 0.0}, {0.0, 0.0}}, {{2.0, 0.0}, {0.0, 0.0}}};
    state.lattice.q = Eigen::Vector2d(1.0, 2.0);
    state.lattice.p = Eigen::Vector2d::Zero();

    SolverSettings settings{0.01, 1e-12, 50};
    CHECK_THROWS_AS(step_collective(model, state, settings), ZeroSpinError);
}
