#pragma once

#include <Eigen/Core>
#include <vector>

#include "collspin/errors.hpp"
#include "collspin/geometry.hpp"

namespace collspin {

/// Block-diagonal mass matrix: k particles with d spatial dimensions each,
/// so the lattice dimension is m = d * k.
class MassMatrix {
  public:
    MassMatrix() = default;
    MassMatrix(std::vector<double> masses, int block_dim = 1);

    /// Uniform mass for k particles.
    static MassMatrix uniform(int particle_count, double mass, int block_dim = 1);

    int particle_count() const { return static_cast<int>(masses_.size()); }
    int block_dim() const { return block_dim_; }
    int dimension() const { return block_dim_ * particle_count(); }
    double mass(int particle) const { return masses_[particle]; }
    const std::vector<double>& masses() const { return masses_; }

    /// M^{-1} v.
    Eigen::VectorXd apply_inverse(const Eigen::VectorXd& v) const;

    /// T_L(p) = sum_i |p_i|^2 / (2 m_i).
    double kinetic_energy(const Eigen::VectorXd& p) const;

  private:
    std::vector<double> masses_;
    int block_dim_ = 1;
};

/// Kinetic, potential and magnetic energies of a state, plus their sum.
struct EnergyTerms {
    double kinetic = 0.0;
    double potential = 0.0;
    double magnetic = 0.0;
    double total = 0.0;
};

/// An extended Hamiltonian H(w, q, p) = T_L(p) + H1(w, q) with
/// H1(w, q) = U_L(q) + H_m(w, q), where H_m is evaluated at unit spins and
/// extended off the spheres as a constant along rays. magnetic_energy and
/// effective_field work with the plain multilinear form in w (no internal
/// normalization), so the field is the gradient of that extension with w
/// treated as free R^3 variables; callers pass unit spins for on-leaf
/// evaluations and apply the ray chain rule themselves when they need the
/// ambient gradient.
class ExtendedHamiltonian {
  public:
    virtual ~ExtendedHamiltonian() = default;

    virtual int spin_count() const = 0;
    virtual int lattice_dimension() const = 0;
    virtual const MassMatrix& mass_matrix() const = 0;

    /// U_L(q).
    virtual double potential_energy(const Eigen::VectorXd& q) const = 0;

    /// H_m(w, q) evaluated at the given spins as-is.
    virtual double magnetic_energy(const SpinConfiguration& spins,
                                   const Eigen::VectorXd& q) const = 0;

    /// dH1/dq at the given (unit) spins.
    virtual Eigen::VectorXd position_gradient(const SpinConfiguration& spins,
                                              const Eigen::VectorXd& q) const = 0;

    /// g_i = dH_m/dw_i at fixed q, treating w as free variables; evaluated
    /// at the given spins as-is. Spin precession is w_i x g_i.
    virtual SpinConfiguration effective_field(const SpinConfiguration& spins,
                                              const Eigen::VectorXd& q) const = 0;

    /// T_L(p).
    double kinetic_energy(const Eigen::VectorXd& p) const {
        return mass_matrix().kinetic_energy(p);
    }

    /// The ray-constant H1(w, q) = U_L(q) + H_m(rho_1(w), q); accepts any
    /// nonzero spins.
    double h1(const SpinConfiguration& spins, const Eigen::VectorXd& q) const {
        return potential_energy(q) + magnetic_energy(normalize_spins(spins), q);
    }
};

/// How the magnetic term enters the total energy: Positive is the
/// single-counted bond sum sum_i J(q_{i+1} - q_i) <w_i, w_{i+1}>; Negative
/// flips its sign (equivalently, the double-counted pair sum with a -1/2
/// prefactor).
enum class MagneticSign { Positive, Negative };

/// Parameters of the periodic one-dimensional spin-lattice chain.
struct SleChainParams {
    int n = 2;                ///< particle count (>= 2)
    double length = 2.0;      ///< spatial period L
    std::vector<double> masses;  ///< per-particle; uniform 1 if empty
    double lj_depth = 1.0;    ///< U0
    double lj_rest = 1.0;     ///< r_m, rest distance of the pair potential
    double coupling_strength = 10.0;  ///< J0
    double coupling_cutoff = 1.5;     ///< r_c
    MagneticSign sign = MagneticSign::Positive;
};

/// Lennard-Jones pair potential U(r) = U0 [ (r_m/r)^12 - 2 (r_m/r)^6 ] and
/// its derivative. Throws NonpositiveSeparationError for r <= 0.
struct PairValue {
    double value;
    double derivative;
};
PairValue lennard_jones(double r, double depth, double rest);

/// Cubic cutoff coupling J(r) = J0 (1 - r/r_c)^3 for r < r_c, zero beyond;
/// J and J' are continuous at r_c.
PairValue coupling(double r, double strength, double cutoff);

/// Periodic nearest-neighbor chain on a line: Lennard-Jones bonds plus
/// distance-modulated bilinear spin couplings. Gaps are q_{i+1} - q_i with
/// q_{n+1} = q_1 + L; ordering must be preserved (a non-positive gap is an
/// error, not a wrap-around). With n = 2 both periodic bonds connect the
/// same pair of spins, so each spin sees twice the single-bond field.
class SleChainModel final : public ExtendedHamiltonian {
  public:
    explicit SleChainModel(SleChainParams params);

    const SleChainParams& params() const { return params_; }

    int spin_count() const override { return params_.n; }
    int lattice_dimension() const override { return params_.n; }
    const MassMatrix& mass_matrix() const override { return mass_matrix_; }

    double potential_energy(const Eigen::VectorXd& q) const override;
    double magnetic_energy(const SpinConfiguration& spins,
                           const Eigen::VectorXd& q) const override;
    Eigen::VectorXd position_gradient(const SpinConfiguration& spins,
                                      const Eigen::VectorXd& q) const override;
    SpinConfiguration effective_field(const SpinConfiguration& spins,
                                      const Eigen::VectorXd& q) const override;

  private:
    /// Gaps q_{i+1} - q_i (periodic closure at i = n-1); throws on crossing.
    Eigen::VectorXd gaps(const Eigen::VectorXd& q) const;

    SleChainParams params_;
    MassMatrix mass_matrix_;
};

/// Evaluates (T_L, U_L, H_m, total) for an on-leaf state.
EnergyTerms energy_terms(const ExtendedHamiltonian& model, const SpinLatticeState& state);

}  // namespace collspin
