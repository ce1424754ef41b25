#include "collspin/tableau.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace collspin {

namespace {

void validate_tableau(const ButcherTableau& t) {
    const std::size_t s = t.b.size();
    if (s == 0) throw std::invalid_argument("tableau needs at least one stage");
    if (t.a.size() != s) throw std::invalid_argument("a must be s x s");
    for (const auto& row : t.a)
        if (row.size() != s) throw std::invalid_argument("a must be s x s");
}

int component_stages(const SchemeComponent& c) {
    if (const auto* t = std::get_if<ButcherTableau>(&c)) return t->stages();
    return std::get<TableauPair>(c).primary.stages();
}

}  // namespace

CheckResult check_rk_symplectic(const ButcherTableau& t) {
    validate_tableau(t);
    CheckResult result;
    const int s = t.stages();
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j)
            if (t.b[i] * t.b[j] != t.b[i] * t.a[i][j] + t.b[j] * t.a[j][i])
                result.violations.push_back({0, 1, i, j});
    return result;
}

CheckResult check_partitioned_pair(const TableauPair& pair) {
    validate_tableau(pair.primary);
    validate_tableau(pair.hat);
    if (pair.primary.stages() != pair.hat.stages())
        throw StageMismatchError("partitioned pair has mismatched stage counts");
    CheckResult result;
    const int s = pair.primary.stages();
    const auto& a = pair.primary.a;
    const auto& b = pair.primary.b;
    const auto& ah = pair.hat.a;
    const auto& bh = pair.hat.b;
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j)
            if (bh[i] * b[j] != bh[i] * a[i][j] + b[j] * ah[j][i])
                result.violations.push_back({0, 1, i, j});
    for (int i = 0; i < s; ++i)
        if (b[i] != bh[i]) result.violations.push_back({0, 2, i, i});
    return result;
}

CheckResult check_scheme(const PartitionedScheme& scheme) {
    if (scheme.components.empty())
        throw std::invalid_argument("scheme needs at least one component");
    const int s = component_stages(scheme.components.front());
    for (const auto& c : scheme.components)
        if (component_stages(c) != s)
            throw StageMismatchError("scheme components disagree on the stage count");

    CheckResult result;
    for (std::size_t k = 0; k < scheme.components.size(); ++k) {
        const auto& c = scheme.components[k];
        CheckResult partial = std::holds_alternative<ButcherTableau>(c)
                                  ? check_rk_symplectic(std::get<ButcherTableau>(c))
                                  : check_partitioned_pair(std::get<TableauPair>(c));
        for (auto v : partial.violations) {
            v.component = static_cast<int>(k);
            result.violations.push_back(v);
        }
    }

    const auto b_of = [](const SchemeComponent& c, int i) -> const Rational& {
        if (const auto* t = std::get_if<ButcherTableau>(&c)) return t->b[i];
        return std::get<TableauPair>(c).primary.b[i];
    };
    for (std::size_t k = 1; k < scheme.components.size(); ++k)
        for (int i = 0; i < s; ++i)
            if (b_of(scheme.components[k], i) != b_of(scheme.components[0], i))
                result.violations.push_back({-1, 3, static_cast<int>(k), i});
    return result;
}

PartitionedScheme production_scheme() {
    const Rational half(1, 2), quarter(1, 4), zero(0);
    ButcherTableau midpoint2{{{quarter, quarter}, {quarter, quarter}}, {half, half}};
    TableauPair verlet{
        ButcherTableau{{{zero, zero}, {half, half}}, {half, half}},
        ButcherTableau{{{half, zero}, {half, zero}}, {half, half}},
    };
    return PartitionedScheme{{midpoint2, verlet}};
}

PartitionedScheme explicit_euler_scheme() {
    const Rational one(1), zero(0);
    ButcherTableau euler{{{zero}}, {one}};
    return PartitionedScheme{{euler, TableauPair{euler, euler}}};
}

// ---------------------------------------------------------------------------
// Empirical harness
// ---------------------------------------------------------------------------

double LinearInvariantSystem::invariant_value(const Eigen::VectorXd& y) const {
    double value = 0.0;
    int offset = 0;
    for (std::size_t k = 0; k < block_sizes.size(); ++k) {
        const auto yk = y.segment(offset, block_sizes[k]);
        value += yk.dot(invariant[k] * yk);
        offset += block_sizes[k];
    }
    return value;
}

namespace {

double to_double(const Rational& r) { return r.convert_to<double>(); }

// Per-scalar-index tableau coefficients: single components use their tableau
// on the whole block, pairs use `primary` on the first half and `hat` on the
// second.
struct IndexCoefficients {
    std::vector<Eigen::MatrixXd> a;  // per index, s x s
    std::vector<Eigen::VectorXd> b;  // per index, s
    int stages = 0;
};

IndexCoefficients index_coefficients(const PartitionedScheme& scheme,
                                     const std::vector<int>& block_sizes) {
    IndexCoefficients coeffs;
    coeffs.stages = component_stages(scheme.components.front());
    const int s = coeffs.stages;

    const auto to_dense = [s](const ButcherTableau& t) {
        Eigen::MatrixXd a(s, s);
        Eigen::VectorXd b(s);
        for (int i = 0; i < s; ++i) {
            b[i] = to_double(t.b[i]);
            for (int j = 0; j < s; ++j) a(i, j) = to_double(t.a[i][j]);
        }
        return std::make_pair(a, b);
    };

    for (std::size_t k = 0; k < scheme.components.size(); ++k) {
        const int nk = block_sizes[k];
        if (const auto* t = std::get_if<ButcherTableau>(&scheme.components[k])) {
            auto [a, b] = to_dense(*t);
            for (int i = 0; i < nk; ++i) {
                coeffs.a.push_back(a);
                coeffs.b.push_back(b);
            }
        } else {
            const auto& pair = std::get<TableauPair>(scheme.components[k]);
            if (nk % 2 != 0)
                throw std::invalid_argument("pair component needs an even block size");
            auto [aq, bq] = to_dense(pair.primary);
            auto [ap, bp] = to_dense(pair.hat);
            for (int i = 0; i < nk / 2; ++i) {
                coeffs.a.push_back(aq);
                coeffs.b.push_back(bq);
            }
            for (int i = 0; i < nk / 2; ++i) {
                coeffs.a.push_back(ap);
                coeffs.b.push_back(bp);
            }
        }
    }
    return coeffs;
}

Eigen::VectorXd system_field(const LinearInvariantSystem& system, const Eigen::VectorXd& y) {
    const Eigen::VectorXd grad = system.hamiltonian * y;
    Eigen::VectorXd f(y.size());
    int offset = 0;
    for (std::size_t k = 0; k < system.block_sizes.size(); ++k) {
        const int nk = system.block_sizes[k];
        f.segment(offset, nk) = system.skew[k] * grad.segment(offset, nk);
        offset += nk;
    }
    return f;
}

}  // namespace

Eigen::VectorXd prk_linear_step(const PartitionedScheme& scheme,
                                const LinearInvariantSystem& system,
                                const Eigen::VectorXd& y, double h) {
    if (scheme.components.size() != system.block_sizes.size())
        throw std::invalid_argument("scheme and system component counts differ");
    const int s = component_stages(scheme.components.front());
    for (const auto& c : scheme.components)
        if (component_stages(c) != s)
            throw StageMismatchError("scheme components disagree on the stage count");

    const IndexCoefficients coeffs = index_coefficients(scheme, system.block_sizes);
    const int dim = static_cast<int>(y.size());

    std::vector<Eigen::VectorXd> stages(s, y);
    std::vector<Eigen::VectorXd> fields(s, Eigen::VectorXd::Zero(dim));

    const double tol = 1e-15 * std::max(1.0, y.cwiseAbs().maxCoeff());
    const int max_sweeps = 500;
    double change = 0.0;
    for (int sweep = 0;; ++sweep) {
        if (sweep >= max_sweeps) throw NoConvergenceError(sweep, change);
        for (int i = 0; i < s; ++i) fields[i] = system_field(system, stages[i]);
        change = 0.0;
        for (int i = 0; i < s; ++i) {
            Eigen::VectorXd next(dim);
            for (int idx = 0; idx < dim; ++idx) {
                double acc = y[idx];
                for (int j = 0; j < s; ++j) acc += h * coeffs.a[idx](i, j) * fields[j][idx];
                next[idx] = acc;
            }
            change = std::max(change, (next - stages[i]).cwiseAbs().maxCoeff());
            stages[i] = std::move(next);
        }
        if (change <= tol) break;
    }

    for (int i = 0; i < s; ++i) fields[i] = system_field(system, stages[i]);
    Eigen::VectorXd out(dim);
    for (int idx = 0; idx < dim; ++idx) {
        double acc = y[idx];
        for (int i = 0; i < s; ++i) acc += h * coeffs.b[idx][i] * fields[i][idx];
        out[idx] = acc;
    }
    return out;
}

namespace {

// Symmetric-matrix basis index helpers for the invariant-system generator.
std::vector<Eigen::MatrixXd> symmetric_basis(int n) {
    std::vector<Eigen::MatrixXd> basis;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
            e(i, j) = 1.0;
            e(j, i) = 1.0;
            basis.push_back(e);
        }
    return basis;
}

}  // namespace

double empirical_invariant_test(const PartitionedScheme& scheme, int trials, double h,
                                int steps_per_trial, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("need at least one trial");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> magnitude(0.5, 1.5);

    const std::size_t ncomp = scheme.components.size();
    double max_drift = 0.0;

    for (int trial = 0; trial < trials; ++trial) {
        LinearInvariantSystem system;
        system.block_sizes.assign(ncomp, 2);
        Eigen::Matrix2d canonical;
        canonical << 0.0, 1.0, -1.0, 0.0;

        int total = 0;
        for (std::size_t k = 0; k < ncomp; ++k) {
            const bool is_pair = std::holds_alternative<TableauPair>(scheme.components[k]);
            if (is_pair) {
                system.skew.push_back(canonical);
                Eigen::Matrix2d b = Eigen::Matrix2d::Zero();
                b(0, 1) = b(1, 0) = magnitude(rng) * (unit(rng) < 0.0 ? -1.0 : 1.0);
                system.invariant.push_back(b);
            } else {
                const double c = magnitude(rng) * (unit(rng) < 0.0 ? -1.0 : 1.0);
                system.skew.push_back(c * canonical);
                Eigen::Matrix2d b;
                const double b00 = unit(rng), b11 = unit(rng), b01 = unit(rng);
                b << b00, b01, b01, b11;
                system.invariant.push_back(b);
            }
            total += 2;
        }

        // Assemble the blockwise matrices and solve B K S = S K B for a
        // random symmetric S; the kernel always contains S = B, so a valid
        // Hamiltonian exists for every draw.
        Eigen::MatrixXd bfull = Eigen::MatrixXd::Zero(total, total);
        Eigen::MatrixXd kfull = Eigen::MatrixXd::Zero(total, total);
        for (std::size_t k = 0; k < ncomp; ++k) {
            bfull.block(2 * k, 2 * k, 2, 2) = system.invariant[k];
            kfull.block(2 * k, 2 * k, 2, 2) = system.skew[k];
        }

        const auto basis = symmetric_basis(total);
        Eigen::MatrixXd constraint(total * total, static_cast<int>(basis.size()));
        for (std::size_t r = 0; r < basis.size(); ++r) {
            const Eigen::MatrixXd image =
                bfull * kfull * basis[r] - basis[r] * kfull * bfull;
            constraint.col(static_cast<int>(r)) =
                Eigen::Map<const Eigen::VectorXd>(image.data(), total * total);
        }
        const Eigen::FullPivLU<Eigen::MatrixXd> lu(constraint);
        const Eigen::MatrixXd kernel = lu.kernel();

        Eigen::MatrixXd s_matrix = Eigen::MatrixXd::Zero(total, total);
        for (int c = 0; c < kernel.cols(); ++c) {
            const double coeff = unit(rng);
            for (std::size_t r = 0; r < basis.size(); ++r)
                s_matrix += coeff * kernel(static_cast<int>(r), c) * basis[r];
        }
        // Keep the stage iteration contractive at the test step size.
        const double scale = (kfull * s_matrix).norm();
        if (scale > 1.0) s_matrix /= scale;
        system.hamiltonian = s_matrix;

        Eigen::VectorXd y(total);
        for (int i = 0; i < total; ++i) y[i] = unit(rng);
        if (y.norm() < 0.1) y.setOnes();
        y.normalize();
        system.initial = y;

        double previous = system.invariant_value(y);
        for (int step = 0; step < steps_per_trial; ++step) {
            y = prk_linear_step(scheme, system, y, h);
            const double current = system.invariant_value(y);
            max_drift = std::max(max_drift, std::abs(current - previous));
            previous = current;
        }
    }
    return max_drift;
}

}  // namespace collspin
