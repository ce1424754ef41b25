#include "collspin/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace collspin {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& v, int line) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ParseError(line, "expected a number, got '" + v + "'");
    }
}

long parse_int(const std::string& v, int line) {
    try {
        std::size_t used = 0;
        const long x = std::stol(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ParseError(line, "expected an integer, got '" + v + "'");
    }
}

std::vector<double> parse_list(const std::string& v, int line) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(trim(item), line));
    if (out.empty()) throw ParseError(line, "expected a comma-separated list");
    return out;
}

void write_scientific(std::ostream& os, double x) {
    os << std::scientific << std::setprecision(16) << x;
}

}  // namespace

SleChainModel ExperimentConfig::make_model() const {
    SleChainParams params;
    params.n = n;
    params.length = length;
    params.masses = masses;
    if (params.masses.empty())
        params.masses.assign(static_cast<std::size_t>(n), mass);
    params.lj_depth = lj_depth;
    params.lj_rest = lj_rest;
    params.coupling_strength = coupling_strength;
    params.coupling_cutoff = coupling_cutoff;
    return SleChainModel(params);
}

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig config;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) throw ParseError(line_no, "missing value for '" + key + "'");

        if (key == "n") {
            config.n = static_cast<int>(parse_int(value, line_no));
        } else if (key == "L") {
            config.length = parse_double(value, line_no);
        } else if (key == "mass") {
            config.mass = parse_double(value, line_no);
        } else if (key == "masses") {
            config.masses = parse_list(value, line_no);
        } else if (key == "U0") {
            config.lj_depth = parse_double(value, line_no);
        } else if (key == "r_m") {
            config.lj_rest = parse_double(value, line_no);
        } else if (key == "J0") {
            config.coupling_strength = parse_double(value, line_no);
        } else if (key == "r_c") {
            config.coupling_cutoff = parse_double(value, line_no);
        } else if (key == "h") {
            config.step = parse_double(value, line_no);
        } else if (key == "t_end") {
            config.t_end = parse_double(value, line_no);
        } else if (key == "stride") {
            const long s = parse_int(value, line_no);
            if (s < 1) throw ParseError(line_no, "stride must be >= 1");
            config.stride = static_cast<std::size_t>(s);
        } else if (key == "output") {
            config.output = value;
        } else if (key == "fp_tolerance") {
            config.fp_tolerance = parse_double(value, line_no);
        } else if (key == "max_iterations") {
            config.max_iterations = static_cast<int>(parse_int(value, line_no));
        } else if (key == "initial") {
            if (value == "reference") {
                config.initial = InitialCondition::Reference;
            } else if (value == "file") {
                config.initial = InitialCondition::File;
            } else {
                throw ParseError(line_no, "initial must be 'reference' or 'file'");
            }
        } else if (key == "initial_file") {
            config.initial_file = value;
        } else {
            throw ParseError(line_no, "unknown key '" + key + "'");
        }
    }

    if (config.n < 2) throw ParseError(line_no, "n must be >= 2");
    if (!(config.length > 0.0)) throw ParseError(line_no, "L must be positive");
    if (!(config.mass > 0.0)) throw ParseError(line_no, "mass must be positive");
    for (double m : config.masses)
        if (!(m > 0.0)) throw ParseError(line_no, "masses must be positive");
    if (!config.masses.empty() && static_cast<int>(config.masses.size()) != config.n)
        throw ParseError(line_no, "masses list must have n entries");
    if (config.lj_depth < 0.0) throw ParseError(line_no, "U0 must be non-negative");
    if (!(config.lj_rest > 0.0)) throw ParseError(line_no, "r_m must be positive");
    if (!(config.coupling_cutoff > 0.0)) throw ParseError(line_no, "r_c must be positive");
    if (config.step == 0.0) throw ParseError(line_no, "h must be nonzero");
    if (config.t_end < 0.0) throw ParseError(line_no, "t_end must be non-negative");
    if (!(config.fp_tolerance > 0.0)) throw ParseError(line_no, "fp_tolerance must be positive");
    if (config.max_iterations < 1) throw ParseError(line_no, "max_iterations must be >= 1");
    if (config.initial == InitialCondition::File && config.initial_file.empty())
        throw ParseError(line_no, "initial = file requires initial_file");
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open config file '" + path + "'");
    return parse_config(in);
}

SpinLatticeState reference_initial_state(int n) {
    if (n < 2) throw std::invalid_argument("need at least two particles");
    SpinLatticeState state;
    state.lattice.q.resize(n);
    state.lattice.p = Eigen::VectorXd::Zero(n);
    state.spins.reserve(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) {
        state.lattice.q[k - 1] = static_cast<double>(k);
        const double single = 2.0 * std::numbers::pi * k / n;
        const double twice = 4.0 * std::numbers::pi * k / n;
        Spin w(0.8 * std::cos(single) + 0.5 * std::sin(twice),
               0.8 * std::sin(single) + 0.5 * std::cos(twice),
               1.0);
        state.spins.push_back(w / w.norm());
    }
    return state;
}

SpinLatticeState read_state_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(0, "cannot open state file '" + path + "'");
    std::vector<double> qs, ps;
    SpinConfiguration spins;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::istringstream row(line);
        double q, p, w1, w2, w3;
        if (!(row >> q >> p >> w1 >> w2 >> w3))
            throw ParseError(line_no, "expected 'q p w1 w2 w3'");
        std::string extra;
        if (row >> extra) throw ParseError(line_no, "trailing content '" + extra + "'");
        qs.push_back(q);
        ps.push_back(p);
        spins.emplace_back(w1, w2, w3);
    }
    if (qs.empty()) throw ParseError(line_no, "state file is empty");

    SpinLatticeState state;
    state.lattice.q = Eigen::Map<Eigen::VectorXd>(qs.data(), static_cast<Eigen::Index>(qs.size()));
    state.lattice.p = Eigen::Map<Eigen::VectorXd>(ps.data(), static_cast<Eigen::Index>(ps.size()));
    state.spins = std::move(spins);
    return state;
}

void write_state_file(const std::string& path, const SpinLatticeState& state) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write state file '" + path + "'");
    for (std::size_t i = 0; i < state.spins.size(); ++i) {
        write_scientific(out, state.lattice.q[static_cast<Eigen::Index>(i)]);
        out << ' ';
        write_scientific(out, state.lattice.p[static_cast<Eigen::Index>(i)]);
        for (int c = 0; c < 3; ++c) {
            out << ' ';
            write_scientific(out, state.spins[i][c]);
        }
        out << '\n';
    }
}

namespace {

SpinLatticeState initial_state_for(const ExperimentConfig& config) {
    if (config.initial == InitialCondition::File) {
        SpinLatticeState state = read_state_file(config.initial_file);
        if (static_cast<int>(state.spins.size()) != config.n)
            throw Error("state file has " + std::to_string(state.spins.size()) +
                        " particles, config expects " + std::to_string(config.n));
        state.spins = normalize_spins(state.spins);
        return state;
    }
    return reference_initial_state(config.n);
}

}  // namespace

SimulateResult simulate(const ExperimentConfig& config) {
    const SleChainModel model = config.make_model();
    SpinLatticeState state = initial_state_for(config);

    SimulateResult result;
    const Observer observer = [&result](double t, const SpinLatticeState&,
                                        const EnergyTerms& e) {
        result.series.push_back(EnergyRecord{t, e.magnetic, e.potential, e.kinetic});
    };

    IntegrateStats stats;
    result.final_state =
        integrate(model, std::move(state), config.solver(), config.t_end, observer,
                  config.stride, &stats);
    result.max_iterations = stats.max_iterations;

    const double initial_total = result.series.front().total();
    for (const auto& record : result.series)
        result.max_energy_deviation =
            std::max(result.max_energy_deviation, std::abs(record.total() - initial_total));

    std::ofstream out(config.output);
    if (!out) throw Error("cannot write output file '" + config.output + "'");
    out << "T Hmag Hpot Hkin\n";
    for (const auto& record : result.series) {
        write_scientific(out, record.time);
        out << ' ';
        write_scientific(out, record.magnetic);
        out << ' ';
        write_scientific(out, record.potential);
        out << ' ';
        write_scientific(out, record.kinetic);
        out << '\n';
    }
    write_state_file(config.output + ".state", result.final_state);
    return result;
}

Eigen::VectorXd flatten_state(const SpinLatticeState& state) {
    const Eigen::Index n = static_cast<Eigen::Index>(state.spins.size());
    const Eigen::Index m = state.lattice.q.size();
    Eigen::VectorXd v(3 * n + 2 * m);
    for (Eigen::Index i = 0; i < n; ++i)
        v.segment<3>(3 * i) = state.spins[static_cast<std::size_t>(i)];
    v.segment(3 * n, m) = state.lattice.q;
    v.segment(3 * n + m, m) = state.lattice.p;
    return v;
}

ConvergenceResult converge(const ExperimentConfig& config, const std::vector<double>& h_list,
                           double reference_h) {
    if (h_list.empty()) throw std::invalid_argument("need at least one step size");
    if (!(reference_h > 0.0)) throw std::invalid_argument("reference step must be positive");
    for (double h : h_list)
        if (reference_h > h)
            throw std::invalid_argument("reference step must not exceed any tested step");

    const SleChainModel model = config.make_model();
    const SpinLatticeState start = initial_state_for(config);

    const auto run = [&](double h) {
        SolverSettings settings = config.solver();
        settings.step = h;
        return integrate(model, start, settings, config.t_end);
    };

    const Eigen::VectorXd reference = flatten_state(run(reference_h));

    ConvergenceResult result;
    for (double h : h_list) {
        const Eigen::VectorXd final_state = flatten_state(run(h));
        result.rows.push_back(ConvergenceRow{h, (final_state - reference).norm()});
    }

    // Least-squares slope of log(err) against log(h); zero-error rows (e.g.
    // h == reference_h) are excluded from the fit.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int count = 0;
    for (const auto& row : result.rows) {
        if (!(row.error > 0.0)) continue;
        const double x = std::log(row.step), y = std::log(row.error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count >= 2) result.slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);

    std::ofstream out(config.output);
    if (!out) throw Error("cannot write output file '" + config.output + "'");
    out << "H Err\n";
    for (const auto& row : result.rows) {
        write_scientific(out, row.step);
        out << ' ';
        write_scientific(out, row.error);
        out << '\n';
    }
    return result;
}

}  // namespace collspin
