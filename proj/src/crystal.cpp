#include "rvib/crystal.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "rvib/constants.hpp"
#include "rvib/error.hpp"

namespace rvib {

namespace {

// Below this the pair coefficient is a symmetry zero, not a small coupling.
constexpr double kDecoupledThreshold = 1e-10;

double external_energy(const Eigen::VectorXd& r) {
    double e = 0.5 * r.squaredNorm();
    for (Eigen::Index i = 0; i < r.size(); ++i)
        for (Eigen::Index j = i + 1; j < r.size(); ++j) e += 1.0 / std::abs(r[j] - r[i]);
    return e;
}

bool strictly_ascending(const Eigen::VectorXd& r) {
    for (Eigen::Index i = 1; i < r.size(); ++i)
        if (!(r[i] > r[i - 1])) return false;
    return true;
}

// Quasi-uniform seed; the central spacing of long chains shrinks roughly as N^-0.56.
Eigen::VectorXd equilibrium_seed(int n) {
    Eigen::VectorXd r(n);
    const double spacing = 2.0 / std::pow(static_cast<double>(n), 0.56);
    for (int i = 0; i < n; ++i) r[i] = spacing * (i - 0.5 * (n - 1));
    return r;
}

}  // namespace

void TrapConfig::validate() const {
    if (ion_count < 1) throw ConfigError("trap: ion_count must be >= 1");
    if (!(trap_frequency > 0.0)) throw ConfigError("trap: trap frequency must be > 0");
    if (anisotropy && !(*anisotropy > 0.0)) throw ConfigError("trap: anisotropy must be > 0");
}

double TrapConfig::critical_anisotropy() const {
    return 0.556 * std::pow(static_cast<double>(ion_count), 0.915);
}

bool TrapConfig::zigzag_warning() const {
    return anisotropy.has_value() && *anisotropy >= critical_anisotropy();
}

void IonSpecies::validate() const {
    if (!(mass > 0.0)) throw ConfigError("species: mass must be > 0");
    if (dipole_element == 0.0) throw ConfigError("species: dipole matrix element must be non-zero");
}

IonSpecies IonSpecies::strontium88() {
    return {"88Sr+", 87.9 * constants::atomic_mass_unit, -1434.0 * constants::bohr_radius};
}

IonSpecies IonSpecies::barium138() {
    return {"138Ba+", 137.9 * constants::atomic_mass_unit, -1320.0 * constants::bohr_radius};
}

IonSpecies IonSpecies::preset(const std::string& name) {
    std::string key;
    for (char c : name)
        if (std::isalnum(static_cast<unsigned char>(c)))
            key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (key == "sr88" || key == "88sr" || key == "sr") return strontium88();
    if (key == "ba138" || key == "138ba" || key == "ba") return barium138();
    throw ConfigError("unknown species preset '" + name + "' (known: Sr88, Ba138)");
}

std::vector<int> CrystalModes::coupled_modes() const {
    std::vector<int> out;
    for (Eigen::Index p = 0; p < pair_coefficients.size(); ++p)
        if (pair_coefficients[p] != 0.0) out.push_back(static_cast<int>(p));
    return out;
}

Eigen::VectorXd equilibrium_residual(const Eigen::VectorXd& r) {
    Eigen::VectorXd g = r;
    for (Eigen::Index i = 0; i < r.size(); ++i) {
        for (Eigen::Index j = 0; j < r.size(); ++j) {
            if (j == i) continue;
            const double d = r[i] - r[j];
            g[i] -= (d > 0 ? 1.0 : -1.0) / (d * d);
        }
    }
    return g;
}

Eigen::VectorXd solve_equilibrium(int ion_count, const EquilibriumOptions& options) {
    if (ion_count < 1) throw ConfigError("solve_equilibrium: ion count must be >= 1");
    if (ion_count == 1) return Eigen::VectorXd::Zero(1);

    // The residual is the gradient of the external potential and K is its Hessian, so a
    // Newton step solves K δ = −g. Backtracking keeps the chain ordered and the energy
    // decreasing.
    Eigen::VectorXd r = equilibrium_seed(ion_count);
    Eigen::VectorXd g = equilibrium_residual(r);
    double residual = g.lpNorm<Eigen::Infinity>();
    for (int iter = 0; iter < options.max_iterations && residual >= options.tolerance; ++iter) {
        const Eigen::MatrixXd k = axial_hessian(r);
        const Eigen::VectorXd delta = k.ldlt().solve(-g);
        const double e0 = external_energy(r);
        double damping = 1.0;
        Eigen::VectorXd trial = r + delta;
        while (damping > 1e-8 &&
               (!strictly_ascending(trial) || external_energy(trial) > e0 + 1e-14 * std::abs(e0))) {
            damping *= 0.5;
            trial = r + damping * delta;
        }
        r = trial;
        // Reflection antisymmetry is exact at equilibrium; impose it on the iterate.
        r = 0.5 * (r - r.reverse()).eval();
        g = equilibrium_residual(r);
        residual = g.lpNorm<Eigen::Infinity>();
    }
    if (!(residual < options.tolerance)) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "solve_equilibrium: no convergence for N=%d after %d iterations "
                      "(last residual %.3e)",
                      ion_count, options.max_iterations, residual);
        throw NumericalError(msg);
    }
    return r;
}

Eigen::MatrixXd axial_hessian(const Eigen::VectorXd& r) {
    const Eigen::Index n = r.size();
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        k(i, i) = 1.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            const double d = std::abs(r[i] - r[j]);
            if (d == 0.0) throw ConfigError("axial_hessian: coincident ion positions");
            const double c = 1.0 / (d * d * d);
            k(i, i) += 2.0 * c;
            k(i, j) = -2.0 * c;
        }
    }
    return k;
}

std::optional<std::pair<int, int>> centermost_pair(int ion_count) {
    if (ion_count < 2) return std::nullopt;
    const int upper = (ion_count + 1) / 2;  // ⌈N/2⌉, 1-based
    return std::pair{upper - 1, upper};
}

AxialModes axial_modes(const Eigen::MatrixXd& hessian, std::optional<std::pair<int, int>> pair) {
    if (hessian.rows() != hessian.cols() || hessian.rows() == 0)
        throw ConfigError("axial_modes: Hessian must be square and non-empty");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hessian);
    if (solver.info() != Eigen::Success) throw NumericalError("axial_modes: eigensolver failed");

    AxialModes out;
    const Eigen::Index n = hessian.rows();
    out.frequencies.resize(n);
    out.vectors = solver.eigenvectors();
    out.pair_coefficients = Eigen::VectorXd::Zero(n);
    for (Eigen::Index p = 0; p < n; ++p) {
        const double lambda = solver.eigenvalues()[p];
        if (!(lambda > 0.0)) {
            char msg[120];
            std::snprintf(msg, sizeof msg,
                          "axial_modes: non-positive eigenvalue %.3e (unstable crystal)", lambda);
            throw NumericalError(msg);
        }
        out.frequencies[p] = std::sqrt(lambda);

        auto column = out.vectors.col(p);
        double gamma = pair ? column[pair->first] - column[pair->second] : 0.0;
        if (std::abs(gamma) < kDecoupledThreshold) {
            gamma = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (std::abs(column[i]) > kDecoupledThreshold) {
                    if (column[i] < 0) column *= -1.0;
                    break;
                }
            }
        } else if (gamma < 0) {
            column *= -1.0;
            gamma = -gamma;
        }
        out.pair_coefficients[p] = gamma;
    }
    return out;
}

CrystalModes compute_modes(int ion_count) {
    CrystalModes m;
    m.positions = solve_equilibrium(ion_count);
    m.hessian = axial_hessian(m.positions);
    m.centermost_pair = centermost_pair(ion_count);
    auto modes = axial_modes(m.hessian, m.centermost_pair);
    m.mode_frequencies = std::move(modes.frequencies);
    m.mode_vectors = std::move(modes.vectors);
    m.pair_coefficients = std::move(modes.pair_coefficients);
    if (m.centermost_pair)
        m.pair_separation =
            m.positions[m.centermost_pair->second] - m.positions[m.centermost_pair->first];
    return m;
}

PhysicalModel physical_params(const IonSpecies& species, const TrapConfig& trap,
                              const CrystalModes& modes) {
    species.validate();
    trap.validate();
    if (modes.ion_count() != trap.ion_count)
        throw ConfigError("physical_params: modes were computed for a different ion count");
    if (!modes.centermost_pair)
        throw ConfigError("physical_params: a single ion has no interacting pair");

    using namespace constants;
    const double m = species.mass;
    const double nu = trap.trap_frequency;

    PhysicalModel out;
    auto& s = out.scales;
    s.length_zeta = std::cbrt(coulomb_constant * elementary_charge * elementary_charge / (m * nu * nu));
    s.length_chi = std::sqrt(hbar / (m * nu));
    s.equilibrium_separation = s.length_zeta * modes.pair_separation;
    s.dipole = -elementary_charge * species.dipole_element / 3.0;

    const double r0 = s.equilibrium_separation;
    s.interaction_energy = coulomb_constant * s.dipole * s.dipole / (r0 * r0 * r0);

    std::vector<PhononMode> coupled;
    for (int p : modes.coupled_modes()) {
        const double omega = modes.mode_frequencies[p] * nu;
        const double kappa = -(3.0 * s.interaction_energy / r0) * modes.pair_coefficients[p] *
                             std::sqrt(hbar / (2.0 * m * omega));
        s.coupling_energies.push_back(kappa);
        coupled.push_back({p + 1, modes.mode_frequencies[p], kappa / (hbar * nu)});
        out.mode_labels.push_back(p + 1);
    }
    out.params = ModelParams::facilitated(s.interaction_energy / (hbar * nu), std::move(coupled));
    return out;
}

std::vector<ModeTableRow> mode_table(const std::vector<int>& ion_counts) {
    std::vector<ModeTableRow> rows;
    for (int n : ion_counts) {
        const CrystalModes m = compute_modes(n);
        const auto coupled = m.coupled_modes();
        if (coupled.empty()) {
            rows.push_back({n, m.pair_separation, 1, m.mode_frequencies[0], 0.0});
            continue;
        }
        for (int p : coupled)
            rows.push_back({n, m.pair_separation, p + 1, m.mode_frequencies[p],
                            m.pair_coefficients[p]});
    }
    return rows;
}

std::string mode_table_csv(const std::vector<ModeTableRow>& rows) {
    std::ostringstream out;
    out << "N,R0_over_zeta,p,omega_p_over_nu,Gamma_p\n";
    char line[128];
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%d,%.3f,%d,%.3f,%.3f\n", r.ion_count, r.separation,
                      r.mode, r.frequency, r.coefficient);
        out << line;
    }
    return out.str();
}

}  // namespace rvib
