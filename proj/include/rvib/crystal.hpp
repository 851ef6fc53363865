#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rvib/model.hpp"

namespace rvib {

/// Linear Paul trap seen by an N-ion chain.
struct TrapConfig {
    int ion_count = 2;
    double trap_frequency = 0.0;       ///< axial ν in rad/s
    std::optional<double> anisotropy;  ///< radial/axial ratio γ, only used for the zigzag check

    void validate() const;

    /// γ* = 0.556 N^0.915; above it the linear chain buckles into a zigzag.
    double critical_anisotropy() const;
    /// True when an anisotropy is given and the linear-chain assumption is violated.
    bool zigzag_warning() const;
};

struct IonSpecies {
    std::string label;
    double mass = 0.0;             ///< kg
    double dipole_element = 0.0;   ///< radial matrix element <2|r|1> in metres (signed)

    void validate() const;

    static IonSpecies strontium88();
    static IonSpecies barium138();
    /// Looks up "Sr88" / "Ba138" (case-insensitive, "88Sr+" style accepted).
    static IonSpecies preset(const std::string& name);
};

/// Equilibrium geometry and axial phonon modes in trap units (lengths in ζ, frequencies in ν).
struct CrystalModes {
    Eigen::VectorXd positions;         ///< ascending R_i
    Eigen::MatrixXd hessian;           ///< K_{ij;z}
    Eigen::VectorXd mode_frequencies;  ///< ascending γ_{p;z}
    Eigen::MatrixXd mode_vectors;      ///< column p is the normalized mode vector Γ_{·,p}
    std::optional<std::pair<int, int>> centermost_pair;  ///< 0-based (i, i+1); none for N = 1
    double pair_separation = 0.0;
    Eigen::VectorXd pair_coefficients;  ///< Γ_p = Γ_{i,p} − Γ_{j,p}, exactly zero for decoupled modes

    int ion_count() const { return static_cast<int>(positions.size()); }
    /// 0-based indices of modes with non-vanishing pair coefficient.
    std::vector<int> coupled_modes() const;
};

struct PhysicalScales {
    double length_zeta = 0.0;             ///< (C e² / M ν²)^{1/3}
    double length_chi = 0.0;              ///< (ħ / M ν)^{1/2}
    double equilibrium_separation = 0.0;  ///< R₀ = ζ R
    double dipole = 0.0;                  ///< d = −e <2|r|1> / 3
    double interaction_energy = 0.0;      ///< V in joules
    std::vector<double> coupling_energies;  ///< κ_p in joules, one per coupled mode
};

struct EquilibriumOptions {
    int max_iterations = 200;
    double tolerance = 1e-13;  ///< max-norm of the force balance residual
};

/// Dimensionless force-balance residual R_i − Σ_{j≠i} sgn(R_i − R_j)/R_ij².
Eigen::VectorXd equilibrium_residual(const Eigen::VectorXd& positions);

/// Solves the axial force balance by damped Newton iteration; result is ascending and
/// antisymmetric about the trap center.
Eigen::VectorXd solve_equilibrium(int ion_count, const EquilibriumOptions& options = {});

Eigen::MatrixXd axial_hessian(const Eigen::VectorXd& positions);

struct AxialModes {
    Eigen::VectorXd frequencies;
    Eigen::MatrixXd vectors;
    Eigen::VectorXd pair_coefficients;
};

/// Diagonalizes K. Signs are fixed so that the centermost-pair difference is non-negative,
/// or, where it vanishes, so that the first non-zero component is positive.
AxialModes axial_modes(const Eigen::MatrixXd& hessian,
                       std::optional<std::pair<int, int>> pair);

/// Convention: (⌈N/2⌉, ⌈N/2⌉+1) in 1-based labels, i.e. straddling the center for even N.
std::optional<std::pair<int, int>> centermost_pair(int ion_count);

CrystalModes compute_modes(int ion_count);

struct PhysicalModel {
    ModelParams params;   ///< frequencies in units of ν
    PhysicalScales scales;
    std::vector<int> mode_labels;  ///< 1-based p of each retained mode
};

/// Converts a species in a trap to dimensionless model constants in units of ν.
/// Modes whose pair coefficient vanishes are dropped; the result is in the facilitation
/// regime (Δ = −V).
PhysicalModel physical_params(const IonSpecies& species, const TrapConfig& trap,
                              const CrystalModes& modes);

/// One row of the mode table: N, R₀/ζ, p (1-based), ω_p/ν, Γ_p.
struct ModeTableRow {
    int ion_count;
    double separation;
    int mode;
    double frequency;
    double coefficient;
};

/// Rows for the coupled modes of each chain length; a lone COM row when nothing couples.
std::vector<ModeTableRow> mode_table(const std::vector<int>& ion_counts);
std::string mode_table_csv(const std::vector<ModeTableRow>& rows);

}  // namespace rvib
