#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rvib/fockspace.hpp"
#include "rvib/model.hpp"

namespace rvib {

struct EnergyWindow {
    double lower;
    double upper;
};

struct Eigenpairs {
    Eigen::VectorXd values;   ///< ascending
    Eigen::MatrixXd vectors;  ///< columns
};

/// All eigenpairs of a real symmetric operator (dense).
Eigenpairs dense_eigenpairs(const SparseOperator& op);

struct LanczosOptions {
    int max_subspace = 400;
    double residual_tolerance = 1e-9;  ///< relative to the spectral scale
    unsigned seed = 20240531u;
};

/// Every eigenpair inside [lower, upper] by shift-invert Lanczos with full
/// reorthogonalization, restarted against locked vectors until a pass finds nothing new.
Eigenpairs window_eigenpairs(const SparseOperator& op, EnergyWindow window,
                             const LanczosOptions& options = {});

struct SweepOptions {
    std::size_t dense_limit = 2000;
    /// Windows used above dense_limit; empty means [−V ∓ 2ω_max] plus [±ω_min/2] around zero.
    std::vector<EnergyWindow> windows;
    double tracking_floor = 0.5;
    LanczosOptions lanczos;
    int threads = 1;
};

struct SpectrumSweep {
    std::vector<double> rabi;
    std::vector<std::vector<double>> energies;       ///< per grid point, ascending
    std::vector<std::vector<double>> rydberg_number;  ///< ⟨n₁+n₂⟩ per level
    std::vector<std::vector<double>> antisymmetric_weight;
    std::vector<int> tracked_index;
    std::vector<double> tracked_overlap;  ///< |⟨ψ_prev|ψ⟩|² for the tracked level (1 at start)
    bool complete_spectrum = true;        ///< false when only windows were solved
};

/// Eigenvalues versus Ω with the state adiabatically connected to |↓↓⟩⊗|0…0⟩ tracked by
/// maximal overlap between neighbouring grid points.
SpectrumSweep sweep_spectrum(const ModelParams& params, const HilbertSpace& space,
                             const std::vector<double>& rabi_grid,
                             const SweepOptions& options = {});

std::string sweep_csv(const SpectrumSweep& sweep);

/// Crossing of |+, lower⟩ with |−, upper⟩ (upper > lower phonon number).
struct BranchPair {
    int plus_phonons = 0;
    int minus_phonons = 1;
    std::size_t mode = 0;  ///< index into ModelParams::modes

    /// Unperturbed crossing point (N−M)ω/(2√2) and its energy −V + (N+M)ω/2.
    double crossing_rabi(const ModelParams& params) const;
    double crossing_energy(const ModelParams& params) const;
};

struct Resonance {
    double rabi = 0.0;
    double gap = 0.0;
    BranchPair branches;
};

/// Ω at which the two levels nearest the unperturbed crossing energy come closest.
/// Bracketed on the sweep grid, refined by golden-section search on fresh eigensolves.
Resonance find_resonance(const SpectrumSweep& sweep, const ModelParams& params,
                         const HilbertSpace& space, BranchPair branches = {},
                         double tolerance = 1e-9);

/// Gap between the symmetric-sector level pair straddling the crossing energy at one Ω.
double branch_gap(const ModelParams& params, const HilbertSpace& space, double rabi,
                  BranchPair branches);

struct HybridPair {
    double energy_plus;
    double energy_minus;
    ComplexVector state_plus;   ///< (|−,1⟩ + |+,0⟩)/√2 in the full space
    ComplexVector state_minus;  ///< (|−,1⟩ − |+,0⟩)/√2
};

/// First-order resonant eigenpairs −V + ω₂/2 ± κ₂/2 of the two-ion model.
HybridPair perturbative_eigenpairs(const ModelParams& params, const HilbertSpace& space);

}  // namespace rvib
