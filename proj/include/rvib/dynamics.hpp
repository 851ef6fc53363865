#pragma once

#include <cstddef>
#include <vector>

#include "rvib/fockspace.hpp"
#include "rvib/model.hpp"

namespace rvib {

struct StateVector {
    ComplexVector amplitudes;

    double norm() const { return amplitudes.norm(); }
    std::size_t dim() const { return static_cast<std::size_t>(amplitudes.size()); }
};

struct EvolveOptions {
    double step = 0.0;              ///< 0 selects 0.005/ω_ref
    double norm_tolerance = 1e-6;   ///< abort threshold on |1 − ‖ψ‖|
    bool keep_final_state = true;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<double> rydberg;   ///< ⟨n₁+n₂⟩ at every integrator step
    double signal = 0.0;           ///< trapezoidal ∫₀^τ ⟨n₁+n₂⟩ dt
    double max_norm_drift = 0.0;
    double max_antisymmetric_population = 0.0;  ///< max over t of Σ_n |⟨A,n|ψ⟩|²
    StateVector final_state;       ///< lab frame, same basis as the space
};

/// Propagates under H(t) = H₀ + Ω_rf cos(ω_rf t)(σ₁ˣ+σ₂ˣ) with classical RK4.
///
/// The static electronic part and the free phonons are integrated exactly: the state is
/// carried in the interaction picture of H_f = H_spin ⊗ 1 + Σ_p ω_p a_p†a_p, written in the
/// eigenbasis of the 4×4 spin Hamiltonian (split into the symmetric block and |A⟩). RK4
/// then only sees the spin–phonon coupling and the rf term, so the large detuning and
/// interaction energies never limit the step.
class Propagator {
public:
    Propagator(const HilbertSpace& space, const ModelParams& params, double rabi);

    const HilbertSpace& space() const { return *space_; }
    double rabi() const { return rabi_; }

    Trajectory evolve(double rf_amplitude, double rf_frequency, const StateVector& initial,
                      double duration, const EvolveOptions& options = {}) const;

    /// Spin eigenbasis (columns) used by the frame; column 2 is exactly |A⟩.
    const spin::Matrix& spin_basis() const { return spin_basis_; }
    const Eigen::Vector4d& spin_energies() const { return spin_energies_; }

private:
    const HilbertSpace* space_;
    ModelParams params_;
    double rabi_;
    double reference_frequency_;
    spin::Matrix spin_basis_;
    Eigen::Vector4d spin_energies_;
    Eigen::VectorXd frame_energies_;
    SparseOperator coupling_;   ///< Σ κ_p (U†n₁n₂U) ⊗ (a_p†+a_p)
    SparseOperator drive_;      ///< (U†XU) ⊗ 1
    SparseOperator rydberg_;    ///< (U†(n₁+n₂)U) ⊗ 1
    std::vector<std::size_t> antisymmetric_indices_;
};

/// Convenience wrapper: builds a Propagator for drive.rabi and runs it.
Trajectory evolve(const HilbertSpace& space, const ModelParams& params, const RabiDrive& drive,
                  const StateVector& initial, double duration, const EvolveOptions& options = {});

/// Trapezoidal rule on a uniform grid.
double trapezoid(const std::vector<double>& samples, double step);

struct EnsembleMember {
    double weight;
    std::vector<int> occupations;
};

/// Diagonal thermal phonon state (k_B = 1, T in the parameter frequency unit), truncated
/// once the kept probability reaches 1 − ε and renormalized over the kept set.
struct ThermalEnsemble {
    double temperature = 0.0;
    double epsilon = 1e-4;
    double kept_mass = 1.0;  ///< raw probability retained before renormalization
    std::vector<EnsembleMember> members;
};

ThermalEnsemble thermal_ensemble(const ModelParams& params, double temperature,
                                 double epsilon = 1e-4);

/// Cutoffs large enough for every member: max(base, n_max(member) + 1 + margin) per mode.
FockCutoffs thermal_cutoffs(const ThermalEnsemble& ensemble, const FockCutoffs& base,
                            int margin);

enum class InitialState {
    bare,       ///< |↓↓⟩ ⊗ |n⟩ (sudden switch-on of Ω)
    adiabatic,  ///< eigenstate of H₀ with maximal overlap with |↓↓⟩ ⊗ |n⟩
};

StateVector initial_state(const HilbertSpace& space, const ModelParams& params, double rabi,
                          std::span<const int> occupations,
                          InitialState kind = InitialState::bare);

/// Σ_k w_k I_k with each member evolved from its own number state.
double thermal_signal(const HilbertSpace& space, const ModelParams& params,
                      const RabiDrive& drive, const ThermalEnsemble& ensemble, double duration,
                      const EvolveOptions& options = {},
                      InitialState kind = InitialState::bare);

/// Same, reusing a propagator built for drive.rabi.
double thermal_signal(const Propagator& propagator, const ModelParams& params,
                      const RabiDrive& drive, const ThermalEnsemble& ensemble, double duration,
                      const EvolveOptions& options = {},
                      InitialState kind = InitialState::bare);

}  // namespace rvib
