#pragma once

#include <vector>

#include "rvib/fockspace.hpp"

namespace rvib {

/// One phonon mode that couples to the driven pair.
struct PhononMode {
    int label = 2;        ///< 1-based mode number p
    double frequency = 1.0;
    double coupling = 0.0;  ///< κ_p, non-positive with the Γ_p ≥ 0 sign convention
};

/// Hamiltonian constants, all in one frequency unit (ν, or ω₂ for the two-ion figures).
struct ModelParams {
    double detuning = 0.0;
    double rabi = 0.0;
    double interaction = 0.0;
    std::vector<PhononMode> modes;
    bool facilitation = true;  ///< when set, detuning must equal −interaction

    /// Δ = −V with the given modes.
    static ModelParams facilitated(double interaction, std::vector<PhononMode> modes,
                                   double rabi = 0.0);

    void validate() const;
    /// Lowest mode frequency, the natural time unit (ω₂); 1 when there are no modes.
    double reference_frequency() const;
    double max_mode_frequency() const;
    FockCutoffs cutoffs(int levels) const;
};

struct RabiDrive {
    double rabi = 0.0;
    double rf_amplitude = 0.0;
    double rf_frequency = 0.0;

    void validate() const;
    double rabi_at(double t) const;
};

/// Electronic part Δ(n₁+n₂) + Ω(σ₁ˣ+σ₂ˣ) + V n₁n₂ on the 4-dimensional spin space.
spin::Matrix spin_hamiltonian(const ModelParams& params, double rabi);

/// H = Δ(n₁+n₂) + Ω(σ₁ˣ+σ₂ˣ) + V n₁n₂ + Σ_p ω_p a_p†a_p + Σ_p κ_p (a_p†+a_p) n₁n₂.
SparseOperator build_hamiltonian(const HilbertSpace& space, const ModelParams& params,
                                 double rabi);

/// X = σ₁ˣ + σ₂ˣ; the rf drive enters as H(t) = H₀ + Ω_rf cos(ω_rf t) X.
SparseOperator build_drive_term(const HilbertSpace& space);

SparseOperator hamiltonian_at(const SparseOperator& static_part, const SparseOperator& drive_term,
                              const RabiDrive& drive, double t);

/// Two-level reduction onto {|+⟩, |−⟩} ⊗ Fock(levels), spin-major with |+⟩ first:
/// √2Ω σᶻ − V + ω₂ a†a + (κ₂/2)(a†+a)(1 + σˣ).
SparseOperator build_reduced_rabi(const ModelParams& params, double rabi, int levels);

}  // namespace rvib
