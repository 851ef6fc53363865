#include "rvib/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rvib/error.hpp"

namespace rvib {

ModelParams ModelParams::facilitated(double interaction, std::vector<PhononMode> modes,
                                     double rabi) {
    ModelParams p;
    p.interaction = interaction;
    p.detuning = -interaction;
    p.rabi = rabi;
    p.modes = std::move(modes);
    p.facilitation = true;
    return p;
}

void ModelParams::validate() const {
    if (!(interaction > 0.0)) throw ConfigError("model: interaction V must be > 0");
    if (facilitation && detuning + interaction != 0.0)
        throw ConfigError("model: facilitation requires detuning == -interaction");
    if (!std::isfinite(detuning) || !std::isfinite(rabi))
        throw ConfigError("model: detuning and Rabi frequency must be finite");
    for (const auto& m : modes) {
        if (!(m.frequency > 0.0))
            throw ConfigError("model: mode " + std::to_string(m.label) + " needs frequency > 0");
        if (m.coupling > 0.0)
            throw ConfigError("model: mode " + std::to_string(m.label) +
                              " has kappa > 0; the Gamma_p >= 0 convention makes kappa <= 0");
    }
}

double ModelParams::reference_frequency() const {
    if (modes.empty()) return 1.0;
    double w = modes.front().frequency;
    for (const auto& m : modes) w = std::min(w, m.frequency);
    return w;
}

double ModelParams::max_mode_frequency() const {
    double w = 0.0;
    for (const auto& m : modes) w = std::max(w, m.frequency);
    return w;
}

FockCutoffs ModelParams::cutoffs(int levels) const {
    FockCutoffs c;
    for (const auto& m : modes) {
        c.levels.push_back(levels);
        c.mode_labels.push_back(m.label);
    }
    return c;
}

void RabiDrive::validate() const {
    if (!(rf_amplitude >= 0.0)) throw ConfigError("drive: rf amplitude must be >= 0");
    if (!std::isfinite(rabi) || !std::isfinite(rf_frequency))
        throw ConfigError("drive: values must be finite");
}

double RabiDrive::rabi_at(double t) const { return rabi + rf_amplitude * std::cos(rf_frequency * t); }

spin::Matrix spin_hamiltonian(const ModelParams& params, double rabi) {
    const spin::Matrix n1 = spin::number(1);
    const spin::Matrix n2 = spin::number(2);
    return params.detuning * (n1 + n2) + rabi * (spin::sigma_x(1) + spin::sigma_x(2)) +
           params.interaction * n1 * n2;
}

namespace {
void check_modes(const HilbertSpace& space, const ModelParams& params) {
    if (space.mode_count() != params.modes.size())
        throw ConfigError("model has " + std::to_string(params.modes.size()) +
                          " modes but the space represents " +
                          std::to_string(space.mode_count()));
}
}  // namespace

SparseOperator build_hamiltonian(const HilbertSpace& space, const ModelParams& params,
                                 double rabi) {
    params.validate();
    check_modes(space, params);
    const spin::Matrix pair = spin::number(1) * spin::number(2);
    SparseOperator h = space.spin_operator(spin_hamiltonian(params, rabi));
    for (std::size_t p = 0; p < params.modes.size(); ++p) {
        const auto& m = params.modes[p];
        h = h + space.phonon_number_op(p).scaled(m.frequency);
        if (m.coupling != 0.0)
            h = h + space.spin_displacement_operator(pair, p).scaled(m.coupling);
    }
    return h;
}

SparseOperator build_drive_term(const HilbertSpace& space) {
    return space.sigma_x_op(1) + space.sigma_x_op(2);
}

SparseOperator hamiltonian_at(const SparseOperator& static_part, const SparseOperator& drive_term,
                              const RabiDrive& drive, double t) {
    const double c = drive.rf_amplitude * std::cos(drive.rf_frequency * t);
    if (c == 0.0) return static_part;
    return static_part + drive_term.scaled(c);
}

SparseOperator build_reduced_rabi(const ModelParams& params, double rabi, int levels) {
    params.validate();
    if (params.modes.size() != 1)
        throw ConfigError("build_reduced_rabi: the two-level reduction needs exactly one mode");
    if (levels < 1) throw ConfigError("build_reduced_rabi: cutoff must be >= 1");
    const auto& mode = params.modes.front();
    const double split = std::numbers::sqrt2 * rabi;
    const double half_kappa = 0.5 * mode.coupling;

    // Index = spin * levels + n with spin 0 = |+⟩, 1 = |−⟩.
    std::vector<Eigen::Triplet<double>> t;
    for (int s = 0; s < 2; ++s) {
        for (int n = 0; n < levels; ++n) {
            const int i = s * levels + n;
            t.emplace_back(i, i, (s == 0 ? split : -split) - params.interaction + n * mode.frequency);
            if (n + 1 < levels && half_kappa != 0.0) {
                const double amp = half_kappa * std::sqrt(static_cast<double>(n + 1));
                for (int s2 = 0; s2 < 2; ++s2) {
                    const int j = s2 * levels + n + 1;
                    t.emplace_back(j, i, amp);
                    t.emplace_back(i, j, amp);
                }
            }
        }
    }
    return SparseOperator::from_triplets(static_cast<std::size_t>(2 * levels), t);
}

}  // namespace rvib
