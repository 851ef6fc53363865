#include "rvib/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <queue>
#include <string>

#include "rvib/error.hpp"
#include "rvib/spectrum.hpp"

namespace rvib {

namespace {

using cd = std::complex<double>;

// Symmetric block {↑↑, S, ↓↓} diagonalized separately so that |A⟩ stays exact.
void spin_eigenbasis(const spin::Matrix& h, spin::Matrix& basis, Eigen::Vector4d& energies) {
    Eigen::Matrix<double, 4, 3> sym;
    sym.col(0) = spin::basis(spin::up_up);
    sym.col(1) = spin::symmetric();
    sym.col(2) = spin::basis(spin::down_down);
    const Eigen::Matrix3d block = sym.transpose() * h * sym;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(block);
    const Eigen::Matrix<double, 4, 3> vecs = sym * solver.eigenvectors();
    const int slot[3] = {0, 1, 3};
    for (int k = 0; k < 3; ++k) {
        Eigen::Vector4d v = vecs.col(k);
        Eigen::Index big = 0;
        v.cwiseAbs().maxCoeff(&big);
        if (v[big] < 0.0) v = -v;
        basis.col(slot[k]) = v;
        energies[slot[k]] = solver.eigenvalues()[k];
    }
    basis.col(2) = spin::antisymmetric();
    energies[2] = spin::antisymmetric().dot(h * spin::antisymmetric());
}

}  // namespace

Propagator::Propagator(const HilbertSpace& space, const ModelParams& params, double rabi)
    : space_(&space), params_(params), rabi_(rabi) {
    params_.validate();
    if (space.mode_count() != params_.modes.size())
        throw ConfigError("propagator: space and model disagree on the number of modes");
    reference_frequency_ = params_.reference_frequency();
    spin_eigenbasis(spin_hamiltonian(params_, rabi_), spin_basis_, spin_energies_);

    const auto dim = space.dim();
    const auto fock = space.fock_dim();
    frame_energies_.resize(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < dim; ++i) {
        const auto s = static_cast<int>(i / fock);
        double e = spin_energies_[s];
        for (std::size_t p = 0; p < space.mode_count(); ++p)
            e += params_.modes[p].frequency * space.occupation(i, p);
        frame_energies_[static_cast<Eigen::Index>(i)] = e;
        if (s == 2) antisymmetric_indices_.push_back(i);
    }

    const spin::Matrix& u = spin_basis_;
    const spin::Matrix pair = u.transpose() * spin::number(1) * spin::number(2) * u;
    coupling_ = SparseOperator::from_triplets(dim, {});
    for (std::size_t p = 0; p < params_.modes.size(); ++p)
        if (params_.modes[p].coupling != 0.0)
            coupling_ = coupling_ +
                        space.spin_displacement_operator(pair, p).scaled(params_.modes[p].coupling);
    drive_ = space.spin_operator(u.transpose() * (spin::sigma_x(1) + spin::sigma_x(2)) * u);
    rydberg_ = space.spin_operator(u.transpose() * (spin::number(1) + spin::number(2)) * u);
}

Trajectory Propagator::evolve(double rf_amplitude, double rf_frequency,
                              const StateVector& initial, double duration,
                              const EvolveOptions& options) const {
    const auto dim = static_cast<Eigen::Index>(space_->dim());
    if (initial.amplitudes.size() != dim)
        throw ConfigError("evolve: initial state has the wrong dimension");
    if (!(duration > 0.0)) throw ConfigError("evolve: duration must be > 0");
    if (!(rf_amplitude >= 0.0)) throw ConfigError("evolve: rf amplitude must be >= 0");
    const double requested = options.step > 0.0 ? options.step : 0.005 / reference_frequency_;
    const auto steps = static_cast<long>(std::ceil(duration / requested - 1e-9));
    const double h = duration / static_cast<double>(steps);
    const auto fock = static_cast<Eigen::Index>(space_->fock_dim());

    // Lab → frame basis: apply Uᵀ on the spin index of every Fock block.
    auto to_frame = [&](const ComplexVector& lab, bool inverse) {
        ComplexVector out = ComplexVector::Zero(dim);
        for (int r = 0; r < spin::count; ++r)
            for (int c = 0; c < spin::count; ++c) {
                const double m = inverse ? spin_basis_(r, c) : spin_basis_(c, r);
                if (m != 0.0) out.segment(r * fock, fock) += m * lab.segment(c * fock, fock);
            }
        return out;
    };

    ComplexVector c = to_frame(initial.amplitudes, false);
    const double norm0 = c.norm();
    if (std::abs(norm0 - 1.0) > options.norm_tolerance)
        throw ConfigError("evolve: initial state is not normalized");

    ComplexVector half_phase(dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        half_phase[i] = std::polar(1.0, -0.5 * h * frame_energies_[i]);
    auto exact_phase = [&](double t) {
        ComplexVector p(dim);
        for (Eigen::Index i = 0; i < dim; ++i) p[i] = std::polar(1.0, -t * frame_energies_[i]);
        return p;
    };

    const auto& coupling = coupling_.matrix();
    const auto& drive = drive_.matrix();
    ComplexVector y(dim), gy(dim);
    // dc/dt = −i P† G(t) P c with P = e^{−iH_f t}.
    auto rhs = [&](double t, const ComplexVector& phase, const ComplexVector& state,
                   ComplexVector& out) {
        y = phase.cwiseProduct(state);
        gy.noalias() = coupling * y;
        const double a = rf_amplitude * std::cos(rf_frequency * t);
        if (a != 0.0) gy.noalias() += a * (drive * y);
        out = cd(0.0, -1.0) * phase.conjugate().cwiseProduct(gy);
    };

    Trajectory out;
    out.times.reserve(static_cast<std::size_t>(steps + 1));
    out.rydberg.reserve(static_cast<std::size_t>(steps + 1));
    auto record = [&](double t, const ComplexVector& phase) {
        y = phase.cwiseProduct(c);
        gy.noalias() = rydberg_.matrix() * y;
        out.times.push_back(t);
        out.rydberg.push_back(y.dot(gy).real());
        double a = 0.0;
        for (auto i : antisymmetric_indices_) a += std::norm(c[static_cast<Eigen::Index>(i)]);
        out.max_antisymmetric_population = std::max(out.max_antisymmetric_population, a);
        const double drift = std::abs(std::sqrt(c.squaredNorm()) - 1.0);
        out.max_norm_drift = std::max(out.max_norm_drift, drift);
        if (drift > options.norm_tolerance) {
            char msg[128];
            std::snprintf(msg, sizeof msg, "evolve: norm drift %.3e at t=%.6g exceeds tolerance", drift, t);
            throw NumericalError(msg);
        }
    };

    ComplexVector p0 = exact_phase(0.0);
    ComplexVector p1(dim), p2(dim), k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    record(0.0, p0);
    for (long k = 0; k < steps; ++k) {
        const double t = h * static_cast<double>(k);
        p1 = p0.cwiseProduct(half_phase);
        if ((k + 1) % 256 == 0) p2 = exact_phase(t + h);
        else p2 = p1.cwiseProduct(half_phase);
        rhs(t, p0, c, k1);
        tmp = c + (0.5 * h) * k1;
        rhs(t + 0.5 * h, p1, tmp, k2);
        tmp = c + (0.5 * h) * k2;
        rhs(t + 0.5 * h, p1, tmp, k3);
        tmp = c + h * k3;
        rhs(t + h, p2, tmp, k4);
        c += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        p0.swap(p2);
        record(h * static_cast<double>(k + 1), p0);
    }
    out.signal = trapezoid(out.rydberg, h);
    if (options.keep_final_state) out.final_state.amplitudes = to_frame(p0.cwiseProduct(c), true);
    return out;
}

Trajectory evolve(const HilbertSpace& space, const ModelParams& params, const RabiDrive& drive,
                  const StateVector& initial, double duration, const EvolveOptions& options) {
    drive.validate();
    const Propagator prop(space, params, drive.rabi);
    return prop.evolve(drive.rf_amplitude, drive.rf_frequency, initial, duration, options);
}

double trapezoid(const std::vector<double>& samples, double step) {
    if (samples.size() < 2) return 0.0;
    double s = 0.5 * (samples.front() + samples.back());
    for (std::size_t i = 1; i + 1 < samples.size(); ++i) s += samples[i];
    return s * step;
}

ThermalEnsemble thermal_ensemble(const ModelParams& params, double temperature, double epsilon) {
    if (!(temperature >= 0.0) || !std::isfinite(temperature))
        throw ConfigError("thermal: temperature must be finite and >= 0");
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw ConfigError("thermal: epsilon must lie in (0, 1)");
    ThermalEnsemble ens;
    ens.temperature = temperature;
    ens.epsilon = epsilon;
    const std::size_t m = params.modes.size();
    if (temperature == 0.0 || m == 0) {
        ens.members.push_back({1.0, std::vector<int>(m, 0)});
        return ens;
    }
    std::vector<double> q(m);
    double w0 = 1.0;
    for (std::size_t p = 0; p < m; ++p) {
        q[p] = std::exp(-params.modes[p].frequency / temperature);
        w0 *= 1.0 - q[p];
    }
    auto weight = [&](const std::vector<int>& n) {
        double w = w0;
        for (std::size_t p = 0; p < m; ++p) w *= std::pow(q[p], n[p]);
        return w;
    };

    // Best-first walk: weights fall monotonically with every occupation, so popping the
    // heaviest frontier state yields the members in descending order.
    using Entry = std::pair<double, std::vector<int>>;
    auto lighter = [](const Entry& a, const Entry& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second > b.second;
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(lighter)> frontier(lighter);
    std::map<std::vector<int>, bool> seen;
    std::vector<int> start(m, 0);
    frontier.push({weight(start), start});
    seen[start] = true;
    double cumulative = 0.0;
    while (cumulative < 1.0 - epsilon) {
        if (frontier.empty() || ens.members.size() > 1000000)
            throw NumericalError("thermal: ensemble enumeration did not converge");
        auto [w, n] = frontier.top();
        frontier.pop();
        cumulative += w;
        ens.members.push_back({w, n});
        for (std::size_t p = 0; p < m; ++p) {
            auto next = n;
            ++next[p];
            if (seen.emplace(next, true).second) frontier.push({weight(next), next});
        }
    }
    ens.kept_mass = cumulative;
    for (auto& member : ens.members) member.weight /= cumulative;
    return ens;
}

FockCutoffs thermal_cutoffs(const ThermalEnsemble& ensemble, const FockCutoffs& base, int margin) {
    if (margin < 0) throw ConfigError("thermal: cutoff margin must be >= 0");
    FockCutoffs out = base;
    for (const auto& member : ensemble.members) {
        if (member.occupations.size() != out.levels.size())
            throw ConfigError("thermal: ensemble and cutoffs disagree on the number of modes");
        for (std::size_t p = 0; p < out.levels.size(); ++p)
            out.levels[p] = std::max(out.levels[p], member.occupations[p] + 1 + margin);
    }
    return out;
}

StateVector initial_state(const HilbertSpace& space, const ModelParams& params, double rabi,
                          std::span<const int> occupations, InitialState kind) {
    if (occupations.size() != space.mode_count())
        throw ConfigError("initial state: wrong number of occupations");
    for (std::size_t p = 0; p < occupations.size(); ++p)
        if (occupations[p] < 0 || occupations[p] >= space.levels(p))
            throw ConfigError("initial state: occupation outside the Fock cutoff");
    StateVector bare{space.product_state(spin::basis(spin::down_down), occupations)};
    if (kind == InitialState::bare) return bare;

    const SparseOperator h = build_hamiltonian(space, params, rabi);
    Eigenpairs pairs;
    if (space.dim() <= 2000) {
        pairs = dense_eigenpairs(h);
    } else {
        double e = 0.0;
        for (std::size_t p = 0; p < occupations.size(); ++p)
            e += params.modes[p].frequency * occupations[p];
        const double w = params.reference_frequency();
        pairs = window_eigenpairs(h, {e - w - 4.0 * std::abs(rabi), e + w + 4.0 * std::abs(rabi)});
    }
    const auto index = static_cast<Eigen::Index>(space.index(spin::down_down, occupations));
    if (pairs.vectors.cols() == 0) throw NumericalError("initial state: no eigenstate found");
    Eigen::Index best = 0;
    pairs.vectors.row(index).cwiseAbs().maxCoeff(&best);
    Eigen::VectorXd v = pairs.vectors.col(best);
    if (v[index] < 0.0) v = -v;
    return {v.cast<cd>()};
}

double thermal_signal(const Propagator& propagator, const ModelParams& params,
                      const RabiDrive& drive, const ThermalEnsemble& ensemble, double duration,
                      const EvolveOptions& options, InitialState kind) {
    if (drive.rabi != propagator.rabi())
        throw ConfigError("thermal signal: propagator was built for a different Rabi frequency");
    double total = 0.0;
    EvolveOptions opts = options;
    opts.keep_final_state = false;
    for (const auto& member : ensemble.members) {
        const auto psi = initial_state(propagator.space(), params, drive.rabi, member.occupations, kind);
        total += member.weight *
                 propagator.evolve(drive.rf_amplitude, drive.rf_frequency, psi, duration, opts).signal;
    }
    return total;
}

double thermal_signal(const HilbertSpace& space, const ModelParams& params, const RabiDrive& drive,
                      const ThermalEnsemble& ensemble, double duration,
                      const EvolveOptions& options, InitialState kind) {
    drive.validate();
    const Propagator prop(space, params, drive.rabi);
    return thermal_signal(prop, params, drive, ensemble, duration, options, kind);
}

}  // namespace rvib
