#include "rvib/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/SparseLU>

#include "rvib/error.hpp"
#include "rvib/parallel.hpp"

namespace rvib {

Eigenpairs dense_eigenpairs(const SparseOperator& op) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(op.dense());
    if (solver.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

namespace {

using ColSparse = Eigen::SparseMatrix<double>;

struct LanczosRun {
    Eigen::MatrixXd basis;  // D × m
    Eigen::VectorXd alpha;
    Eigen::VectorXd beta;   // beta[j] couples basis j and j+1
    int steps = 0;
};

// Two passes of classical Gram–Schmidt against `locked` and the first `count` columns of `basis`.
void orthogonalize(Eigen::Ref<Eigen::VectorXd> w, const Eigen::MatrixXd& locked,
                   const Eigen::MatrixXd& basis, int count) {
    for (int pass = 0; pass < 2; ++pass) {
        if (locked.cols() > 0) w -= locked * (locked.transpose() * w);
        if (count > 0) {
            const auto v = basis.leftCols(count);
            w -= v * (v.transpose() * w);
        }
    }
}

}  // namespace

Eigenpairs window_eigenpairs(const SparseOperator& op, EnergyWindow window,
                             const LanczosOptions& options) {
    if (!(window.upper > window.lower)) throw ConfigError("energy window must have upper > lower");
    const Eigen::Index dim = static_cast<Eigen::Index>(op.dim());
    const ColSparse h(op.matrix());
    const double width = window.upper - window.lower;
    const double scale = std::max({std::abs(window.lower), std::abs(window.upper), 1.0});

    // Factor H − σ. A shift landing on an eigenvalue makes the factorization singular;
    // nudge it deterministically in that case.
    double shift = 0.5 * (window.lower + window.upper);
    Eigen::SparseLU<ColSparse> lu;
    for (int attempt = 0;; ++attempt) {
        ColSparse shifted = h;
        for (Eigen::Index i = 0; i < dim; ++i) shifted.coeffRef(i, i) -= shift;
        shifted.makeCompressed();
        lu.compute(shifted);
        if (lu.info() == Eigen::Success) break;
        if (attempt == 5) throw NumericalError("window_eigenpairs: shifted factorization failed");
        shift += 1e-7 * width * (attempt + 1);
    }

    Eigen::MatrixXd locked(dim, 0);
    const double theta_cut = 1.0 / std::max(shift - window.lower, window.upper - shift);
    const double tol = options.residual_tolerance * scale;

    for (int round = 0; round < 64; ++round) {
        const int max_steps = static_cast<int>(
            std::min<Eigen::Index>(dim - locked.cols(), options.max_subspace));
        if (max_steps <= 0) break;

        std::mt19937 rng(options.seed + static_cast<unsigned>(round));
        std::normal_distribution<double> gauss;
        Eigen::VectorXd v(dim);
        for (Eigen::Index i = 0; i < dim; ++i) v[i] = gauss(rng);
        LanczosRun run;
        run.basis.resize(dim, max_steps);
        run.alpha.resize(max_steps);
        run.beta.resize(max_steps);
        orthogonalize(v, locked, run.basis, 0);
        if (v.norm() < 1e-12) break;
        run.basis.col(0) = v / v.norm();

        Eigen::VectorXd ritz_values;
        Eigen::MatrixXd ritz_vectors;
        int stable_checks = 0;
        int last_count = -1;
        for (int j = 0; j < max_steps; ++j) {
            Eigen::VectorXd w = lu.solve(run.basis.col(j));
            run.alpha[j] = run.basis.col(j).dot(w);
            orthogonalize(w, locked, run.basis, j + 1);
            run.beta[j] = w.norm();
            run.steps = j + 1;
            const bool exhausted = run.beta[j] < 1e-12 * std::abs(run.alpha[j]) + 1e-300 ||
                                   j + 1 == max_steps;
            if (!exhausted) run.basis.col(j + 1) = w / run.beta[j];

            if ((j + 1) % 10 != 0 && !exhausted) continue;
            Eigen::MatrixXd t = Eigen::MatrixXd::Zero(run.steps, run.steps);
            for (int k = 0; k < run.steps; ++k) {
                t(k, k) = run.alpha[k];
                if (k + 1 < run.steps) t(k, k + 1) = t(k + 1, k) = run.beta[k];
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(t);
            ritz_values = small.eigenvalues();
            ritz_vectors = small.eigenvectors();
            if (exhausted) break;

            // Converged = estimated residual of the inverted operator is small.
            int inside = 0, converged_inside = 0, converged_outside = 0;
            for (int k = 0; k < run.steps; ++k) {
                const double theta = ritz_values[k];
                const bool ok = std::abs(run.beta[j] * ritz_vectors(run.steps - 1, k)) <
                                1e-10 * std::abs(theta);
                if (std::abs(theta) >= theta_cut) {
                    ++inside;
                    if (ok) ++converged_inside;
                } else if (ok) {
                    ++converged_outside;
                }
            }
            if (inside == converged_inside && converged_outside > 0 && inside == last_count) {
                if (++stable_checks >= 2) break;
            } else {
                stable_checks = 0;
            }
            last_count = inside;
        }

        int added = 0;
        for (int k = 0; k < run.steps; ++k) {
            const double theta = ritz_values[k];
            if (theta == 0.0) continue;
            const double lambda = shift + 1.0 / theta;
            if (lambda < window.lower || lambda > window.upper) continue;
            Eigen::VectorXd x = run.basis.leftCols(run.steps) * ritz_vectors.col(k);
            if (locked.cols() > 0) x -= locked * (locked.transpose() * x);
            const double n = x.norm();
            if (n < 0.5) continue;
            x /= n;
            const double residual = (h * x - lambda * x).norm();
            if (residual > tol) continue;
            locked.conservativeResize(Eigen::NoChange, locked.cols() + 1);
            locked.col(locked.cols() - 1) = x;
            ++added;
        }
        if (added == 0) break;
    }

    Eigenpairs out;
    if (locked.cols() == 0) {
        out.values.resize(0);
        out.vectors.resize(dim, 0);
        return out;
    }
    // Rayleigh–Ritz on the locked subspace cleans up near-degenerate pairs.
    const Eigen::MatrixXd projected = locked.transpose() * (h * locked);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> rr(0.5 * (projected + projected.transpose()));
    out.values = rr.eigenvalues();
    out.vectors = locked * rr.eigenvectors();
    return out;
}

double BranchPair::crossing_rabi(const ModelParams& params) const {
    if (mode >= params.modes.size()) throw ConfigError("branch pair refers to a missing mode");
    return (minus_phonons - plus_phonons) * params.modes[mode].frequency / (2.0 * std::numbers::sqrt2);
}

double BranchPair::crossing_energy(const ModelParams& params) const {
    if (mode >= params.modes.size()) throw ConfigError("branch pair refers to a missing mode");
    return -params.interaction + 0.5 * (minus_phonons + plus_phonons) * params.modes[mode].frequency;
}

namespace {

struct LevelData {
    Eigenpairs pairs;
    std::vector<double> rydberg;
    std::vector<double> antisymmetric;
};

std::vector<double> antisymmetric_weights(const HilbertSpace& space, const Eigen::MatrixXd& vecs) {
    const auto f = static_cast<Eigen::Index>(space.fock_dim());
    std::vector<double> out(static_cast<std::size_t>(vecs.cols()));
    for (Eigen::Index k = 0; k < vecs.cols(); ++k) {
        const auto col = vecs.col(k);
        const Eigen::VectorXd a =
            (col.segment(spin::up_down * f, f) - col.segment(spin::down_up * f, f)) / std::numbers::sqrt2;
        out[static_cast<std::size_t>(k)] = a.squaredNorm();
    }
    return out;
}

std::vector<EnergyWindow> default_windows(const ModelParams& params) {
    const double wmax = params.max_mode_frequency();
    const double wmin = params.reference_frequency();
    return {{-params.interaction - 2.0 * wmax, -params.interaction + 2.0 * wmax},
            {-0.5 * wmin, 0.5 * wmin}};
}

Eigenpairs solve_levels(const SparseOperator& h, const std::vector<EnergyWindow>& windows,
                        std::size_t dense_limit, const LanczosOptions& lanczos) {
    if (h.dim() <= dense_limit) return dense_eigenpairs(h);
    std::vector<Eigenpairs> parts;
    Eigen::Index total = 0;
    for (const auto& w : windows) {
        parts.push_back(window_eigenpairs(h, w, lanczos));
        total += parts.back().values.size();
    }
    std::vector<std::pair<double, std::pair<std::size_t, Eigen::Index>>> order;
    for (std::size_t p = 0; p < parts.size(); ++p)
        for (Eigen::Index k = 0; k < parts[p].values.size(); ++k)
            order.push_back({parts[p].values[k], {p, k}});
    std::sort(order.begin(), order.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    Eigenpairs out;
    out.values.resize(total);
    out.vectors.resize(static_cast<Eigen::Index>(h.dim()), total);
    for (Eigen::Index i = 0; i < total; ++i) {
        const auto [p, k] = order[static_cast<std::size_t>(i)].second;
        out.values[i] = order[static_cast<std::size_t>(i)].first;
        out.vectors.col(i) = parts[p].vectors.col(k);
    }
    return out;
}

LevelData levels_at(const ModelParams& params, const HilbertSpace& space, double rabi,
                    const SweepOptions& options) {
    const SparseOperator h = build_hamiltonian(space, params, rabi);
    const auto windows = options.windows.empty() ? default_windows(params) : options.windows;
    LevelData d;
    d.pairs = solve_levels(h, windows, options.dense_limit, options.lanczos);
    const SparseOperator ryd = space.number_op(1) + space.number_op(2);
    const Eigen::MatrixXd ryd_vecs = ryd.matrix() * d.pairs.vectors;
    d.rydberg.resize(static_cast<std::size_t>(d.pairs.values.size()));
    for (Eigen::Index k = 0; k < d.pairs.values.size(); ++k)
        d.rydberg[static_cast<std::size_t>(k)] = d.pairs.vectors.col(k).dot(ryd_vecs.col(k));
    d.antisymmetric = antisymmetric_weights(space, d.pairs.vectors);
    return d;
}

// Adjacent symmetric-sector pair whose midpoint is closest to `target`.
double gap_near(const std::vector<double>& energies, const std::vector<double>& antisym,
                double target) {
    std::vector<double> sym;
    for (std::size_t k = 0; k < energies.size(); ++k)
        if (antisym[k] < 0.5) sym.push_back(energies[k]);
    if (sym.size() < 2) throw NumericalError("branch gap: fewer than two symmetric levels");
    double best = std::numeric_limits<double>::infinity();
    double gap = 0.0;
    for (std::size_t k = 0; k + 1 < sym.size(); ++k) {
        const double d = std::abs(0.5 * (sym[k] + sym[k + 1]) - target);
        if (d < best) {
            best = d;
            gap = sym[k + 1] - sym[k];
        }
    }
    return gap;
}

}  // namespace

SpectrumSweep sweep_spectrum(const ModelParams& params, const HilbertSpace& space,
                             const std::vector<double>& rabi_grid, const SweepOptions& options) {
    params.validate();
    if (rabi_grid.size() < 2) throw ConfigError("sweep_spectrum: need at least two grid points");
    for (std::size_t i = 1; i < rabi_grid.size(); ++i)
        if (!(rabi_grid[i] > rabi_grid[i - 1]))
            throw ConfigError("sweep_spectrum: Rabi grid must be strictly ascending");

    const std::vector<int> vacuum(space.mode_count(), 0);
    const Eigen::Index start = static_cast<Eigen::Index>(space.index(spin::down_down, vacuum));

    SpectrumSweep sweep;
    sweep.rabi = rabi_grid;
    sweep.complete_spectrum = space.dim() <= options.dense_limit;
    const std::size_t n = rabi_grid.size();
    sweep.energies.resize(n);
    sweep.rydberg_number.resize(n);
    sweep.antisymmetric_weight.resize(n);
    sweep.tracked_index.resize(n);
    sweep.tracked_overlap.resize(n);

    // Solve blocks of grid points in parallel, then track through each block in order so
    // that only a block's worth of eigenvectors is alive at once.
    const int threads = std::max(1, options.threads);
    const std::size_t block = static_cast<std::size_t>(threads) * 4;
    Eigen::VectorXd previous;
    for (std::size_t first = 0; first < n; first += block) {
        const std::size_t count = std::min(block, n - first);
        std::vector<LevelData> data(count);
        parallel_for(count, threads, [&](std::size_t k) {
            data[k] = levels_at(params, space, rabi_grid[first + k], options);
        });
        for (std::size_t k = 0; k < count; ++k) {
            const std::size_t i = first + k;
            auto& d = data[k];
            sweep.energies[i].assign(d.pairs.values.data(), d.pairs.values.data() + d.pairs.values.size());
            sweep.rydberg_number[i] = std::move(d.rydberg);
            sweep.antisymmetric_weight[i] = std::move(d.antisymmetric);

            Eigen::VectorXd overlaps;
            if (i == 0) overlaps = d.pairs.vectors.row(start).transpose().cwiseAbs2();
            else overlaps = (d.pairs.vectors.transpose() * previous).cwiseAbs2();
            if (overlaps.size() == 0)
                throw NumericalError("sweep_spectrum: no levels found at first grid point");
            Eigen::Index best = 0;
            const double max_overlap = overlaps.maxCoeff(&best);
            if (!(max_overlap > options.tracking_floor)) {
                char msg[160];
                std::snprintf(msg, sizeof msg,
                              "sweep_spectrum: adiabatic tracking lost at Omega=%.6g "
                              "(best overlap %.3f)",
                              rabi_grid[i], max_overlap);
                throw NumericalError(msg);
            }
            sweep.tracked_index[i] = static_cast<int>(best);
            sweep.tracked_overlap[i] = max_overlap;
            previous = d.pairs.vectors.col(best);
        }
    }
    return sweep;
}

std::string sweep_csv(const SpectrumSweep& sweep) {
    std::ostringstream out;
    out << "omega_over_nu,level_index,energy_over_nu,n_ryd,tracked\n";
    char line[160];
    for (std::size_t i = 0; i < sweep.rabi.size(); ++i) {
        for (std::size_t k = 0; k < sweep.energies[i].size(); ++k) {
            std::snprintf(line, sizeof line, "%.10e,%zu,%.10e,%.10e,%d\n", sweep.rabi[i], k,
                          sweep.energies[i][k], sweep.rydberg_number[i][k],
                          static_cast<int>(k) == sweep.tracked_index[i] ? 1 : 0);
            out << line;
        }
    }
    return out.str();
}

double branch_gap(const ModelParams& params, const HilbertSpace& space, double rabi,
                  BranchPair branches) {
    const double target = branches.crossing_energy(params);
    SweepOptions options;
    const double w = params.modes[branches.mode].frequency;
    options.windows = {{target - 2.0 * w, target + 2.0 * w}};
    const auto d = levels_at(params, space, rabi, options);
    std::vector<double> energies(d.pairs.values.data(), d.pairs.values.data() + d.pairs.values.size());
    return gap_near(energies, d.antisymmetric, target);
}

Resonance find_resonance(const SpectrumSweep& sweep, const ModelParams& params,
                         const HilbertSpace& space, BranchPair branches, double tolerance) {
    const double target = branches.crossing_energy(params);
    const std::size_t n = sweep.rabi.size();
    std::vector<double> gaps(n);
    for (std::size_t i = 0; i < n; ++i)
        gaps[i] = gap_near(sweep.energies[i], sweep.antisymmetric_weight[i], target);
    const auto best = static_cast<std::size_t>(
        std::distance(gaps.begin(), std::min_element(gaps.begin(), gaps.end())));
    if (best == 0 || best + 1 == n)
        throw NumericalError("find_resonance: gap minimum lies on the sweep boundary");

    const auto gap = [&](double rabi) { return branch_gap(params, space, rabi, branches); };
    // Golden-section search on the bracketing grid cells.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = sweep.rabi[best - 1];
    double b = sweep.rabi[best + 1];
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = gap(c);
    double fd = gap(d);
    while (b - a > tolerance) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = gap(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = gap(d);
        }
    }
    const double rabi = 0.5 * (a + b);
    return {rabi, gap(rabi), branches};
}

HybridPair perturbative_eigenpairs(const ModelParams& params, const HilbertSpace& space) {
    if (params.modes.empty()) throw ConfigError("perturbative_eigenpairs: needs a phonon mode");
    if (space.levels(0) < 2)
        throw ConfigError("perturbative_eigenpairs: mode cutoff must hold at least two levels");
    const auto& mode = params.modes.front();
    std::vector<int> zero(space.mode_count(), 0);
    std::vector<int> one = zero;
    one[0] = 1;

    const ComplexVector uu0 = space.product_state(spin::basis(spin::up_up), zero);
    const ComplexVector uu1 = space.product_state(spin::basis(spin::up_up), one);
    const ComplexVector s0 = space.product_state(spin::symmetric(), zero);
    const ComplexVector s1 = space.product_state(spin::symmetric(), one);

    HybridPair out;
    const double centre = -params.interaction + 0.5 * mode.frequency;
    out.energy_plus = centre + 0.5 * mode.coupling;
    out.energy_minus = centre - 0.5 * mode.coupling;
    out.state_plus = 0.5 * (uu1 + uu0 - (s1 - s0));
    out.state_minus = 0.5 * (uu1 - uu0 - (s1 + s0));
    return out;
}

}  // namespace rvib
