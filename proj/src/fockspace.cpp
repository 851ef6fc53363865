#include "rvib/fockspace.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rvib/error.hpp"

namespace rvib {

namespace spin {

namespace {
int check_ion(int ion) {
    if (ion != 1 && ion != 2) throw ConfigError("ion must be 1 or 2, got " + std::to_string(ion));
    return ion;
}
// Spin state of one ion inside the two-ion index: true when excited.
bool excited(int index, int ion) { return ion == 1 ? index < 2 : (index % 2 == 0); }
}  // namespace

Vector basis(int index) {
    if (index < 0 || index >= count) throw ConfigError("spin basis index out of range");
    Vector v = Vector::Zero();
    v[index] = 1.0;
    return v;
}

Vector symmetric() { return (basis(up_down) + basis(down_up)) / std::numbers::sqrt2; }
Vector antisymmetric() { return (basis(up_down) - basis(down_up)) / std::numbers::sqrt2; }
Vector plus() { return (basis(up_up) + symmetric()) / std::numbers::sqrt2; }
Vector minus() { return (basis(up_up) - symmetric()) / std::numbers::sqrt2; }

Matrix number(int ion) {
    check_ion(ion);
    Matrix m = Matrix::Zero();
    for (int s = 0; s < count; ++s) m(s, s) = excited(s, ion) ? 1.0 : 0.0;
    return m;
}

Matrix sigma_x(int ion) {
    check_ion(ion);
    // Flipping ion 1 toggles the high bit of the index (0↔2, 1↔3); ion 2 the low bit.
    const int flip = ion == 1 ? 2 : 1;
    Matrix m = Matrix::Zero();
    for (int s = 0; s < count; ++s) m(s ^ flip, s) = 1.0;
    return m;
}

Matrix swap() {
    Matrix m = Matrix::Zero();
    m(up_up, up_up) = 1.0;
    m(down_down, down_down) = 1.0;
    m(up_down, down_up) = 1.0;
    m(down_up, up_down) = 1.0;
    return m;
}

}  // namespace spin

SparseOperator::SparseOperator(Matrix m) : matrix_(std::move(m)) {
    if (matrix_.rows() != matrix_.cols()) throw ConfigError("SparseOperator must be square");
    matrix_.makeCompressed();
}

SparseOperator SparseOperator::identity(std::size_t dim) {
    Matrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    m.setIdentity();
    return SparseOperator(std::move(m));
}

SparseOperator SparseOperator::from_triplets(std::size_t dim,
                                             const std::vector<Eigen::Triplet<double>>& entries) {
    Matrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    m.setFromTriplets(entries.begin(), entries.end());
    m.prune(0.0);
    return SparseOperator(std::move(m));
}

double SparseOperator::coeff(std::size_t row, std::size_t col) const {
    return matrix_.coeff(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
}

double SparseOperator::hermiticity_defect() const {
    const Matrix diff = matrix_ - Matrix(matrix_.transpose());
    double worst = 0.0;
    for (Eigen::Index k = 0; k < diff.outerSize(); ++k)
        for (Matrix::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
    return worst;
}

ComplexVector SparseOperator::apply(const ComplexVector& v) const {
    if (v.size() != matrix_.cols()) throw ConfigError("SparseOperator::apply: dimension mismatch");
    return matrix_ * v;
}

Eigen::VectorXd SparseOperator::apply(const Eigen::VectorXd& v) const {
    if (v.size() != matrix_.cols()) throw ConfigError("SparseOperator::apply: dimension mismatch");
    return matrix_ * v;
}

Eigen::MatrixXd SparseOperator::dense() const { return Eigen::MatrixXd(matrix_); }

double SparseOperator::trace() const {
    double t = 0.0;
    for (Eigen::Index i = 0; i < matrix_.rows(); ++i) t += matrix_.coeff(i, i);
    return t;
}

double SparseOperator::expectation(const ComplexVector& v) const {
    return v.dot(apply(v)).real();
}

SparseOperator SparseOperator::operator+(const SparseOperator& rhs) const {
    return SparseOperator(Matrix(matrix_ + rhs.matrix_));
}
SparseOperator SparseOperator::operator-(const SparseOperator& rhs) const {
    return SparseOperator(Matrix(matrix_ - rhs.matrix_));
}
SparseOperator SparseOperator::operator*(const SparseOperator& rhs) const {
    return SparseOperator(Matrix(matrix_ * rhs.matrix_));
}
SparseOperator SparseOperator::scaled(double factor) const {
    return SparseOperator(Matrix(factor * matrix_));
}
SparseOperator SparseOperator::adjoint() const { return SparseOperator(Matrix(matrix_.transpose())); }

FockCutoffs FockCutoffs::uniform(std::size_t modes, int levels) {
    FockCutoffs c;
    c.levels.assign(modes, levels);
    return c;
}

HilbertSpace::HilbertSpace(FockCutoffs cutoffs) : cutoffs_(std::move(cutoffs)) {
    if (cutoffs_.mode_labels.empty()) {
        for (std::size_t p = 0; p < cutoffs_.levels.size(); ++p)
            cutoffs_.mode_labels.push_back(static_cast<int>(p + 1));
    }
    if (cutoffs_.mode_labels.size() != cutoffs_.levels.size())
        throw ConfigError("FockCutoffs: one label per mode required");
    for (int n : cutoffs_.levels)
        if (n < 1) throw ConfigError("FockCutoffs: every cutoff must be >= 1");

    strides_.assign(cutoffs_.levels.size(), 1);
    for (std::size_t p = cutoffs_.levels.size(); p-- > 0;) {
        strides_[p] = fock_dim_;
        fock_dim_ *= static_cast<std::size_t>(cutoffs_.levels[p]);
    }
    dim_ = spin::count * fock_dim_;

    for (int ion = 1; ion <= 2; ++ion) {
        number_[ion - 1] = spin_operator(spin::number(ion));
        sigma_x_[ion - 1] = spin_operator(spin::sigma_x(ion));
    }
    for (std::size_t p = 0; p < mode_count(); ++p) {
        annihilation_.push_back(build_ladder(p, false));
        creation_.push_back(build_ladder(p, true));
        std::vector<Eigen::Triplet<double>> t;
        for (std::size_t i = 0; i < dim_; ++i) {
            const int n = occupation(i, p);
            if (n != 0) t.emplace_back(static_cast<int>(i), static_cast<int>(i), n);
        }
        phonon_number_.push_back(SparseOperator::from_triplets(dim_, t));
    }
}

int HilbertSpace::levels(std::size_t mode) const {
    if (mode >= mode_count()) throw ConfigError("unknown mode index " + std::to_string(mode));
    return cutoffs_.levels[mode];
}

std::size_t HilbertSpace::fock_index(std::span<const int> occupations) const {
    if (occupations.size() != mode_count())
        throw ConfigError("occupation list length does not match the number of modes");
    std::size_t f = 0;
    for (std::size_t p = 0; p < occupations.size(); ++p) {
        if (occupations[p] < 0 || occupations[p] >= cutoffs_.levels[p])
            throw ConfigError("occupation " + std::to_string(occupations[p]) +
                              " outside the Fock cutoff of mode " + std::to_string(p));
        f += strides_[p] * static_cast<std::size_t>(occupations[p]);
    }
    return f;
}

std::size_t HilbertSpace::index(int spin_index, std::span<const int> occupations) const {
    if (spin_index < 0 || spin_index >= spin::count) throw ConfigError("spin index out of range");
    return static_cast<std::size_t>(spin_index) * fock_dim_ + fock_index(occupations);
}

std::size_t HilbertSpace::index(const BasisState& state) const {
    return index(state.spin, state.occupations);
}

BasisState HilbertSpace::state(std::size_t flat) const {
    if (flat >= dim_) throw ConfigError("basis index out of range");
    BasisState s;
    s.spin = static_cast<int>(flat / fock_dim_);
    std::size_t f = flat % fock_dim_;
    s.occupations.resize(mode_count());
    for (std::size_t p = 0; p < mode_count(); ++p) {
        s.occupations[p] = static_cast<int>(f / strides_[p]);
        f %= strides_[p];
    }
    return s;
}

int HilbertSpace::occupation(std::size_t flat, std::size_t mode) const {
    return static_cast<int>((flat % fock_dim_) / strides_[mode] %
                            static_cast<std::size_t>(cutoffs_.levels[mode]));
}

SparseOperator HilbertSpace::build_ladder(std::size_t mode, bool raise) const {
    std::vector<Eigen::Triplet<double>> t;
    const int top = cutoffs_.levels[mode];
    for (std::size_t col = 0; col < dim_; ++col) {
        const int n = occupation(col, mode);
        if (raise) {
            if (n + 1 < top)
                t.emplace_back(static_cast<int>(col + strides_[mode]), static_cast<int>(col),
                               std::sqrt(static_cast<double>(n + 1)));
        } else if (n > 0) {
            t.emplace_back(static_cast<int>(col - strides_[mode]), static_cast<int>(col),
                           std::sqrt(static_cast<double>(n)));
        }
    }
    return SparseOperator::from_triplets(dim_, t);
}

const SparseOperator& HilbertSpace::number_op(int ion) const {
    spin::number(ion);  // validates
    return number_[ion - 1];
}

const SparseOperator& HilbertSpace::sigma_x_op(int ion) const {
    spin::sigma_x(ion);
    return sigma_x_[ion - 1];
}

const SparseOperator& HilbertSpace::annihilation_op(std::size_t mode) const {
    levels(mode);
    return annihilation_[mode];
}

const SparseOperator& HilbertSpace::creation_op(std::size_t mode) const {
    levels(mode);
    return creation_[mode];
}

const SparseOperator& HilbertSpace::phonon_number_op(std::size_t mode) const {
    levels(mode);
    return phonon_number_[mode];
}

SparseOperator HilbertSpace::spin_operator(const spin::Matrix& m) const {
    std::vector<Eigen::Triplet<double>> t;
    for (int r = 0; r < spin::count; ++r)
        for (int c = 0; c < spin::count; ++c) {
            if (m(r, c) == 0.0) continue;
            for (std::size_t f = 0; f < fock_dim_; ++f)
                t.emplace_back(static_cast<int>(r * fock_dim_ + f), static_cast<int>(c * fock_dim_ + f),
                               m(r, c));
        }
    return SparseOperator::from_triplets(dim_, t);
}

SparseOperator HilbertSpace::spin_displacement_operator(const spin::Matrix& m,
                                                        std::size_t mode) const {
    const int top = levels(mode);
    const std::size_t stride = strides_[mode];
    std::vector<Eigen::Triplet<double>> t;
    for (int r = 0; r < spin::count; ++r)
        for (int c = 0; c < spin::count; ++c) {
            const double s = m(r, c);
            if (s == 0.0) continue;
            for (std::size_t f = 0; f < fock_dim_; ++f) {
                const int n = static_cast<int>(f / stride % static_cast<std::size_t>(top));
                const auto col = static_cast<int>(c * fock_dim_ + f);
                if (n + 1 < top)
                    t.emplace_back(static_cast<int>(r * fock_dim_ + f + stride), col,
                                   s * std::sqrt(static_cast<double>(n + 1)));
                if (n > 0)
                    t.emplace_back(static_cast<int>(r * fock_dim_ + f - stride), col,
                                   s * std::sqrt(static_cast<double>(n)));
            }
        }
    return SparseOperator::from_triplets(dim_, t);
}

ComplexVector HilbertSpace::basis_vector(const BasisState& s) const {
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim_));
    v[static_cast<Eigen::Index>(index(s))] = 1.0;
    return v;
}

ComplexVector HilbertSpace::product_state(const spin::Vector& spin_state,
                                          std::span<const int> occupations) const {
    const std::size_t f = fock_index(occupations);
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim_));
    for (int s = 0; s < spin::count; ++s)
        v[static_cast<Eigen::Index>(s * fock_dim_ + f)] = spin_state[s];
    return v;
}

HilbertSpace build_space(const FockCutoffs& cutoffs) { return HilbertSpace(cutoffs); }

}  // namespace rvib
