#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace rvib {

/// Two-ion spin basis. The flat spin index is part of the external contract:
/// 0 = |↑↑⟩, 1 = |↑↓⟩, 2 = |↓↑⟩, 3 = |↓↓⟩ (ion 1 written first).
namespace spin {

inline constexpr int up_up = 0;
inline constexpr int up_down = 1;
inline constexpr int down_up = 2;
inline constexpr int down_down = 3;
inline constexpr int count = 4;

using Vector = Eigen::Vector4d;
using Matrix = Eigen::Matrix4d;

Vector basis(int index);
Vector symmetric();       ///< |S⟩ = (|↑↓⟩ + |↓↑⟩)/√2
Vector antisymmetric();   ///< |A⟩ = (|↑↓⟩ − |↓↑⟩)/√2
Vector plus();            ///< (|↑↑⟩ + |S⟩)/√2
Vector minus();           ///< (|↑↑⟩ − |S⟩)/√2

Matrix number(int ion);   ///< |↑⟩⟨↑| on ion 1 or 2
Matrix sigma_x(int ion);
Matrix swap();            ///< exchanges the two ion labels

}  // namespace spin

using ComplexVector = Eigen::VectorXcd;

/// Real sparse operator on a HilbertSpace. Every operator of this model is real.
class SparseOperator {
public:
    using Matrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

    SparseOperator() = default;
    explicit SparseOperator(Matrix m);
    static SparseOperator identity(std::size_t dim);
    static SparseOperator from_triplets(std::size_t dim,
                                        const std::vector<Eigen::Triplet<double>>& entries);

    std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
    std::size_t nonzeros() const { return static_cast<std::size_t>(matrix_.nonZeros()); }
    const Matrix& matrix() const { return matrix_; }

    double coeff(std::size_t row, std::size_t col) const;
    /// max |O − O†| over all entries.
    double hermiticity_defect() const;
    bool is_hermitian(double tol = 1e-14) const { return hermiticity_defect() < tol; }

    ComplexVector apply(const ComplexVector& v) const;
    Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
    Eigen::MatrixXd dense() const;
    double trace() const;
    /// ⟨v|O|v⟩ for a real operator, real part only.
    double expectation(const ComplexVector& v) const;

    SparseOperator operator+(const SparseOperator& rhs) const;
    SparseOperator operator-(const SparseOperator& rhs) const;
    SparseOperator operator*(const SparseOperator& rhs) const;
    SparseOperator scaled(double factor) const;
    SparseOperator adjoint() const;

private:
    Matrix matrix_;
};

/// Fock-level count per represented mode (levels 0 … n_max−1).
struct FockCutoffs {
    std::vector<int> levels;
    std::vector<int> mode_labels;  ///< 1-based p for reporting, parallel to levels

    static FockCutoffs uniform(std::size_t modes, int levels);
};

struct BasisState {
    int spin = 0;
    std::vector<int> occupations;

    friend bool operator==(const BasisState&, const BasisState&) = default;
};

/// Composite space spin ⊗ Fock(mode 1) ⊗ … ⊗ Fock(mode M), spin-major with the
/// Fock indices in lexicographic order (first mode most significant).
class HilbertSpace {
public:
    explicit HilbertSpace(FockCutoffs cutoffs);

    std::size_t dim() const { return dim_; }
    std::size_t fock_dim() const { return fock_dim_; }
    std::size_t mode_count() const { return cutoffs_.levels.size(); }
    const FockCutoffs& cutoffs() const { return cutoffs_; }
    int levels(std::size_t mode) const;

    std::size_t index(const BasisState& state) const;
    std::size_t index(int spin_index, std::span<const int> occupations) const;
    BasisState state(std::size_t flat) const;
    /// Flat Fock index from occupations (no spin part).
    std::size_t fock_index(std::span<const int> occupations) const;
    int occupation(std::size_t flat, std::size_t mode) const;

    const SparseOperator& number_op(int ion) const;
    const SparseOperator& sigma_x_op(int ion) const;
    const SparseOperator& annihilation_op(std::size_t mode) const;
    const SparseOperator& creation_op(std::size_t mode) const;
    /// a_p† a_p, exact on every retained level.
    const SparseOperator& phonon_number_op(std::size_t mode) const;

    /// spin_matrix ⊗ 1 for an arbitrary 4×4 real matrix.
    SparseOperator spin_operator(const spin::Matrix& spin_matrix) const;
    /// spin_matrix ⊗ (a_p† + a_p).
    SparseOperator spin_displacement_operator(const spin::Matrix& spin_matrix,
                                              std::size_t mode) const;

    ComplexVector basis_vector(const BasisState& state) const;
    /// |spin_state⟩ ⊗ |occupations⟩.
    ComplexVector product_state(const spin::Vector& spin_state,
                                std::span<const int> occupations) const;

private:
    SparseOperator build_ladder(std::size_t mode, bool raise) const;

    FockCutoffs cutoffs_;
    std::vector<std::size_t> strides_;
    std::size_t fock_dim_ = 1;
    std::size_t dim_ = 4;

    std::array<SparseOperator, 2> number_;
    std::array<SparseOperator, 2> sigma_x_;
    std::vector<SparseOperator> annihilation_;
    std::vector<SparseOperator> creation_;
    std::vector<SparseOperator> phonon_number_;
};

/// Convenience for callers that only need the space.
HilbertSpace build_space(const FockCutoffs& cutoffs);

}  // namespace rvib
