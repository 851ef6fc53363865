#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "rvib/error.hpp"
#include "rvib/fockspace.hpp"

using namespace rvib;

TEST_CASE("spin basis layout") {
    CHECK(spin::number(1).diagonal() == Eigen::Vector4d(1, 1, 0, 0));
    CHECK(spin::number(2).diagonal() == Eigen::Vector4d(1, 0, 1, 0));
    // σ₁ˣ|↓↓⟩ = |↑↓⟩ and σ₂ˣ|↓↓⟩ = |↓↑⟩
    CHECK(spin::sigma_x(1) * spin::basis(spin::down_down) == spin::basis(spin::up_down));
    CHECK(spin::sigma_x(2) * spin::basis(spin::down_down) == spin::basis(spin::down_up));
    CHECK(spin::swap() * spin::symmetric() == spin::symmetric());
    CHECK(spin::swap() * spin::antisymmetric() == -spin::antisymmetric());
    CHECK(spin::symmetric().dot(spin::antisymmetric()) == 0.0);
    CHECK(spin::plus().dot(spin::minus()) == doctest::Approx(0.0));
    CHECK(spin::plus().norm() == doctest::Approx(1.0));
    // X annihilates |A⟩
    CHECK(((spin::sigma_x(1) + spin::sigma_x(2)) * spin::antisymmetric()).norm() == 0.0);
    CHECK_THROWS_AS(spin::number(3), ConfigError);
    CHECK_THROWS_AS(spin::basis(4), ConfigError);
}

TEST_CASE("composite indexing is spin-major and lexicographic") {
    const HilbertSpace s(FockCutoffs{{3, 2, 4}, {2, 4, 6}});
    CHECK(s.fock_dim() == 24);
    CHECK(s.dim() == 96);
    const std::vector<int> occ{1, 0, 3};
    CHECK(s.index(2, occ) == 2 * 24 + 1 * 8 + 0 * 4 + 3);
    for (std::size_t i = 0; i < s.dim(); ++i) {
        const BasisState b = s.state(i);
        CHECK(s.index(b) == i);
    }
    CHECK(s.occupation(s.index(1, occ), 2) == 3);
    CHECK_THROWS_AS(s.index(0, std::vector<int>{3, 0, 0}), ConfigError);
    CHECK_THROWS_AS(s.index(0, std::vector<int>{0, 0}), ConfigError);
    CHECK_THROWS_AS(s.state(96), ConfigError);
    CHECK_THROWS_AS(HilbertSpace(FockCutoffs{{0}, {}}), ConfigError);
}

TEST_CASE("ladder operators") {
    const int levels = 7;
    const HilbertSpace s(FockCutoffs::uniform(2, levels));
    for (std::size_t p = 0; p < 2; ++p) {
        const auto& a = s.annihilation_op(p);
        const auto& ad = s.creation_op(p);
        CHECK((ad.matrix() - SparseOperator::Matrix(a.matrix().transpose())).norm() == 0.0);
        const Eigen::MatrixXd n = s.phonon_number_op(p).dense();
        CHECK((n - (ad * a).dense()).cwiseAbs().maxCoeff() < 1e-14);
        // [a, a†] = 1 below the top level
        const Eigen::MatrixXd comm = (a * ad - ad * a).dense();
        for (std::size_t i = 0; i < s.dim(); ++i) {
            const int occ = s.occupation(i, p);
            CHECK(comm(i, i) == doctest::Approx(occ + 1 < levels ? 1.0 : -(levels - 1.0)));
            CHECK(n(i, i) == doctest::Approx(occ));
        }
        std::vector<int> occ{0, 0};
        occ[p] = 3;
        const ComplexVector v = s.product_state(spin::basis(spin::up_up), occ);
        const ComplexVector lowered = a.apply(v);
        occ[p] = 2;
        CHECK((lowered - std::sqrt(3.0) * s.product_state(spin::basis(spin::up_up), occ)).norm() < 1e-14);
    }
}

TEST_CASE("operators agree with dense Kronecker products") {
    const int levels = 5;
    const HilbertSpace s(FockCutoffs::uniform(1, levels));
    using oracle::id;
    using oracle::kron;
    const oracle::Mat n1 = kron(kron(oracle::up_proj(), id(2)), id(levels));
    const oracle::Mat x2 = kron(kron(id(2), oracle::flip()), id(levels));
    const oracle::Mat a = kron(id(4), oracle::lower(levels));
    CHECK((s.number_op(1).dense() - n1).cwiseAbs().maxCoeff() == 0.0);
    CHECK((s.sigma_x_op(2).dense() - x2).cwiseAbs().maxCoeff() == 0.0);
    CHECK((s.annihilation_op(0).dense() - a).cwiseAbs().maxCoeff() < 1e-15);
    const spin::Matrix pair = spin::number(1) * spin::number(2);
    const oracle::Mat disp = (a + a.transpose()) * n1 * kron(kron(id(2), oracle::up_proj()), id(levels));
    CHECK((s.spin_displacement_operator(pair, 0).dense() - disp).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("sparse operator algebra") {
    const HilbertSpace s(FockCutoffs::uniform(1, 4));
    const auto& x = s.sigma_x_op(1);
    CHECK(x.is_hermitian());
    CHECK(((x * x) - SparseOperator::identity(s.dim())).dense().cwiseAbs().maxCoeff() == 0.0);
    const auto& n = s.number_op(2);
    CHECK(((n * n) - n).dense().cwiseAbs().maxCoeff() == 0.0);
    CHECK(n.trace() == doctest::Approx(2.0 * s.fock_dim()));
    CHECK(s.annihilation_op(0).hermiticity_defect() > 1.0);
    const ComplexVector v = s.product_state(spin::symmetric(), std::vector<int>{2});
    CHECK(v.norm() == doctest::Approx(1.0));
    CHECK(n.expectation(v) == doctest::Approx(0.5));
    CHECK((x.scaled(2.0) - x - x).dense().cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(x.apply(ComplexVector(ComplexVector::Zero(3))), ConfigError);
}
