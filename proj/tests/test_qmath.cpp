#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "tcgate/errors.hpp"
#include "tcgate/qmath.hpp"

using namespace tcg;

namespace {

ComplexMatrix random_matrix(int n, std::mt19937& rng) {
    std::normal_distribution<double> d;
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = Complex(d(rng), d(rng));
    return m;
}

}  // namespace

TEST_CASE("ladder operators") {
    const ComplexMatrix a = ladder(3);
    CHECK(a(0, 1) == Complex(1.0));
    CHECK(std::abs(a(1, 2) - std::sqrt(2.0)) < 1e-15);
    CHECK(a.cwiseAbs().sum() == doctest::Approx(1.0 + std::sqrt(2.0)));

    const ComplexMatrix q = ladder(2);
    CHECK(q(0, 1) == Complex(1.0));
    CHECK(q.cwiseAbs().sum() == doctest::Approx(1.0));

    const ComplexMatrix n = a.adjoint() * a;
    CHECK(max_abs(n - number_operator(3)) < 1e-15);
    for (int k = 0; k < 3; ++k) CHECK(n(k, k).real() == doctest::Approx(k));

    CHECK_THROWS_AS(ladder(1), DimensionError);
    CHECK_THROWS_AS(ladder(0), DimensionError);
}

TEST_CASE("truncated commutator is identity below the top level") {
    for (int d : {2, 3, 4}) {
        const ComplexMatrix a = ladder(d);
        const ComplexMatrix c = commutator(a, a.adjoint());
        CHECK(max_abs(c.topLeftCorner(d - 1, d - 1) - identity(d - 1)) < 1e-14);
        CHECK(c(d - 1, d - 1).real() == doctest::Approx(-(d - 1)));
    }
}

TEST_CASE("embedding") {
    const ModeDims two({3, 3});
    const ComplexMatrix a = ladder(3);
    CHECK(max_abs(embed(a, 0, two) - kron(a, identity(3))) < 1e-15);
    CHECK(max_abs(embed(identity(3), 1, two) - identity(9)) < 1e-15);
    CHECK(max_abs(commutator(embed(a, 0, two), embed(a.adjoint(), 1, two))) < 1e-15);

    CHECK_THROWS_AS(embed(a, 2, two), IndexError);
    CHECK_THROWS_AS(embed(ladder(4), 0, two), ShapeError);

    SUBCASE("spectrum multiplicities") {
        const ModeDims three;
        const ComplexMatrix n = number_operator(3);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(embed(n, 1, three));
        int counts[3] = {0, 0, 0};
        for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
            const double v = es.eigenvalues()(k);
            const int r = static_cast<int>(std::lround(v));
            CHECK(std::abs(v - r) < 1e-12);
            ++counts[r];
        }
        CHECK(counts[0] == 9);
        CHECK(counts[1] == 9);
        CHECK(counts[2] == 9);
    }
}

TEST_CASE("mode dimensions") {
    const ModeDims d;
    CHECK(d.modes() == 3);
    CHECK(d.total() == 27);
    CHECK(d.index({1, 1, 0}) == 12);
    CHECK(d.index({0, 2, 0}) == 6);
    CHECK_THROWS_AS(ModeDims({3, 2}), DimensionError);
    CHECK_THROWS_AS(d.index({0, 3, 0}), IndexError);
    CHECK_THROWS_AS(d.index({0, 0}), ShapeError);
}

TEST_CASE("expectation values") {
    const StateVector one = basis_state(3, 1);
    CHECK(std::abs(expectation(one, number_operator(3)) - 1.0) < 1e-15);

    StateVector psi(3);
    psi << Complex(0.3, 0.1), Complex(-0.5, 0.2), Complex(0.1, -0.7);
    psi.normalize();
    CHECK(std::abs(expectation(psi, identity(3)) - 1.0) < 1e-14);

    StateVector plus = StateVector::Zero(3);
    plus(0) = plus(1) = 1.0 / std::sqrt(2.0);
    ComplexMatrix sx = ComplexMatrix::Zero(3, 3);
    sx(0, 1) = sx(1, 0) = 1.0;
    CHECK(std::abs(expectation(plus, sx) - 1.0) < 1e-14);

    CHECK_THROWS_AS(expectation(plus, identity(4)), ShapeError);
}

TEST_CASE("random 9x9 algebra") {
    std::mt19937 rng(20240611);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix a = random_matrix(9, rng), b = random_matrix(9, rng);
        const Complex s(0.7, -1.3);
        CHECK(max_abs(a.adjoint().adjoint() - a) == 0.0);
        CHECK(std::abs((a + s * b).trace() - (a.trace() + s * b.trace())) < 1e-12);
        const ComplexMatrix h = a + a.adjoint();
        CHECK(hermiticity_defect(h) < 1e-12);
    }
}

TEST_CASE("density matrices") {
    StateVector psi = StateVector::Zero(3);
    psi(0) = psi(2) = 1.0 / std::sqrt(2.0);
    const DensityMatrix rho = DensityMatrix::pure(psi);
    CHECK_NOTHROW(rho.validate());
    CHECK(rho.trace_defect() < 1e-15);
    CHECK(rho.min_eigenvalue() > -1e-12);

    ComplexMatrix bad = rho.matrix();
    bad(0, 0) += 0.1;
    CHECK_THROWS_AS(DensityMatrix(bad).validate(), NumericalError);
    ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityMatrix(neg).validate(), NumericalError);
}

TEST_CASE("restriction and unitarity") {
    ComplexMatrix m(3, 3);
    m << 1, 2, 3, 4, 5, 6, 7, 8, 9;
    const ComplexMatrix r = restrict_to(m, {2, 0});
    CHECK(r(0, 0) == Complex(9.0));
    CHECK(r(0, 1) == Complex(7.0));
    CHECK(r(1, 0) == Complex(3.0));
    CHECK(unitarity_defect(identity(4)) == 0.0);
    CHECK(unitarity_defect(2.0 * identity(2)) == doctest::Approx(3.0));
}
