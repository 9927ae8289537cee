#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "tcgate/errors.hpp"
#include "tcgate/units.hpp"
#include "tcgate/zzcalc.hpp"

using namespace tcg;
using units::from_ghz;
using units::from_mhz;

namespace {

const DeviceParams P = DeviceParams::reference();
const double WC = P.omega1 + from_ghz(1.5);

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

DeviceParams scaled(double lambda) {
    DeviceParams p = P;
    p.g1 *= lambda;
    p.g2 *= lambda;
    p.g12 *= lambda;
    return p;
}

}  // namespace

TEST_CASE("perturbation basis") {
    const auto nine = PerturbationBasis::nine_state();
    CHECK(nine.size() == 9);
    int s = 0;
    for (const auto& l : nine.labels()) s += PerturbationBasis::is_s_state(l);
    CHECK(s == 4);
    CHECK(PerturbationBasis::standard().size() == 10);
    CHECK(BasisLabel{1, 1, 0}.flat_index() == 12);
    CHECK(BasisLabel{0, 2, 0}.str() == "|02,0>");
    CHECK_THROWS_AS(PerturbationBasis({{0, 3, 0}}), IndexError);
    CHECK_THROWS_AS(perturbation_energy(P, WC, {0, 2, 0}, 2), DomainError);
}

TEST_CASE("low orders") {
    CHECK(perturbation_energy(P, WC, kS11, 0) == doctest::Approx(P.omega1 + P.omega2));
    for (const auto& s : {kS00, kS01, kS10, kS11}) CHECK(perturbation_energy(P, WC, s, 1) == 0.0);

    // |11,0> couples to |01,1> (g1), |10,1> (g2), |02,0> and |20,0> (sqrt2 g12)
    const double e11 = P.omega1 + P.omega2;
    const double e011 = P.omega2 + WC;
    const double e101 = P.omega1 + WC;
    const double e020 = 2 * P.omega2 + P.alpha2;
    const double e200 = 2 * P.omega1 + P.alpha1;
    const double hand = P.g1 * P.g1 / (e11 - e011) + P.g2 * P.g2 / (e11 - e101) +
                        2 * P.g12 * P.g12 / (e11 - e020) + 2 * P.g12 * P.g12 / (e11 - e200);
    CHECK(rel(perturbation_energy(P, WC, kS11, 2), hand) < 1e-12);

    // |10,0> couples to |00,1> (g1) and |01,0> (g12); the latter is an s-state but still in the sum
    const double e10 = P.omega1;
    const double hand10 = P.g1 * P.g1 / (e10 - WC) + P.g12 * P.g12 / (e10 - P.omega2);
    CHECK(rel(perturbation_energy(P, WC, kS10, 2), hand10) < 1e-12);
}

TEST_CASE("perturbative ZZ structure") {
    const ZZDecomposition none = zz_perturbative(scaled(0.0), WC);
    for (double o : none.orders) CHECK(o == 0.0);

    DeviceParams p = P;
    p.g12 = 0.0;
    const ZZDecomposition a = zz_perturbative(p, WC);
    CHECK(a.orders[2] == doctest::Approx(0.0));
    CHECK(std::abs(a.orders[3]) < 1e-12 * std::abs(a.orders[4]));
    const ZZDecomposition c = zz_closed_form(p, WC);
    CHECK(c.orders[2] == 0.0);
    CHECK(c.orders[3] == 0.0);

    const ZZDecomposition z = zz_perturbative(P, WC);
    CHECK(z.orders[0] == doctest::Approx(0.0));
    CHECK(z.orders[1] == 0.0);
    CHECK(z.total() == doctest::Approx(z.orders[2] + z.orders[3] + z.orders[4]));
    CHECK(z.pauli_coefficient() == doctest::Approx(0.25 * z.total()));
}

TEST_CASE("order scaling with coupling strength") {
    const ZZDecomposition base = zz_perturbative(P, WC);
    for (double lambda : {0.5, 2.0}) {
        const ZZDecomposition s = zz_perturbative(scaled(lambda), WC);
        for (int k = 2; k <= 4; ++k) CHECK(rel(s.orders[k], std::pow(lambda, k) * base.orders[k]) < 1e-9);
    }
}

TEST_CASE("perturbative against exact diagonalization") {
    const double pert = zz_perturbative(P, WC).total();
    const double exact = zz_exact(P, WC);
    CHECK(rel(pert, exact) < 0.25);
    CHECK(units::to_khz(pert) == doctest::Approx(-6.4633).epsilon(1e-4));
    CHECK(units::to_khz(exact) == doctest::Approx(-7.06489).epsilon(1e-4));

    DeviceParams weak = P;
    weak.g1 = weak.g2 = from_mhz(10.0);
    weak.g12 = from_mhz(0.5);
    CHECK(rel(zz_perturbative(weak, WC).total(), zz_exact(weak, WC)) < 0.02);
}

TEST_CASE("closed form") {
    DeviceParams p = P;
    p.alpha1 = p.alpha2 = from_mhz(-250.0);
    const double a = p.alpha1, d12 = p.omega1 - p.omega2;
    const double expected = 4 * p.g12 * p.g12 * a / ((d12 + a) * (d12 - a));
    CHECK(rel(zz_closed_form(p, WC).orders[2], expected) < 1e-12);

    DeviceParams deg = P;
    deg.omega2 = deg.omega1 + deg.alpha1;
    CHECK_THROWS_AS(zz_closed_form(deg, WC), DegenerateLevelError);
}

TEST_CASE("exact ZZ") {
    CHECK(zz_exact(scaled(0.0), WC) == doctest::Approx(0.0));

    const ComplexMatrix h = full_system_hamiltonian(P, WC);
    const double base = zz_exact(h);
    const ComplexMatrix shifted = h + 1234.5 * ComplexMatrix::Identity(27, 27);
    CHECK(std::abs(zz_exact(shifted) - base) < 1e-10);
    CHECK_THROWS_AS(zz_exact(ComplexMatrix::Identity(9, 9)), ShapeError);

    for (double off = 1.0; off <= 3.0 + 1e-9; off += 0.05) {
        const double wc = P.omega1 + from_ghz(off);
        CHECK(zz_exact(P, wc) * zz_closed_form(P, wc).total() > 0.0);
    }
}
