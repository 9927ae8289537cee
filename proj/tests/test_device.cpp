#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "tcgate/device.hpp"
#include "tcgate/errors.hpp"
#include "tcgate/units.hpp"

using namespace tcg;
using units::from_ghz;
using units::from_mhz;

namespace {

const DeviceParams P = DeviceParams::reference();

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// lowest two eigenvalues of the single-excitation block |100>, |010>, |001>
std::pair<double, double> single_excitation_pair(const DeviceParams& p, double wc) {
    const ComplexMatrix h = restrict_to(full_system_hamiltonian(p, wc), {9, 3, 1});
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
    return {es.eigenvalues()(0), es.eigenvalues()(1)};
}

}  // namespace

TEST_CASE("coupler frequency") {
    CHECK(coupler_frequency(P, 0.0) == doctest::Approx(from_ghz(7.5)).epsilon(1e-15));
    CHECK(coupler_frequency(P, 0.25) == doctest::Approx(P.omega_c0 * std::sqrt(std::cos(units::pi / 4))));
    CHECK(coupler_frequency(P, 0.25) / P.omega_c0 == doctest::Approx(0.8409).epsilon(1e-4));
    CHECK(coupler_frequency(P, 0.5) == 0.0);
}

TEST_CASE("inverse coupler frequency") {
    CHECK(flux_for_coupler_frequency(P, P.omega_c0) == 0.0);
    CHECK(flux_for_coupler_frequency(P, P.omega_c0 * std::sqrt(std::cos(units::pi / 4))) ==
          doctest::Approx(0.25).epsilon(1e-12));
    CHECK_THROWS_AS(flux_for_coupler_frequency(P, 1.01 * P.omega_c0), UnreachableFrequencyError);

    // independent bisection on the monotone branch
    auto bisect = [](double w) {
        double lo = 0.0, hi = 0.5;
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (coupler_frequency(P, mid) > w ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double w = u(rng) * P.omega_c0;
        const double phi = flux_for_coupler_frequency(P, w);
        CHECK(rel(coupler_frequency(P, phi), w) < 1e-10);
        CHECK(std::abs(phi - bisect(w)) < 1e-9);
    }
}

TEST_CASE("system Hamiltonian") {
    const ModeDims dims;
    const double wc = P.omega1 + from_ghz(1.5);
    const ComplexMatrix h = full_system_hamiltonian(P, wc);
    CHECK(h.rows() == 27);
    CHECK(hermiticity_defect(h) < 1e-12);

    DeviceParams free = P;
    free.g1 = free.g2 = free.g12 = 0.0;
    const ComplexMatrix h0 = full_system_hamiltonian(free, wc);
    CHECK(max_abs(h0 - ComplexMatrix(h0.diagonal().asDiagonal())) == 0.0);
    CHECK(h0(dims.index({1, 1, 0}), dims.index({1, 1, 0})).real() == doctest::Approx(P.omega1 + P.omega2));
    const int i02 = dims.index({0, 2, 0});
    CHECK(bare_hamiltonian(P, wc)(i02, i02).real() == doctest::Approx(2 * P.omega2 + P.alpha2));
}

TEST_CASE("Schrieffer-Wolff parameters") {
    DeviceParams direct = P;
    direct.g1 = direct.g2 = 0.0;
    const SwParams d = sw_transformed(direct, P.omega1 + from_ghz(1.5));
    CHECK(d.coupling == P.g12);
    CHECK(d.omega1 == P.omega1);
    CHECK(d.omega2 == P.omega2);

    const SwParams s = sw_transformed(P, P.omega1 + from_ghz(1.5));
    CHECK(s.coupling < P.g12);
    CHECK_THROWS_AS(sw_transformed(P, P.omega1), ResonantCouplerError);

    for (double off = 1.0; off <= 3.0 + 1e-9; off += 0.1) {
        const double wc = P.omega1 + from_ghz(off);
        const SwParams sw = sw_transformed(P, wc);
        const auto [e0, e1] = single_excitation_pair(P, wc);
        const double d12 = sw.omega1 - sw.omega2;
        const double predicted = 2.0 * std::sqrt(sw.coupling * sw.coupling + 0.25 * d12 * d12);
        CHECK(rel(e1 - e0, predicted) < 0.05);
    }
}

TEST_CASE("coupling slope") {
    const double ref = dgtilde_dphi(P, 0.3);
    CHECK(std::abs(dgtilde_dphi(P, 1e-6)) < 1e-3 * std::abs(ref));

    const double h = 1e-5;
    const double fd = (sw_at_flux(P, 0.3 + h).coupling - sw_at_flux(P, 0.3 - h).coupling) / (2 * h);
    CHECK(rel(ref, fd) < 1e-6);

    DeviceParams other = P;
    other.g12 = from_mhz(-17.0);
    CHECK(dgtilde_dphi(other, 0.3) == ref);

    CHECK_THROWS_AS(dgtilde_dphi(P, 0.5), SingularDerivativeError);
}

TEST_CASE("second derivatives") {
    CHECK(second_difference([](double x) { return 3.0 * x * x - 2.0 * x + 1.0; }, 0.3) ==
          doctest::Approx(6.0).epsilon(1e-8));

    const SecondDerivatives d2 = second_derivatives(P, 0.3);
    const double h = 1e-5;
    const double cross = (dgtilde_dphi(P, 0.3 + h) - dgtilde_dphi(P, 0.3 - h)) / (2 * h);
    CHECK(rel(d2.coupling, cross) < 1e-4);
    CHECK(d2.omega1 * d2.omega2 > 0.0);

    CHECK_THROWS_AS(second_derivatives(P, 0.0005), DomainError);
}

TEST_CASE("modulation detuning and effective coupling") {
    FluxDrive d;
    d.phi_dc = 0.3;
    const SwParams sw = sw_at_flux(P, 0.3);
    CHECK(modulation_detuning(P, d) == doctest::Approx(sw.omega1 - sw.omega2));
    CHECK(effective_coupling(P, d) == 0.0);

    DeviceParams free = P;
    free.g1 = free.g2 = 0.0;
    CHECK(modulation_detuning(free, d) == doctest::Approx(from_ghz(0.5)));

    d.phi_ac = 0.1;
    const double base = sw.omega1 - sw.omega2;
    CHECK(std::abs(modulation_detuning(P, d) - base) < 0.02 * std::abs(base));
    CHECK(effective_coupling(P, d) == doctest::Approx(std::sqrt(2.0) * 0.1 * dgtilde_dphi(P, 0.3)));

    // g_e falls as the coupler moves away from the qubits
    double prev = 1e300;
    for (double off = 1.0; off <= 3.0 + 1e-9; off += 0.05) {
        d.phi_dc = flux_for_coupler_frequency(P, P.omega1 + from_ghz(off));
        const double g = std::abs(effective_coupling(P, d));
        CHECK(g < prev);
        prev = g;
    }

    const double phi = flux_for_effective_coupling(P, 0.1, from_mhz(2.0));
    d.phi_dc = phi;
    CHECK(std::abs(effective_coupling(P, d)) == doctest::Approx(from_mhz(2.0)).epsilon(1e-10));
    CHECK(phi > 0.0);
    CHECK(phi < 0.5);
    CHECK_THROWS_AS(flux_for_effective_coupling(P, 0.1, from_mhz(500.0)), RegimeError);
}

TEST_CASE("interaction-frame generator") {
    const double phi_dc = flux_for_effective_coupling(P, 0.1, from_mhz(2.0));
    const ModulationCoefficients m = modulation_coefficients(P, phi_dc, 0.1);
    FluxDrive d;
    d.phi_dc = phi_dc;
    d.phi_ac = 0.1;
    d.phase = 0.7;

    CHECK_THROWS_AS(interaction_frame_generator(m, d, 0.0), MissingParameterError);
    d.omega_phi = m.omega_phi(0.0);

    ModulationCoefficients zero = m;
    zero.g_static = zero.g_linear = zero.g_quadratic = 0.0;
    CHECK(max_abs(interaction_frame_generator(zero, d, 0.3)) == 0.0);

    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) CHECK(hermiticity_defect(interaction_frame_generator(m, d, u(rng))) < 1e-12);

    // average of the |11><02| term over one drive period leaves the resonant sideband
    const double period = units::two_pi / d.omega_phi;
    const int n = 4096;
    Complex avg = 0.0;
    for (int k = 0; k < n; ++k) avg += interaction_frame_generator(m, d, period * k / n)(4, 2);
    avg /= static_cast<double>(n) * std::sqrt(2.0);
    const Complex expected = 0.5 * 0.1 * dgtilde_dphi(P, phi_dc) * std::exp(-I * d.phase);
    CHECK(std::abs(avg - expected) < 1e-9 * std::abs(expected));

    const ComplexMatrix block = interaction_frame_generator(m, d, 0.2, FrameBlock::CzBlock);
    CHECK(block(3, 1) == Complex(0.0));
    CHECK(block(6, 4) == Complex(0.0));
    CHECK(block(4, 2) == interaction_frame_generator(m, d, 0.2)(4, 2));
}

TEST_CASE("effective two-level generator") {
    PulseSegment s{0.25, from_mhz(2.0), 0.0, 0.0, 0.0};
    const ComplexMatrix h = effective_generator(s, 0.1);
    CHECK(std::abs(h(0, 1) - 0.5 * s.g_e) < 1e-15);
    CHECK(std::abs(h(0, 0)) == 0.0);

    s.g_e = 0.0;
    s.delta_e = 1.3;
    const ComplexMatrix z = effective_generator(s, 0.0);
    CHECK(z(0, 0).real() == doctest::Approx(-0.65));
    CHECK(z(1, 1).real() == doctest::Approx(0.65));
    CHECK(z(0, 1) == Complex(0.0));

    s = {0.25, 3.0, 0.4, 0.0, 4.0};
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(effective_generator(s, 0.0));
    CHECK(es.eigenvalues()(1) == doctest::Approx(0.5 * std::sqrt(16.0 + 9.0)));
    CHECK(es.eigenvalues()(0) == doctest::Approx(-0.5 * std::sqrt(16.0 + 9.0)));
}
