#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "tcgate/errors.hpp"
#include "tcgate/fidelity.hpp"
#include "tcgate/geopath.hpp"
#include "tcgate/units.hpp"

using namespace tcg;
using units::from_mhz;
using units::pi;

namespace {

const double GE = from_mhz(2.0);

double closure(const std::vector<PathSample>& path) { return std::abs(path.back().chi); }

double ideal_fidelity(const PulseSchedule& s) {
    const ComplexMatrix u = computational_block(propagate_effective(s), Layout::Cz5);
    return gate_fidelity(u, ideal_gate(s.target_phase));
}

}  // namespace

TEST_CASE("ideal gate") {
    const ComplexMatrix cz = ideal_gate(pi);
    CHECK(std::abs(cz(3, 3) + 1.0) < 1e-15);
    CHECK(max_abs(ideal_gate(0.0) - ComplexMatrix::Identity(4, 4)) == 0.0);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-2 * pi, 2 * pi);
    for (int i = 0; i < 20; ++i) CHECK(unitarity_defect(ideal_gate(u(rng))) < 1e-15);
}

TEST_CASE("SNGQC schedule") {
    const PulseSchedule s = synthesize(Scheme::Sngqc, pi, 0.0, 0.5, GE);
    REQUIRE(s.segments.size() == 2);
    CHECK(s.segments[0].duration == doctest::Approx(0.25));
    CHECK(s.segments[1].duration == doctest::Approx(0.25));
    CHECK(s.duration() == doctest::Approx(0.5));
    CHECK(s.segments[0].phi_intercept == doctest::Approx(0.5 * pi));
    CHECK(s.segments[1].phi_intercept == doctest::Approx(-pi - 0.5 * pi));

    const auto path = integrate_path(s);
    for (const auto& p : path) {
        if (p.t > 1e-9 && p.t < 0.25 - 1e-9) CHECK(p.chi == doctest::Approx(GE * p.t).epsilon(1e-9));
        if (p.t > 0.25 + 1e-9) CHECK(p.chi == doctest::Approx(GE * (0.5 - p.t)).epsilon(1e-6));
        if (p.segment == 0) CHECK(p.xi == doctest::Approx(0.0));
    }
    const PhaseLedger l = phase_accounting(path, s);
    CHECK(std::abs(l.dynamical) < 1e-6);
    CHECK(l.total == doctest::Approx(pi).epsilon(1e-6));
}

TEST_CASE("UNGQC schedule") {
    const double chi = 0.43 * pi;
    const PulseSchedule s = synthesize(Scheme::Ungqc, pi, chi, 0.5, GE);
    REQUIRE(s.segments.size() == 3);
    CHECK(s.segments[0].duration == doctest::Approx(chi / GE));
    CHECK(s.segments[2].duration == doctest::Approx(chi / GE));

    const auto path = integrate_path(s);
    CHECK(closure(path) < 1e-3);
    for (const auto& p : path)
        if (p.segment == 1) CHECK(std::abs(p.chi - chi) < 1e-6);

    const PhaseLedger l = phase_accounting(path, s);
    CHECK(std::abs(std::remainder(l.total - pi, 2 * pi)) < 1e-3);
    CHECK(l.dynamical / l.geometric == doctest::Approx(0.5).epsilon(1e-3));

    const PulseSegment& lat = s.segments[1];
    const double dxi = lat.duration * lat.phi_slope;
    CHECK(l.geometric == doctest::Approx(-0.5 * dxi * (1.0 - std::cos(chi))).epsilon(1e-6));
    CHECK(dxi == doctest::Approx(-2.0 * s.traversed_phase / (1.5 * (1.0 - std::cos(chi)))).epsilon(1e-12));
}

TEST_CASE("UNGQC limits and errors") {
    const PulseSchedule cap = synthesize(Scheme::Ungqc, pi, pi, 0.5, GE);
    const PulseSchedule sn = synthesize(Scheme::Sngqc, pi, 0.0, 0.5, GE);
    REQUIRE(cap.segments.size() == sn.segments.size());
    for (std::size_t k = 0; k < cap.segments.size(); ++k) {
        CHECK(cap.segments[k].duration == sn.segments[k].duration);
        CHECK(cap.segments[k].phi_intercept == sn.segments[k].phi_intercept);
    }

    // (1+eta) cos(chi) = eta
    const double eta = 0.5, chi = std::acos(eta / (1.0 + eta));
    CHECK_THROWS_AS(synthesize(Scheme::Ungqc, pi, chi, eta, GE), SingularTrajectoryError);
    CHECK_THROWS_AS(synthesize(Scheme::Ungqc, pi, 0.4 * pi, -1.0, GE), DomainError);
    CHECK_THROWS_AS(synthesize(Scheme::Ungqc, 0.0, 0.4 * pi, 0.5, GE), DomainError);
    CHECK_THROWS_AS(synthesize(Scheme::Sngqc, pi, 0.0, 0.5, -GE), DomainError);

    const PulseSchedule flipped = synthesize(Scheme::Ungqc, pi, 0.45 * pi, 0.5, GE);
    CHECK(flipped.segments[1].duration > 0.0);
    CHECK(flipped.traversed_phase == doctest::Approx(-pi));
    CHECK(flipped.warnings.size() == 1);
    CHECK(ideal_fidelity(flipped) > 1.0 - 1e-6);

    // total duration continuous in chi
    double prev = synthesize(Scheme::Ungqc, pi, 0.9 * pi, 0.5, GE).duration();
    for (double c = 0.9 * pi; c <= pi + 1e-12; c += 0.002 * pi) {
        const double d = synthesize(Scheme::Ungqc, pi, std::min(c, pi), 0.5, GE).duration();
        CHECK(std::abs(d - prev) < 0.02);
        prev = d;
    }
}

TEST_CASE("random closures") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> ug(-1.9 * pi, 1.9 * pi), uc(0.15 * pi, 0.85 * pi), ue(0.2, 2.0);
    int tested = 0;
    while (tested < 50) {
        const double g = ug(rng), chi = uc(rng), eta = ue(rng);
        if (std::abs(g) < 0.05) continue;
        if (std::abs((1 + eta) * std::cos(chi) - eta) < 0.05) continue;
        const PulseSchedule s = synthesize(Scheme::Ungqc, g, chi, eta, GE);
        const auto path = integrate_path(s);
        CHECK(closure(path) < 1e-3);
        const PhaseLedger l = phase_accounting(path, s);
        CHECK(std::abs(std::remainder(l.total - g, 2 * pi)) < 1e-3);
        CHECK(l.geometric == doctest::Approx(s.traversed_phase / (1.0 + eta)).epsilon(1e-4));
        ++tested;
    }
}

TEST_CASE("ideal fidelity for every scheme") {
    for (double g : {pi, 0.5 * pi, 0.25 * pi, -0.7 * pi}) {
        CHECK(ideal_fidelity(synthesize(Scheme::Sngqc, g, 0.0, 0.5, GE)) > 1.0 - 1e-6);
        CHECK(ideal_fidelity(synthesize(Scheme::Ungqc, g, 0.4 * pi, 0.5, GE)) > 1.0 - 1e-6);
        CHECK(ideal_fidelity(synthesize(Scheme::Dynamical, g, 0.0, 0.5, GE)) > 1.0 - 1e-6);
    }
}

TEST_CASE("drive schedule") {
    const DeviceParams p = DeviceParams::reference();
    const double phi_dc = flux_for_effective_coupling(p, 0.1, GE);
    const ModulationCoefficients m = modulation_coefficients(p, phi_dc, 0.1);
    const double carrier = m.detuning12 - m.alpha2;
    const double flip = m.g_linear < 0.0 ? pi : 0.0;

    const PulseSchedule u = synthesize(Scheme::Ungqc, pi, 0.43 * pi, 0.5, GE);
    const auto d = drive_schedule(u, m);
    REQUIRE(d.size() == 3);
    CHECK(d[0].delta == 0.0);
    CHECK(d[0].omega_phi == doctest::Approx(carrier));
    CHECK(std::abs(std::remainder(d[0].phase - (0.5 * pi + flip), 2 * pi)) < 1e-12);
    CHECK(d[1].delta == doctest::Approx(u.segments[1].phi_slope + u.segments[1].delta_e));
    CHECK(d[1].omega_phi == doctest::Approx(carrier + d[1].delta));
    for (const auto& s : drive_schedule(synthesize(Scheme::Dynamical, pi, 0.0, 0.5, GE), m)) CHECK(s.delta == 0.0);

    // frame equivalence: the modulated exchange model reproduces the effective propagation
    const ComplexMatrix ue = computational_block(propagate_effective(u), Layout::Cz5);
    const ComplexMatrix uh = computational_block(propagate_hpp(make_hpp_model(u, m)), Layout::Cz5);
    CHECK(gate_fidelity(uh, ue) > 1.0 - 1e-3);

    // huge latitude detuning violates the small-delta requirement
    const PulseSchedule fast = synthesize(Scheme::Ungqc, pi, 0.43 * pi, 0.5, from_mhz(400.0));
    CHECK_THROWS_AS(drive_schedule(fast, m), RegimeError);
}

TEST_CASE("schedule text round trip") {
    const PulseSchedule s = synthesize(Scheme::Ungqc, pi, 0.43 * pi, 0.5, GE);
    const auto back = segments_from_text(schedule_to_text(s));
    REQUIRE(back.size() == 3);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(back[k].duration == doctest::Approx(s.segments[k].duration).epsilon(1e-11));
        CHECK(back[k].phi_slope == doctest::Approx(s.segments[k].phi_slope).epsilon(1e-11));
        CHECK(back[k].delta_e == doctest::Approx(s.segments[k].delta_e).epsilon(1e-11));
    }
    CHECK_THROWS_AS(segments_from_text("duration_us=1 g_e_rad_per_us=2\n"), ConfigError);
}
