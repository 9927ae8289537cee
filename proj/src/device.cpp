#include "tcgate/device.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include <boost/math/tools/toms748_solve.hpp>
#include <fmt/core.h>
#include <spdlog/spdlog.h>

#include "tcgate/errors.hpp"
#include "tcgate/units.hpp"

namespace tcg {

namespace {

constexpr double kPi = units::pi;

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) throw DomainError(fmt::format("{} is not finite", name));
}

}  // namespace

DeviceParams DeviceParams::reference() {
    DeviceParams p;
    p.omega1 = units::from_ghz(4.5);
    p.omega2 = units::from_ghz(4.0);
    p.omega_c0 = units::from_ghz(7.5);
    p.alpha1 = units::from_mhz(-200.0);
    p.alpha2 = units::from_mhz(-200.0);
    p.alpha_c = units::from_mhz(-200.0);
    p.g1 = units::from_mhz(86.0);
    p.g2 = units::from_mhz(86.0);
    p.g12 = units::from_mhz(5.0);
    return p;
}

void DeviceParams::validate() const {
    for (double v : {omega1, omega2, omega_c0, alpha1, alpha2, alpha_c, g1, g2, g12})
        require_finite(v, "device parameter");
    if (omega_c0 <= 0.0) throw DomainError("omega_c0 must be positive");
    if (alpha1 >= 0.0 || alpha2 >= 0.0) throw DomainError("qubit anharmonicities must be negative");
}

void FluxDrive::validate() const {
    require_finite(phi_dc, "phi_DC");
    require_finite(phi_ac, "phi_AC");
    if (phi_ac < 0.0 || phi_ac > 0.15)
        throw DomainError(fmt::format("phi_AC = {} outside [0, 0.15]", phi_ac));
    if (phi_dc < 0.0 || phi_dc >= 0.5)
        throw DomainError(fmt::format("phi_DC = {} outside [0, 0.5)", phi_dc));
}

double coupler_frequency(const DeviceParams& p, double phi) {
    const double a = std::abs(phi);
    if (a > 0.5) throw DomainError(fmt::format("flux {} beyond half a flux quantum", phi));
    if (a == 0.5) {
        spdlog::warn("coupler biased at phi = 0.5: frequency is zero");
        return 0.0;
    }
    return p.omega_c0 * std::sqrt(std::abs(std::cos(kPi * phi)));
}

double flux_for_coupler_frequency(const DeviceParams& p, double omega_target) {
    if (omega_target > p.omega_c0)
        throw UnreachableFrequencyError(
            fmt::format("target {:.6g} MHz above coupler maximum {:.6g} MHz",
                        units::to_mhz(omega_target), units::to_mhz(p.omega_c0)));
    if (omega_target <= 0.0) throw UnreachableFrequencyError("target coupler frequency must be positive");
    const double r = omega_target / p.omega_c0;
    return std::acos(r * r) / kPi;
}

double dispersive_ratio(const DeviceParams& p, double omega_c) {
    return std::max(std::abs(p.g1 / (p.omega1 - omega_c)), std::abs(p.g2 / (p.omega2 - omega_c)));
}

bool check_dispersive(const DeviceParams& p, double omega_c) {
    const double r = dispersive_ratio(p, omega_c);
    if (r < kDispersiveLimit) return true;
    spdlog::warn("dispersive ratio {:.3f} at omega_c/2pi = {:.2f} MHz exceeds {}", r,
                 units::to_mhz(omega_c), kDispersiveLimit);
    return false;
}

ComplexMatrix bare_hamiltonian(const DeviceParams& p, double omega_c) {
    const ModeDims dims;
    const ComplexMatrix n = number_operator(3);
    const ComplexMatrix kerr = n * (n - identity(3));  // a^dag a^dag a a
    const std::array<double, 3> w{p.omega1, p.omega2, omega_c};
    const std::array<double, 3> al{p.alpha1, p.alpha2, p.alpha_c};
    ComplexMatrix h = ComplexMatrix::Zero(dims.total(), dims.total());
    for (std::size_t k = 0; k < 3; ++k) h += embed(w[k] * n + 0.5 * al[k] * kerr, k, dims);
    return h;
}

ComplexMatrix coupling_hamiltonian(const DeviceParams& p) {
    const ModeDims dims;
    const ComplexMatrix a1 = embed(ladder(3), 0, dims);
    const ComplexMatrix a2 = embed(ladder(3), 1, dims);
    const ComplexMatrix ac = embed(ladder(3), 2, dims);
    ComplexMatrix v = p.g1 * a1.adjoint() * ac + p.g2 * a2.adjoint() * ac + p.g12 * a1.adjoint() * a2;
    return v + v.adjoint().eval();
}

ComplexMatrix full_system_hamiltonian(const DeviceParams& p, double omega_c) {
    return bare_hamiltonian(p, omega_c) + coupling_hamiltonian(p);
}

SwParams sw_transformed(const DeviceParams& p, double omega_c) {
    const double d1 = p.omega1 - omega_c;
    const double d2 = p.omega2 - omega_c;
    if (std::abs(d1) < 1e-12 || std::abs(d2) < 1e-12)
        throw ResonantCouplerError("coupler resonant with a qubit");
    const double inv_delta = 0.5 * (1.0 / d1 + 1.0 / d2);
    return {p.omega1 + p.g1 * p.g1 / d1, p.omega2 + p.g2 * p.g2 / d2, p.g12 + p.g1 * p.g2 * inv_delta};
}

SwParams sw_at_flux(const DeviceParams& p, double phi) { return sw_transformed(p, coupler_frequency(p, phi)); }

double coupler_detuning_rate(const DeviceParams& p, double phi) {
    if (phi < 0.0) throw DomainError("flux must be non-negative");
    if (phi >= 0.5 - 1e-9) throw SingularDerivativeError("coupler slope diverges at phi = 0.5");
    const double c = std::cos(kPi * phi);
    return 0.5 * kPi * p.omega_c0 * std::sin(kPi * phi) / std::sqrt(c);
}

double dgtilde_dphi(const DeviceParams& p, double phi) {
    const double ddot = coupler_detuning_rate(p, phi);
    const double wc = coupler_frequency(p, phi);
    const double d1 = p.omega1 - wc;
    const double d2 = p.omega2 - wc;
    if (std::abs(d1) < 1e-12 || std::abs(d2) < 1e-12)
        throw ResonantCouplerError("coupler resonant with a qubit");
    const double delta = 2.0 * d1 * d2 / (d1 + d2);
    const double s = d1 + d2;
    return -2.0 * p.g1 * p.g2 * (ddot * d2 * d2 + d1 * d1 * ddot) / (delta * delta * s * s);
}

double second_difference(const std::function<double(double)>& f, double x, double h, double lo, double hi) {
    const double room = std::min(x - lo, hi - x);
    if (room <= 0.0) throw DomainError("second difference evaluated outside its domain");
    if (h >= room) {
        const double shrunk = 0.5 * room;
        spdlog::warn("second difference at {:.6g}: step {:.1e} shrunk to {:.1e} near domain edge", x, h, shrunk);
        h = shrunk;
    }
    const double f0 = f(x);
    auto d2 = [&](double s) { return (f(x + s) - 2.0 * f0 + f(x - s)) / (s * s); };
    const double coarse = d2(h);
    const double fine = d2(0.5 * h);
    const double scale = std::max(std::abs(fine), 1e-300);
    if (std::abs(coarse - fine) > 1e-5 * scale)
        spdlog::debug("second difference at {:.6g}: step-halving disagreement {:.2e}", x,
                      std::abs(coarse - fine) / scale);
    return coarse;
}

SecondDerivatives second_derivatives(const DeviceParams& p, double phi) {
    if (!(phi > 1e-3 && phi < 0.5 - 1e-3))
        throw DomainError(fmt::format("second derivatives need 1e-3 < phi < 0.499, got {}", phi));
    // differentiate the dispersive shifts only; the bare qubit frequencies are flux independent
    auto shift1 = [&](double x) { return sw_at_flux(p, x).omega1 - p.omega1; };
    auto shift2 = [&](double x) { return sw_at_flux(p, x).omega2 - p.omega2; };
    auto coupling = [&](double x) { return sw_at_flux(p, x).coupling - p.g12; };
    const double lo = 0.0, hi = 0.5;
    return {second_difference(shift1, phi, 1e-4, lo, hi), second_difference(shift2, phi, 1e-4, lo, hi),
            second_difference(coupling, phi, 1e-4, lo, hi)};
}

double modulation_detuning(const DeviceParams& p, const FluxDrive& drive) {
    drive.validate();
    const SwParams sw = sw_at_flux(p, drive.phi_dc);
    const double base = sw.omega1 - sw.omega2;
    if (drive.phi_ac == 0.0) return base;
    const SecondDerivatives d2 = second_derivatives(p, drive.phi_dc);
    return base + 0.25 * drive.phi_ac * drive.phi_ac * (d2.omega1 - d2.omega2);
}

double effective_coupling(const DeviceParams& p, const FluxDrive& drive) {
    drive.validate();
    return std::sqrt(2.0) * drive.phi_ac * dgtilde_dphi(p, drive.phi_dc);
}

EffectiveParams effective_params(const DeviceParams& p, const FluxDrive& drive) {
    const SwParams sw = sw_at_flux(p, drive.phi_dc);
    return {sw.omega1, sw.omega2, sw.coupling, modulation_detuning(p, drive), effective_coupling(p, drive)};
}

FluxWindow tuning_window(const DeviceParams& p) {
    const double gmax = std::max(std::abs(p.g1), std::abs(p.g2));
    const double edge = std::max(p.omega1, p.omega2) + gmax / kDispersiveLimit;
    if (edge >= p.omega_c0) throw RegimeError("no dispersive bias window below omega_c0");
    return {1e-4, flux_for_coupler_frequency(p, edge)};
}

double flux_for_effective_coupling(const DeviceParams& p, double phi_ac, double g_target) {
    if (!(g_target > 0.0)) throw DomainError("target g_e must be positive");
    if (!(phi_ac > 0.0)) throw DomainError("phi_AC must be positive to tune g_e");
    const FluxWindow w = tuning_window(p);
    auto residual = [&](double phi) {
        return std::sqrt(2.0) * phi_ac * std::abs(dgtilde_dphi(p, phi)) - g_target;
    };
    const double flo = residual(w.lo);
    const double fhi = residual(w.hi);
    if (flo > 0.0 || fhi < 0.0)
        throw RegimeError(fmt::format("g_e/2pi = {:.4g} MHz not reachable in the dispersive window",
                                      units::to_mhz(g_target)));
    std::uintmax_t iters = 200;
    auto tol = [](double a, double b) { return std::abs(b - a) < 1e-14; };
    const auto root = boost::math::tools::toms748_solve(residual, w.lo, w.hi, flo, fhi, tol, iters);
    if (iters >= 200) throw RootFindError("g_e root search did not converge");
    return 0.5 * (root.first + root.second);
}

ModulationCoefficients modulation_coefficients(const DeviceParams& p, double phi_dc, double phi_ac) {
    FluxDrive d;
    d.phi_dc = phi_dc;
    d.phi_ac = phi_ac;
    d.validate();
    const SwParams sw = sw_at_flux(p, phi_dc);
    const SecondDerivatives d2 = second_derivatives(p, phi_dc);
    const double q = 0.25 * phi_ac * phi_ac;
    ModulationCoefficients m{};
    m.phi_dc = phi_dc;
    m.phi_ac = phi_ac;
    m.g_static = sw.coupling + q * d2.coupling;
    m.g_linear = phi_ac * dgtilde_dphi(p, phi_dc);
    m.g_quadratic = q * d2.coupling;
    m.detuning12 = sw.omega1 - sw.omega2 + q * (d2.omega1 - d2.omega2);
    m.alpha1 = p.alpha1;
    m.alpha2 = p.alpha2;
    return m;
}

ComplexMatrix interaction_frame_generator(const ModulationCoefficients& m, const FluxDrive& drive, double t,
                                          FrameBlock block) {
    if (!drive.configured()) throw MissingParameterError("flux drive has no modulation frequency");
    const double arg = drive.omega_phi * t + drive.phase;
    const double gt = m.g_static + m.g_linear * std::cos(arg) + m.g_quadratic * std::cos(2.0 * arg);
    const double r2 = std::sqrt(2.0);
    ComplexMatrix h = ComplexMatrix::Zero(9, 9);
    // flat index 3*n1 + n2
    auto put = [&](int r, int c, Complex v) {
        h(r, c) += v;
        h(c, r) += std::conj(v);
    };
    put(4, 2, r2 * gt * std::exp(I * ((m.detuning12 - m.alpha2) * t)));
    if (block == FrameBlock::Full) {
        put(3, 1, gt * std::exp(I * (m.detuning12 * t)));
        put(6, 4, r2 * gt * std::exp(I * ((m.detuning12 + m.alpha1) * t)));
    }
    return h;
}

ComplexMatrix interaction_frame_generator(const DeviceParams& p, const FluxDrive& drive, double delta, double t,
                                          FrameBlock block) {
    if (!drive.configured()) throw MissingParameterError("flux drive has no modulation frequency");
    const ModulationCoefficients m = modulation_coefficients(p, drive.phi_dc, drive.phi_ac);
    const double expected = m.omega_phi(delta);
    if (std::abs(drive.omega_phi - expected) > 1e-9 * std::abs(expected))
        throw DomainError(fmt::format("drive frequency {:.9g} differs from Delta12phi - alpha2 + delta = {:.9g}",
                                      drive.omega_phi, expected));
    return interaction_frame_generator(m, drive, t, block);
}

ComplexMatrix effective_generator(const PulseSegment& segment, double t_local) {
    const double phi = segment.phase_at(t_local);
    ComplexMatrix h(2, 2);
    h(0, 0) = -0.5 * segment.delta_e;
    h(1, 1) = 0.5 * segment.delta_e;
    h(0, 1) = 0.5 * segment.g_e * std::exp(-I * phi);
    h(1, 0) = std::conj(h(0, 1));
    return h;
}

}  // namespace tcg
