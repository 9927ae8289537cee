#pragma once

#include <array>
#include <functional>
#include <limits>

#include "tcgate/pulse.hpp"
#include "tcgate/qmath.hpp"

namespace tcg {

// All frequencies in rad/us.
struct DeviceParams {
    double omega1 = 0.0;
    double omega2 = 0.0;
    double omega_c0 = 0.0;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double alpha_c = 0.0;
    double g1 = 0.0;
    double g2 = 0.0;
    double g12 = 0.0;

    static DeviceParams reference();
    void validate() const;
};

struct FluxDrive {
    double phi_dc = 0.0;
    double phi_ac = 0.0;
    double omega_phi = std::numeric_limits<double>::quiet_NaN();
    double phase = 0.0;

    bool configured() const { return omega_phi == omega_phi; }
    void validate() const;
};

struct SwParams {
    double omega1;
    double omega2;
    double coupling;
};

struct SecondDerivatives {
    double omega1;
    double omega2;
    double coupling;
};

struct EffectiveParams {
    double omega1;
    double omega2;
    double coupling;
    double detuning12;
    double g_e;
};

inline constexpr double kDispersiveLimit = 0.15;

double coupler_frequency(const DeviceParams& p, double phi);
double flux_for_coupler_frequency(const DeviceParams& p, double omega_target);

// max_k g_k / |omega_k - omega_c|
double dispersive_ratio(const DeviceParams& p, double omega_c);
bool check_dispersive(const DeviceParams& p, double omega_c);

ComplexMatrix bare_hamiltonian(const DeviceParams& p, double omega_c);
ComplexMatrix coupling_hamiltonian(const DeviceParams& p);
ComplexMatrix full_system_hamiltonian(const DeviceParams& p, double omega_c);

SwParams sw_transformed(const DeviceParams& p, double omega_c);
SwParams sw_at_flux(const DeviceParams& p, double phi);

// d Delta_k / d phi, identical for both qubits
double coupler_detuning_rate(const DeviceParams& p, double phi);
double dgtilde_dphi(const DeviceParams& p, double phi);

// central second difference with a step-halving check
double second_difference(const std::function<double(double)>& f, double x, double h = 1e-4,
                         double lo = -std::numeric_limits<double>::infinity(),
                         double hi = std::numeric_limits<double>::infinity());
SecondDerivatives second_derivatives(const DeviceParams& p, double phi);

double modulation_detuning(const DeviceParams& p, const FluxDrive& drive);
double effective_coupling(const DeviceParams& p, const FluxDrive& drive);
EffectiveParams effective_params(const DeviceParams& p, const FluxDrive& drive);

// Flux window searched when tuning |g_e|: from the flat point up to the dispersive edge.
struct FluxWindow {
    double lo;
    double hi;
};
FluxWindow tuning_window(const DeviceParams& p);
// phi_DC with |g_e(phi_DC)| = g_target; RegimeError when out of reach
double flux_for_effective_coupling(const DeviceParams& p, double phi_ac, double g_target);

// Taylor coefficients of g'(t) around phi_DC plus the frame detunings.
struct ModulationCoefficients {
    double phi_dc;
    double phi_ac;
    double g_static;     // g~ + (phi_AC^2/4) g~''
    double g_linear;     // phi_AC g~'
    double g_quadratic;  // (phi_AC^2/4) g~''
    double detuning12;   // Delta_12,phi
    double alpha1;
    double alpha2;

    // drive frequency resonant with |11> <-> |02> up to delta
    double omega_phi(double delta) const { return detuning12 - alpha2 + delta; }
};
ModulationCoefficients modulation_coefficients(const DeviceParams& p, double phi_dc, double phi_ac);

enum class FrameBlock { Full, CzBlock };

// Two-transmon (3x3 levels) generator in the frame rotating at the dressed qubit frequencies.
ComplexMatrix interaction_frame_generator(const ModulationCoefficients& m, const FluxDrive& drive,
                                          double t, FrameBlock block = FrameBlock::Full);
ComplexMatrix interaction_frame_generator(const DeviceParams& p, const FluxDrive& drive, double delta,
                                          double t, FrameBlock block = FrameBlock::Full);

// 2x2 on (|11>, |02>)
ComplexMatrix effective_generator(const PulseSegment& segment, double t_local);

}  // namespace tcg
