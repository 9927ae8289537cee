#pragma once

#include "tcgate/device.hpp"
#include "tcgate/scans.hpp"

namespace tcg {

// Gate run on the full transmon-coupler Hamiltonian with the coupler
// frequency following the flux drive. Excitation number is conserved, so only the 0, 1 and
// 2 excitation manifolds (1 + 3 + 6 states) are integrated.
struct LabFrameRequest {
    DeviceParams device;
    double phi_ac = 0.1;
    GateSpec gate;
    Scheme scheme = Scheme::Ungqc;
    double g_e = 0.0;
    double step_scale = 1.0;
    int calibration_rounds = 6;
};

// One-period (stroboscopic) generator of the drive, restricted to (|11>, |02>) in the frame
// where |11> turns at the single-excitation quasi-energies and |02> one drive quantum lower.
struct ExchangeBlock {
    double e11;
    double e02;
    Complex coupling;
    double eps10;
    double eps01;
};

struct LabFrameResult {
    double fidelity_lab;          // drive calibrated so its exchange block matches H''
    double fidelity_lab_nominal;  // drive taken straight from the H'' coefficients
    double fidelity_hpp;
    double leakage_lab;
    double zz11;                  // |11> shift handed to H'', rad/us
    double carrier_offset;        // calibrated carrier minus Delta12phi - alpha2, rad/us
    double flux_offset;           // calibrated phi_DC minus the H'' working point
    ExchangeBlock lab_block;
    ExchangeBlock hpp_block;
    long steps;
};

LabFrameResult lab_frame_comparison(const LabFrameRequest& req);

}  // namespace tcg
