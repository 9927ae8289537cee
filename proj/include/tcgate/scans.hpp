#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tcgate/device.hpp"
#include "tcgate/fidelity.hpp"
#include "tcgate/geopath.hpp"

namespace tcg {

struct ScanAxis {
    std::string name;
    std::vector<double> values;
};

struct ScanColumn {
    std::string name;
    std::vector<double> values;
    bool fidelity = false;
};

// Cells are stored row-major over the axes (last axis fastest).
struct ScanResult {
    std::string title;
    std::vector<ScanAxis> axes;
    std::vector<ScanColumn> columns;
    std::vector<std::string> flags;  // empty, or one entry per cell
    std::vector<std::pair<std::string, std::string>> metadata;

    std::size_t cells() const;
    const ScanColumn& column(const std::string& name) const;
    ScanColumn& column(const std::string& name);
    void validate() const;
};

std::string device_snapshot(const DeviceParams& p);
std::string schedule_snapshot(const PulseSchedule& s);

// Static bias and derived model quantities for one target |g_e|.
struct WorkingPoint {
    double g_e;
    double phi_dc;
    double omega_c;
    ModulationCoefficients coeffs;
    double zz;  // perturbative E11 - E10 - E01 + E00 at omega_c
};
WorkingPoint working_point(const DeviceParams& p, double phi_ac, double g_e);

struct Fig1Request {
    DeviceParams device;
    double phi_ac = 0.1;
    std::vector<double> detuning;  // omega_c - omega_1, rad/us
    int threads = 1;
};
ScanResult fig1_scan(const Fig1Request& req);

struct GateSpec {
    double gamma = 0.0;
    double chi = 0.0;
    double eta = 0.5;
    double xi1 = 0.0;
};

struct LandscapeRequest {
    DeviceParams device;
    double phi_ac = 0.1;
    GateSpec gate;
    std::vector<double> chi;  // rad
    std::vector<double> g_e;  // rad/us
    bool include_zz = true;
    double step_scale = 1.0;
    int threads = 1;
};
ScanResult landscape_scan(const LandscapeRequest& req);

struct RobustnessRequest {
    Scheme scheme = Scheme::Ungqc;
    GateSpec gate;
    double g_e = 0.0;
    long steps_per_segment = 2000;
    int threads = 1;
};
// xi in units of g_e
ScanResult zz_robustness_scan(const RobustnessRequest& req, const std::vector<double>& xi_over_ge);
// drifts in units of g_e
ScanResult drift_robustness_scan(const RobustnessRequest& req, const std::vector<double>& d1,
                                 const std::vector<double>& d2);

struct DecoherenceRequest {
    std::vector<Scheme> schemes{Scheme::Ungqc, Scheme::Sngqc, Scheme::Dynamical};
    GateSpec gate;
    double g_e = 0.0;
    int quadrature = 16;
    long steps_per_segment = 2000;
    int threads = 1;
};
ScanResult decoherence_scan(const DecoherenceRequest& req, const std::vector<double>& kappa);
ScanResult time_resolved(const DecoherenceRequest& req, Scheme scheme, double kappa, long stride);

// Decoherence together with every oscillating term (H'' plus static ZZ).
struct HppDecoherenceRequest {
    DeviceParams device;
    double phi_ac = 0.1;
    GateSpec gate;
    Scheme scheme = Scheme::Ungqc;
    double kappa = 0.0;
    int quadrature = 8;
    bool include_zz = true;
    double step_scale = 1.0;
    long stride = 0;
    int threads = 1;
};
ScanResult hpp_coupling_sweep(const HppDecoherenceRequest& req, const std::vector<double>& g_e);
ScanResult hpp_time_resolved(const HppDecoherenceRequest& req, double g_e);

PulseSchedule schedule_for(Scheme scheme, const GateSpec& gate, double g_e);

}  // namespace tcg
