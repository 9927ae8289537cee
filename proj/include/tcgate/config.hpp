#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tcgate/device.hpp"
#include "tcgate/pulse.hpp"

namespace tcg {

// Values in the units named by their keys; converted to rad/us by the accessors below.
struct RunConfig {
    struct Device {
        double omega1_MHz = 4500.0;
        double omega2_MHz = 4000.0;
        double omega_c0_MHz = 7500.0;
        double alpha1_MHz = -200.0;
        double alpha2_MHz = -200.0;
        double alpha_c_MHz = -200.0;
        double g1_MHz = 86.0;
        double g2_MHz = 86.0;
        double g12_MHz = 5.0;
    } device;

    struct Drive {
        double phi_ac = 0.1;
        std::optional<double> phi_dc;
        std::optional<double> target_g_e_MHz = 2.0;
    } drive;

    struct Gate {
        double gamma_over_pi = 1.0;
        Scheme scheme = Scheme::Ungqc;
        double chi_over_pi = 0.43;
        double eta = 0.5;
        double xi1_rad = 0.0;
    } gate;

    struct Scan {
        double detuning_min_MHz = 1000.0;
        double detuning_max_MHz = 3000.0;
        int detuning_points = 41;
        int chi_points = 25;
        double g_e_min_MHz = 0.25;
        double g_e_max_MHz = 6.25;
        int g_e_points = 25;
        std::vector<double> gammas_over_pi{1.0, 0.5, 0.25};
        double xi_max_over_ge = 0.1;
        double drift_max_over_ge = 0.1;
        int robust_points = 41;
        double kappa_max_over_ge = 0.01;
        int kappa_points = 11;
        double kappa_marker_over_ge = 0.002;
        int time_samples_per_segment = 50;
        bool hpp_decoherence = true;
        double hpp_kappa_kHz = 2.0;
        double hpp_g_e_min_MHz = 1.0;
        double hpp_g_e_max_MHz = 7.0;
        int hpp_g_e_points = 13;
        double hpp_time_resolved_g_e_MHz = 4.3;
    } scan;

    struct Numerics {
        long steps_per_segment = 2000;
        int quadrature = 16;
        int hpp_quadrature = 8;
        double step_scale = 1.0;
        int threads = 1;
    } numerics;

    struct Output {
        std::string directory = "out";
        std::string format = "csv";
    } output;

    static RunConfig defaults() { return {}; }
    static RunConfig from_ini_text(const std::string& text);
    static RunConfig from_file(const std::string& path);
    std::string to_ini_text() const;

    void validate() const;

    DeviceParams device_params() const;
    double gamma() const;
    double chi() const;
};

// evenly spaced, inclusive of both ends
std::vector<double> linspace(double lo, double hi, int points);

}  // namespace tcg
