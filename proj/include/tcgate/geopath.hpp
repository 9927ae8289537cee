#pragma once

#include <string>
#include <vector>

#include "tcgate/device.hpp"
#include "tcgate/pulse.hpp"
#include "tcgate/qmath.hpp"

namespace tcg {

struct PulseSchedule {
    Scheme scheme = Scheme::Ungqc;
    double target_phase = 0.0;    // gamma' requested
    double traversed_phase = 0.0; // gamma actually encircled (differs by 2pi after a direction flip)
    double chi = 0.0;
    double eta = 0.0;
    double xi1 = 0.0;
    double g_e = 0.0;
    std::vector<PulseSegment> segments;
    std::vector<std::string> warnings;

    double duration() const;
    // accumulated sigma~_z rotation angle, integral of Delta_e
    double frame_angle() const;
};

PulseSchedule synthesize(Scheme scheme, double gamma, double chi, double eta, double g_e, double xi1 = 0.0);

struct DriveSegment {
    double start = 0.0;
    double duration = 0.0;
    double omega_phi = 0.0;
    double delta = 0.0;
    double phase = 0.0;
    double phi_ac = 0.0;
    double phi_dc = 0.0;
    double g_e = 0.0;
    double delta_e = 0.0;
};

// Maps effective controls to flux-drive parameters. Phases are referenced to the global
// clock of the rotating frame and include the accumulated sigma~_z angle, plus pi when the
// coupling slope is negative.
std::vector<DriveSegment> drive_schedule(const PulseSchedule& schedule, const ModulationCoefficients& m);

struct PathSample {
    double t;
    double chi;
    double xi;
    int segment;
};

std::vector<PathSample> integrate_path(const PulseSchedule& schedule, int samples_per_segment = 2000);

struct PhaseLedger {
    double total;
    double dynamical;
    double geometric;
};

PhaseLedger phase_accounting(const std::vector<PathSample>& samples, const PulseSchedule& schedule);

// diag(1, 1, 1, e^{i gamma})
ComplexMatrix ideal_gate(double gamma);

std::string schedule_to_text(const PulseSchedule& schedule, const std::vector<DriveSegment>& drive = {});
// reads back the segment lines of schedule_to_text
std::vector<PulseSegment> segments_from_text(const std::string& text);

}  // namespace tcg
