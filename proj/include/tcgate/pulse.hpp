#pragma once

#include <string>
#include <string_view>

namespace tcg {

enum class Scheme { Sngqc, Ungqc, Dynamical };

std::string_view scheme_name(Scheme s);
Scheme parse_scheme(std::string_view name);

// One piece of a schedule in the effective two-level frame.
// phi_e(t_local) = phi_intercept + phi_slope * t_local
struct PulseSegment {
    double duration = 0.0;
    double g_e = 0.0;
    double phi_intercept = 0.0;
    double phi_slope = 0.0;
    double delta_e = 0.0;

    double phase_at(double t_local) const { return phi_intercept + phi_slope * t_local; }
};

}  // namespace tcg
