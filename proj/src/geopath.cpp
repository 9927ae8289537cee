#include "tcgate/geopath.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <fmt/core.h>
#include <spdlog/spdlog.h>

#include "tcgate/errors.hpp"
#include "tcgate/units.hpp"

namespace tcg {

namespace {

constexpr double kPi = units::pi;
constexpr double kPoleRegion = 1e-4;

bool is_longitude(const PulseSegment& s) { return s.phi_slope == 0.0 && s.delta_e == 0.0; }

std::vector<PulseSegment> sngqc_segments(double gamma, double g_e, double xi1) {
    const double xi2 = xi1 - gamma;
    return {{kPi / g_e, g_e, xi1 + 0.5 * kPi, 0.0, 0.0}, {kPi / g_e, g_e, xi2 - 0.5 * kPi, 0.0, 0.0}};
}

}  // namespace

std::string_view scheme_name(Scheme s) {
    switch (s) {
        case Scheme::Sngqc: return "SNGQC";
        case Scheme::Ungqc: return "UNGQC";
        case Scheme::Dynamical: return "DYNAMICAL";
    }
    return "?";
}

Scheme parse_scheme(std::string_view name) {
    std::string up(name);
    std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
    if (up == "SNGQC") return Scheme::Sngqc;
    if (up == "UNGQC") return Scheme::Ungqc;
    if (up == "DYNAMICAL" || up == "DYN") return Scheme::Dynamical;
    throw ConfigError(fmt::format("unknown scheme '{}'", name));
}

double PulseSchedule::duration() const {
    double t = 0.0;
    for (const auto& s : segments) t += s.duration;
    return t;
}

double PulseSchedule::frame_angle() const {
    double theta = 0.0;
    for (const auto& s : segments) theta += s.delta_e * s.duration;
    return theta;
}

PulseSchedule synthesize(Scheme scheme, double gamma, double chi, double eta, double g_e, double xi1) {
    if (!std::isfinite(gamma) || std::abs(gamma) >= 2.0 * kPi || gamma == 0.0)
        throw DomainError(fmt::format("target phase {} outside (-2pi, 2pi) without 0", gamma));
    if (!(g_e > 0.0) || !std::isfinite(g_e)) throw DomainError("g_e must be positive");

    PulseSchedule out;
    out.scheme = scheme;
    out.target_phase = gamma;
    out.traversed_phase = gamma;
    out.chi = chi;
    out.eta = eta;
    out.xi1 = xi1;
    out.g_e = g_e;

    switch (scheme) {
        case Scheme::Sngqc:
            out.chi = kPi;
            out.eta = 0.0;
            out.segments = sngqc_segments(gamma, g_e, xi1);
            break;

        case Scheme::Dynamical: {
            const double theta_z = 2.0 * std::abs(gamma);
            const double mid = gamma > 0.0 ? 0.5 * kPi : -0.5 * kPi;
            out.segments = {{0.5 * kPi / g_e, g_e, xi1, 0.0, 0.0},
                            {theta_z / g_e, g_e, xi1 + mid, 0.0, 0.0},
                            {0.5 * kPi / g_e, g_e, xi1 + kPi, 0.0, 0.0}};
            break;
        }

        case Scheme::Ungqc: {
            if (!(chi > 0.0 && chi <= kPi + 1e-12)) throw DomainError(fmt::format("chi = {} outside (0, pi]", chi));
            if (std::abs(eta) < 1e-12 || std::abs(1.0 + eta) < 1e-12)
                throw DomainError(fmt::format("eta = {} is excluded", eta));
            if (std::abs(chi - kPi) < 1e-12) {
                out.chi = kPi;
                out.segments = sngqc_segments(gamma, g_e, xi1);
                break;
            }
            if (chi < kPoleRegion || kPi - chi < kPoleRegion)
                throw DomainError(fmt::format("chi = {} too close to a pole for a latitude leg", chi));
            const double s = std::sin(chi);
            const double c = std::cos(chi);
            const double k = (1.0 + eta) * c - eta;
            if (std::abs(k) < 1e-9)
                throw SingularTrajectoryError(fmt::format("(1+eta)cos(chi) = eta at chi = {}, eta = {}", chi, eta));
            auto latitude_time = [&](double g) { return 2.0 * g * s * k / ((1.0 + eta) * (1.0 - c) * g_e); };
            double lat = latitude_time(gamma);
            if (lat < 0.0) {
                const double flipped = gamma - 2.0 * kPi * (gamma > 0.0 ? 1.0 : -1.0);
                out.warnings.push_back(fmt::format(
                    "latitude duration negative for gamma = {:.6g}; traversing azimuth oppositely with gamma = {:.6g}",
                    gamma, flipped));
                spdlog::debug(out.warnings.back());
                out.traversed_phase = flipped;
                lat = latitude_time(flipped);
            }
            const double slope = -g_e / (s * k);
            const double delta_e = g_e / (s * k) - g_e * c / s;
            const double xi2 = xi1 + slope * lat;
            out.segments = {{chi / g_e, g_e, xi1 + 0.5 * kPi, 0.0, 0.0},
                            {lat, g_e, xi1, slope, delta_e},
                            {chi / g_e, g_e, xi2 - 0.5 * kPi, 0.0, 0.0}};
            break;
        }
    }
    return out;
}

std::vector<DriveSegment> drive_schedule(const PulseSchedule& schedule, const ModulationCoefficients& m) {
    const double carrier = m.detuning12 - m.alpha2;
    const double flip = m.g_linear < 0.0 ? kPi : 0.0;
    std::vector<DriveSegment> out;
    double t = 0.0, theta = 0.0;
    for (const auto& seg : schedule.segments) {
        DriveSegment d;
        d.start = t;
        d.duration = seg.duration;
        d.delta = seg.phi_slope + seg.delta_e;
        if (std::abs(d.delta) >= 0.1 * std::abs(carrier))
            throw RegimeError(fmt::format("|delta| = {:.4g} rad/us not small against Delta12phi - alpha2 = {:.4g}",
                                          std::abs(d.delta), std::abs(carrier)));
        d.omega_phi = carrier + d.delta;
        d.phase = seg.phi_intercept + theta - d.delta * t + flip;
        d.phi_ac = m.phi_ac;
        d.phi_dc = m.phi_dc;
        d.g_e = seg.g_e;
        d.delta_e = seg.delta_e;
        out.push_back(d);
        t += seg.duration;
        theta += seg.delta_e * seg.duration;
    }
    return out;
}

std::vector<PathSample> integrate_path(const PulseSchedule& schedule, int samples_per_segment) {
    const int n = std::max(samples_per_segment, 2000);
    std::vector<PathSample> out;
    double chi = 0.0, xi = 0.0, t0 = 0.0;

    for (std::size_t k = 0; k < schedule.segments.size(); ++k) {
        const PulseSegment& seg = schedule.segments[k];
        if (seg.duration <= 0.0) continue;
        const double g = seg.g_e;
        const bool at_north = chi < kPoleRegion;
        const bool at_south = kPi - chi < kPoleRegion;
        // a longitude leg leaving a pole stays on its meridian; RK4 is stiff near the far pole
        const bool meridian = at_north || at_south;
        if (meridian) {
            if (!is_longitude(seg))
                throw IntegrationError(fmt::format("segment {} starts at a pole but is not a longitude leg", k));
            // azimuth is undefined on the pole; take the value the leg leaves along
            xi = seg.phase_at(0.0) + (at_north ? -0.5 : 0.5) * kPi;
        }

        auto rhs = [&](double tl, double x, double y) -> std::array<double, 2> {
            const double d = seg.phase_at(tl) - y;
            return {g * std::sin(d), -seg.delta_e - g * std::cos(d) / std::tan(x)};
        };

        const double h = seg.duration / n;
        const int label = static_cast<int>(k);
        out.push_back({t0, chi, xi, label});
        for (int i = 0; i < n; ++i) {
            const double tl = i * h;
            if (meridian || chi < kPoleRegion || kPi - chi < kPoleRegion) {
                if (!is_longitude(seg))
                    throw IntegrationError(fmt::format("segment {} reached a pole off a longitude leg", k));
                const double dir = std::sin(seg.phase_at(tl) - xi) >= 0.0 ? 1.0 : -1.0;
                chi = std::clamp(chi + dir * g * h, 0.0, kPi);
            } else {
                const auto k1 = rhs(tl, chi, xi);
                const auto k2 = rhs(tl + 0.5 * h, chi + 0.5 * h * k1[0], xi + 0.5 * h * k1[1]);
                const auto k3 = rhs(tl + 0.5 * h, chi + 0.5 * h * k2[0], xi + 0.5 * h * k2[1]);
                const auto k4 = rhs(tl + h, chi + h * k3[0], xi + h * k3[1]);
                chi += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
                xi += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
                if (!std::isfinite(chi) || !std::isfinite(xi))
                    throw IntegrationError(fmt::format("path diverged in segment {}", k));
                chi = std::clamp(chi, 0.0, kPi);
            }
            out.push_back({t0 + (i + 1) * h, chi, xi, label});
        }
        t0 += seg.duration;
    }
    return out;
}

PhaseLedger phase_accounting(const std::vector<PathSample>& samples, const PulseSchedule& schedule) {
    struct Integrands {
        double total, dynamical, geometric;
    };
    std::vector<double> seg_start(schedule.segments.size(), 0.0);
    for (std::size_t k = 1; k < seg_start.size(); ++k) seg_start[k] = seg_start[k - 1] + schedule.segments[k - 1].duration;

    const double scale = std::max(schedule.g_e, 1e-300);
    auto integrands = [&](const PathSample& p) -> Integrands {
        const PulseSegment& seg = schedule.segments.at(static_cast<std::size_t>(p.segment));
        const double tl = p.t - seg_start[static_cast<std::size_t>(p.segment)];
        const double c = std::cos(p.chi);
        const double s = std::sin(p.chi);
        double xdot = -seg.delta_e;
        if (s > 0.0) xdot -= seg.g_e * c / s * std::cos(seg.phase_at(tl) - p.xi);
        const double num_total = xdot * (1.0 - c) + seg.delta_e;
        const double num_dyn = xdot * s * s + seg.delta_e;
        auto ratio = [&](double num) {
            if (std::abs(num) < 1e-9 * scale) return 0.0;
            if (std::abs(c) < 1e-9)
                throw InvalidPathError(fmt::format("phase integrand singular at t = {:.6g} us", p.t));
            return num / (2.0 * c);
        };
        return {ratio(num_total), ratio(num_dyn), -0.5 * xdot * (1.0 - c)};
    };

    PhaseLedger led{0.0, 0.0, 0.0};
    for (std::size_t i = 1; i < samples.size(); ++i) {
        const PathSample& a = samples[i - 1];
        const PathSample& b = samples[i];
        if (a.segment != b.segment) {
            // azimuth jump where segments meet
            const double dxi = b.xi - a.xi;
            if (std::abs(dxi) > 1e-12) {
                const double c = std::cos(b.chi);
                const double s = std::sin(b.chi);
                led.geometric += -0.5 * dxi * (1.0 - c);
                led.dynamical += std::abs(s) < 1e-9 ? 0.0 : dxi * s * s / (2.0 * c);
                if (1.0 - c > 1e-12) {
                    if (std::abs(c) < 1e-9) throw InvalidPathError("azimuth jump on the equator");
                    led.total += dxi * (1.0 - c) / (2.0 * c);
                }
            }
            continue;
        }
        const double h = b.t - a.t;
        const Integrands fa = integrands(a);
        const Integrands fb = integrands(b);
        led.total += 0.5 * h * (fa.total + fb.total);
        led.dynamical += 0.5 * h * (fa.dynamical + fb.dynamical);
        led.geometric += 0.5 * h * (fa.geometric + fb.geometric);
    }
    if (std::abs(led.total - led.dynamical - led.geometric) > 1e-6)
        throw NumericalError(fmt::format("phase ledger does not close: {:.3e}",
                                         led.total - led.dynamical - led.geometric));
    return led;
}

ComplexMatrix ideal_gate(double gamma) {
    ComplexMatrix u = ComplexMatrix::Identity(4, 4);
    u(3, 3) = std::exp(I * gamma);
    return u;
}

std::string schedule_to_text(const PulseSchedule& schedule, const std::vector<DriveSegment>& drive) {
    if (!drive.empty() && drive.size() != schedule.segments.size())
        throw ShapeError("drive list does not match schedule");
    std::ostringstream os;
    os << fmt::format("# scheme={} gamma_rad={:.12g} traversed_gamma_rad={:.12g} chi_rad={:.12g} eta={:.12g} "
                      "xi1_rad={:.12g} total_us={:.12g}\n",
                      scheme_name(schedule.scheme), schedule.target_phase, schedule.traversed_phase, schedule.chi,
                      schedule.eta, schedule.xi1, schedule.duration());
    for (std::size_t k = 0; k < schedule.segments.size(); ++k) {
        const PulseSegment& s = schedule.segments[k];
        os << fmt::format("duration_us={:.12g} g_e_rad_per_us={:.12g} phi_a_rad={:.12g} phi_b_rad_per_us={:.12g} "
                          "delta_e_rad_per_us={:.12g}",
                          s.duration, s.g_e, s.phi_intercept, s.phi_slope, s.delta_e);
        if (!drive.empty())
            os << fmt::format(" omega_phi_rad_per_us={:.12g} drive_phase_rad={:.12g}", drive[k].omega_phi,
                              drive[k].phase);
        os << '\n';
    }
    return os.str();
}

std::vector<PulseSegment> segments_from_text(const std::string& text) {
    std::vector<PulseSegment> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        PulseSegment s;
        int seen = 0;
        std::istringstream fields(line);
        std::string tok;
        while (fields >> tok) {
            const auto eq = tok.find('=');
            if (eq == std::string::npos) throw ConfigError(fmt::format("malformed field '{}'", tok));
            const std::string key = tok.substr(0, eq);
            const double v = std::stod(tok.substr(eq + 1));
            if (key == "duration_us") s.duration = v, ++seen;
            else if (key == "g_e_rad_per_us") s.g_e = v, ++seen;
            else if (key == "phi_a_rad") s.phi_intercept = v, ++seen;
            else if (key == "phi_b_rad_per_us") s.phi_slope = v, ++seen;
            else if (key == "delta_e_rad_per_us") s.delta_e = v, ++seen;
        }
        if (seen != 5) throw ConfigError(fmt::format("segment line missing fields: '{}'", line));
        out.push_back(s);
    }
    return out;
}

}  // namespace tcg
