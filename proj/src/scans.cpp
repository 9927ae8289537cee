#include "tcgate/scans.hpp"

#include <cmath>
#include <limits>

#include <fmt/core.h>
#include <spdlog/spdlog.h>

#include "tcgate/errors.hpp"
#include "tcgate/parallel.hpp"
#include "tcgate/units.hpp"
#include "tcgate/zzcalc.hpp"

namespace tcg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ScanColumn make_column(std::string name, std::size_t n, bool fidelity = false) {
    return {std::move(name), std::vector<double>(n, kNaN), fidelity};
}

std::string gate_snapshot(const GateSpec& g) {
    return fmt::format("gamma_rad={:.12g};chi_rad={:.12g};eta={:.12g};xi1_rad={:.12g}", g.gamma, g.chi, g.eta, g.xi1);
}

}  // namespace

std::size_t ScanResult::cells() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.values.size();
    return n;
}

const ScanColumn& ScanResult::column(const std::string& name) const {
    for (const auto& c : columns)
        if (c.name == name) return c;
    throw IndexError(fmt::format("scan has no column '{}'", name));
}

ScanColumn& ScanResult::column(const std::string& name) {
    return const_cast<ScanColumn&>(std::as_const(*this).column(name));
}

void ScanResult::validate() const {
    const std::size_t n = cells();
    for (const auto& a : axes)
        if (a.values.empty()) throw ShapeError(fmt::format("axis '{}' is empty", a.name));
    if (!flags.empty() && flags.size() != n) throw ShapeError("flag count does not match grid");
    for (const auto& c : columns) {
        if (c.values.size() != n)
            throw ShapeError(fmt::format("column '{}' has {} cells, grid has {}", c.name, c.values.size(), n));
        if (!c.fidelity) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = c.values[i];
            if (std::isnan(v) && !flags.empty() && !flags[i].empty()) continue;
            if (!(v >= 0.0 && v <= 1.0 + 1e-9))
                throw NumericalError(fmt::format("fidelity {} outside [0, 1] in column '{}'", v, c.name));
        }
    }
}

std::string device_snapshot(const DeviceParams& p) {
    using units::to_mhz;
    return fmt::format(
        "omega1_MHz={:.12g};omega2_MHz={:.12g};omega_c0_MHz={:.12g};alpha1_MHz={:.12g};alpha2_MHz={:.12g};"
        "alpha_c_MHz={:.12g};g1_MHz={:.12g};g2_MHz={:.12g};g12_MHz={:.12g}",
        to_mhz(p.omega1), to_mhz(p.omega2), to_mhz(p.omega_c0), to_mhz(p.alpha1), to_mhz(p.alpha2),
        to_mhz(p.alpha_c), to_mhz(p.g1), to_mhz(p.g2), to_mhz(p.g12));
}

std::string schedule_snapshot(const PulseSchedule& s) {
    std::string out = fmt::format("{}:", scheme_name(s.scheme));
    for (const auto& seg : s.segments)
        out += fmt::format("[T={:.12g},a={:.12g},b={:.12g},De={:.12g}]", seg.duration, seg.phi_intercept,
                           seg.phi_slope, seg.delta_e);
    return out;
}

PulseSchedule schedule_for(Scheme scheme, const GateSpec& gate, double g_e) {
    return synthesize(scheme, gate.gamma, gate.chi, gate.eta, g_e, gate.xi1);
}

WorkingPoint working_point(const DeviceParams& p, double phi_ac, double g_e) {
    WorkingPoint w{};
    w.g_e = g_e;
    w.phi_dc = flux_for_effective_coupling(p, phi_ac, g_e);
    w.omega_c = coupler_frequency(p, w.phi_dc);
    w.coeffs = modulation_coefficients(p, w.phi_dc, phi_ac);
    w.zz = zz_perturbative(p, w.omega_c).total();
    return w;
}

ScanResult fig1_scan(const Fig1Request& req) {
    const std::size_t n = req.detuning.size();
    ScanResult r;
    r.title = "fig1";
    ScanAxis axis{"detuning_MHz", {}};
    for (double d : req.detuning) axis.values.push_back(units::to_mhz(d));
    r.axes = {axis};
    r.columns = {make_column("omega_c_MHz", n),        make_column("phi_dc", n),
                 make_column("g_e_MHz", n),            make_column("abs_g_e_MHz", n),
                 make_column("abs_xi_closed_kHz", n),  make_column("abs_xi_generic_kHz", n),
                 make_column("xi_exact_kHz", n),       make_column("xi2_generic_kHz", n),
                 make_column("xi3_generic_kHz", n),    make_column("xi4_generic_kHz", n),
                 make_column("xi2_closed_kHz", n),     make_column("xi3_closed_kHz", n),
                 make_column("xi4_closed_kHz", n)};
    r.flags.assign(n, "");
    r.metadata = {{"device", device_snapshot(req.device)}, {"phi_ac", fmt::format("{:.12g}", req.phi_ac)},
                  {"xi_convention", "E11-E10-E01+E00"}};

    parallel_for(n, req.threads, [&](std::size_t i) {
        const double wc = req.device.omega1 + req.detuning[i];
        auto set = [&](const char* name, double v) { r.column(name).values[i] = v; };
        std::string flag;
        try {
            const double phi = flux_for_coupler_frequency(req.device, wc);
            const double ge = std::sqrt(2.0) * req.phi_ac * dgtilde_dphi(req.device, phi);
            set("omega_c_MHz", units::to_mhz(wc));
            set("phi_dc", phi);
            set("g_e_MHz", units::to_mhz(ge));
            set("abs_g_e_MHz", std::abs(units::to_mhz(ge)));
            const ZZDecomposition closed = zz_closed_form(req.device, wc);
            const ZZDecomposition generic = zz_perturbative(req.device, wc);
            set("abs_xi_closed_kHz", std::abs(units::to_khz(closed.total())));
            set("abs_xi_generic_kHz", std::abs(units::to_khz(generic.total())));
            set("xi2_generic_kHz", units::to_khz(generic.orders[2]));
            set("xi3_generic_kHz", units::to_khz(generic.orders[3]));
            set("xi4_generic_kHz", units::to_khz(generic.orders[4]));
            set("xi2_closed_kHz", units::to_khz(closed.orders[2]));
            set("xi3_closed_kHz", units::to_khz(closed.orders[3]));
            set("xi4_closed_kHz", units::to_khz(closed.orders[4]));
            const double rel = std::abs(closed.total() - generic.total()) / std::abs(generic.total());
            if (rel > 0.1) flag = fmt::format("closed/generic differ {:.0f}%", 100.0 * rel);
            try {
                set("xi_exact_kHz", units::to_khz(zz_exact(req.device, wc)));
            } catch (const HybridizationError& e) {
                flag += flag.empty() ? "" : "; ";
                flag += "exact: hybridized";
            }
        } catch (const DegenerateLevelError& e) {
            flag = fmt::format("degenerate: {}", e.what());
        }
        r.flags[i] = flag;
    });
    std::size_t mismatched = 0;
    for (const auto& f : r.flags)
        if (f.find("closed/generic") != std::string::npos) ++mismatched;
    if (mismatched > 0) spdlog::info("fig1: {} of {} rows with closed-form vs generic ZZ beyond 10%", mismatched, n);
    return r;
}

ScanResult landscape_scan(const LandscapeRequest& req) {
    const std::size_t ng = req.g_e.size(), nc = req.chi.size(), n = ng * nc;
    ScanResult r;
    r.title = "landscape";
    ScanAxis ax_g{"g_e_MHz", {}}, ax_c{"chi_over_pi", {}};
    for (double g : req.g_e) ax_g.values.push_back(units::to_mhz(g));
    for (double c : req.chi) ax_c.values.push_back(c / units::pi);
    r.axes = {ax_g, ax_c};
    r.columns = {make_column("fidelity", n, true), make_column("phi_dc", n), make_column("zz_kHz", n),
                 make_column("duration_us", n)};
    r.flags.assign(n, "");
    r.metadata = {{"device", device_snapshot(req.device)},
                  {"phi_ac", fmt::format("{:.12g}", req.phi_ac)},
                  {"gate", gate_snapshot(req.gate)},
                  {"scheme", "UNGQC"},
                  {"model", req.include_zz ? "H'' + zz sigma_z sigma_z" : "H''"},
                  {"step_scale", fmt::format("{:.12g}", req.step_scale)}};

    // bias and model coefficients depend on g_e only
    std::vector<WorkingPoint> rows(ng);
    std::vector<std::string> row_flag(ng);
    parallel_for(ng, req.threads, [&](std::size_t i) {
        try {
            rows[i] = working_point(req.device, req.phi_ac, req.g_e[i]);
        } catch (const RegimeError& e) {
            row_flag[i] = "unrealizable g_e";
        }
    });

    const ComplexMatrix target = ideal_gate(req.gate.gamma);
    parallel_for(n, req.threads, [&](std::size_t idx) {
        const std::size_t i = idx / nc, j = idx % nc;
        if (!row_flag[i].empty()) {
            r.flags[idx] = row_flag[i];
            return;
        }
        const WorkingPoint& wp = rows[i];
        r.columns[1].values[idx] = wp.phi_dc;
        r.columns[2].values[idx] = units::to_khz(wp.zz);
        try {
            GateSpec g = req.gate;
            g.chi = req.chi[j];
            const PulseSchedule s = schedule_for(Scheme::Ungqc, g, wp.g_e);
            StaticErrors err;
            if (req.include_zz) err.zz = wp.zz;
            const HppModel model = make_hpp_model(s, wp.coeffs, err);
            const ComplexMatrix u = propagate_hpp(model, req.step_scale);
            r.columns[0].values[idx] = gate_fidelity(computational_block(u, Layout::Cz5), target);
            r.columns[3].values[idx] = s.duration();
        } catch (const SingularTrajectoryError&) {
            r.flags[idx] = "singular trajectory";
        } catch (const RegimeError&) {
            r.flags[idx] = "drive detuning out of regime";
        }
    });
    return r;
}

namespace {

double infidelity(const PulseSchedule& s, const StaticErrors& e, double gamma, long steps) {
    const ComplexMatrix u = propagate_effective(s, e, steps);
    return 1.0 - gate_fidelity(computational_block(u, Layout::Cz5), ideal_gate(gamma));
}

std::vector<std::pair<std::string, std::string>> robustness_meta(const RobustnessRequest& req,
                                                                 const PulseSchedule& s) {
    return {{"scheme", std::string(scheme_name(req.scheme))},
            {"gate", gate_snapshot(req.gate)},
            {"g_e_MHz", fmt::format("{:.12g}", units::to_mhz(req.g_e))},
            {"schedule", schedule_snapshot(s)},
            {"zz_operator", "xi*diag(1,-1,-1,1,0) on |00>,|01>,|10>,|11>,|02>"}};
}

}  // namespace

ScanResult zz_robustness_scan(const RobustnessRequest& req, const std::vector<double>& xi_over_ge) {
    const PulseSchedule s = schedule_for(req.scheme, req.gate, req.g_e);
    ScanResult r;
    r.title = "zz_robustness";
    r.axes = {{"xi_over_ge", xi_over_ge}};
    const std::size_t n = xi_over_ge.size();
    r.columns = {make_column("infidelity", n), make_column("fidelity", n, true)};
    r.metadata = robustness_meta(req, s);
    parallel_for(n, req.threads, [&](std::size_t i) {
        StaticErrors e;
        e.zz = xi_over_ge[i] * req.g_e;
        const double inf = infidelity(s, e, req.gate.gamma, req.steps_per_segment);
        r.columns[0].values[i] = inf;
        r.columns[1].values[i] = 1.0 - inf;
    });
    return r;
}

ScanResult drift_robustness_scan(const RobustnessRequest& req, const std::vector<double>& d1,
                                 const std::vector<double>& d2) {
    const PulseSchedule s = schedule_for(req.scheme, req.gate, req.g_e);
    ScanResult r;
    r.title = "drift_robustness";
    r.axes = {{"delta1_over_ge", d1}, {"delta2_over_ge", d2}};
    const std::size_t n = d1.size() * d2.size();
    r.columns = {make_column("infidelity", n), make_column("fidelity", n, true)};
    r.metadata = robustness_meta(req, s);
    parallel_for(n, req.threads, [&](std::size_t idx) {
        StaticErrors e;
        e.drift1 = d1[idx / d2.size()] * req.g_e;
        e.drift2 = d2[idx % d2.size()] * req.g_e;
        const double inf = infidelity(s, e, req.gate.gamma, req.steps_per_segment);
        r.columns[0].values[idx] = inf;
        r.columns[1].values[idx] = 1.0 - inf;
    });
    return r;
}

namespace {

std::vector<FidelityPoint> effective_fidelity_trajectory(const DecoherenceRequest& req, Scheme scheme, double kappa,
                                                         long stride) {
    const PulseSchedule s = schedule_for(scheme, req.gate, req.g_e);
    DecoherenceRun run;
    run.model = Model::Effective;
    run.kappa = kappa;
    run.steps_per_segment = req.steps_per_segment;
    run.stride = stride;
    return average_state_fidelity(
        [&](const ComplexMatrix& rho0) { return lindblad_schedule(s, nullptr, rho0, run); },
        ideal_gate(req.gate.gamma), req.quadrature, Layout::Cz5, req.threads);
}

}  // namespace

ScanResult decoherence_scan(const DecoherenceRequest& req, const std::vector<double>& kappa) {
    ScanResult r;
    r.title = "decoherence";
    r.axes = {{"kappa_per_us", kappa}};
    const std::size_t n = kappa.size();
    ScanColumn ratio = make_column("kappa_over_ge", n);
    for (std::size_t i = 0; i < n; ++i) ratio.values[i] = kappa[i] / req.g_e;
    r.columns.push_back(ratio);
    for (Scheme sc : req.schemes) {
        ScanColumn col = make_column(fmt::format("fidelity_{}", scheme_name(sc)), n, true);
        for (std::size_t i = 0; i < n; ++i)
            col.values[i] = effective_fidelity_trajectory(req, sc, kappa[i], 0).back().fidelity;
        r.columns.push_back(std::move(col));
    }
    r.metadata = {{"gate", gate_snapshot(req.gate)},
                  {"g_e_MHz", fmt::format("{:.12g}", units::to_mhz(req.g_e))},
                  {"model", "H_e"},
                  {"quadrature", std::to_string(req.quadrature)}};
    return r;
}

ScanResult time_resolved(const DecoherenceRequest& req, Scheme scheme, double kappa, long stride) {
    const auto traj = effective_fidelity_trajectory(req, scheme, kappa, stride);
    ScanResult r;
    r.title = fmt::format("time_resolved_{}", scheme_name(scheme));
    ScanAxis ax{"t_us", {}};
    ScanColumn col = make_column("fidelity", traj.size(), true);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        ax.values.push_back(traj[i].t);
        col.values[i] = traj[i].fidelity;
    }
    r.axes = {ax};
    r.columns = {col};
    r.metadata = {{"scheme", std::string(scheme_name(scheme))},
                  {"gate", gate_snapshot(req.gate)},
                  {"g_e_MHz", fmt::format("{:.12g}", units::to_mhz(req.g_e))},
                  {"kappa_per_us", fmt::format("{:.12g}", kappa)},
                  {"model", "H_e"}};
    return r;
}

namespace {

std::vector<FidelityPoint> hpp_fidelity_trajectory(const HppDecoherenceRequest& req, double g_e, WorkingPoint& wp,
                                                   PulseSchedule& s) {
    wp = working_point(req.device, req.phi_ac, g_e);
    s = schedule_for(req.scheme, req.gate, g_e);
    StaticErrors err;
    if (req.include_zz) err.zz = wp.zz;
    const HppModel model = make_hpp_model(s, wp.coeffs, err);
    DecoherenceRun run;
    run.model = Model::Hpp;
    run.kappa = req.kappa;
    run.step_scale = req.step_scale;
    run.stride = req.stride;
    return average_state_fidelity(
        [&](const ComplexMatrix& rho0) { return lindblad_schedule(s, &model, rho0, run); },
        ideal_gate(req.gate.gamma), req.quadrature, Layout::Cz5, req.threads);
}

std::vector<std::pair<std::string, std::string>> hpp_meta(const HppDecoherenceRequest& req) {
    return {{"device", device_snapshot(req.device)},
            {"phi_ac", fmt::format("{:.12g}", req.phi_ac)},
            {"scheme", std::string(scheme_name(req.scheme))},
            {"gate", gate_snapshot(req.gate)},
            {"kappa_per_us", fmt::format("{:.12g}", req.kappa)},
            {"model", req.include_zz ? "H'' + zz sigma_z sigma_z" : "H''"},
            {"quadrature", std::to_string(req.quadrature)}};
}

}  // namespace

ScanResult hpp_coupling_sweep(const HppDecoherenceRequest& req, const std::vector<double>& g_e) {
    ScanResult r;
    r.title = "hpp_coupling_sweep";
    ScanAxis ax{"g_e_MHz", {}};
    for (double g : g_e) ax.values.push_back(units::to_mhz(g));
    r.axes = {ax};
    const std::size_t n = g_e.size();
    r.columns = {make_column("fidelity", n, true), make_column("phi_dc", n), make_column("zz_kHz", n),
                 make_column("duration_us", n)};
    r.flags.assign(n, "");
    r.metadata = hpp_meta(req);
    HppDecoherenceRequest inner = req;
    inner.stride = 0;
    for (std::size_t i = 0; i < n; ++i) {
        try {
            WorkingPoint wp;
            PulseSchedule s;
            const auto traj = hpp_fidelity_trajectory(inner, g_e[i], wp, s);
            r.columns[0].values[i] = traj.back().fidelity;
            r.columns[1].values[i] = wp.phi_dc;
            r.columns[2].values[i] = units::to_khz(wp.zz);
            r.columns[3].values[i] = s.duration();
        } catch (const RegimeError&) {
            r.flags[i] = "unrealizable g_e";
        }
    }
    return r;
}

ScanResult hpp_time_resolved(const HppDecoherenceRequest& req, double g_e) {
    WorkingPoint wp;
    PulseSchedule s;
    const auto traj = hpp_fidelity_trajectory(req, g_e, wp, s);
    ScanResult r;
    r.title = fmt::format("hpp_time_resolved_{}", scheme_name(req.scheme));
    ScanAxis ax{"t_us", {}};
    ScanColumn col = make_column("fidelity", traj.size(), true);
    for (std::size_t i = 0; i < traj.size(); ++i) {
        ax.values.push_back(traj[i].t);
        col.values[i] = traj[i].fidelity;
    }
    r.axes = {ax};
    r.columns = {col};
    r.metadata = hpp_meta(req);
    r.metadata.emplace_back("g_e_MHz", fmt::format("{:.12g}", units::to_mhz(g_e)));
    r.metadata.emplace_back("phi_dc", fmt::format("{:.12g}", wp.phi_dc));
    return r;
}

}  // namespace tcg
