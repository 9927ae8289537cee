#include "tcgate/runner.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/core.h>
#include <spdlog/spdlog.h>

#include "tcgate/errors.hpp"
#include "tcgate/geopath.hpp"
#include "tcgate/output.hpp"
#include "tcgate/scans.hpp"
#include "tcgate/units.hpp"
#include "tcgate/zzcalc.hpp"

namespace tcg {

namespace {

namespace fs = std::filesystem;

struct Context {
    RunConfig cfg;
    DeviceParams device;
    double phi_dc;
    double g_e;
    fs::path dir;
    RunManifest manifest;
};

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

void save(Context& ctx, const ScanResult& r, const std::string& file) {
    const fs::path path = ctx.dir / file;
    emit_csv(r, path.string());
    ctx.manifest.outputs.push_back(file);
    ctx.manifest.scan_metadata.emplace_back(file, r.metadata);
}

GateSpec gate_spec(const RunConfig& cfg) { return {cfg.gamma(), cfg.chi(), cfg.gate.eta, cfg.gate.xi1_rad}; }

std::string phase_label(double over_pi) { return fmt::format("{:g}pi", over_pi); }

void cmd_fig1(Context& ctx) {
    Fig1Request req;
    req.device = ctx.device;
    req.phi_ac = ctx.cfg.drive.phi_ac;
    for (double d : linspace(ctx.cfg.scan.detuning_min_MHz, ctx.cfg.scan.detuning_max_MHz, ctx.cfg.scan.detuning_points))
        req.detuning.push_back(units::from_mhz(d));
    req.threads = ctx.cfg.numerics.threads;
    save(ctx, fig1_scan(req), "fig1.csv");
}

void cmd_landscape(Context& ctx) {
    const auto& sc = ctx.cfg.scan;
    LandscapeRequest req;
    req.device = ctx.device;
    req.phi_ac = ctx.cfg.drive.phi_ac;
    req.gate = gate_spec(ctx.cfg);
    for (int k = 1; k <= sc.chi_points; ++k) req.chi.push_back(units::pi * k / sc.chi_points);
    for (double g : linspace(sc.g_e_min_MHz, sc.g_e_max_MHz, sc.g_e_points)) req.g_e.push_back(units::from_mhz(g));
    req.step_scale = ctx.cfg.numerics.step_scale;
    req.threads = ctx.cfg.numerics.threads;
    for (double gp : sc.gammas_over_pi) {
        req.gate.gamma = gp * units::pi;
        const ScanResult r = landscape_scan(req);
        save(ctx, r, fmt::format("landscape_gamma_{}.csv", phase_label(gp)));
        const auto& f = r.column("fidelity").values;
        std::size_t best = 0;
        for (std::size_t i = 0; i < f.size(); ++i)
            if (!std::isnan(f[i]) && (std::isnan(f[best]) || f[i] > f[best])) best = i;
        spdlog::info("landscape gamma = {}: best F = {:.6f} at g_e/2pi = {:.3g} MHz, chi = {:.3g} pi", phase_label(gp),
                     f[best], r.axes[0].values[best / req.chi.size()], r.axes[1].values[best % req.chi.size()]);
    }
}

void cmd_robustness(Context& ctx) {
    const auto& sc = ctx.cfg.scan;
    RobustnessRequest req;
    req.gate = gate_spec(ctx.cfg);
    req.g_e = ctx.g_e;
    req.steps_per_segment = ctx.cfg.numerics.steps_per_segment;
    req.threads = ctx.cfg.numerics.threads;
    const auto xi = linspace(-sc.xi_max_over_ge, sc.xi_max_over_ge, sc.robust_points);
    const auto drift = linspace(-sc.drift_max_over_ge, sc.drift_max_over_ge, sc.robust_points);
    for (Scheme s : {Scheme::Ungqc, Scheme::Sngqc, Scheme::Dynamical}) {
        req.scheme = s;
        save(ctx, zz_robustness_scan(req, xi), fmt::format("zz_{}.csv", scheme_name(s)));
        save(ctx, drift_robustness_scan(req, drift, drift), fmt::format("drift_{}.csv", scheme_name(s)));
    }
}

void cmd_decoherence(Context& ctx) {
    const auto& sc = ctx.cfg.scan;
    DecoherenceRequest req;
    req.gate = gate_spec(ctx.cfg);
    req.g_e = ctx.g_e;
    req.quadrature = ctx.cfg.numerics.quadrature;
    req.steps_per_segment = ctx.cfg.numerics.steps_per_segment;
    req.threads = ctx.cfg.numerics.threads;
    std::vector<double> kappa;
    for (double r : linspace(0.0, sc.kappa_max_over_ge, sc.kappa_points)) kappa.push_back(r * ctx.g_e);
    save(ctx, decoherence_scan(req, kappa), "decoherence_kappa.csv");

    const long stride = std::max(1L, req.steps_per_segment / sc.time_samples_per_segment);
    for (Scheme s : req.schemes)
        save(ctx, time_resolved(req, s, sc.kappa_marker_over_ge * ctx.g_e, stride),
             fmt::format("time_resolved_{}.csv", scheme_name(s)));

    if (!sc.hpp_decoherence) return;
    HppDecoherenceRequest hreq;
    hreq.device = ctx.device;
    hreq.phi_ac = ctx.cfg.drive.phi_ac;
    hreq.gate = gate_spec(ctx.cfg);
    hreq.scheme = Scheme::Ungqc;
    hreq.kappa = units::from_khz(sc.hpp_kappa_kHz);
    hreq.quadrature = ctx.cfg.numerics.hpp_quadrature;
    hreq.step_scale = ctx.cfg.numerics.step_scale;
    hreq.threads = ctx.cfg.numerics.threads;
    std::vector<double> ge;
    for (double g : linspace(sc.hpp_g_e_min_MHz, sc.hpp_g_e_max_MHz, sc.hpp_g_e_points)) ge.push_back(units::from_mhz(g));
    save(ctx, hpp_coupling_sweep(hreq, ge), "hpp_coupling_sweep.csv");
    hreq.stride = 500;
    save(ctx, hpp_time_resolved(hreq, units::from_mhz(sc.hpp_time_resolved_g_e_MHz)), "hpp_time_resolved_UNGQC.csv");
}

void cmd_synth(Context& ctx) {
    const PulseSchedule s = schedule_for(ctx.cfg.gate.scheme, gate_spec(ctx.cfg), ctx.g_e);
    const ModulationCoefficients m = modulation_coefficients(ctx.device, ctx.phi_dc, ctx.cfg.drive.phi_ac);
    const auto drive = drive_schedule(s, m);
    for (const auto& w : s.warnings) {
        spdlog::warn("{}", w);
        ctx.manifest.warnings.push_back(w);
    }
    write_text((ctx.dir / "schedule.txt").string(), schedule_to_text(s, drive));
    ctx.manifest.outputs.emplace_back("schedule.txt");

    ScanResult r;
    r.title = "schedule";
    ScanAxis ax{"segment", {}};
    const std::size_t n = s.segments.size();
    std::vector<ScanColumn> cols = {{"duration_us", {}, false},       {"g_e_rad_per_us", {}, false},
                                    {"phi_a_rad", {}, false},         {"phi_b_rad_per_us", {}, false},
                                    {"delta_e_rad_per_us", {}, false}, {"omega_phi_rad_per_us", {}, false},
                                    {"delta_rad_per_us", {}, false},   {"drive_phase_rad", {}, false}};
    for (std::size_t k = 0; k < n; ++k) {
        ax.values.push_back(static_cast<double>(k));
        const auto& seg = s.segments[k];
        const double row[] = {seg.duration,      seg.g_e,         seg.phi_intercept, seg.phi_slope,
                              seg.delta_e,       drive[k].omega_phi, drive[k].delta, drive[k].phase};
        for (std::size_t c = 0; c < cols.size(); ++c) cols[c].values.push_back(row[c]);
    }
    r.axes = {ax};
    r.columns = cols;
    r.metadata = {{"device", device_snapshot(ctx.device)},
                  {"scheme", std::string(scheme_name(s.scheme))},
                  {"phi_dc", fmt::format("{:.12g}", ctx.phi_dc)},
                  {"traversed_gamma_rad", fmt::format("{:.12g}", s.traversed_phase)},
                  {"frame_angle_rad", fmt::format("{:.12g}", s.frame_angle())}};
    save(ctx, r, "schedule.csv");
}

void cmd_zz(Context& ctx) {
    const double wc = coupler_frequency(ctx.device, ctx.phi_dc);
    ScanResult r;
    r.title = "zz";
    r.axes = {{"omega_c_MHz", {units::to_mhz(wc)}}};
    r.flags = {""};
    auto add = [&](const std::string& name, double v) { r.columns.push_back({name, {v}, false}); };
    try {
        const ZZDecomposition gen = zz_perturbative(ctx.device, wc);
        const ZZDecomposition cf = zz_closed_form(ctx.device, wc);
        for (int k = 0; k < 5; ++k) add(fmt::format("xi{}_generic_kHz", k), units::to_khz(gen.orders[k]));
        add("xi_generic_kHz", units::to_khz(gen.total()));
        for (int k = 0; k < 5; ++k) add(fmt::format("xi{}_closed_kHz", k), units::to_khz(cf.orders[k]));
        add("xi_closed_kHz", units::to_khz(cf.total()));
        add("xi_exact_kHz", units::to_khz(zz_exact(ctx.device, wc)));
        add("pauli_coefficient_generic_kHz", units::to_khz(gen.pauli_coefficient()));
    } catch (const NumericalError& e) {
        r.columns.clear();
        r.flags = {e.what()};
        add("xi_generic_kHz", std::nan(""));
    }
    r.metadata = {{"device", device_snapshot(ctx.device)},
                  {"phi_dc", fmt::format("{:.12g}", ctx.phi_dc)},
                  {"xi_convention", "E11-E10-E01+E00"}};
    save(ctx, r, "zz.csv");
}

}  // namespace

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names{"fig1", "landscape", "robustness", "decoherence", "synth", "zz"};
    return names;
}

int run(const std::string& subcommand, const RunOptions& options) {
    const auto started = std::chrono::steady_clock::now();
    try {
        Context ctx;
        std::string config_bytes;
        if (options.config_path) {
            std::ifstream in(*options.config_path);
            if (!in) throw ConfigError(fmt::format("cannot read config '{}'", *options.config_path));
            std::ostringstream ss;
            ss << in.rdbuf();
            config_bytes = ss.str();
            ctx.cfg = RunConfig::from_ini_text(config_bytes);
        } else {
            ctx.cfg = RunConfig::defaults();
        }
        if (options.out_dir) ctx.cfg.output.directory = *options.out_dir;
        if (options.threads) ctx.cfg.numerics.threads = *options.threads;
        ctx.cfg.validate();
        if (std::find(subcommands().begin(), subcommands().end(), subcommand) == subcommands().end())
            throw ConfigError(fmt::format("unknown subcommand '{}'", subcommand));

        ctx.device = ctx.cfg.device_params();
        ctx.device.validate();
        if (ctx.cfg.drive.target_g_e_MHz) {
            ctx.g_e = units::from_mhz(*ctx.cfg.drive.target_g_e_MHz);
            ctx.phi_dc = flux_for_effective_coupling(ctx.device, ctx.cfg.drive.phi_ac, ctx.g_e);
        } else {
            ctx.phi_dc = *ctx.cfg.drive.phi_dc;
            FluxDrive d;
            d.phi_dc = ctx.phi_dc;
            d.phi_ac = ctx.cfg.drive.phi_ac;
            ctx.g_e = std::abs(effective_coupling(ctx.device, d));
        }
        check_dispersive(ctx.device, coupler_frequency(ctx.device, ctx.phi_dc));

        ctx.dir = ctx.cfg.output.directory;
        std::error_code ec;
        fs::create_directories(ctx.dir, ec);
        if (ec) throw Error(fmt::format("cannot create output directory '{}': {}", ctx.dir.string(), ec.message()));

        ctx.manifest.subcommand = subcommand;
        ctx.manifest.config_hash = sha256_hex(ctx.cfg.to_ini_text());
        ctx.manifest.tool_version = kToolVersion;
        ctx.manifest.started_utc = utc_now();
        ctx.manifest.threads = ctx.cfg.numerics.threads;
        ctx.manifest.seedless = options.seedless;

        if (subcommand == "fig1") cmd_fig1(ctx);
        else if (subcommand == "landscape") cmd_landscape(ctx);
        else if (subcommand == "robustness") cmd_robustness(ctx);
        else if (subcommand == "decoherence") cmd_decoherence(ctx);
        else if (subcommand == "synth") cmd_synth(ctx);
        else cmd_zz(ctx);

        ctx.manifest.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
        write_text((ctx.dir / "manifest.json").string(), ctx.manifest.to_json());
        return kExitOk;
    } catch (const ConfigError& e) {
        spdlog::error("config error: {}", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        spdlog::error("{}: {}", subcommand, e.what());
        return kExitNumerical;
    }
}

}  // namespace tcg
