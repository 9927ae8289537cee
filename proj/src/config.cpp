#include "tcgate/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/core.h>

#include "tcgate/errors.hpp"
#include "tcgate/units.hpp"

namespace tcg {

namespace {

namespace pt = boost::property_tree;

double parse_double(const std::string& field, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ConfigError(fmt::format("{}: '{}' is not a number", field, text));
    }
    while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
    if (used != text.size()) throw ConfigError(fmt::format("{}: trailing characters in '{}'", field, text));
    if (!std::isfinite(v)) throw ConfigError(fmt::format("{}: value must be finite", field));
    return v;
}

long parse_integer(const std::string& field, const std::string& text) {
    const double v = parse_double(field, text);
    if (v != std::floor(v)) throw ConfigError(fmt::format("{}: '{}' is not an integer", field, text));
    return static_cast<long>(v);
}

bool parse_bool(const std::string& field, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes") return true;
    if (text == "false" || text == "0" || text == "no") return false;
    throw ConfigError(fmt::format("{}: '{}' is not a boolean", field, text));
}

std::vector<double> parse_list(const std::string& field, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) throw ConfigError(fmt::format("{}: empty list entry", field));
        out.push_back(parse_double(field, item.substr(b, e - b + 1)));
    }
    if (out.empty()) throw ConfigError(fmt::format("{}: list is empty", field));
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string& field, const std::string& value)>;

template <class Block, class T>
Setter number(Block RunConfig::*block, T Block::*member) {
    return [block, member](RunConfig& c, const std::string& f, const std::string& v) {
        if constexpr (std::is_same_v<T, double>)
            (c.*block).*member = parse_double(f, v);
        else
            (c.*block).*member = static_cast<T>(parse_integer(f, v));
    };
}

const std::map<std::string, Setter>& setters() {
    using C = RunConfig;
    static const std::map<std::string, Setter> table = {
        {"device.omega1_MHz", number(&C::device, &C::Device::omega1_MHz)},
        {"device.omega2_MHz", number(&C::device, &C::Device::omega2_MHz)},
        {"device.omega_c0_MHz", number(&C::device, &C::Device::omega_c0_MHz)},
        {"device.alpha1_MHz", number(&C::device, &C::Device::alpha1_MHz)},
        {"device.alpha2_MHz", number(&C::device, &C::Device::alpha2_MHz)},
        {"device.alpha_c_MHz", number(&C::device, &C::Device::alpha_c_MHz)},
        {"device.g1_MHz", number(&C::device, &C::Device::g1_MHz)},
        {"device.g2_MHz", number(&C::device, &C::Device::g2_MHz)},
        {"device.g12_MHz", number(&C::device, &C::Device::g12_MHz)},
        {"drive.phi_ac", number(&C::drive, &C::Drive::phi_ac)},
        {"drive.phi_dc", [](C& c, const std::string& f, const std::string& v) { c.drive.phi_dc = parse_double(f, v); }},
        {"drive.target_g_e_MHz",
         [](C& c, const std::string& f, const std::string& v) { c.drive.target_g_e_MHz = parse_double(f, v); }},
        {"gate.gamma_over_pi", number(&C::gate, &C::Gate::gamma_over_pi)},
        {"gate.scheme", [](C& c, const std::string&, const std::string& v) { c.gate.scheme = parse_scheme(v); }},
        {"gate.chi_over_pi", number(&C::gate, &C::Gate::chi_over_pi)},
        {"gate.eta", number(&C::gate, &C::Gate::eta)},
        {"gate.xi1_rad", number(&C::gate, &C::Gate::xi1_rad)},
        {"scan.detuning_min_MHz", number(&C::scan, &C::Scan::detuning_min_MHz)},
        {"scan.detuning_max_MHz", number(&C::scan, &C::Scan::detuning_max_MHz)},
        {"scan.detuning_points", number(&C::scan, &C::Scan::detuning_points)},
        {"scan.chi_points", number(&C::scan, &C::Scan::chi_points)},
        {"scan.g_e_min_MHz", number(&C::scan, &C::Scan::g_e_min_MHz)},
        {"scan.g_e_max_MHz", number(&C::scan, &C::Scan::g_e_max_MHz)},
        {"scan.g_e_points", number(&C::scan, &C::Scan::g_e_points)},
        {"scan.gammas_over_pi",
         [](C& c, const std::string& f, const std::string& v) { c.scan.gammas_over_pi = parse_list(f, v); }},
        {"scan.xi_max_over_ge", number(&C::scan, &C::Scan::xi_max_over_ge)},
        {"scan.drift_max_over_ge", number(&C::scan, &C::Scan::drift_max_over_ge)},
        {"scan.robust_points", number(&C::scan, &C::Scan::robust_points)},
        {"scan.kappa_max_over_ge", number(&C::scan, &C::Scan::kappa_max_over_ge)},
        {"scan.kappa_points", number(&C::scan, &C::Scan::kappa_points)},
        {"scan.kappa_marker_over_ge", number(&C::scan, &C::Scan::kappa_marker_over_ge)},
        {"scan.time_samples_per_segment", number(&C::scan, &C::Scan::time_samples_per_segment)},
        {"scan.hpp_decoherence",
         [](C& c, const std::string& f, const std::string& v) { c.scan.hpp_decoherence = parse_bool(f, v); }},
        {"scan.hpp_kappa_kHz", number(&C::scan, &C::Scan::hpp_kappa_kHz)},
        {"scan.hpp_g_e_min_MHz", number(&C::scan, &C::Scan::hpp_g_e_min_MHz)},
        {"scan.hpp_g_e_max_MHz", number(&C::scan, &C::Scan::hpp_g_e_max_MHz)},
        {"scan.hpp_g_e_points", number(&C::scan, &C::Scan::hpp_g_e_points)},
        {"scan.hpp_time_resolved_g_e_MHz", number(&C::scan, &C::Scan::hpp_time_resolved_g_e_MHz)},
        {"numerics.steps_per_segment", number(&C::numerics, &C::Numerics::steps_per_segment)},
        {"numerics.quadrature", number(&C::numerics, &C::Numerics::quadrature)},
        {"numerics.hpp_quadrature", number(&C::numerics, &C::Numerics::hpp_quadrature)},
        {"numerics.step_scale", number(&C::numerics, &C::Numerics::step_scale)},
        {"numerics.threads", number(&C::numerics, &C::Numerics::threads)},
        {"output.directory", [](C& c, const std::string&, const std::string& v) { c.output.directory = v; }},
        {"output.format", [](C& c, const std::string&, const std::string& v) { c.output.format = v; }},
    };
    return table;
}

void require(bool ok, const std::string& field, const std::string& why) {
    if (!ok) throw ConfigError(fmt::format("{}: {}", field, why));
}

}  // namespace

RunConfig RunConfig::from_ini_text(const std::string& text) {
    pt::ptree tree;
    std::istringstream in(text);
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(fmt::format("config parse error at line {}: {}", e.line(), e.message()));
    }
    RunConfig c = defaults();
    if (tree.get_child_optional("drive")) {
        const auto& drive = tree.get_child("drive");
        if (drive.count("phi_dc") || drive.count("target_g_e_MHz")) {
            c.drive.phi_dc.reset();
            c.drive.target_g_e_MHz.reset();
        }
    }
    for (const auto& [section, body] : tree) {
        if (body.empty() && !body.data().empty())
            throw ConfigError(fmt::format("{}: key outside any section", section));
        for (const auto& [key, node] : body) {
            const std::string field = section + "." + key;
            const auto it = setters().find(field);
            if (it == setters().end()) throw ConfigError(fmt::format("{}: unknown key", field));
            it->second(c, field, node.data());
        }
    }
    c.validate();
    return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(fmt::format("cannot read config '{}'", path));
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_ini_text(ss.str());
}

std::string RunConfig::to_ini_text() const {
    std::string s;
    auto line = [&](const std::string& k, double v) { s += fmt::format("{} = {:.12g}\n", k, v); };
    s += "[device]\n";
    line("omega1_MHz", device.omega1_MHz);
    line("omega2_MHz", device.omega2_MHz);
    line("omega_c0_MHz", device.omega_c0_MHz);
    line("alpha1_MHz", device.alpha1_MHz);
    line("alpha2_MHz", device.alpha2_MHz);
    line("alpha_c_MHz", device.alpha_c_MHz);
    line("g1_MHz", device.g1_MHz);
    line("g2_MHz", device.g2_MHz);
    line("g12_MHz", device.g12_MHz);
    s += "\n[drive]\n";
    line("phi_ac", drive.phi_ac);
    if (drive.phi_dc) line("phi_dc", *drive.phi_dc);
    if (drive.target_g_e_MHz) line("target_g_e_MHz", *drive.target_g_e_MHz);
    s += "\n[gate]\n";
    line("gamma_over_pi", gate.gamma_over_pi);
    s += fmt::format("scheme = {}\n", scheme_name(gate.scheme));
    line("chi_over_pi", gate.chi_over_pi);
    line("eta", gate.eta);
    line("xi1_rad", gate.xi1_rad);
    s += "\n[scan]\n";
    line("detuning_min_MHz", scan.detuning_min_MHz);
    line("detuning_max_MHz", scan.detuning_max_MHz);
    line("detuning_points", scan.detuning_points);
    line("chi_points", scan.chi_points);
    line("g_e_min_MHz", scan.g_e_min_MHz);
    line("g_e_max_MHz", scan.g_e_max_MHz);
    line("g_e_points", scan.g_e_points);
    std::string gl;
    for (double g : scan.gammas_over_pi) gl += (gl.empty() ? "" : ", ") + fmt::format("{:.12g}", g);
    s += fmt::format("gammas_over_pi = {}\n", gl);
    line("xi_max_over_ge", scan.xi_max_over_ge);
    line("drift_max_over_ge", scan.drift_max_over_ge);
    line("robust_points", scan.robust_points);
    line("kappa_max_over_ge", scan.kappa_max_over_ge);
    line("kappa_points", scan.kappa_points);
    line("kappa_marker_over_ge", scan.kappa_marker_over_ge);
    line("time_samples_per_segment", scan.time_samples_per_segment);
    s += fmt::format("hpp_decoherence = {}\n", scan.hpp_decoherence ? "true" : "false");
    line("hpp_kappa_kHz", scan.hpp_kappa_kHz);
    line("hpp_g_e_min_MHz", scan.hpp_g_e_min_MHz);
    line("hpp_g_e_max_MHz", scan.hpp_g_e_max_MHz);
    line("hpp_g_e_points", scan.hpp_g_e_points);
    line("hpp_time_resolved_g_e_MHz", scan.hpp_time_resolved_g_e_MHz);
    s += "\n[numerics]\n";
    line("steps_per_segment", static_cast<double>(numerics.steps_per_segment));
    line("quadrature", numerics.quadrature);
    line("hpp_quadrature", numerics.hpp_quadrature);
    line("step_scale", numerics.step_scale);
    line("threads", numerics.threads);
    s += "\n[output]\n";
    s += fmt::format("directory = {}\nformat = {}\n", output.directory, output.format);
    return s;
}

void RunConfig::validate() const {
    require(device.omega_c0_MHz > 0.0, "device.omega_c0_MHz", "must be positive");
    require(device.alpha1_MHz < 0.0, "device.alpha1_MHz", "must be negative");
    require(device.alpha2_MHz < 0.0, "device.alpha2_MHz", "must be negative");
    require(device.omega_c0_MHz > std::max(device.omega1_MHz, device.omega2_MHz), "device.omega_c0_MHz",
            "coupler maximum must lie above both qubits");
    require(drive.phi_ac > 0.0 && drive.phi_ac <= 0.15, "drive.phi_ac", "must lie in (0, 0.15]");
    require(drive.phi_dc.has_value() != drive.target_g_e_MHz.has_value(), "drive",
            "exactly one of phi_dc and target_g_e_MHz must be given");
    if (drive.phi_dc) require(*drive.phi_dc > 0.0 && *drive.phi_dc < 0.5, "drive.phi_dc", "must lie in (0, 0.5)");
    if (drive.target_g_e_MHz) require(*drive.target_g_e_MHz > 0.0, "drive.target_g_e_MHz", "must be positive");
    require(gate.gamma_over_pi != 0.0 && std::abs(gate.gamma_over_pi) < 2.0, "gate.gamma_over_pi",
            "must lie in (-2, 2) without 0");
    require(gate.chi_over_pi > 0.0 && gate.chi_over_pi <= 1.0, "gate.chi_over_pi", "must lie in (0, 1]");
    require(gate.eta != 0.0 && gate.eta != -1.0, "gate.eta", "0 and -1 are excluded");
    require(scan.detuning_min_MHz > 0.0 && scan.detuning_min_MHz <= scan.detuning_max_MHz, "scan.detuning_min_MHz",
            "range must be positive and ordered");
    require(scan.detuning_points >= 1, "scan.detuning_points", "must be at least 1");
    require(scan.chi_points >= 1, "scan.chi_points", "must be at least 1");
    require(scan.g_e_min_MHz > 0.0 && scan.g_e_min_MHz <= scan.g_e_max_MHz, "scan.g_e_min_MHz",
            "range must be positive and ordered");
    require(scan.g_e_points >= 1, "scan.g_e_points", "must be at least 1");
    for (double g : scan.gammas_over_pi)
        require(g != 0.0 && std::abs(g) < 2.0, "scan.gammas_over_pi", "entries must lie in (-2, 2) without 0");
    require(scan.xi_max_over_ge >= 0.0, "scan.xi_max_over_ge", "must be non-negative");
    require(scan.drift_max_over_ge >= 0.0, "scan.drift_max_over_ge", "must be non-negative");
    require(scan.robust_points >= 1, "scan.robust_points", "must be at least 1");
    require(scan.kappa_max_over_ge >= 0.0, "scan.kappa_max_over_ge", "must be non-negative");
    require(scan.kappa_points >= 1, "scan.kappa_points", "must be at least 1");
    require(scan.kappa_marker_over_ge >= 0.0, "scan.kappa_marker_over_ge", "must be non-negative");
    require(scan.time_samples_per_segment >= 1, "scan.time_samples_per_segment", "must be at least 1");
    require(scan.hpp_kappa_kHz >= 0.0, "scan.hpp_kappa_kHz", "must be non-negative");
    require(scan.hpp_g_e_min_MHz > 0.0 && scan.hpp_g_e_min_MHz <= scan.hpp_g_e_max_MHz, "scan.hpp_g_e_min_MHz",
            "range must be positive and ordered");
    require(scan.hpp_g_e_points >= 1, "scan.hpp_g_e_points", "must be at least 1");
    require(scan.hpp_time_resolved_g_e_MHz > 0.0, "scan.hpp_time_resolved_g_e_MHz", "must be positive");
    require(numerics.steps_per_segment >= 1, "numerics.steps_per_segment", "must be at least 1");
    require(numerics.quadrature >= 8, "numerics.quadrature", "must be at least 8");
    require(numerics.hpp_quadrature >= 8, "numerics.hpp_quadrature", "must be at least 8");
    require(numerics.step_scale > 0.0, "numerics.step_scale", "must be positive");
    require(numerics.threads >= 1, "numerics.threads", "must be at least 1");
    require(!output.directory.empty(), "output.directory", "must not be empty");
    require(output.format == "csv", "output.format", "only csv is supported");
}

DeviceParams RunConfig::device_params() const {
    DeviceParams p;
    p.omega1 = units::from_mhz(device.omega1_MHz);
    p.omega2 = units::from_mhz(device.omega2_MHz);
    p.omega_c0 = units::from_mhz(device.omega_c0_MHz);
    p.alpha1 = units::from_mhz(device.alpha1_MHz);
    p.alpha2 = units::from_mhz(device.alpha2_MHz);
    p.alpha_c = units::from_mhz(device.alpha_c_MHz);
    p.g1 = units::from_mhz(device.g1_MHz);
    p.g2 = units::from_mhz(device.g2_MHz);
    p.g12 = units::from_mhz(device.g12_MHz);
    return p;
}

double RunConfig::gamma() const { return gate.gamma_over_pi * units::pi; }
double RunConfig::chi() const { return gate.chi_over_pi * units::pi; }

std::vector<double> linspace(double lo, double hi, int points) {
    if (points < 1) throw ConfigError("linspace needs at least one point");
    if (points == 1) return {lo};
    std::vector<double> v(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
    return v;
}

}  // namespace tcg
