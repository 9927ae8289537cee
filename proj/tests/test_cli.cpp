#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tcgate/config.hpp"
#include "tcgate/errors.hpp"
#include "tcgate/geopath.hpp"
#include "tcgate/output.hpp"
#include "tcgate/runner.hpp"
#include "tcgate/units.hpp"

using namespace tcg;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("tcgate_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

fs::path write_config(const fs::path& dir, const std::string& text, const std::string& name = "run.ini") {
    const fs::path p = dir / name;
    std::ofstream(p) << text;
    return p;
}

int run_in(const std::string& sub, const fs::path& out, std::optional<fs::path> config = std::nullopt,
           int threads = 1) {
    RunOptions o;
    o.out_dir = out.string();
    o.threads = threads;
    if (config) o.config_path = config->string();
    return run(sub, o);
}

int shell(const std::string& args) {
    const int rc = std::system((std::string(TCGATE_CLI) + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("config defaults match the reference device") {
    const RunConfig c = RunConfig::defaults();
    const DeviceParams p = c.device_params();
    CHECK(units::to_mhz(p.omega1 - p.omega2) == doctest::Approx(500.0));
    CHECK(units::to_mhz(p.omega_c0) == doctest::Approx(7500.0));
    CHECK(units::to_mhz(p.alpha1) == doctest::Approx(-200.0));
    CHECK(units::to_mhz(p.alpha2) == doctest::Approx(-200.0));
    CHECK(units::to_mhz(p.g1) == doctest::Approx(86.0));
    CHECK(units::to_mhz(p.g2) == doctest::Approx(86.0));
    CHECK(units::to_mhz(p.g12) == doctest::Approx(5.0));
    CHECK(c.drive.phi_ac == 0.1);
    CHECK(c.gate.eta == 0.5);
    CHECK(c.numerics.quadrature == 16);
    CHECK(c.scan.robust_points == 41);

    const DeviceParams ref = DeviceParams::reference();
    CHECK(p.omega1 == ref.omega1);
    CHECK(p.g12 == ref.g12);
}

TEST_CASE("unit conversion round trip") {
    for (double f : {-200.0, 0.5, 86.0, 7500.0}) CHECK(units::to_mhz(units::from_mhz(f)) == doctest::Approx(f));
    CHECK(units::from_ghz(1.0) == doctest::Approx(units::from_mhz(1000.0)));
    CHECK(units::to_khz(units::from_khz(2.0)) == doctest::Approx(2.0));
}

TEST_CASE("config text") {
    const RunConfig c = RunConfig::defaults();
    const RunConfig back = RunConfig::from_ini_text(c.to_ini_text());
    CHECK(back.to_ini_text() == c.to_ini_text());

    const RunConfig phi = RunConfig::from_ini_text("[drive]\nphi_dc = 0.3\n[gate]\nscheme = SNGQC\n");
    CHECK(phi.drive.phi_dc.value() == 0.3);
    CHECK_FALSE(phi.drive.target_g_e_MHz.has_value());
    CHECK(phi.gate.scheme == Scheme::Sngqc);

    CHECK_THROWS_AS(RunConfig::from_ini_text("[drive]\nphi_dc = 0.3\ntarget_g_e_MHz = 2\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_ini_text("[device]\ng1_MHz = lots\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_ini_text("[device]\nbogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_ini_text("[drive]\nphi_ac = 0.4\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_ini_text("[numerics]\nquadrature = 4\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_ini_text("[scan]\ngammas_over_pi = 1, , 2\n"), ConfigError);
    CHECK_THROWS_AS(RunConfig::from_file("/nonexistent/run.ini"), ConfigError);

    const auto l = linspace(0.0, 1.0, 5);
    REQUIRE(l.size() == 5);
    CHECK(l[1] == 0.25);
    CHECK(l.back() == 1.0);
}

TEST_CASE("csv emission") {
    ScanResult r;
    r.title = "grid";
    r.axes = {{"a", {1.0, 2.0}}, {"b", {0.1, 1.0 / 3.0}}};
    r.columns = {{"v", {1.0, 2.0, 3.0, 4.0e-13}, false}, {"w", {0.5, 0.25, 0.125, 1.0 / 7.0}, true}};
    const std::string text = csv_text(r);
    CHECK(std::count(text.begin(), text.end(), '\n') == 5);

    const CsvTable t = parse_csv(text);
    REQUIRE(t.rows.size() == 4);
    CHECK(t.header == std::vector<std::string>{"a", "b", "v", "w"});
    CHECK(t.rows[1][0] == "1");
    CHECK(std::stod(t.rows[1][1]) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(std::stod(t.rows[3][3]) == doctest::Approx(1.0 / 7.0).epsilon(1e-12));
    CHECK(std::stod(t.rows[3][2]) == doctest::Approx(4.0e-13).epsilon(1e-12));

    r.flags = {"", "x, \"quoted\"", "", ""};
    const CsvTable q = parse_csv(csv_text(r));
    CHECK(q.rows[1].back() == "x, \"quoted\"");

    CHECK_THROWS(emit_csv(r, "/nonexistent/dir/out.csv"));
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("zz subcommand against the golden file") {
    const fs::path out = scratch("zz");
    REQUIRE(run_in("zz", out) == kExitOk);
    const std::string zz = slurp(out / "zz.csv");
    CHECK(zz == slurp(fs::path(TCGATE_GOLDEN_DIR) / "zz_defaults.csv"));

    const CsvTable t = parse_csv(zz);
    REQUIRE(t.rows.size() == 1);
    for (std::size_t k = 0; k < t.header.size(); ++k)
        if (t.header[k].rfind("xi0_", 0) == 0 || t.header[k].rfind("xi1_", 0) == 0) CHECK(t.rows[0][k] == "0");
    CHECK(fs::exists(out / "manifest.json"));
    const std::string manifest = slurp(out / "manifest.json");
    const auto key = manifest.find("\"config_sha256\": \"");
    REQUIRE(key != std::string::npos);
    const std::string hash = manifest.substr(key + 18, 64);
    CHECK(hash.find_first_not_of("0123456789abcdef") == std::string::npos);
    CHECK(manifest.find("\"tool_version\"") != std::string::npos);
}

TEST_CASE("synth subcommand") {
    const fs::path out = scratch("synth");
    const fs::path cfg = write_config(out, "[gate]\nscheme = SNGQC\ngamma_over_pi = 1\n");
    REQUIRE(run_in("synth", out, cfg) == kExitOk);
    const std::string text = slurp(out / "schedule.txt");
    CHECK(text == slurp(fs::path(TCGATE_GOLDEN_DIR) / "schedule_sngqc.txt"));
    const auto segs = segments_from_text(text);
    REQUIRE(segs.size() == 2);
    CHECK(segs[0].duration == doctest::Approx(0.25));
    CHECK(segs[1].duration == doctest::Approx(0.25));
    CHECK(parse_csv(slurp(out / "schedule.csv")).rows.size() == 2);
}

TEST_CASE("deterministic output across runs and thread counts") {
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    const std::string cfg_text =
        "[scan]\ndetuning_points = 9\nchi_points = 3\ng_e_points = 2\ng_e_min_MHz = 1.5\ng_e_max_MHz = 3\n"
        "gammas_over_pi = 1\nrobust_points = 3\n";
    const fs::path ca = write_config(a, cfg_text), cb = write_config(b, cfg_text);
    for (const char* sub : {"fig1", "landscape", "robustness"}) {
        REQUIRE(run_in(sub, a, ca, 1) == kExitOk);
        REQUIRE(run_in(sub, b, cb, 3) == kExitOk);
    }
    int compared = 0;
    for (const auto& e : fs::directory_iterator(a)) {
        if (e.path().extension() != ".csv") continue;
        CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
        ++compared;
    }
    CHECK(compared == 8);
}

TEST_CASE("exit codes") {
    const fs::path out = scratch("exit");
    const fs::path bad = write_config(out, "[drive]\nphi_ac = 0.9\n");
    CHECK(run_in("zz", out, bad) == kExitConfig);
    CHECK(run_in("nonsense", out) == kExitConfig);
    const fs::path broken = write_config(out, "[device]\ng1_MHz = 86\nomega1_MHz = 7400\n", "broken.ini");
    CHECK(run_in("synth", out, broken) == kExitNumerical);

    CHECK(shell("zz --config " + bad.string() + " --out " + out.string()) == kExitConfig);
    CHECK(shell("--threads 0 zz --out " + out.string()) == kExitConfig);
    CHECK(shell("zz --out " + (out / "cli").string()) == kExitOk);
    CHECK(shell("--help") == kExitOk);
}
