#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "json.hpp"
#include "oracles.hpp"
#include "ringlase/commands.hpp"
#include "ringlase/config.hpp"
#include "ringlase/errors.hpp"
#include "ringlase/io.hpp"

using namespace ringlase;
namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

std::string default_text() { return read_file(DEFAULT_CONFIG); }

ordered_json default_json() { return ordered_json::parse(default_text()); }

std::string error_of(const std::string& text) {
    try {
        parse_scenario(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

fs::path scratch(const std::string& tag) {
    auto p = fs::temp_directory_path() / ("ringlase_" + tag + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
    const auto p = dir / "config.json";
    write_atomic(p.string(), text);
    return p;
}

int shell(const std::string& args) {
    const std::string cmd = std::string(RINGLASE_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

int run_cmd(RunOptions opts, std::string* err_text = nullptr) {
    std::ostringstream out, err;
    const int rc = run(opts, out, err);
    if (err_text) *err_text = out.str() + err.str();
    return rc;
}

// Body of a CSV without its comment lines.
std::string body(const fs::path& p) {
    std::istringstream in(read_file(p.string()));
    std::string line, out;
    while (std::getline(in, line))
        if (line.empty() || line[0] != '#') out += line + "\n";
    return out;
}

}  // namespace

TEST_CASE("shipped config is complete and valid") {
    const auto loaded = parse_scenario(default_text());
    CHECK(loaded.defaulted.empty());
    CHECK_NOTHROW(loaded.scenario.validate());
    REQUIRE(loaded.scenario.seed.has_value());

    const auto d = default_scenario();
    const auto& s = loaded.scenario;
    CHECK(s.thermal.shift_m_per_w == d.thermal.shift_m_per_w);
    CHECK(s.loop.gain_slope_db_per_ma == d.loop.gain_slope_db_per_ma);
    CHECK(s.loop.gain_offset_ma == d.loop.gain_offset_ma);
    CHECK(s.detection.noise_signal_per_w == d.detection.noise_signal_per_w);
    CHECK(s.detection.noise_idler_per_w == d.detection.noise_idler_per_w);
    CHECK(s.biphoton.powers_w == d.biphoton.powers_w);
    CHECK(s.coincidences.powers_w == d.coincidences.powers_w);

    std::string err;
    RunOptions o{"validate", DEFAULT_CONFIG};
    CHECK(run_cmd(o, &err) == kExitOk);
    CHECK(err.find("warning") == std::string::npos);
}

TEST_CASE("decimal strings parse to the nearest double") {
    auto j = default_json();
    j["loop"]["gain_offset_mA"] = "-24.308469451621662";
    j["ring"]["Q_pump"] = "22100.5";
    j["thermal"]["shift_pm_per_mW"] = "1e-1";
    const auto s = parse_scenario(j.dump()).scenario;
    CHECK(s.loop.gain_offset_ma == -24.308469451621662);
    CHECK(s.ring.q_pump == 22100.5);
    CHECK(s.thermal.shift_m_per_w == doctest::Approx(0.1e-12 / 1e-3).epsilon(1e-15));

    j["ring"]["Q_pump"] = "22100x";
    CHECK(error_of(j.dump()).find("ring.Q_pump") != std::string::npos);
}

TEST_CASE("omitted fields are defaulted and listed") {
    auto j = default_json();
    j["ring"].erase("Q_idler");
    j["detection"].erase("dark_rate");
    const auto loaded = parse_scenario(j.dump());
    REQUIRE(loaded.defaulted.size() == 2);
    CHECK(loaded.defaulted[0].rfind("ring.Q_idler = ", 0) == 0);
    CHECK(loaded.defaulted[1].rfind("detection.dark_rate = ", 0) == 0);
    CHECK(loaded.scenario.ring.q_idler == default_scenario().ring.q_idler);
}

TEST_CASE("structural errors name the field") {
    auto j = default_json();
    j["ring"]["Q_signal"] = 0;
    CHECK(error_of(j.dump()).find("ring.Q_signal") != std::string::npos);

    j = default_json();
    j["ring"]["Q_pump"] = -5;
    CHECK(error_of(j.dump()).find("ring.Q_pump") != std::string::npos);

    j = default_json();
    j["loop"]["bogus"] = 1;
    CHECK(error_of(j.dump()).find("loop.bogus") != std::string::npos);

    j = default_json();
    j.erase("detection");
    CHECK(error_of(j.dump()).find("detection") != std::string::npos);

    j = default_json();
    j["biphoton"]["pump_phase"] = "sideways";
    CHECK(error_of(j.dump()).find("biphoton.pump_phase") != std::string::npos);

    j = default_json();
    j["ring"]["lambda_signal_nm"] = 1560.0;
    CHECK_FALSE(error_of(j.dump()).empty());
}

TEST_CASE("parse errors carry line and column") {
    const std::string text = "{\n  \"name\": \"x\",\n  \"seed\": ,\n}\n";
    const auto msg = error_of(text);
    CHECK(msg.find("<config>:3:") != std::string::npos);
}

TEST_CASE("numbers survive the shortest decimal form") {
    oracle::Gen gen(3);
    for (int i = 0; i < 2000; ++i) {
        const double v = gen.log_uniform(1e-300, 1e300) * (gen.integer(0, 1) ? 1.0 : -1.0);
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(2.0) == "2");
}

TEST_CASE("sha256 of a known string") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("provenance header") {
    Provenance p{"1.2.3", "abcd", std::nullopt, false};
    CHECK(p.header() == "# ringlase 1.2.3\n# config_sha256 abcd\n# seed none\n");
    p.seed = 17;
    p.timestamp = true;
    const auto h = p.header();
    CHECK(h.find("# seed 17\n") != std::string::npos);
    CHECK(h.find("# generated ") != std::string::npos);
}

TEST_CASE("matrix files round trip") {
    oracle::Gen gen(11);
    const GridMeta g{1530.25, 1.0, 5, 1565.5, 2.0, 4};
    const Provenance p{"t", "h", 1, false};
    const Eigen::MatrixXcd m = gen.matrix(5, 4);
    const auto back = parse_matrix(format_matrix(p, g, MatrixKind::jsa, m));
    CHECK(back.kind == MatrixKind::jsa);
    CHECK(back.grid.signal_center_nm == g.signal_center_nm);
    CHECK(back.grid.idler_points == 4);
    CHECK(back.values == m);

    const Eigen::MatrixXcd r = m.cwiseAbs2().cast<cdouble>();
    const auto back2 = parse_matrix(format_matrix(p, g, MatrixKind::jsd, r));
    CHECK(back2.kind == MatrixKind::jsd);
    CHECK(back2.values == r);

    CHECK_THROWS(parse_matrix("garbage\n"));
}

TEST_CASE("CLI exit codes") {
    const auto dir = scratch("codes");
    const std::string cfg = std::string(" --config ") + DEFAULT_CONFIG + " --out " + dir.string();
    CHECK(shell("") == 2);
    CHECK(shell("--help") == 0);
    CHECK(shell("frobnicate" + cfg) == 2);
    CHECK(shell("lasing-curve --config /nonexistent.json") == 2);
    CHECK(shell("validate" + cfg) == 0);
    CHECK(shell("lasing-curve" + cfg) == 0);
    CHECK(fs::exists(dir / "lasing_curve.csv"));
    CHECK(fs::exists(dir / "lasing_fit.csv"));

    auto j = default_json();
    j["ring"]["Q_pump"] = 0;
    const auto bad = write_config(dir, j.dump());
    CHECK(shell("validate --config " + bad.string()) == 2);

    // one iteration never converges
    j = default_json();
    j["loop"]["max_iterations"] = 1;
    const auto tight = write_config(dir, j.dump());
    CHECK(shell("lasing-curve --config " + tight.string() + " --out " + dir.string()) == 3);
    fs::remove_all(dir);
}

TEST_CASE("stochastic commands need a seed") {
    const auto dir = scratch("seed");
    auto j = default_json();
    j.erase("seed");
    const auto cfg = write_config(dir, j.dump());
    RunOptions o{"coincidences", cfg.string(), dir.string()};
    std::string err;
    CHECK(run_cmd(o, &err) == kExitConfig);
    CHECK(err.find("seed") != std::string::npos);
    o.command = "pump-spectra";
    CHECK(run_cmd(o) == kExitConfig);
    o.seed = 5;
    CHECK(run_cmd(o) == kExitOk);

    o.command = "validate";
    o.seed.reset();
    CHECK(run_cmd(o, &err) == kExitOk);
    CHECK(err.find("seed") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("outputs carry provenance and repeat byte for byte") {
    const auto a = scratch("rep_a");
    const auto b = scratch("rep_b");
    for (const auto& d : {a, b})
        for (const char* c : {"lasing-curve", "pump-spectra"})
            REQUIRE(shell(std::string(c) + " --config " + DEFAULT_CONFIG + " --no-timestamp --out " + d.string()) == 0);
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(a)) {
        const auto other = b / e.path().filename();
        REQUIRE(fs::exists(other));
        CHECK(read_file(e.path().string()) == read_file(other.string()));
        const auto text = read_file(e.path().string());
        CHECK(text.rfind("# ringlase ", 0) == 0);
        CHECK(text.find("# config_sha256 " + sha256_hex(default_text())) != std::string::npos);
        CHECK(text.find("# seed ") != std::string::npos);
        ++n;
    }
    CHECK(n >= 7);

    REQUIRE(shell(std::string("pump-spectra --config ") + DEFAULT_CONFIG + " --seed 99 --out " + b.string()) == 0);
    CHECK(body(a / "pump_spectrum_2.19mW.csv") != body(b / "pump_spectrum_2.19mW.csv"));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("jsd --power 0 gives an anti-diagonal ridge") {
    const auto dir = scratch("cw");
    REQUIRE(shell(std::string("jsd --power 0 --config ") + DEFAULT_CONFIG + " --no-timestamp --out " + dir.string()) == 0);
    const auto m = parse_matrix(read_file((dir / "jsd_cw.csv").string()));
    CHECK(m.kind == MatrixKind::jsd);
    REQUIRE(m.values.rows() == 401);
    REQUIRE(m.values.cols() == 201);
    Eigen::Index last = m.values.cols();
    int rows_with_support = 0;
    for (Eigen::Index r = 0; r < m.values.rows(); ++r) {
        Eigen::Index lo = -1, hi = -1;
        for (Eigen::Index c = 0; c < m.values.cols(); ++c)
            if (m.values(r, c).real() > 0.0) {
                if (lo < 0) lo = c;
                hi = c;
            }
        if (lo < 0) continue;
        ++rows_with_support;
        CHECK(hi - lo <= 1);
        CHECK(hi <= last);
        last = lo;
    }
    CHECK(rows_with_support > 300);

    std::string err;
    RunOptions o{"schmidt", DEFAULT_CONFIG, dir.string()};
    o.input = (dir / "jsd_cw.csv").string();
    o.timestamp = false;
    CHECK(run_cmd(o, &err) == kExitOk);
    const auto s = read_file((dir / "schmidt.csv").string());
    CHECK(s.find("n,lambda_n\n") != std::string::npos);
    CHECK(s.find("K,S_bits\n") != std::string::npos);
    fs::remove_all(dir);
}
