#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

fs::path work_dir() {
    static const fs::path dir = [] {
        const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
        fs::path d = fs::temp_directory_path() / ("modsurf-cli-" + std::to_string(stamp));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

// Run the workbench binary through the shell, capturing exit code and both
// streams. `env_prefix` may carry VAR=value assignments.
RunResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    static int counter = 0;
    ++counter;
    const fs::path out_file = work_dir() / ("stdout." + std::to_string(counter));
    const fs::path err_file = work_dir() / ("stderr." + std::to_string(counter));
    std::string cmd;
    if (!env_prefix.empty()) cmd += env_prefix + " ";
    cmd += MODSURF_CLI_PATH;
    cmd += " " + args + " >" + out_file.string() + " 2>" + err_file.string();
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    return r;
}

std::string cache_arg() { return "--cache-dir " + (work_dir() / "cache").string(); }

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

// Parse "a+bi" / "a-bi" as printed by the CSV writer.
std::complex<double> parse_complex_field(const std::string& text) {
    size_t pos = 0;
    const double re = std::stod(text, &pos);
    std::string rest = text.substr(pos);
    REQUIRE(!rest.empty());
    REQUIRE(rest.back() == 'i');
    rest.pop_back();
    return {re, std::stod(rest)};
}

// Value printed on the line following the "value" column row.
std::complex<double> zeta_value(const std::string& out) {
    const auto lines = lines_of(out);
    for (size_t i = 0; i + 1 < lines.size(); ++i)
        if (lines[i] == "value") return parse_complex_field(lines[i + 1]);
    REQUIRE(false);
    return {};
}

}  // namespace

TEST_CASE("length table lists the fundamental geodesic") {
    const auto r = run_cli("lengths --max-trace 3 " + cache_arg());
    CHECK(r.code == 0);
    CHECK(r.out.find("# entries=1") != std::string::npos);
    CHECK(r.out.find("trace,length,multiplicity,words") != std::string::npos);
    CHECK(r.out.find("3,1.9248473002384139,1,12") != std::string::npos);
}

TEST_CASE("length table is empty below the first hyperbolic trace") {
    const auto r = run_cli("lengths --max-trace 2 " + cache_arg());
    CHECK(r.code == 0);
    CHECK(r.out.find("# entries=0") != std::string::npos);
    const std::string column_row = "trace,length,multiplicity,words\n";
    const size_t pos = r.out.find(column_row);
    REQUIRE(pos != std::string::npos);
    CHECK(r.out.substr(pos) == column_row);  // no data rows follow
}

TEST_CASE("length table agrees with the brute-force conjugacy search") {
    const auto r = run_cli("lengths --max-trace 12 --verify-oracle " + cache_arg());
    CHECK(r.code == 0);
    CHECK(r.out.find("# oracle=ok") != std::string::npos);

    const auto refused = run_cli("lengths --max-trace 30 --verify-oracle " + cache_arg());
    CHECK(refused.code == 1);
}

TEST_CASE("torus zeta value through the CLI") {
    const auto r = run_cli("zeta --torus --s 1");
    CHECK(r.code == 0);
    CHECK(r.out.find("# mode=torus") != std::string::npos);
    CHECK(r.out.find("0.39957640089372803+0i") != std::string::npos);
}

TEST_CASE("Euler product value and truncation tail") {
    const auto r400 = run_cli("zeta --s 2 --max-trace 400 --k-max 30 " + cache_arg());
    REQUIRE(r400.code == 0);
    const std::complex<double> z400 = zeta_value(r400.out);
    CHECK(std::abs(z400 - std::complex<double>(0.95380005488565212, 0.0)) < 1e-12);

    const auto r300 = run_cli("zeta --s 2 --max-trace 300 --k-max 30 " + cache_arg());
    REQUIRE(r300.code == 0);
    const double tail = std::abs(z400 - zeta_value(r300.out));
    CHECK(tail > 0.0);
    CHECK(tail < 1e-6);
}

TEST_CASE("Euler product rejects arguments outside its half-plane") {
    const auto r_half = run_cli("zeta --s 0.5+10i --max-trace 40 " + cache_arg());
    CHECK(r_half.code == 1);
    CHECK(r_half.err.find("validation") != std::string::npos);
    const auto r_one = run_cli("zeta --s 1 --max-trace 40 " + cache_arg());
    CHECK(r_one.code == 1);
}

TEST_CASE("scan pins the first resonance candidate") {
    const auto r = run_cli("scan --r 9.2:9.9:0.02 --N 24 --K 4");
    CHECK(r.code == 0);
    CHECK(r.out.find("# candidates=1") != std::string::npos);
    REQUIRE(r.out.find("R,parity,det-abs,ratio") != std::string::npos);
    const auto lines = lines_of(r.out);
    const auto fields = split(lines.back(), ',');
    REQUIRE(fields.size() == 4);
    CHECK(std::abs(std::stod(fields[0]) - 9.5336952598079385) < 0.02 + 1e-9);
    CHECK(fields[1] == "-1");
    CHECK(std::stod(fields[3]) < 0.05);
}

TEST_CASE("identical invocations produce byte-identical output") {
    const std::string scan_args = "scan --r 9.2:9.9:0.02 --N 24 --K 4";
    const auto s1 = run_cli(scan_args);
    const auto s2 = run_cli(scan_args);
    CHECK(s1.code == 0);
    CHECK(s1.out == s2.out);

    // The second zeta call is served from the cache written by the first;
    // cached and freshly computed tables must render identically.
    const std::string zeta_args = "zeta --s 2 --max-trace 40 --k-max 10 " + cache_arg();
    const auto z1 = run_cli(zeta_args);
    const auto z2 = run_cli(zeta_args);
    CHECK(z1.code == 0);
    CHECK(z1.out == z2.out);
}

TEST_CASE("option precedence: command line over file over environment") {
    const fs::path cfg = work_dir() / "workbench.conf";
    spit(cfg, "# comment line\nmax-trace = 4\n");
    const std::string env = "MODSURF_MAX_TRACE=5";

    const auto env_only = run_cli("lengths " + cache_arg(), env);
    CHECK(env_only.code == 0);
    CHECK(env_only.out.find("# max-trace=5") != std::string::npos);

    const auto file_beats_env =
        run_cli("lengths --config " + cfg.string() + " " + cache_arg(), env);
    CHECK(file_beats_env.code == 0);
    CHECK(file_beats_env.out.find("# max-trace=4") != std::string::npos);

    const auto cli_beats_file =
        run_cli("lengths --config " + cfg.string() + " --max-trace 3 " + cache_arg(), env);
    CHECK(cli_beats_file.code == 0);
    CHECK(cli_beats_file.out.find("# max-trace=3") != std::string::npos);

    // The config file itself may be named through the environment.
    const auto env_config = run_cli("lengths " + cache_arg(), "MODSURF_CONFIG=" + cfg.string());
    CHECK(env_config.code == 0);
    CHECK(env_config.out.find("# max-trace=4") != std::string::npos);
}

TEST_CASE("I/O failures exit with code 2") {
    const auto bad_out =
        run_cli("lengths --max-trace 4 --out /no-such-dir-zzz/x.csv " + cache_arg());
    CHECK(bad_out.code == 2);
    CHECK(bad_out.err.find("I/O") != std::string::npos);

    const auto bad_in = run_cli("verify " + (work_dir() / "no-such-file.csv").string());
    CHECK(bad_in.code == 2);
}

TEST_CASE("argument validation exits with code 1") {
    CHECK(run_cli("lengths --max-trace 1 " + cache_arg()).code == 1);
    CHECK(run_cli("lengths --no-such-option").code == 1);
    CHECK(run_cli("resonance --R 9.53").code == 1);  // missing --parity
    CHECK(run_cli("scan --r 5:4:0.1").code == 1);    // inverted range
}

TEST_CASE("JSON rendering carries the same table") {
    const auto r = run_cli("lengths --max-trace 4 --format json " + cache_arg());
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("version") == "1.0.0");
    CHECK(j.at("subcommand") == "lengths");
    REQUIRE(j.at("table").size() == 2);
    CHECK(j.at("table")[0].at("trace") == 3);
    CHECK(std::abs(j.at("table")[0].at("length").get<double>() - 1.9248473002384139) < 1e-15);
    CHECK(j.at("table")[1].at("words") == nlohmann::json::array({"112", "122"}));

    const auto z = run_cli("zeta --torus --s 1 --format json");
    REQUIRE(z.code == 0);
    const auto jz = nlohmann::json::parse(z.out);
    CHECK(std::abs(jz.at("value").at("re").get<double>() - 0.39957640089372803) < 1e-15);
    CHECK(jz.at("value").at("im").get<double>() == 0.0);
}

TEST_CASE("period-function export re-verifies, corrupted files do not") {
    const fs::path psi = work_dir() / "psi.csv";
    const auto exported = run_cli(
        "periodfn --R 9.5336952598079385 --parity -1 --N 24 --K 4 --points 12 --out " +
        psi.string());
    REQUIRE(exported.code == 0);
    REQUIRE(fs::exists(psi));

    const auto ok = run_cli("verify " + psi.string());
    CHECK(ok.code == 0);
    const auto ok_lines = lines_of(ok.out);
    CHECK(split(ok_lines.back(), ',').back() == "1");  // pass flag

    // Damage one sampled value: the three-term identity must now fail.
    {
        auto lines = lines_of(slurp(psi));
        bool patched = false;
        for (auto& line : lines) {
            if (line.rfind("0,base,", 0) == 0) {
                auto fields = split(line, ',');
                REQUIRE(fields.size() == 4);
                fields[3] = "99+0i";
                line = fields[0] + "," + fields[1] + "," + fields[2] + "," + fields[3];
                patched = true;
                break;
            }
        }
        REQUIRE(patched);
        std::string text;
        for (const auto& line : lines) text += line + "\n";
        const fs::path bad = work_dir() / "psi-bad-value.csv";
        spit(bad, text);
        const auto r = run_cli("verify " + bad.string());
        CHECK(r.code == 1);
        const auto rl = lines_of(r.out);
        CHECK(split(rl.back(), ',').back() == "0");
    }

    // Damage a sample abscissa: the file geometry is rejected outright.
    {
        auto lines = lines_of(slurp(psi));
        bool patched = false;
        for (auto& line : lines) {
            if (line.rfind("0,shift,", 0) == 0) {
                auto fields = split(line, ',');
                REQUIRE(fields.size() == 4);
                fields[2] = "1.75";
                line = fields[0] + "," + fields[1] + "," + fields[2] + "," + fields[3];
                patched = true;
                break;
            }
        }
        REQUIRE(patched);
        std::string text;
        for (const auto& line : lines) text += line + "\n";
        const fs::path bad = work_dir() / "psi-bad-geometry.csv";
        spit(bad, text);
        const auto r = run_cli("verify " + bad.string());
        CHECK(r.code == 1);
        CHECK(r.err.find("validation") != std::string::npos);
    }

    // An empty file is rejected as malformed, not as an I/O failure.
    const fs::path empty = work_dir() / "psi-empty.csv";
    spit(empty, "");
    const auto r_empty = run_cli("verify " + empty.string());
    CHECK(r_empty.code == 1);
}

TEST_CASE("resonance refinement through the CLI") {
    const auto r = run_cli("resonance --R 9.53 --parity -1 --N 24 --K 4");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("# refined=1") != std::string::npos);
    CHECK(r.out.find("# failed=0") != std::string::npos);
    const auto lines = lines_of(r.out);
    const auto fields = split(lines.back(), ',');
    REQUIRE(fields.size() == 9);
    CHECK(std::abs(std::stod(fields[0]) - 9.5336952598079385) < 1e-3);
    CHECK(fields[1] == "-1");
    CHECK(std::abs(std::stod(fields[2]) - 91.141345306884361) < 0.05);
    CHECK(fields[8] == "1");  // certified at these settings
}
