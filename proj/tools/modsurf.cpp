// modsurf: command-line workbench for the modular-surface length spectrum,
// truncated zeta products, and transfer-operator resonance searches.
//
// Subcommands: lengths, zeta, scan, resonance, periodfn, verify.
// Option precedence: CLI flag > config-file entry > MODSURF_* environment
// variable > built-in default. Exit codes: 0 success, 1 domain/validation,
// 2 I/O, 3 non-convergence.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "modsurf/errors.hpp"
#include "modsurf/io.hpp"
#include "modsurf/lengths.hpp"
#include "modsurf/spectral.hpp"
#include "modsurf/transfer.hpp"

namespace {

using modsurf::Complex;
using modsurf::ConfigLayers;
using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Small parsing helpers.

double parse_double(const std::string& tok) {
    if (tok.empty()) throw modsurf::validation_error("empty numeric token");
    size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw modsurf::validation_error("malformed number: '" + tok + "'");
    }
    if (pos != tok.size()) throw modsurf::validation_error("malformed number: '" + tok + "'");
    return v;
}

long long parse_int(const std::string& tok) {
    if (tok.empty()) throw modsurf::validation_error("empty integer token");
    size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(tok, &pos);
    } catch (const std::exception&) {
        throw modsurf::validation_error("malformed integer: '" + tok + "'");
    }
    if (pos != tok.size()) throw modsurf::validation_error("malformed integer: '" + tok + "'");
    return v;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

// ---------------------------------------------------------------------------
// Option plumbing: every option is captured as a raw string so that the
// layered precedence (CLI > config file > environment > default) can be
// resolved uniformly by ConfigLayers after parsing.

struct OptionBag {
    std::map<std::string, std::string> values;  // node-based: references stable
    std::map<std::string, CLI::Option*> options;
    std::vector<std::string> flags;

    void add(CLI::App* sub, const std::string& key, const std::string& desc) {
        options[key] = sub->add_option("--" + key, values[key], desc);
    }
    void add_flag(CLI::App* sub, const std::string& key, const std::string& desc) {
        options[key] = sub->add_flag("--" + key, desc);
        flags.push_back(key);
    }

    ConfigLayers layers() const {
        ConfigLayers cl;
        std::string cfg;
        auto it = options.find("config");
        if (it != options.end() && it->second->count() > 0) cfg = values.at("config");
        if (cfg.empty()) {
            const char* env = std::getenv("MODSURF_CONFIG");
            if (env != nullptr && *env != '\0') cfg = env;
        }
        if (!cfg.empty()) cl.set_file(modsurf::read_config_file(cfg));
        for (const auto& [key, opt] : options) {
            if (key == "config" || opt->count() == 0) continue;
            const bool is_flag =
                std::find(flags.begin(), flags.end(), key) != flags.end();
            cl.set_cli(key, is_flag ? "1" : values.at(key));
        }
        return cl;
    }
};

void add_common_options(OptionBag& bag, CLI::App* sub) {
    bag.add(sub, "config", "key=value file supplying defaults for this subcommand's options");
    bag.add(sub, "format", "output format: csv or json (default csv)");
    bag.add(sub, "out", "write the output to this file instead of stdout");
    bag.add(sub, "threads",
            "cap on worker threads (the numerical kernels run single-threaded, so any "
            "cap >= 1 is honored)");
}

std::string resolve_format(const ConfigLayers& cl) {
    const std::string fmt = cl.resolve("format", "csv");
    if (fmt != "csv" && fmt != "json")
        throw modsurf::validation_error("format must be 'csv' or 'json', got '" + fmt + "'");
    return fmt;
}

void resolve_threads(const ConfigLayers& cl) {
    (void)cl.resolve_int("threads", 1, 1, 1024);  // validated; kernels are sequential
}

// Emit `content` to the --out file (then echo `summary` on stdout) or, with no
// --out, print the content itself to stdout.
void deliver_output(const ConfigLayers& cl, const std::string& content,
                    const std::string& summary) {
    const std::string out = cl.resolve("out", "");
    if (out.empty()) {
        std::fputs(content.c_str(), stdout);
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw modsurf::io_error("cannot open output file: " + out);
    f << content;
    f.flush();
    if (!f) throw modsurf::io_error("failed writing output file: " + out);
    if (!summary.empty()) std::printf("%s\n", summary.c_str());
}

std::string csv_header(const std::vector<std::pair<std::string, std::string>>& kv) {
    std::string out;
    for (const auto& [k, v] : kv) out += "# " + k + "=" + v + "\n";
    return out;
}

Json json_complex(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

// ---------------------------------------------------------------------------
// lengths

int cmd_lengths(const ConfigLayers& cl) {
    const long long max_trace = cl.resolve_int("max-trace", 12, 2, 5000);
    const std::string fmt = resolve_format(cl);
    const std::string cache_dir = cl.resolve("cache-dir", "");
    const bool verify_oracle = cl.resolve_flag("verify-oracle", false);
    resolve_threads(cl);

    std::vector<modsurf::LengthSpectrumEntry> entries;
    if (max_trace >= 3) entries = modsurf::length_spectrum_cached(max_trace, cache_dir);

    bool oracle_ok = true;
    if (verify_oracle) {
        if (max_trace > 12)
            throw modsurf::validation_error(
                "--verify-oracle runs a brute-force conjugacy search and supports "
                "max-trace <= 12");
        const std::map<long long, long long> oracle = modsurf::conjugacy_oracle(max_trace, 14);
        std::map<long long, long long> necklace_counts;
        for (const auto& e : entries) necklace_counts[e.trace] = e.multiplicity;
        oracle_ok = (necklace_counts == oracle);
        if (!oracle_ok)
            std::fprintf(stderr,
                         "verify-oracle: necklace multiplicities disagree with the "
                         "brute-force conjugacy-class counts\n");
    }

    long long total = 0;
    for (const auto& e : entries) total += e.multiplicity;
    const std::string smallest =
        entries.empty() ? "" : modsurf::format_real(entries.front().length);

    std::vector<std::pair<std::string, std::string>> hdr = {
        {"version", modsurf::kVersion},
        {"subcommand", "lengths"},
        {"max-trace", std::to_string(max_trace)},
        {"entries", std::to_string(entries.size())},
        {"geodesics", std::to_string(total)},
    };
    if (!smallest.empty()) hdr.emplace_back("smallest-length", smallest);
    if (verify_oracle) hdr.emplace_back("oracle", oracle_ok ? "ok" : "mismatch");

    std::string content;
    if (fmt == "csv") {
        content = csv_header(hdr);
        content += "trace,length,multiplicity,words\n";
        for (const auto& e : entries) {
            std::string words;
            for (size_t i = 0; i < e.necklaces.size(); ++i) {
                if (i > 0) words += ';';
                words += e.necklaces[i].canonical;
            }
            content += std::to_string(e.trace) + "," + modsurf::format_real(e.length) + "," +
                       std::to_string(e.multiplicity) + "," + words + "\n";
        }
    } else {
        Json j;
        for (const auto& [k, v] : hdr) j[k] = v;
        j["table"] = Json::array();
        for (const auto& e : entries) {
            Json row;
            row["trace"] = e.trace;
            row["length"] = e.length;
            row["multiplicity"] = e.multiplicity;
            Json words = Json::array();
            for (const auto& n : e.necklaces) words.push_back(n.canonical);
            row["words"] = words;
            j["table"].push_back(row);
        }
        content = j.dump(2) + "\n";
    }

    std::string summary = "lengths: " + std::to_string(entries.size()) + " trace levels, " +
                          std::to_string(total) + " geodesics";
    if (!smallest.empty()) summary += ", smallest length " + smallest;
    if (verify_oracle) summary += oracle_ok ? ", oracle ok" : ", ORACLE MISMATCH";
    deliver_output(cl, content, summary);
    return oracle_ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// zeta

int cmd_zeta(const ConfigLayers& cl) {
    const bool torus = cl.resolve_flag("torus", false);
    const Complex s = modsurf::parse_complex(cl.resolve("s", "2"));
    const std::string fmt = resolve_format(cl);
    resolve_threads(cl);

    std::vector<std::pair<std::string, std::string>> hdr = {
        {"version", modsurf::kVersion},
        {"subcommand", "zeta"},
        {"mode", torus ? "torus" : "selberg"},
        {"s", modsurf::format_complex(s)},
    };

    Complex value;
    long long max_trace = 0, k_max = 0;
    if (torus) {
        value = modsurf::torus_zeta(s);
    } else {
        max_trace = cl.resolve_int("max-trace", 400, 2, 5000);
        k_max = cl.resolve_int("k-max", 30, 1, 10000);
        const std::string cache_dir = cl.resolve("cache-dir", "");
        std::vector<modsurf::LengthSpectrumEntry> entries;
        if (max_trace >= 3) entries = modsurf::length_spectrum_cached(max_trace, cache_dir);
        value = modsurf::selberg_zeta_euler(s, entries, static_cast<int>(k_max));
        hdr.emplace_back("max-trace", std::to_string(max_trace));
        hdr.emplace_back("k-max", std::to_string(k_max));
    }

    std::string content;
    if (fmt == "csv") {
        content = csv_header(hdr);
        content += "value\n" + modsurf::format_complex(value) + "\n";
    } else {
        Json j;
        for (const auto& [k, v] : hdr) j[k] = v;
        j["value"] = json_complex(value);
        content = j.dump(2) + "\n";
    }
    deliver_output(cl, content, "zeta: " + modsurf::format_complex(value));
    return 0;
}

// ---------------------------------------------------------------------------
// scan

int cmd_scan(const ConfigLayers& cl) {
    const modsurf::RangeSpec r = modsurf::parse_range(cl.resolve("r", "9:14:0.01"));
    const int N = static_cast<int>(cl.resolve_int("N", 24, 4, 400));
    const int n_max = static_cast<int>(cl.resolve_int("n-max", 50, 10, 1000000));
    const int K = static_cast<int>(cl.resolve_int("K", 4, 0, 12));
    const double threshold = cl.resolve_real("threshold", 0.05, 1e-12, 1.0);
    const std::string fmt = resolve_format(cl);
    resolve_threads(cl);

    const std::vector<modsurf::DipCandidate> dips =
        modsurf::scan_critical_line(r.lo, r.hi, r.step, N, n_max, K, threshold);

    const std::vector<std::pair<std::string, std::string>> hdr = {
        {"version", modsurf::kVersion},
        {"subcommand", "scan"},
        {"r-lo", modsurf::format_real(r.lo)},
        {"r-hi", modsurf::format_real(r.hi)},
        {"r-step", modsurf::format_real(r.step)},
        {"N", std::to_string(N)},
        {"n-max", std::to_string(n_max)},
        {"K", std::to_string(K)},
        {"threshold", modsurf::format_real(threshold)},
        {"candidates", std::to_string(dips.size())},
    };

    std::string content;
    if (fmt == "csv") {
        content = csv_header(hdr);
        content += "R,parity,det-abs,ratio\n";
        for (const auto& d : dips)
            content += modsurf::format_real(d.R) + "," + std::to_string(d.parity) + "," +
                       modsurf::format_real(d.det_abs) + "," + modsurf::format_real(d.ratio) +
                       "\n";
    } else {
        Json j;
        for (const auto& [k, v] : hdr) j[k] = v;
        j["candidates"] = Json::array();
        for (const auto& d : dips) {
            Json row;
            row["R"] = d.R;
            row["parity"] = d.parity;
            row["det-abs"] = d.det_abs;
            row["ratio"] = d.ratio;
            j["candidates"].push_back(row);
        }
        content = j.dump(2) + "\n";
    }
    deliver_output(cl, content, "scan: " + std::to_string(dips.size()) + " dip candidate(s)");
    return 0;
}

// ---------------------------------------------------------------------------
// resonance

int cmd_resonance(const ConfigLayers& cl) {
    const std::string r_list = cl.resolve("R", "");
    const std::string p_list = cl.resolve("parity", "");
    if (r_list.empty())
        throw modsurf::validation_error("resonance requires --R (comma-separated list)");
    if (p_list.empty())
        throw modsurf::validation_error("resonance requires --parity (comma-separated list)");
    std::vector<double> R0s;
    for (const std::string& tok : split(r_list, ',')) R0s.push_back(parse_double(trim(tok)));
    std::vector<int> parities;
    for (const std::string& tok : split(p_list, ',')) {
        const long long p = parse_int(trim(tok));
        if (p != 1 && p != -1)
            throw modsurf::validation_error("parity entries must be 1 or -1");
        parities.push_back(static_cast<int>(p));
    }
    if (R0s.size() != parities.size())
        throw modsurf::validation_error("--R and --parity need the same number of entries");

    const int N = static_cast<int>(cl.resolve_int("N", 32, 4, 400));
    const int n_max = static_cast<int>(cl.resolve_int("n-max", 50, 10, 1000000));
    const int K = static_cast<int>(cl.resolve_int("K", 6, 0, 12));
    const double scan_step = cl.resolve_real("scan-step", 0.01, 1e-9, 1.0);
    const std::string fmt = resolve_format(cl);
    resolve_threads(cl);

    std::vector<modsurf::ResonanceResult> results;
    int failed = 0;
    for (size_t i = 0; i < R0s.size(); ++i) {
        try {
            results.push_back(
                modsurf::refine_resonance(R0s[i], parities[i], N, n_max, K, scan_step));
        } catch (const modsurf::convergence_error& e) {
            ++failed;
            std::fprintf(stderr, "resonance: candidate R=%s parity=%d failed: %s\n",
                         modsurf::format_real(R0s[i]).c_str(), parities[i], e.what());
        }
    }
    std::sort(results.begin(), results.end(),
              [](const modsurf::ResonanceResult& a, const modsurf::ResonanceResult& b) {
                  return a.R < b.R;
              });

    const std::vector<std::pair<std::string, std::string>> hdr = {
        {"version", modsurf::kVersion},
        {"subcommand", "resonance"},
        {"N", std::to_string(N)},
        {"n-max", std::to_string(n_max)},
        {"K", std::to_string(K)},
        {"scan-step", modsurf::format_real(scan_step)},
        {"requested", std::to_string(R0s.size())},
        {"refined", std::to_string(results.size())},
        {"failed", std::to_string(failed)},
    };

    std::string content;
    if (fmt == "csv") {
        content = csv_header(hdr);
        content +=
            "R,parity,lambda,det-abs-min,three-term,boundary,cocycle-r1,cocycle-r2,"
            "certified\n";
        for (const auto& res : results)
            content += modsurf::format_real(res.R) + "," + std::to_string(res.parity) + "," +
                       modsurf::format_real(res.lambda) + "," +
                       modsurf::format_real(res.det_abs_min) + "," +
                       modsurf::format_real(res.three_term_residual) + "," +
                       modsurf::format_real(res.boundary_residual) + "," +
                       modsurf::format_real(res.cocycle_r1) + "," +
                       modsurf::format_real(res.cocycle_r2) + "," +
                       (res.certified ? "1" : "0") + "\n";
    } else {
        Json j;
        for (const auto& [k, v] : hdr) j[k] = v;
        j["results"] = Json::array();
        for (const auto& res : results) {
            Json row;
            row["R"] = res.R;
            row["parity"] = res.parity;
            row["lambda"] = res.lambda;
            row["det-abs-min"] = res.det_abs_min;
            row["three-term"] = res.three_term_residual;
            row["boundary"] = res.boundary_residual;
            row["cocycle-r1"] = res.cocycle_r1;
            row["cocycle-r2"] = res.cocycle_r2;
            row["certified"] = res.certified;
            j["results"].push_back(row);
        }
        content = j.dump(2) + "\n";
    }
    std::string summary = "resonance: " + std::to_string(results.size()) + " refined";
    if (failed > 0) summary += ", " + std::to_string(failed) + " failed";
    deliver_output(cl, content, summary);
    return failed > 0 ? 3 : 0;
}

// ---------------------------------------------------------------------------
// periodfn / verify: the CSV schema is
//     header lines  "# key=value"   (keys include s-re, s-im, parity, points,
//                                    tol-three-term, tol-boundary)
//     column line   "group,role,x,psi"
//     groups 0..points-1: roles base (x=t), shift (x=t+1), map (x=t/(t+1))
//     groups points..points+2: roles eps (x=e) and inv (x=1/e), e in
//                              {0.01, 0.02, 0.04}
// so that the three-term and boundary residuals are recomputable from the
// file contents alone.

constexpr double kEps[3] = {0.01, 0.02, 0.04};
constexpr const char kTolThreeTerm[] = "1e-06";
constexpr const char kTolBoundary[] = "5";

int cmd_periodfn(const ConfigLayers& cl) {
    if (cl.resolve("R", "").empty())
        throw modsurf::validation_error("periodfn requires --R (spectral parameter)");
    if (cl.resolve("parity", "").empty())
        throw modsurf::validation_error("periodfn requires --parity (1 or -1)");
    const double R = cl.resolve_real("R", 0.0, 1e-6, 1e6);
    const long long parity = cl.resolve_int("parity", 0, -1, 1);
    if (parity == 0) throw modsurf::validation_error("parity must be 1 or -1");
    const int N = static_cast<int>(cl.resolve_int("N", 32, 4, 400));
    const int n_max = static_cast<int>(cl.resolve_int("n-max", 50, 10, 1000000));
    const int K = static_cast<int>(cl.resolve_int("K", 6, 0, 12));
    const int points = static_cast<int>(cl.resolve_int("points", 40, 1, 100000));
    const std::string fmt = resolve_format(cl);
    resolve_threads(cl);

    const Complex s(0.5, R);
    const modsurf::PeriodFunction pf =
        modsurf::make_period_function(s, static_cast<int>(parity), N, n_max, K);
    const std::function<Complex(double)> psi = modsurf::reconstruct_psi(pf);

    struct Sample {
        long long group;
        const char* role;
        double x;
        Complex value;
    };
    std::vector<Sample> samples;
    for (int k = 0; k < points; ++k) {
        const double t = 10.0 * (static_cast<double>(k) + 0.5) / static_cast<double>(points);
        samples.push_back({k, "base", t, psi(t)});
        samples.push_back({k, "shift", t + 1.0, psi(t + 1.0)});
        const double u = t / (t + 1.0);
        samples.push_back({k, "map", u, psi(u)});
    }
    for (int i = 0; i < 3; ++i) {
        const double e = kEps[i];
        samples.push_back({points + i, "eps", e, psi(e)});
        samples.push_back({points + i, "inv", 1.0 / e, psi(1.0 / e)});
    }

    const std::vector<std::pair<std::string, std::string>> hdr = {
        {"version", modsurf::kVersion},
        {"subcommand", "periodfn"},
        {"R", modsurf::format_real(R)},
        {"parity", std::to_string(parity)},
        {"s-re", modsurf::format_real(s.real())},
        {"s-im", modsurf::format_real(s.imag())},
        {"N", std::to_string(N)},
        {"n-max", std::to_string(n_max)},
        {"K", std::to_string(K)},
        {"points", std::to_string(points)},
        {"eigenvalue", modsurf::format_complex(pf.eigenvalue)},
        {"eigenpair-residual", modsurf::format_real(pf.eigenpair_residual)},
        {"tol-three-term", kTolThreeTerm},
        {"tol-boundary", kTolBoundary},
    };

    std::string content;
    if (fmt == "csv") {
        content = csv_header(hdr);
        content += "group,role,x,psi\n";
        for (const auto& sm : samples)
            content += std::to_string(sm.group) + "," + sm.role + "," +
                       modsurf::format_real(sm.x) + "," + modsurf::format_complex(sm.value) +
                       "\n";
    } else {
        Json j;
        for (const auto& [k, v] : hdr) j[k] = v;
        j["samples"] = Json::array();
        for (const auto& sm : samples) {
            Json row;
            row["group"] = sm.group;
            row["role"] = sm.role;
            row["x"] = sm.x;
            row["psi"] = json_complex(sm.value);
            j["samples"].push_back(row);
        }
        content = j.dump(2) + "\n";
    }
    deliver_output(cl, content,
                   "periodfn: " + std::to_string(samples.size()) + " samples at R=" +
                       modsurf::format_real(R) + " parity=" + std::to_string(parity));
    return 0;
}

// ---------------------------------------------------------------------------
// verify

struct PsiFile {
    std::map<std::string, std::string> header;
    // (group, role) -> (x, psi)
    std::map<std::pair<long long, std::string>, std::pair<double, Complex>> rows;
};

PsiFile read_psi_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw modsurf::io_error("cannot read file: " + path);
    PsiFile pfile;
    std::string line;
    long long lineno = 0;
    bool saw_columns = false;
    while (std::getline(f, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t[0] == '#') {
            if (saw_columns)
                throw modsurf::validation_error(path + ":" + std::to_string(lineno) +
                                                ": header line after the column row");
            const std::string body = trim(t.substr(1));
            const size_t eq = body.find('=');
            if (eq == std::string::npos)
                throw modsurf::validation_error(path + ":" + std::to_string(lineno) +
                                                ": malformed header line (expected key=value)");
            pfile.header[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
            continue;
        }
        if (!saw_columns) {
            if (t != "group,role,x,psi")
                throw modsurf::validation_error(path + ":" + std::to_string(lineno) +
                                                ": expected column row 'group,role,x,psi'");
            saw_columns = true;
            continue;
        }
        const std::vector<std::string> parts = split(t, ',');
        if (parts.size() != 4)
            throw modsurf::validation_error(path + ":" + std::to_string(lineno) +
                                            ": expected 4 comma-separated fields");
        const long long group = parse_int(trim(parts[0]));
        const std::string role = trim(parts[1]);
        const double x = parse_double(trim(parts[2]));
        const Complex value = modsurf::parse_complex(trim(parts[3]));
        if (!pfile.rows.emplace(std::make_pair(group, role), std::make_pair(x, value)).second)
            throw modsurf::validation_error(path + ":" + std::to_string(lineno) +
                                            ": duplicate (group, role) row");
    }
    if (!saw_columns)
        throw modsurf::validation_error(path + ": missing column row 'group,role,x,psi'");
    return pfile;
}

const std::string& require_header(const PsiFile& pfile, const std::string& key,
                                  const std::string& path) {
    auto it = pfile.header.find(key);
    if (it == pfile.header.end())
        throw modsurf::validation_error(path + ": missing required header key '" + key + "'");
    return it->second;
}

int cmd_verify(const ConfigLayers& cl, const std::string& path) {
    const std::string fmt = resolve_format(cl);
    resolve_threads(cl);

    const PsiFile pfile = read_psi_file(path);
    const double s_re = parse_double(require_header(pfile, "s-re", path));
    const double s_im = parse_double(require_header(pfile, "s-im", path));
    const long long parity = parse_int(require_header(pfile, "parity", path));
    if (parity != 1 && parity != -1)
        throw modsurf::validation_error(path + ": parity header must be 1 or -1");
    const long long points = parse_int(require_header(pfile, "points", path));
    if (points < 1 || points > 100000)
        throw modsurf::validation_error(path + ": points header out of range");
    const double tol_three = parse_double(require_header(pfile, "tol-three-term", path));
    const double tol_boundary = parse_double(require_header(pfile, "tol-boundary", path));
    const Complex s(s_re, s_im);

    const auto fetch = [&](long long group, const char* role) -> std::pair<double, Complex> {
        auto it = pfile.rows.find({group, std::string(role)});
        if (it == pfile.rows.end())
            throw modsurf::validation_error(path + ": missing row (group " +
                                            std::to_string(group) + ", role " + role + ")");
        return it->second;
    };
    if (pfile.rows.size() != static_cast<size_t>(3 * points + 6))
        throw modsurf::validation_error(path + ": row count does not match the points header");

    constexpr double kGeomTol = 1e-9;
    double scale = 0.0;
    for (long long k = 0; k < points; ++k) {
        const auto [tb, vb] = fetch(k, "base");
        scale = std::max(scale, std::abs(vb));
        const auto [tsf, vsf] = fetch(k, "shift");
        if (std::abs(tsf - (tb + 1.0)) > kGeomTol)
            throw modsurf::validation_error(path + ": shift abscissa of group " +
                                            std::to_string(k) + " is not base + 1");
        const auto [tm, vm] = fetch(k, "map");
        if (std::abs(tm - tb / (tb + 1.0)) > kGeomTol)
            throw modsurf::validation_error(path + ": map abscissa of group " +
                                            std::to_string(k) + " is not base/(base+1)");
    }
    if (!(scale > 0.0))
        throw modsurf::validation_error(path + ": base samples are identically zero");

    double three_term = 0.0;
    for (long long k = 0; k < points; ++k) {
        const auto [tb, vb] = fetch(k, "base");
        const auto vs = fetch(k, "shift").second;
        const auto vm = fetch(k, "map").second;
        const Complex r = vb - vs - std::exp(-2.0 * s * std::log(tb + 1.0)) * vm;
        three_term = std::max(three_term, std::abs(r));
    }
    three_term /= scale;

    std::array<double, 3> eps{}, xm{};
    std::array<Complex, 3> gp{}, gm{};
    for (int i = 0; i < 3; ++i) {
        const auto [e, ve] = fetch(points + i, "eps");
        if (!(e > 0.0))
            throw modsurf::validation_error(path + ": eps abscissae must be positive");
        const auto [xi, vi] = fetch(points + i, "inv");
        if (std::abs(xi - 1.0 / e) > kGeomTol)
            throw modsurf::validation_error(path + ": inv abscissa of group " +
                                            std::to_string(points + i) + " is not 1/eps");
        eps[static_cast<size_t>(i)] = e;
        xm[static_cast<size_t>(i)] = -e;
        gp[static_cast<size_t>(i)] = ve;
        gm[static_cast<size_t>(i)] = -std::exp(-2.0 * s * std::log(e)) * vi;
    }
    if (!(eps[0] < eps[1] && eps[1] < eps[2]))
        throw modsurf::validation_error(path + ": eps abscissae must be strictly increasing");
    const std::array<Complex, 3> cp = modsurf::quadratic_through(eps, gp);
    const std::array<Complex, 3> cm = modsurf::quadratic_through(xm, gm);
    double boundary = 0.0;
    for (size_t i = 0; i < 3; ++i) boundary = std::max(boundary, std::abs(cp[i] - cm[i]));
    boundary /= scale;

    const bool pass = (three_term <= tol_three) && (boundary <= tol_boundary);

    const std::vector<std::pair<std::string, std::string>> hdr = {
        {"version", modsurf::kVersion},
        {"subcommand", "verify"},
        {"source", path},
        {"s", modsurf::format_complex(s)},
        {"parity", std::to_string(parity)},
        {"points", std::to_string(points)},
    };
    std::string content;
    if (fmt == "csv") {
        content = csv_header(hdr);
        content += "three-term,boundary,tol-three-term,tol-boundary,pass\n";
        content += modsurf::format_real(three_term) + "," + modsurf::format_real(boundary) +
                   "," + require_header(pfile, "tol-three-term", path) + "," +
                   require_header(pfile, "tol-boundary", path) + "," + (pass ? "1" : "0") +
                   "\n";
    } else {
        Json j;
        for (const auto& [k, v] : hdr) j[k] = v;
        j["three-term"] = three_term;
        j["boundary"] = boundary;
        j["tol-three-term"] = tol_three;
        j["tol-boundary"] = tol_boundary;
        j["pass"] = pass;
        content = j.dump(2) + "\n";
    }
    deliver_output(cl, content,
                   std::string("verify: three-term=") + modsurf::format_real(three_term) +
                       " boundary=" + modsurf::format_real(boundary) +
                       (pass ? " PASS" : " FAIL"));
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "modsurf: length spectrum, zeta products, and transfer-operator resonances of the "
        "modular surface.\n"
        "Option precedence: CLI flag > --config file entry > MODSURF_<OPTION> environment "
        "variable > default."};
    app.require_subcommand(1);
    int rc = 0;

    OptionBag lengths_bag, zeta_bag, scan_bag, resonance_bag, periodfn_bag, verify_bag;

    CLI::App* lengths = app.add_subcommand(
        "lengths", "Geodesic length-spectrum table from necklace enumeration");
    add_common_options(lengths_bag, lengths);
    lengths_bag.add(lengths, "max-trace", "largest trace included in the table (2..5000)");
    lengths_bag.add(lengths, "cache-dir",
                    "cache directory (default: MODSURF_CACHE_DIR or ./.modsurf-cache)");
    lengths_bag.add_flag(lengths, "verify-oracle",
                         "cross-check multiplicities against a brute-force conjugacy-class "
                         "search (needs max-trace <= 12)");
    lengths->callback([&] { rc = cmd_lengths(lengths_bag.layers()); });

    CLI::App* zeta = app.add_subcommand(
        "zeta", "Truncated Euler product of the length-spectrum zeta (or --torus closed form)");
    add_common_options(zeta_bag, zeta);
    zeta_bag.add(zeta, "s", "evaluation point, complex 'R+Ii' form (Selberg mode needs Re s > 1)");
    zeta_bag.add(zeta, "max-trace", "Euler-product truncation: traces <= this bound (2..5000)");
    zeta_bag.add(zeta, "k-max", "Euler-product truncation in the exponent index k (>= 1)");
    zeta_bag.add(zeta, "cache-dir",
                 "cache directory (default: MODSURF_CACHE_DIR or ./.modsurf-cache)");
    zeta_bag.add_flag(zeta, "torus", "evaluate the square-torus zeta (1 - e^{-s})^2 instead");
    zeta->callback([&] { rc = cmd_zeta(zeta_bag.layers()); });

    CLI::App* scan = app.add_subcommand(
        "scan", "Scan |det(I -+ M(1/2 + iR))| on the critical line and report dip candidates");
    add_common_options(scan_bag, scan);
    scan_bag.add(scan, "r", "R range as lo:hi:step (default 9:14:0.01)");
    scan_bag.add(scan, "N", "collocation grid size (default 24)");
    scan_bag.add(scan, "n-max", "direct-sum truncation of the operator (default 50)");
    scan_bag.add(scan, "K", "tail Taylor order (default 4)");
    scan_bag.add(scan, "threshold", "dip threshold relative to the grid median (default 0.05)");
    scan->callback([&] { rc = cmd_scan(scan_bag.layers()); });

    CLI::App* resonance = app.add_subcommand(
        "resonance", "Refine dip candidates to resonances and report all residual checks");
    add_common_options(resonance_bag, resonance);
    resonance_bag.add(resonance, "R", "comma-separated list of starting R values");
    resonance_bag.add(resonance, "parity",
                      "comma-separated list of sign classes (1 or -1), one per R");
    resonance_bag.add(resonance, "N", "collocation grid size (default 32)");
    resonance_bag.add(resonance, "n-max", "direct-sum truncation (default 50)");
    resonance_bag.add(resonance, "K", "tail Taylor order (default 6)");
    resonance_bag.add(resonance, "scan-step",
                      "step of the scan that produced the candidates (sets the refinement "
                      "bracket; default 0.01)");
    resonance->callback([&] { rc = cmd_resonance(resonance_bag.layers()); });

    CLI::App* periodfn = app.add_subcommand(
        "periodfn", "Sample the reconstructed psi on the residual grid in a re-checkable file");
    add_common_options(periodfn_bag, periodfn);
    periodfn_bag.add(periodfn, "R", "spectral parameter (s = 1/2 + iR)");
    periodfn_bag.add(periodfn, "parity", "sign class of the targeted eigenvalue (1 or -1)");
    periodfn_bag.add(periodfn, "N", "collocation grid size (default 32)");
    periodfn_bag.add(periodfn, "n-max", "direct-sum truncation (default 50)");
    periodfn_bag.add(periodfn, "K", "tail Taylor order (default 6)");
    periodfn_bag.add(periodfn, "points", "number of three-term sample groups (default 40)");
    periodfn->callback([&] { rc = cmd_periodfn(periodfn_bag.layers()); });

    CLI::App* verify = app.add_subcommand(
        "verify", "Recompute the residuals of a periodfn CSV file from its own data");
    add_common_options(verify_bag, verify);
    std::string verify_path;
    verify->add_option("path", verify_path, "periodfn CSV file to re-check")->required();
    verify->callback([&] { rc = cmd_verify(verify_bag.layers(), verify_path); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const modsurf::convergence_error& e) {
        std::fprintf(stderr, "error (non-convergence): %s\n", e.what());
        return 3;
    } catch (const modsurf::io_error& e) {
        std::fprintf(stderr, "error (I/O): %s\n", e.what());
        return 2;
    } catch (const modsurf::validation_error& e) {
        std::fprintf(stderr, "error (validation): %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return rc;
}
