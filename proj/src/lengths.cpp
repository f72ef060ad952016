#include "modsurf/lengths.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "modsurf/errors.hpp"

namespace modsurf {

double geodesic_length(long long trace) {
    if (trace <= 2)
        throw validation_error("geodesic length requires trace >= 3");
    return 2.0 * std::acosh(static_cast<double>(trace) / 2.0);
}

std::vector<LengthSpectrumEntry> length_spectrum(long long max_trace) {
    if (max_trace < 3)
        throw validation_error("length spectrum requires max_trace >= 3");
    const auto necklaces = enumerate_necklaces(max_trace);  // sorted by (trace, word)
    std::vector<LengthSpectrumEntry> entries;
    for (const auto& [necklace, trace] : necklaces) {
        if (entries.empty() || entries.back().trace != trace) {
            LengthSpectrumEntry e;
            e.trace = trace;
            e.length = geodesic_length(trace);
            entries.push_back(std::move(e));
        }
        entries.back().necklaces.push_back(necklace);
        entries.back().multiplicity = static_cast<int>(entries.back().necklaces.size());
    }
    return entries;
}

std::string default_cache_dir() {
    if (const char* env = std::getenv("MODSURF_CACHE_DIR"); env != nullptr && *env != '\0')
        return std::string(env);
    return "./.modsurf-cache";
}

std::string cache_file_path(const std::string& cache_dir, long long max_trace) {
    std::filesystem::path p(cache_dir);
    p /= "lengths-maxtrace-" + std::to_string(max_trace) + ".json";
    return p.string();
}

namespace {
constexpr int kCacheSchemaVersion = 1;
}  // namespace

std::string length_spectrum_to_cache_json(long long max_trace,
                                          const std::vector<LengthSpectrumEntry>& entries) {
    nlohmann::json doc;
    doc["schema_version"] = kCacheSchemaVersion;
    doc["max_trace"] = max_trace;
    nlohmann::json list = nlohmann::json::array();
    for (const LengthSpectrumEntry& e : entries) {
        nlohmann::json rec;
        rec["trace"] = e.trace;
        rec["length"] = e.length;
        rec["multiplicity"] = e.multiplicity;
        nlohmann::json words = nlohmann::json::array();
        for (const Necklace& n : e.necklaces) words.push_back(n.canonical);
        rec["necklaces"] = std::move(words);
        list.push_back(std::move(rec));
    }
    doc["entries"] = std::move(list);
    return doc.dump(2) + "\n";
}

bool length_spectrum_from_cache_json(const std::string& text, long long max_trace,
                                     std::vector<LengthSpectrumEntry>& out) {
    nlohmann::json doc = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (doc.is_discarded() || !doc.is_object()) return false;
    if (!doc.contains("schema_version") || !doc["schema_version"].is_number_integer() ||
        doc["schema_version"].get<int>() != kCacheSchemaVersion)
        return false;
    if (!doc.contains("max_trace") || !doc["max_trace"].is_number_integer() ||
        doc["max_trace"].get<long long>() != max_trace)
        return false;
    if (!doc.contains("entries") || !doc["entries"].is_array()) return false;
    std::vector<LengthSpectrumEntry> entries;
    for (const nlohmann::json& rec : doc["entries"]) {
        if (!rec.is_object() || !rec.contains("trace") || !rec.contains("length") ||
            !rec.contains("multiplicity") || !rec.contains("necklaces"))
            return false;
        LengthSpectrumEntry e;
        if (!rec["trace"].is_number_integer()) return false;
        e.trace = rec["trace"].get<long long>();
        if (!rec["length"].is_number()) return false;
        e.length = rec["length"].get<double>();
        if (!rec["multiplicity"].is_number_integer()) return false;
        e.multiplicity = rec["multiplicity"].get<int>();
        if (!rec["necklaces"].is_array()) return false;
        for (const nlohmann::json& w : rec["necklaces"]) {
            if (!w.is_string()) return false;
            Necklace n;
            n.canonical = w.get<std::string>();
            if (!is_valid_word(n.canonical)) return false;
            e.necklaces.push_back(std::move(n));
        }
        if (e.multiplicity != static_cast<int>(e.necklaces.size())) return false;
        if (e.trace < 3 || e.trace > max_trace) return false;
        // Reject silently corrupted numeric fields.
        if (std::abs(std::cosh(e.length / 2.0) - static_cast<double>(e.trace) / 2.0) >
            1e-9 * static_cast<double>(e.trace))
            return false;
        if (!entries.empty() && entries.back().trace >= e.trace) return false;
        entries.push_back(std::move(e));
    }
    out = std::move(entries);
    return true;
}

std::vector<LengthSpectrumEntry> length_spectrum_cached(long long max_trace,
                                                        const std::string& cache_dir) {
    const std::string dir = cache_dir.empty() ? default_cache_dir() : cache_dir;
    const std::string path = cache_file_path(dir, max_trace);

    if (std::ifstream in(path); in) {
        std::ostringstream buf;
        buf << in.rdbuf();
        std::vector<LengthSpectrumEntry> cached;
        if (length_spectrum_from_cache_json(buf.str(), max_trace, cached)) return cached;
        // fall through: stale or corrupt cache is rebuilt below
    }

    std::vector<LengthSpectrumEntry> entries = length_spectrum(max_trace);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (!ec) {
        std::ofstream outFile(path, std::ios::trunc);
        if (outFile) outFile << length_spectrum_to_cache_json(max_trace, entries);
        // A write failure leaves no usable cache but the computation stands.
    }
    return entries;
}

std::complex<double> selberg_zeta_euler(std::complex<double> s,
                                        const std::vector<LengthSpectrumEntry>& spectrum,
                                        int k_max) {
    if (s.real() <= 1.0)
        throw validation_error("Euler product requires Re s > 1");
    if (k_max < 1)
        throw validation_error("Euler product requires k_max >= 1");
    std::complex<double> product(1.0, 0.0);
    for (const LengthSpectrumEntry& e : spectrum) {  // ascending length
        for (int k = 0; k <= k_max; ++k) {
            const std::complex<double> factor =
                1.0 - std::exp(-(s + static_cast<double>(k)) * e.length);
            for (int m = 0; m < e.multiplicity; ++m) product *= factor;
        }
    }
    return product;
}

std::complex<double> selberg_zeta_euler(std::complex<double> s, long long max_trace, int k_max) {
    return selberg_zeta_euler(s, length_spectrum(max_trace), k_max);
}

std::complex<double> torus_zeta(std::complex<double> s) {
    const std::complex<double> f = 1.0 - std::exp(-s);
    return f * f;
}

TorusSpectrum torus_spectrum(int k_max) {
    if (k_max < 0)
        throw validation_error("torus spectrum requires k_max >= 0");
    TorusSpectrum spec;
    spec.k_max = k_max;
    spec.eigenvalues.emplace_back(0.0, 1);
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    for (int k = 1; k <= k_max; ++k) {
        const double freq = kTwoPi * static_cast<double>(k);
        spec.eigenvalues.emplace_back(freq * freq, 2);
    }
    return spec;
}

std::complex<double> torus_zero_near(std::complex<double> s0) {
    std::complex<double> s = s0;
    for (int iter = 0; iter < 100; ++iter) {
        const std::complex<double> step = std::exp(s) - 1.0;  // (1-e^{-s}) / e^{-s}
        s -= step;
        if (std::abs(step) < 1e-14) return s;
    }
    throw convergence_error("zero refinement did not converge");
}

}  // namespace modsurf
