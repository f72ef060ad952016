#pragma once

#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "modsurf/dynamics.hpp"

namespace modsurf {

/// Length of the closed geodesic attached to a hyperbolic trace value:
/// 2*arcosh(trace/2). Throws validation_error for trace <= 2.
double geodesic_length(long long trace);

/// One trace level of the geodesic length spectrum. Oriented convention:
/// every primitive necklace counts once, so a geodesic and its reverse are
/// distinct entries of `necklaces` when their words differ.
struct LengthSpectrumEntry {
    long long trace = 0;
    double length = 0.0;
    int multiplicity = 0;  // == necklaces.size()
    std::vector<Necklace> necklaces;
};

/// All length-spectrum entries with trace <= max_trace, ascending by trace.
std::vector<LengthSpectrumEntry> length_spectrum(long long max_trace);

/// Cache directory resolution: explicit argument, else the MODSURF_CACHE_DIR
/// environment variable, else "./.modsurf-cache".
std::string default_cache_dir();

/// Path of the cache file used for a given bound inside a cache directory.
std::string cache_file_path(const std::string& cache_dir, long long max_trace);

/// Like length_spectrum, but backed by a versioned JSON cache file. A cache
/// file with a mismatched schema version or bound is ignored and rewritten.
/// Pass an empty cache_dir to use default_cache_dir().
std::vector<LengthSpectrumEntry> length_spectrum_cached(long long max_trace,
                                                        const std::string& cache_dir = "");

/// Serialize / parse the cache payload (exposed for tests and the CLI).
std::string length_spectrum_to_cache_json(long long max_trace,
                                          const std::vector<LengthSpectrumEntry>& entries);
/// Returns true and fills `out` when the JSON text is a valid cache payload
/// for the requested bound; false otherwise (never throws on bad payloads).
bool length_spectrum_from_cache_json(const std::string& text, long long max_trace,
                                     std::vector<LengthSpectrumEntry>& out);

/// Independent brute-force count of conjugacy classes of primitive hyperbolic
/// elements per trace value, using only group arithmetic: enumerate all
/// generator words up to word_length_bound, then merge by an explicit
/// conjugation search over a bounded set of conjugators. Classes whose
/// conjugacy or primitivity cannot be resolved within the bounds raise
/// convergence_error rather than being silently accepted.
std::map<long long, long long> conjugacy_oracle(long long max_trace, int word_length_bound);

/// Doubly truncated Euler product over the length spectrum:
/// prod_{entries} prod_{k=0..k_max} (1 - e^{-(s+k) length})^multiplicity,
/// multiplied in ascending (length, k) order. Requires Re s > 1.
std::complex<double> selberg_zeta_euler(std::complex<double> s,
                                        const std::vector<LengthSpectrumEntry>& spectrum,
                                        int k_max);
std::complex<double> selberg_zeta_euler(std::complex<double> s, long long max_trace, int k_max);

/// Closed form (1 - e^{-s})^2 for the circle-geodesic zeta of the square torus.
std::complex<double> torus_zeta(std::complex<double> s);

/// Laplacian spectrum of the square torus up to frequency k_max.
struct TorusSpectrum {
    int k_max = 0;
    std::vector<std::pair<double, int>> eigenvalues;  // (value, multiplicity), ascending
};
TorusSpectrum torus_spectrum(int k_max);

/// Newton refinement of a zero of 1 - e^{-s} from a starting guess; the
/// refined points are the lattice 2*pi*i*k. Throws convergence_error if the
/// iteration does not settle.
std::complex<double> torus_zero_near(std::complex<double> s0);

}  // namespace modsurf
