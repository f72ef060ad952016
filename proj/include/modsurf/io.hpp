#pragma once

#include <complex>
#include <map>
#include <string>

namespace modsurf {

inline constexpr const char kVersion[] = "1.0.0";

/// Number formatting: '.' decimal separator, 17 significant digits (lossless
/// round trip for doubles).
std::string format_real(double v);

/// Complex in single-token "R+Ii" form, e.g. "0.5+9.5336i" / "1-0.25i".
std::string format_complex(std::complex<double> z);

/// Inverse of format_complex; also accepts plain reals and pure imaginaries.
/// Throws validation_error on malformed input.
std::complex<double> parse_complex(const std::string& text);

struct RangeSpec {
    double lo = 0.0;
    double hi = 0.0;
    double step = 0.0;
};

/// "lo:hi:step" with step > 0 and lo < hi. Throws validation_error.
RangeSpec parse_range(const std::string& text);

/// key=value lines; '#' comments and blank lines ignored. Throws io_error if
/// the file cannot be read, validation_error on malformed lines.
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Environment variable carrying the default for a long option:
/// "max-trace" -> "MODSURF_MAX_TRACE".
std::string env_key_for(const std::string& option);

/// Layered option store implementing the precedence contract
/// CLI flag > config-file entry > environment variable > built-in default.
class ConfigLayers {
  public:
    void set_file(std::map<std::string, std::string> kv) { file_ = std::move(kv); }
    void set_cli(const std::string& key, const std::string& value) { cli_[key] = value; }

    /// Highest-precedence value for the option, or `fallback` if unset.
    std::string resolve(const std::string& key, const std::string& fallback) const;

    /// Typed accessors with range validation (throw validation_error).
    long long resolve_int(const std::string& key, long long fallback, long long lo,
                          long long hi) const;
    double resolve_real(const std::string& key, double fallback, double lo, double hi) const;
    bool resolve_flag(const std::string& key, bool fallback) const;

  private:
    std::map<std::string, std::string> file_, cli_;
};

}  // namespace modsurf
