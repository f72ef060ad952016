#include "modsurf/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "modsurf/errors.hpp"

namespace modsurf {

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_complex(std::complex<double> z) {
    std::string out = format_real(z.real());
    out += (std::signbit(z.imag()) ? '-' : '+');
    out += format_real(std::abs(z.imag()));
    out += 'i';
    return out;
}

namespace {

double parse_real_token(const std::string& tok) {
    if (tok.empty()) throw validation_error("empty numeric token");
    size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        throw validation_error("malformed number: '" + tok + "'");
    }
    if (pos != tok.size()) throw validation_error("malformed number: '" + tok + "'");
    return v;
}

std::string strip_spaces(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    return s;
}

}  // namespace

std::complex<double> parse_complex(const std::string& text) {
    const std::string s = strip_spaces(text);
    if (s.empty()) throw validation_error("empty complex literal");
    if (s.back() != 'i' && s.back() != 'I') return {parse_real_token(s), 0.0};

    const std::string body = s.substr(0, s.size() - 1);
    // Split at the last top-level sign (one not directly after an exponent e/E).
    size_t split = std::string::npos;
    for (size_t k = body.size(); k-- > 1;) {
        const char ch = body[k];
        if ((ch == '+' || ch == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    if (split == std::string::npos) {
        // Pure imaginary: "3i", "i", "-i".
        if (body.empty() || body == "+") return {0.0, 1.0};
        if (body == "-") return {0.0, -1.0};
        return {0.0, parse_real_token(body)};
    }
    const std::string re_tok = body.substr(0, split);
    std::string im_tok = body.substr(split);
    double im = 0.0;
    if (im_tok == "+")
        im = 1.0;
    else if (im_tok == "-")
        im = -1.0;
    else
        im = parse_real_token(im_tok);
    return {parse_real_token(re_tok), im};
}

RangeSpec parse_range(const std::string& text) {
    const std::string s = strip_spaces(text);
    const size_t c1 = s.find(':');
    const size_t c2 = (c1 == std::string::npos) ? std::string::npos : s.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos || s.find(':', c2 + 1) != std::string::npos)
        throw validation_error("range must be 'lo:hi:step': '" + text + "'");
    RangeSpec r;
    r.lo = parse_real_token(s.substr(0, c1));
    r.hi = parse_real_token(s.substr(c1 + 1, c2 - c1 - 1));
    r.step = parse_real_token(s.substr(c2 + 1));
    if (!(r.step > 0.0)) throw validation_error("range step must be positive");
    if (!(r.lo < r.hi)) throw validation_error("range requires lo < hi");
    return r;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot read config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // Trim and skip comments/blanks.
        size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        size_t e = line.find_last_not_of(" \t\r");
        std::string body = line.substr(b, e - b + 1);
        if (body.empty() || body[0] == '#') continue;
        const size_t eq = body.find('=');
        if (eq == std::string::npos || eq == 0)
            throw validation_error("config line " + std::to_string(lineno) +
                                   " is not key=value: '" + body + "'");
        std::string key = body.substr(0, eq);
        std::string val = body.substr(eq + 1);
        const size_t ke = key.find_last_not_of(" \t");
        key = key.substr(0, ke + 1);
        const size_t vb = val.find_first_not_of(" \t");
        val = (vb == std::string::npos) ? "" : val.substr(vb);
        kv[key] = val;
    }
    return kv;
}

std::string env_key_for(const std::string& option) {
    std::string key = "MODSURF_";
    for (char ch : option) {
        if (ch == '-')
            key += '_';
        else
            key += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    }
    return key;
}

std::string ConfigLayers::resolve(const std::string& key, const std::string& fallback) const {
    if (auto it = cli_.find(key); it != cli_.end()) return it->second;
    if (auto it = file_.find(key); it != file_.end()) return it->second;
    if (const char* env = std::getenv(env_key_for(key).c_str()); env != nullptr && *env != '\0')
        return env;
    return fallback;
}

long long ConfigLayers::resolve_int(const std::string& key, long long fallback, long long lo,
                                    long long hi) const {
    const std::string text = resolve(key, "");
    long long v = fallback;
    if (!text.empty()) {
        size_t pos = 0;
        try {
            v = std::stoll(text, &pos);
        } catch (const std::exception&) {
            throw validation_error("option '" + key + "' is not an integer: '" + text + "'");
        }
        if (pos != text.size())
            throw validation_error("option '" + key + "' is not an integer: '" + text + "'");
    }
    if (v < lo || v > hi)
        throw validation_error("option '" + key + "' out of range [" + std::to_string(lo) +
                               ", " + std::to_string(hi) + "]: " + std::to_string(v));
    return v;
}

double ConfigLayers::resolve_real(const std::string& key, double fallback, double lo,
                                  double hi) const {
    const std::string text = resolve(key, "");
    double v = fallback;
    if (!text.empty()) v = parse_real_token(text);
    if (!(v >= lo && v <= hi))
        throw validation_error("option '" + key + "' out of range [" + format_real(lo) + ", " +
                               format_real(hi) + "]: " + format_real(v));
    return v;
}

bool ConfigLayers::resolve_flag(const std::string& key, bool fallback) const {
    const std::string text = resolve(key, "");
    if (text.empty()) return fallback;
    if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
    if (text == "0" || text == "false" || text == "no" || text == "off") return false;
    throw validation_error("option '" + key + "' is not a boolean: '" + text + "'");
}

}  // namespace modsurf
