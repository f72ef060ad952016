#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "modsurf/errors.hpp"

namespace modsurf {

// Exact arithmetic in PSL(2,Z) and its Moebius action on P^1(R) = R u {inf}.
//
// Elements are stored as integer matrices [[a,b],[c,d]] with det = 1, taken
// modulo +-I. The stored representative is sign-normalized: c > 0, or
// (c == 0 and a > 0). Entries use checked 128-bit integers; any operation
// that would leave the checked range throws overflow_error.

using int128 = __int128;

std::string int128_to_string(int128 v);

// Largest entry magnitude we allow. Products of two in-range entries are
// re-checked after every compose, so intermediates cannot wrap silently.
inline constexpr int128 kMaxEntry = int128{1} << 62;

class GroupElement {
  public:
    // Constructs the normalized representative of [[a,b],[c,d]].
    // Throws validation_error unless det == 1, overflow_error if out of range.
    GroupElement(int128 a, int128 b, int128 c, int128 d);

    static GroupElement identity();

    int128 a() const { return a_; }
    int128 b() const { return b_; }
    int128 c() const { return c_; }
    int128 d() const { return d_; }

    bool operator==(const GroupElement& o) const = default;

    std::string to_string() const; // "[[a,b],[c,d]]"

  private:
    int128 a_, b_, c_, d_;
};

// Generators. S = [[0,1],[-1,0]] (normalized to [[0,-1],[1,0]]),
// T = T2 = [[1,1],[0,1]], T1 = [[1,0],[1,1]].
GroupElement gen_S();
GroupElement gen_T();
GroupElement gen_T1();
GroupElement gen_T2();

GroupElement compose(const GroupElement& g, const GroupElement& h);
GroupElement inverse(const GroupElement& g);

// |a + d| of the representative (well defined modulo +-I).
int128 trace(const GroupElement& g);
bool is_hyperbolic(const GroupElement& g);
bool is_identity(const GroupElement& g);

// A point of P^1(R): either a finite real or the single point at infinity.
struct ExtendedReal {
    bool infinite = false;
    double value = 0.0;

    static ExtendedReal inf() { return {true, 0.0}; }
    static ExtendedReal finite(double v) { return {false, v}; }
};

// Total Moebius action on P^1(R): (a x + b) / (c x + d), with the
// conventions mobius(g, inf) = a/c (c != 0) or inf, and pole -> inf.
ExtendedReal mobius(const GroupElement& g, const ExtendedReal& x);
ExtendedReal mobius(const GroupElement& g, double x);

} // namespace modsurf

template <>
struct std::hash<modsurf::GroupElement> {
    size_t operator()(const modsurf::GroupElement& g) const noexcept {
        auto mix = [](size_t h, modsurf::int128 v) {
            auto lo = static_cast<uint64_t>(v);
            auto hi = static_cast<uint64_t>(v >> 64);
            h ^= std::hash<uint64_t>{}(lo) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            h ^= std::hash<uint64_t>{}(hi) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            return h;
        };
        size_t h = 0;
        h = mix(h, g.a());
        h = mix(h, g.b());
        h = mix(h, g.c());
        h = mix(h, g.d());
        return h;
    }
};
