#include "modsurf/psl2.hpp"

#include <algorithm>
#include <cmath>

namespace modsurf {

std::string int128_to_string(int128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    // Avoid negating the minimum value; kMaxEntry keeps us far from it anyway.
    unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1
                              : static_cast<unsigned __int128>(v);
    std::string s;
    while (u > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

namespace {

void check_range(int128 v) {
    if (v > kMaxEntry || v < -kMaxEntry)
        throw overflow_error("group element entry exceeds the checked 128-bit range");
}

int128 checked_mul(int128 x, int128 y) {
    int128 r;
    if (__builtin_mul_overflow(x, y, &r))
        throw overflow_error("overflow in group element multiplication");
    return r;
}

int128 checked_add(int128 x, int128 y) {
    int128 r;
    if (__builtin_add_overflow(x, y, &r))
        throw overflow_error("overflow in group element addition");
    return r;
}

} // namespace

GroupElement::GroupElement(int128 a, int128 b, int128 c, int128 d) {
    check_range(a);
    check_range(b);
    check_range(c);
    check_range(d);
    int128 det = checked_add(checked_mul(a, d), -checked_mul(b, c));
    if (det != 1)
        throw validation_error("group element must have determinant 1, got " +
                               int128_to_string(det));
    // Normalize the sign of the representative: c > 0, or (c == 0 and a > 0).
    bool flip = (c < 0) || (c == 0 && a < 0);
    if (flip) {
        a = -a;
        b = -b;
        c = -c;
        d = -d;
    }
    a_ = a;
    b_ = b;
    c_ = c;
    d_ = d;
}

GroupElement GroupElement::identity() { return GroupElement(1, 0, 0, 1); }

std::string GroupElement::to_string() const {
    return "[[" + int128_to_string(a_) + "," + int128_to_string(b_) + "],[" +
           int128_to_string(c_) + "," + int128_to_string(d_) + "]]";
}

GroupElement gen_S() { return GroupElement(0, 1, -1, 0); }
GroupElement gen_T() { return GroupElement(1, 1, 0, 1); }
GroupElement gen_T1() { return GroupElement(1, 0, 1, 1); }
GroupElement gen_T2() { return GroupElement(1, 1, 0, 1); }

GroupElement compose(const GroupElement& g, const GroupElement& h) {
    int128 a = checked_add(checked_mul(g.a(), h.a()), checked_mul(g.b(), h.c()));
    int128 b = checked_add(checked_mul(g.a(), h.b()), checked_mul(g.b(), h.d()));
    int128 c = checked_add(checked_mul(g.c(), h.a()), checked_mul(g.d(), h.c()));
    int128 d = checked_add(checked_mul(g.c(), h.b()), checked_mul(g.d(), h.d()));
    return GroupElement(a, b, c, d);
}

GroupElement inverse(const GroupElement& g) {
    return GroupElement(g.d(), -g.b(), -g.c(), g.a());
}

int128 trace(const GroupElement& g) {
    int128 t = checked_add(g.a(), g.d());
    return t < 0 ? -t : t;
}

bool is_hyperbolic(const GroupElement& g) { return trace(g) > 2; }

bool is_identity(const GroupElement& g) {
    return g == GroupElement::identity();
}

ExtendedReal mobius(const GroupElement& g, const ExtendedReal& x) {
    const double a = static_cast<double>(g.a());
    const double b = static_cast<double>(g.b());
    const double c = static_cast<double>(g.c());
    const double d = static_cast<double>(g.d());
    if (x.infinite) {
        if (c == 0.0) return ExtendedReal::inf();
        return ExtendedReal::finite(a / c);
    }
    const double den = c * x.value + d;
    if (den == 0.0) return ExtendedReal::inf();
    return ExtendedReal::finite((a * x.value + b) / den);
}

ExtendedReal mobius(const GroupElement& g, double x) {
    return mobius(g, ExtendedReal::finite(x));
}

} // namespace modsurf
