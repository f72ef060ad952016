#include "modsurf/quadratic.hpp"

#include <cmath>

namespace modsurf {

namespace {

long long isqrt_ll(long long n) {
    if (n < 0) return -1;
    auto r = static_cast<long long>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

} // namespace

QuadraticIrrational::QuadraticIrrational(long long p, long long q, long long D) {
    if (q <= 0) throw validation_error("quadratic irrational requires q > 0");
    if (D <= 0) throw validation_error("quadratic irrational requires D > 0");
    long long r = isqrt_ll(D);
    if (r * r == D)
        throw validation_error("quadratic irrational requires non-square D");
    if ((D - p * p) % q != 0)
        throw validation_error("quadratic irrational requires q | (D - p^2)");
    // Absorb square factors: (p + sqrt(D))/q = (p/g + sqrt(D/g^2))/(q/g)
    // whenever g | p, g | q, g^2 | D. A factor is only absorbed when the
    // divisibility invariant q | (D - p^2) survives the reduction, so the
    // stored triple always satisfies it.
    for (long long g = isqrt_ll(D); g >= 2; --g) {
        if (D % (g * g) == 0 && p % g == 0 && q % g == 0 &&
            ((D / (g * g)) - (p / g) * (p / g)) % (q / g) == 0) {
            p /= g;
            q /= g;
            D /= g * g;
            g = isqrt_ll(D) + 1; // restart below the new bound
        }
    }
    p_ = p;
    q_ = q;
    D_ = D;
}

double QuadraticIrrational::value() const {
    return (static_cast<double>(p_) + std::sqrt(static_cast<double>(D_))) /
           static_cast<double>(q_);
}

bool QuadraticIrrational::greater_than(long long n) const {
    // (p + sqrt(D))/q > n  <=>  sqrt(D) > n q - p   (q > 0)
    long long rhs = n * q_ - p_;
    if (rhs < 0) return true;
    return D_ > rhs * rhs;
}

bool QuadraticIrrational::less_than(long long n) const {
    long long rhs = n * q_ - p_;
    if (rhs < 0) return false;
    return D_ < rhs * rhs;
}

std::string QuadraticIrrational::to_string() const {
    return "(" + std::to_string(p_) + "+sqrt(" + std::to_string(D_) + "))/" +
           std::to_string(q_);
}

bool fixes(const GroupElement& g, const QuadraticIrrational& x) {
    // x = (p + sqrt(D))/q is fixed by [[a,b],[c,d]] iff c x^2 + (d-a) x - b = 0.
    // Substituting and separating 1 and sqrt(D) components (q > 0, D non-square):
    //   sqrt(D):  2 c p + (d - a) q == 0
    //   rational: c (p^2 + D) + (d - a) p q - b q^2 == 0
    const int128 a = g.a(), b = g.b(), c = g.c(), d = g.d();
    const int128 p = x.p(), q = x.q(), D = x.D();
    int128 irr = 2 * c * p + (d - a) * q;
    int128 rat = c * (p * p + D) + (d - a) * p * q - b * q * q;
    return irr == 0 && rat == 0;
}

} // namespace modsurf
