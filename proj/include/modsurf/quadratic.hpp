#pragma once

#include <cstdint>
#include <string>

#include "modsurf/errors.hpp"
#include "modsurf/psl2.hpp"

namespace modsurf {

// Exact real quadratic irrational (p + sqrt(D)) / q in the standard normal
// form: q > 0, D > 0 non-square, and q | (D - p^2). This form is closed under
// the forward branches of the interval map used by the dynamics module, which
// keeps periodic-orbit tests exact.
class QuadraticIrrational {
  public:
    // Throws validation_error if q <= 0, D <= 0, D is a perfect square, or
    // q does not divide D - p^2. The representation is canonicalized:
    // common square factors g^2 | D with g | p, g | q are absorbed into D.
    QuadraticIrrational(long long p, long long q, long long D);

    long long p() const { return p_; }
    long long q() const { return q_; }
    long long D() const { return D_; }

    double value() const;

    // Exact comparisons against integers (value vs n).
    bool greater_than(long long n) const;
    bool less_than(long long n) const;

    bool operator==(const QuadraticIrrational& o) const = default;

    std::string to_string() const; // "(p+sqrt(D))/q"

  private:
    long long p_, q_, D_;
};

// Exact test that x is a fixed point of g: substitutes x into
// c x^2 + (d - a) x - b = 0 and checks both the rational and the sqrt(D)
// components as integer identities.
bool fixes(const GroupElement& g, const QuadraticIrrational& x);

} // namespace modsurf
