#include <cmath>

#include "modsurf/errors.hpp"
#include "modsurf/transfer.hpp"

namespace modsurf {

Complex hurwitz_zeta(Complex w, double a) {
    if (a <= 0.0) throw validation_error("hurwitz_zeta requires a > 0");
    if (std::abs(w - 1.0) < 1e-12) throw validation_error("hurwitz_zeta pole at w = 1");

    // Direct summation up to a base point that grows with |w| keeps the
    // Bernoulli tail uniformly small over the used strip.
    const double x_target = std::max(25.0, 3.0 * std::abs(w));
    const int m_terms = std::max(1, static_cast<int>(std::ceil(x_target - a)));
    Complex sum(0.0, 0.0);
    for (int n = 0; n < m_terms; ++n) sum += std::exp(-w * std::log(a + n));

    const double X = a + static_cast<double>(m_terms);
    const double lx = std::log(X);
    Complex tail = std::exp((1.0 - w) * lx) / (w - 1.0) + 0.5 * std::exp(-w * lx);

    // Bernoulli corrections B_{2j}/(2j)! * (w)_{2j-1} * X^{-w-2j+1}, j = 1..4.
    static constexpr double kB_over_fact[4] = {
        (1.0 / 6.0) / 2.0,      // B_2 / 2!
        (-1.0 / 30.0) / 24.0,   // B_4 / 4!
        (1.0 / 42.0) / 720.0,   // B_6 / 6!
        (-1.0 / 30.0) / 40320.0 // B_8 / 8!
    };
    Complex rising = w;  // (w)_{2j-1}, maintained across the loop
    for (int j = 1; j <= 4; ++j) {
        tail += kB_over_fact[j - 1] * rising * std::exp(-(w + static_cast<double>(2 * j - 1)) * lx);
        rising *= (w + static_cast<double>(2 * j - 1)) * (w + static_cast<double>(2 * j));
    }
    return sum + tail;
}

}  // namespace modsurf
