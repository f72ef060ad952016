#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "modsurf/psl2.hpp"

namespace modsurf {

using Complex = std::complex<double>;

/// Point s = sigma + iR with the associated Laplace eigenvalue s(1-s).
struct SpectralParameter {
    double sigma = 0.5;
    double R = 0.0;

    Complex s() const { return Complex(sigma, R); }
    Complex lambda() const { return s() * (1.0 - s()); }
};

/// Hurwitz zeta sum_{n>=0} (a+n)^{-w} by Euler-Maclaurin: direct summation to
/// a |w|-dependent base point, then integral + midpoint + Bernoulli
/// corrections through order 8. Accurate to ~1e-12 relative for Re w >= 1/2,
/// |Im w| <= 40. Throws validation_error at the pole w = 1 and for a <= 0.
Complex hurwitz_zeta(Complex w, double a);

/// Chebyshev-Lobatto collocation grid on [0, 2] with barycentric weights.
/// The interval is the hull of the sampled operator images: 1/(x+n) lies in
/// (0, 1] for every node x >= 0 and shift n >= 1, and x + n >= 1 keeps all
/// complex powers on the principal branch.
struct CollocationGrid {
    static constexpr double kLo = 0.0;
    static constexpr double kHi = 2.0;

    int N = 0;
    std::vector<double> nodes;    // strictly increasing
    std::vector<double> weights;  // barycentric weights
};

CollocationGrid collocation_grid(int N);

/// Values of the N cardinal (Lagrange) functions at t.
Eigen::VectorXd cardinal_values(const CollocationGrid& grid, double t);

/// Barycentric evaluation of a function given by its node values.
Complex interpolate(const CollocationGrid& grid, const Eigen::VectorXcd& values, double t);

/// Taylor coefficients at 0 of each cardinal function, orders 0..K, computed
/// by exact polynomial convolution of the monomial factors (row j holds the
/// coefficients of cardinal function j).
Eigen::MatrixXd cardinal_taylor(const CollocationGrid& grid, int K);

/// Collocation discretization of the one-branch accelerated operator
/// (L_s f)(x) = sum_{n>=1} (x+n)^{-2s} f(1/(x+n)), summed directly to n_max
/// with a Hurwitz-zeta tail using K+1 Taylor terms of the cardinal functions.
struct OperatorMatrix {
    Complex s;
    CollocationGrid grid;
    int n_max = 0;
    int K = 0;
    Eigen::MatrixXcd entries;
};

OperatorMatrix gauss_matrix(Complex s, int N, int n_max, int K);

/// Weighted substitution (g'(t))^s f(g t) with g'(t) = 1/(ct+d)^2; principal
/// branch (the derivative is a positive real for real t off the pole).
Complex tau_action(const GroupElement& g, Complex s,
                   const std::function<Complex(double)>& f, double t);

/// Two-term operator f(t+1) + (t+1)^{-2s} f(t/(t+1)) for t > 0.
Complex farey_apply(Complex s, const std::function<Complex(double)>& f, double t);

/// det(I - sign*M) by dense LU with partial pivoting; sign must be +1 or -1.
Complex fredholm_det(const OperatorMatrix& M, int sign);

/// Seed of the deterministic inverse-iteration start vector.
inline constexpr unsigned kInverseIterationSeed = 20240614u;

struct Eigenpair {
    Complex eigenvalue;
    Eigen::VectorXcd vector;  // normalized to 1 at the node nearest x = 1
    double residual = 0.0;    // ||M v - lambda v||_inf / ||v||_inf
};

/// Eigenvalue of M closest to mu and its eigenvector, by shifted inverse
/// iteration from a fixed seeded start vector; if competing eigenvalues at a
/// comparable distance from mu stall the iteration, the shift is refined via
/// the Rayleigh quotient, which settles on the dominant nearby eigenvalue.
/// Deterministic; throws convergence_error if the iteration does not settle.
Eigenpair eigenpair_near(const OperatorMatrix& M, Complex mu);

}  // namespace modsurf
