#pragma once

#include <array>
#include <functional>
#include <utility>
#include <vector>

#include "modsurf/transfer.hpp"

namespace modsurf {

/// Laplace eigenvalue attached to the parameter s.
Complex lambda_of(Complex s);

/// Eigenfunction h of the accelerated operator at parameter s, tagged with
/// the sign class (+1 / -1) of the eigenvalue it was extracted near, plus the
/// reconstruction h -> psi of the three-term solution.
struct PeriodFunction {
    Complex s;
    int parity = 1;  // +-1 class label of the targeted operator eigenvalue
    CollocationGrid grid;
    Eigen::VectorXcd node_values;   // h at the nodes, value 1 at node nearest x=1
    Complex eigenvalue;             // extracted operator eigenvalue
    double eigenpair_residual = 0;  // ||M h - eigenvalue h||_inf / ||h||_inf
    int n_max = 0;
    int K = 0;

    /// h on the grid hull by barycentric interpolation; beyond the hull by
    /// upward recursion h(u) = h(u-1) - parity * u^{-2s} h(1/u).
    Complex h(double t) const;

    /// psi(x) = h(x-1) for x > 1, psi(x) = parity * x^{-2s} h(1/x - 1) for
    /// 0 < x <= 1. Throws validation_error outside (0, infinity).
    Complex psi(double x) const;
};

/// Build the eigenfunction at s by targeting the operator eigenvalue nearest
/// to `parity`. Throws convergence_error when the extracted eigenpair's
/// residual is not below 1e-8.
PeriodFunction make_period_function(Complex s, int parity, int N, int n_max, int K);

/// The reconstructed psi as a standalone evaluable (owns a copy of pf).
std::function<Complex(double)> reconstruct_psi(const PeriodFunction& pf);

/// max_t |psi(t) - psi(t+1) - (t+1)^{-2s} psi(t/(t+1))| / max_t |psi(t)|
/// over the m-point grid t_k = 10 (k+1/2)/m in (0, 10).
double three_term_residual(const std::function<Complex(double)>& psi, Complex s, int m = 40);

/// Smooth-extension check at 0: quadratic interpolants of g+(t) = psi(t) and
/// g-(t) = -|t|^{-2s} psi(-1/t) on the stencils +-{0.01, 0.02, 0.04}; returns
/// the maximum coefficient mismatch normalized by max |psi| on the three-term
/// grid. One-sided differentiation noise makes this the loosest of the
/// residual checks: the eigenfunction is smooth but not analytic at the
/// endpoint, so the fitted curvature carries an O(1) contribution from the
/// third derivative even for a fully converged eigenfunction.
double boundary_residual(const std::function<Complex(double)>& psi, Complex s);

/// Cocycle identities built from c_S (c_S = psi on (0,inf), the reflected
/// branch on (-inf,0)): r1 tests |t|^{-2s} c_S(-1/t) + c_S(t) = 0, r2 tests
/// the three-fold sum over the orbit of t under t -> -1-1/t. Both maxima are
/// normalized by max |psi| on the three-term grid.
std::pair<double, double> cocycle_residuals(const std::function<Complex(double)>& psi, Complex s);

struct DipCandidate {
    double R = 0.0;
    int parity = 1;
    double det_abs = 0.0;  // |det(I - parity*M)| at the dip
    double ratio = 0.0;    // det_abs / grid median
};

/// Strict local minima of abs_dets that fall below rel_threshold times the
/// grid median. Exposed separately so dip detection is testable on synthetic
/// data.
std::vector<DipCandidate> find_dips(const std::vector<double>& Rs,
                                    const std::vector<double>& abs_dets, int parity,
                                    double rel_threshold = 0.05);

/// Evaluate |det(I -+ M(1/2 + iR))| on the grid R_lo, R_lo+step, ..., R_hi
/// and return all dip candidates of both signs, ascending in R.
std::vector<DipCandidate> scan_critical_line(double R_lo, double R_hi, double step, int N,
                                             int n_max, int K, double rel_threshold = 0.05);

/// Monomial coefficients (c0, c1, c2) of the quadratic through three points;
/// shared by the boundary check and the file re-verification.
std::array<Complex, 3> quadratic_through(const std::array<double, 3>& x,
                                         const std::array<Complex, 3>& y);

struct ResonanceResult {
    double R = 0.0;
    int parity = 1;
    double lambda = 0.0;  // 1/4 + R^2 on the critical line
    double det_abs_min = 0.0;
    double three_term_residual = 0.0;
    double boundary_residual = 0.0;
    double cocycle_r1 = 0.0;
    double cocycle_r2 = 0.0;
    bool certified = false;  // three-term < 1e-6 and both cocycle residuals < 1e-5
    int N = 0;
    int n_max = 0;
    int K = 0;
    double scan_step = 0.0;
};

/// Golden-section minimization of |det(I - parity*M(1/2+iR))| around R0
/// (bracket half-width max(0.01, scan_step), final |Delta R| < 1e-8), then
/// all residual checks at the minimizer.
ResonanceResult refine_resonance(double R0, int parity, int N, int n_max, int K,
                                 double scan_step = 0.01);

}  // namespace modsurf
