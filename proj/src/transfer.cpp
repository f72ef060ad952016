#include "modsurf/transfer.hpp"

#include <cmath>
#include <random>

#include "modsurf/errors.hpp"

namespace modsurf {

CollocationGrid collocation_grid(int N) {
    if (N < 4 || N > 400)
        throw validation_error("collocation grid requires 4 <= N <= 400");
    CollocationGrid g;
    g.N = N;
    g.nodes.resize(static_cast<size_t>(N));
    g.weights.resize(static_cast<size_t>(N));
    const double ctr = 0.5 * (CollocationGrid::kLo + CollocationGrid::kHi);
    const double hw = 0.5 * (CollocationGrid::kHi - CollocationGrid::kLo);
    for (int j = 0; j < N; ++j) {
        g.nodes[static_cast<size_t>(j)] =
            ctr - hw * std::cos(static_cast<double>(j) * M_PI / static_cast<double>(N - 1));
        double w = (j % 2 == 0) ? 1.0 : -1.0;
        if (j == 0 || j == N - 1) w *= 0.5;
        g.weights[static_cast<size_t>(j)] = w;
    }
    return g;
}

Eigen::VectorXd cardinal_values(const CollocationGrid& grid, double t) {
    const int N = grid.N;
    Eigen::VectorXd v = Eigen::VectorXd::Zero(N);
    for (int j = 0; j < N; ++j) {
        if (std::abs(t - grid.nodes[static_cast<size_t>(j)]) < 1e-300) {
            v[j] = 1.0;
            return v;
        }
    }
    double total = 0.0;
    for (int j = 0; j < N; ++j) {
        const double term =
            grid.weights[static_cast<size_t>(j)] / (t - grid.nodes[static_cast<size_t>(j)]);
        v[j] = term;
        total += term;
    }
    return v / total;
}

Complex interpolate(const CollocationGrid& grid, const Eigen::VectorXcd& values, double t) {
    if (values.size() != grid.N)
        throw validation_error("interpolation values must match the grid size");
    const Eigen::VectorXd card = cardinal_values(grid, t);
    Complex out(0.0, 0.0);
    for (int j = 0; j < grid.N; ++j) out += card[j] * values[j];
    return out;
}

Eigen::MatrixXd cardinal_taylor(const CollocationGrid& grid, int K) {
    if (K < 0 || K > 12) throw validation_error("cardinal_taylor requires 0 <= K <= 12");
    const int N = grid.N;
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(N, K + 1);
    std::vector<double> c(static_cast<size_t>(K) + 1, 0.0);
    for (int j = 0; j < N; ++j) {
        // Ascending Taylor coefficients at 0 of prod_{k != j} (y - x_k),
        // truncated to order K (the product is lower triangular in the
        // coefficient order, so truncation during the convolution is exact).
        std::fill(c.begin(), c.end(), 0.0);
        c[0] = 1.0;
        double denom = 1.0;
        for (int k = 0; k < N; ++k) {
            if (k == j) continue;
            const double xk = grid.nodes[static_cast<size_t>(k)];
            for (int i = K; i >= 1; --i) c[static_cast<size_t>(i)] = -xk * c[static_cast<size_t>(i)] + c[static_cast<size_t>(i) - 1];
            c[0] = -xk * c[0];
            denom *= grid.nodes[static_cast<size_t>(j)] - xk;
        }
        for (int m = 0; m <= K; ++m) C(j, m) = c[static_cast<size_t>(m)] / denom;
    }
    return C;
}

OperatorMatrix gauss_matrix(Complex s, int N, int n_max, int K) {
    if (n_max < 10 || n_max > 1000000)
        throw validation_error("gauss_matrix requires 10 <= n_max <= 1e6");
    if (s.real() < 0.5 - 1e-12)
        throw validation_error("gauss_matrix requires Re s >= 1/2");
    OperatorMatrix M;
    M.s = s;
    M.grid = collocation_grid(N);
    M.n_max = n_max;
    M.K = K;
    M.entries = Eigen::MatrixXcd::Zero(N, N);
    const Eigen::MatrixXd C = cardinal_taylor(M.grid, K);
    const Complex twos = 2.0 * s;
    for (int i = 0; i < N; ++i) {
        const double xi = M.grid.nodes[static_cast<size_t>(i)];
        for (int n = 1; n <= n_max; ++n) {
            const double xin = xi + static_cast<double>(n);
            const Complex weight = std::exp(-twos * std::log(xin));
            const Eigen::VectorXd card = cardinal_values(M.grid, 1.0 / xin);
            for (int j = 0; j < N; ++j) M.entries(i, j) += weight * card[j];
        }
        const double a = xi + static_cast<double>(n_max) + 1.0;
        for (int m = 0; m <= K; ++m) {
            const Complex z = hurwitz_zeta(twos + static_cast<double>(m), a);
            for (int j = 0; j < N; ++j) M.entries(i, j) += C(j, m) * z;
        }
    }
    return M;
}

Complex tau_action(const GroupElement& g, Complex s,
                   const std::function<Complex(double)>& f, double t) {
    const double c = static_cast<double>(g.c());
    const double d = static_cast<double>(g.d());
    const double den = c * t + d;
    if (std::abs(den) < 1e-300)
        throw validation_error("tau_action evaluated at the pole of g");
    const double a = static_cast<double>(g.a());
    const double b = static_cast<double>(g.b());
    const double deriv = 1.0 / (den * den);  // positive real: principal power
    return std::exp(s * std::log(deriv)) * f((a * t + b) / den);
}

Complex farey_apply(Complex s, const std::function<Complex(double)>& f, double t) {
    if (t <= 0.0) throw validation_error("farey_apply requires t > 0");
    return f(t + 1.0) + std::exp(-2.0 * s * std::log(t + 1.0)) * f(t / (t + 1.0));
}

Complex fredholm_det(const OperatorMatrix& M, int sign) {
    if (sign != 1 && sign != -1)
        throw validation_error("fredholm_det sign must be +1 or -1");
    const int N = M.grid.N;
    Eigen::MatrixXcd A =
        Eigen::MatrixXcd::Identity(N, N) - static_cast<double>(sign) * M.entries;
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
    return lu.determinant();
}

Eigenpair eigenpair_near(const OperatorMatrix& M, Complex mu) {
    const int N = M.grid.N;
    if (M.entries.rows() != N || M.entries.cols() != N)
        throw validation_error("eigenpair_near requires a square matrix over the grid");

    const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(N, N);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M.entries - mu * identity);

    // Deterministic start vector: raw engine words mapped affinely to [-1,1]
    // (no std::distribution, whose output may vary across implementations).
    std::mt19937 rng(kInverseIterationSeed);
    auto draw = [&rng]() {
        return 2.0 * (static_cast<double>(rng()) / 4294967296.0) - 1.0;
    };
    Eigen::VectorXcd v(N);
    for (int i = 0; i < N; ++i) {
        const double re = draw();
        const double im = draw();
        v[i] = Complex(re, im);
    }

    double best_diff = 1e300;
    int since_shift_update = 0;
    for (int iter = 0; iter < 200; ++iter) {
        Eigen::VectorXcd w = lu.solve(v);
        int pivot = 0;
        double wmax = 0.0;
        for (int i = 0; i < N; ++i) {
            if (std::abs(w[i]) > wmax) {
                wmax = std::abs(w[i]);
                pivot = i;
            }
        }
        if (!(wmax > 0.0) || !std::isfinite(wmax))
            throw convergence_error("inverse iteration produced a degenerate vector");
        w /= w[pivot];
        const double diff = (w - v).lpNorm<Eigen::Infinity>();
        v = std::move(w);
        best_diff = std::min(best_diff, diff);
        if (diff < 1e-13) break;
        // A slow tail means other eigenvalues sit almost as close to the
        // shift as the target; moving the shift to the current Rayleigh
        // quotient restores the gap. (Never reached when the shift already
        // all but touches an eigenvalue, e.g. at a resonance.)
        if (++since_shift_update >= 20) {
            const Complex rq =
                (v.adjoint() * (M.entries * v))(0, 0) / (v.adjoint() * v)(0, 0);
            lu.compute(M.entries - rq * identity);
            since_shift_update = 0;
        }
    }
    if (best_diff > 1e-10)
        throw convergence_error("inverse iteration did not converge");

    const Complex num = (v.adjoint() * (M.entries * v))(0, 0);
    const Complex den = (v.adjoint() * v)(0, 0);
    const Complex lambda = num / den;

    // Normalize at the node nearest x = 1 (first such node on a tie).
    int j1 = 0;
    double dist = 1e300;
    for (int j = 0; j < N; ++j) {
        const double dj = std::abs(M.grid.nodes[static_cast<size_t>(j)] - 1.0);
        if (dj < dist) {
            dist = dj;
            j1 = j;
        }
    }
    if (std::abs(v[j1]) < 1e-250)
        throw convergence_error("eigenvector vanishes at the normalization node");
    v /= v[j1];

    Eigenpair out;
    out.eigenvalue = lambda;
    out.residual = (M.entries * v - lambda * v).lpNorm<Eigen::Infinity>() /
                   v.lpNorm<Eigen::Infinity>();
    out.vector = std::move(v);
    return out;
}

}  // namespace modsurf
