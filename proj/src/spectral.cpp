#include "modsurf/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "modsurf/errors.hpp"

namespace modsurf {

Complex lambda_of(Complex s) { return s * (1.0 - s); }

Complex PeriodFunction::h(double t) const {
    if (t < -1e-12) throw validation_error("h is defined for t >= 0");
    if (t <= CollocationGrid::kHi + 1e-12)
        return interpolate(grid, node_values, std::max(t, 0.0));
    const int k = static_cast<int>(std::ceil(t - CollocationGrid::kHi - 1e-12));
    const double base = t - static_cast<double>(k);
    Complex val = interpolate(grid, node_values, base);
    const Complex twos = 2.0 * s;
    for (int j = 1; j <= k; ++j) {
        const double u = base + static_cast<double>(j);
        val -= static_cast<double>(parity) * std::exp(-twos * std::log(u)) *
               interpolate(grid, node_values, 1.0 / u);
    }
    return val;
}

Complex PeriodFunction::psi(double x) const {
    if (!(x > 0.0)) throw validation_error("psi is defined on (0, infinity)");
    if (x > 1.0) return h(x - 1.0);
    return static_cast<double>(parity) * std::exp(-2.0 * s * std::log(x)) * h(1.0 / x - 1.0);
}

PeriodFunction make_period_function(Complex s, int parity, int N, int n_max, int K) {
    if (parity != 1 && parity != -1)
        throw validation_error("parity must be +1 or -1");
    OperatorMatrix M = gauss_matrix(s, N, n_max, K);
    Eigenpair ep = eigenpair_near(M, Complex(static_cast<double>(parity), 0.0));
    if (!(ep.residual < 1e-8))
        throw convergence_error("extracted eigenpair residual exceeds 1e-8");
    PeriodFunction pf;
    pf.s = s;
    pf.parity = parity;
    pf.grid = std::move(M.grid);
    pf.node_values = std::move(ep.vector);
    pf.eigenvalue = ep.eigenvalue;
    pf.eigenpair_residual = ep.residual;
    pf.n_max = n_max;
    pf.K = K;
    return pf;
}

std::function<Complex(double)> reconstruct_psi(const PeriodFunction& pf) {
    return [pf](double x) { return pf.psi(x); };
}

namespace {

std::vector<double> residual_grid(int m) {
    std::vector<double> ts(static_cast<size_t>(m));
    for (int k = 0; k < m; ++k)
        ts[static_cast<size_t>(k)] = 10.0 * (static_cast<double>(k) + 0.5) / static_cast<double>(m);
    return ts;
}

double psi_scale(const std::function<Complex(double)>& psi, const std::vector<double>& ts) {
    double scale = 0.0;
    for (double t : ts) scale = std::max(scale, std::abs(psi(t)));
    if (!(scale > 0.0)) throw validation_error("psi vanishes on the residual grid");
    return scale;
}

}  // namespace

std::array<Complex, 3> quadratic_through(const std::array<double, 3>& x,
                                         const std::array<Complex, 3>& y) {
    std::array<Complex, 3> c{Complex(0, 0), Complex(0, 0), Complex(0, 0)};
    for (int i = 0; i < 3; ++i) {
        const int p = (i + 1) % 3, q = (i + 2) % 3;
        const Complex w = y[static_cast<size_t>(i)] /
                          ((x[static_cast<size_t>(i)] - x[static_cast<size_t>(p)]) *
                           (x[static_cast<size_t>(i)] - x[static_cast<size_t>(q)]));
        c[0] += w * x[static_cast<size_t>(p)] * x[static_cast<size_t>(q)];
        c[1] -= w * (x[static_cast<size_t>(p)] + x[static_cast<size_t>(q)]);
        c[2] += w;
    }
    return c;
}

double three_term_residual(const std::function<Complex(double)>& psi, Complex s, int m) {
    if (m < 1) throw validation_error("three_term_residual requires m >= 1");
    const std::vector<double> ts = residual_grid(m);
    const double scale = psi_scale(psi, ts);
    double worst = 0.0;
    for (double t : ts) {
        const Complex r =
            psi(t) - psi(t + 1.0) - std::exp(-2.0 * s * std::log(t + 1.0)) * psi(t / (t + 1.0));
        worst = std::max(worst, std::abs(r));
    }
    return worst / scale;
}

double boundary_residual(const std::function<Complex(double)>& psi, Complex s) {
    const double scale = psi_scale(psi, residual_grid(40));
    const std::array<double, 3> eps = {0.01, 0.02, 0.04};
    std::array<double, 3> xm{};
    std::array<Complex, 3> gp{}, gm{};
    for (size_t i = 0; i < 3; ++i) {
        gp[i] = psi(eps[i]);
        gm[i] = -std::exp(-2.0 * s * std::log(eps[i])) * psi(1.0 / eps[i]);
        xm[i] = -eps[i];
    }
    const std::array<Complex, 3> cp = quadratic_through(eps, gp);
    const std::array<Complex, 3> cm = quadratic_through(xm, gm);
    double worst = 0.0;
    for (size_t i = 0; i < 3; ++i) worst = std::max(worst, std::abs(cp[i] - cm[i]));
    return worst / scale;
}

std::pair<double, double> cocycle_residuals(const std::function<Complex(double)>& psi,
                                            Complex s) {
    const std::vector<double> ts = residual_grid(40);
    const double scale = psi_scale(psi, ts);
    const Complex twos = 2.0 * s;

    auto c_S = [&](double t) -> Complex {
        if (t > 0.0) return psi(t);
        return -std::exp(-twos * std::log(std::abs(t))) * psi(-1.0 / t);
    };

    std::vector<double> samples = ts;
    for (int i = 0; i < 15; ++i)
        samples.push_back(-(0.05 + static_cast<double>(i) * (0.90 / 14.0)));
    for (int i = 0; i < 15; ++i)
        samples.push_back(-1.0 - (0.05 + static_cast<double>(i) * (8.95 / 14.0)));

    double r1 = 0.0, r2 = 0.0;
    for (double t : samples) {
        const Complex one_term =
            std::exp(-twos * std::log(std::abs(t))) * c_S(-1.0 / t) + c_S(t);
        r1 = std::max(r1, std::abs(one_term));
        const Complex triple = std::exp(-twos * std::log(std::abs(t + 1.0))) *
                                   c_S(-1.0 / (t + 1.0)) +
                               std::exp(-twos * std::log(std::abs(t))) * c_S(-1.0 - 1.0 / t) +
                               c_S(t);
        r2 = std::max(r2, std::abs(triple));
    }
    return {r1 / scale, r2 / scale};
}

std::vector<DipCandidate> find_dips(const std::vector<double>& Rs,
                                    const std::vector<double>& abs_dets, int parity,
                                    double rel_threshold) {
    if (Rs.size() != abs_dets.size())
        throw validation_error("find_dips requires equally sized grids");
    std::vector<DipCandidate> dips;
    if (abs_dets.size() < 3) return dips;
    std::vector<double> sorted = abs_dets;
    std::sort(sorted.begin(), sorted.end());
    const size_t n = sorted.size();
    const double median =
        (n % 2 == 1) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    const double bar = rel_threshold * median;
    for (size_t i = 1; i + 1 < abs_dets.size(); ++i) {
        if (abs_dets[i] < abs_dets[i - 1] && abs_dets[i] < abs_dets[i + 1] &&
            abs_dets[i] < bar) {
            DipCandidate d;
            d.R = Rs[i];
            d.parity = parity;
            d.det_abs = abs_dets[i];
            d.ratio = median > 0.0 ? abs_dets[i] / median : 0.0;
            dips.push_back(d);
        }
    }
    return dips;
}

std::vector<DipCandidate> scan_critical_line(double R_lo, double R_hi, double step, int N,
                                             int n_max, int K, double rel_threshold) {
    if (!(0.0 < R_lo && R_lo < R_hi))
        throw validation_error("scan requires 0 < R_lo < R_hi");
    if (!(step > 0.0)) throw validation_error("scan requires step > 0");
    std::vector<double> Rs;
    for (long long i = 0;; ++i) {
        const double R = R_lo + static_cast<double>(i) * step;
        if (R >= R_hi + 1e-12) break;
        Rs.push_back(R);
        if (Rs.size() > 2000000) throw validation_error("scan grid too fine");
    }
    std::vector<double> dp(Rs.size()), dm(Rs.size());
    for (size_t i = 0; i < Rs.size(); ++i) {
        const OperatorMatrix M = gauss_matrix(Complex(0.5, Rs[i]), N, n_max, K);
        dp[i] = std::abs(fredholm_det(M, +1));
        dm[i] = std::abs(fredholm_det(M, -1));
    }
    std::vector<DipCandidate> dips = find_dips(Rs, dp, +1, rel_threshold);
    const std::vector<DipCandidate> minus = find_dips(Rs, dm, -1, rel_threshold);
    dips.insert(dips.end(), minus.begin(), minus.end());
    std::sort(dips.begin(), dips.end(),
              [](const DipCandidate& a, const DipCandidate& b) { return a.R < b.R; });
    return dips;
}

ResonanceResult refine_resonance(double R0, int parity, int N, int n_max, int K,
                                 double scan_step) {
    if (parity != 1 && parity != -1)
        throw validation_error("parity must be +1 or -1");
    if (!(R0 > 0.0)) throw validation_error("refinement requires R0 > 0");

    auto det_abs = [&](double R) {
        const OperatorMatrix M = gauss_matrix(Complex(0.5, R), N, n_max, K);
        return std::abs(fredholm_det(M, parity));
    };

    // Golden-section search on the bracket around the dip.
    const double half = std::max(0.01, scan_step);
    double a = R0 - half, b = R0 + half;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = det_abs(c), fd = det_abs(d);
    while (b - a > 1e-8) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = det_abs(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = det_abs(d);
        }
    }
    const double R = 0.5 * (a + b);

    ResonanceResult res;
    res.R = R;
    res.parity = parity;
    res.lambda = 0.25 + R * R;
    res.det_abs_min = det_abs(R);
    res.N = N;
    res.n_max = n_max;
    res.K = K;
    res.scan_step = scan_step;

    const Complex s(0.5, R);
    const PeriodFunction pf = make_period_function(s, parity, N, n_max, K);
    const auto psi = reconstruct_psi(pf);
    res.three_term_residual = three_term_residual(psi, s);
    res.boundary_residual = boundary_residual(psi, s);
    const auto [r1, r2] = cocycle_residuals(psi, s);
    res.cocycle_r1 = r1;
    res.cocycle_r2 = r2;
    res.certified =
        res.three_term_residual < 1e-6 && res.cocycle_r1 < 1e-5 && res.cocycle_r2 < 1e-5;
    return res;
}

}  // namespace modsurf
