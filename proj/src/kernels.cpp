#include "nlgrad/kernels.hpp"
#include "nlgrad/fft.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace nlgrad {

namespace {

constexpr double kQuadTol = 1e-10;
constexpr unsigned kQuadDepth = 20;

// 8-point Gauss-Legendre on [-1,1]
constexpr double kG8x[8] = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
    -0.1834346424956498,  0.1834346424956498,  0.5255324099163290,
     0.7966664774136267,  0.9602898564975363};
constexpr double kG8w[8] = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
    0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
    0.2223810344533745, 0.1012285362903763};

template <class F>
double adaptive(F&& f, double lo, double hi, const char* what) {
    if (hi <= lo) return 0.0;
    double err = 0, l1 = 0;
    double val = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, lo, hi, kQuadDepth, kQuadTol, &err, &l1);
    if (!std::isfinite(val) || err > 1e-8 * std::max(1.0, l1))
        throw std::runtime_error(std::string("quadrature failed to converge: ") + what);
    return val;
}

void validate_profile(const CutoffProfile& p) {
    if (!(p.delta > 0)) throw std::invalid_argument("delta must be positive");
    if (!(p.mu >= 0 && p.mu < 1)) throw std::invalid_argument("mu must lie in [0,1)");
}

void validate_order(double s) {
    if (!(s > 0 && s < 1)) throw std::invalid_argument("s must lie in (0,1)");
}

// int_0^X wbar(r) r^{-s} dr, singularity removed by r = t^{1/(1-s)}.
double weighted_mass(const CutoffProfile& p, double s, double X) {
    const double e = 1.0 - s;
    auto f = [&](double t) { return eval_cutoff(p, std::pow(t, 1.0 / e)); };
    return adaptive(f, 0.0, std::pow(X, e), "cutoff mass") / e;
}

// int_x^delta wbar(r) r^{-(1+s)} dr for x > 0. Below the plateau edge
// wbar = 1 and the integral is the power-law antiderivative in closed form;
// what remains is a smooth bounded integral over the transition band. The
// split keeps the cost flat no matter how small x gets.
double tail(const CutoffProfile& p, double s, double x) {
    if (x >= p.delta) return 0.0;
    const double inner = p.mu * p.delta;
    // Truncate where the cutoff falls below 1e-35: past that point the
    // integrand contributes nothing representable at the scales the kernel
    // is used, and its denormal values stall the adaptive rule.
    const double t_cap = std::sqrt(1.0 - 1.0 / (1.0 - std::log(1e-35)));
    const double r_cap = inner + t_cap * (p.delta - inner);
    auto f = [&](double r) { return eval_cutoff(p, r) * std::pow(r, -(1.0 + s)); };
    if (x >= inner) {
        // a priori bound from the cutoff being non-increasing past the edge
        const double bound =
            eval_cutoff(p, x) * (std::pow(x, -s) - std::pow(p.delta, -s)) / s;
        if (bound < 1e-30 || x >= r_cap) return 0.0;
        if (bound < 1e-16)   // refinement cannot change anything measurable
            return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
                f, x, r_cap, 0);
        return adaptive(f, x, r_cap, "kernel tail");
    }
    const double plateau = (std::pow(x, -s) - std::pow(inner, -s)) / s;
    return plateau + adaptive(f, inner, r_cap, "kernel tail");
}

} // namespace

double eval_cutoff(const CutoffProfile& p, double r) {
    validate_profile(p);
    if (!(r >= 0)) throw std::invalid_argument("cutoff argument must be nonnegative");
    const double inner = p.mu * p.delta;
    if (r <= inner) return 1.0;
    if (r >= p.delta) return 0.0;
    const double t = (r - inner) / (p.delta - inner);
    return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

double normalization_constant(const CutoffProfile& p, double s) {
    validate_profile(p);
    validate_order(s);
    const double mass = weighted_mass(p, s, p.delta);
    if (!(mass > 0)) throw std::runtime_error("degenerate cutoff: zero mass");
    return 1.0 / (2.0 * mass);
}

double eval_Q(const CutoffProfile& p, double s, double c_norm, double x) {
    validate_profile(p);
    validate_order(s);
    if (x == 0.0) throw std::invalid_argument("Q is singular at zero");
    const double ax = std::abs(x);
    if (ax >= p.delta) return 0.0;
    return c_norm * tail(p, s, ax);
}

KernelTable build_kernel_table(const CutoffProfile& p, double s, double grid_h) {
    validate_profile(p);
    validate_order(s);
    if (!(grid_h > 0)) throw std::invalid_argument("grid_h must be positive");
    const int K = static_cast<int>(std::lround(p.delta / grid_h));
    if (K < 4)
        throw std::invalid_argument("grid too coarse: need delta/grid_h >= 4");

    KernelTable t;
    t.s = s;
    t.profile = p;
    t.grid_h = grid_h;
    t.K = K;
    t.c_norm = normalization_constant(p, s);

    const double h = grid_h;
    const double c = t.c_norm;
    auto Q = [&](double x) { return c * tail(p, s, x); };

    // Half tables, mirrored below. Central cell by parts:
    // int_0^X Q = X Q(X) + c int_0^X wbar r^{-s} dr  with X = h/2.
    std::vector<double> qh(K + 1, 0.0), dh(K + 1, 0.0);
    {
        const double X = 0.5 * h;
        qh[0] = 2.0 * (X * Q(X) + c * weighted_mass(p, s, X)) / h;
    }
    for (int k = 1; k <= K; ++k) {
        const double xl = (k - 0.5) * h;
        const double xr = std::min((k + 0.5) * h, p.delta);
        if (xr <= xl) { qh[k] = 0.0; continue; }
        const double mid = 0.5 * (xl + xr), rad = 0.5 * (xr - xl);
        double acc = 0.0;
        for (int g = 0; g < 8; ++g) acc += kG8w[g] * Q(mid + rad * kG8x[g]);
        qh[k] = acc * rad / h;  // divided by the full cell width
    }

    // One global rescale pins the discrete mass of Q to exactly 1.
    double mass = qh[0];
    for (int k = 1; k <= K; ++k) mass += 2.0 * qh[k];
    mass *= h;
    const double factor = 1.0 / mass;
    if (!(std::abs(factor - 1.0) <= 1e-3))
        throw std::runtime_error("kernel table rescale out of tolerance");
    for (double& v : qh) v *= factor;

    // d = Q' off zero, so cell averages are exact endpoint differences.
    for (int k = 1; k <= K; ++k) {
        const double xl = (k - 0.5) * h;
        const double xr = (k + 0.5) * h;
        const double Ql = xl >= p.delta ? 0.0 : Q(xl);
        const double Qr = xr >= p.delta ? 0.0 : Q(xr);
        dh[k] = (Qr - Ql) / h;
    }
    // First-moment correction on ring 1: the finite-difference stencil built
    // from these averages must map x -> 1 exactly.
    double m1 = 0.0;
    for (int k = 1; k <= K; ++k) m1 -= 2.0 * dh[k] * k;
    m1 *= h * h;
    dh[1] -= (1.0 - m1) / (2.0 * h * h);

    t.q_weights.assign(2 * K + 1, 0.0);
    t.d_weights.assign(2 * K + 1, 0.0);
    for (int k = 0; k <= K; ++k) {
        t.q_weights[K + k] = qh[k];
        t.q_weights[K - k] = qh[k];
        if (k > 0) {
            t.d_weights[K + k] = dh[k];
            t.d_weights[K - k] = -dh[k];
        }
    }

    // The convolution must stay invertible on every periodic embedding:
    // the symbol of the zero-padded weight sequence has to be positive.
    {
        std::size_t N = 1;
        while (N < static_cast<std::size_t>(4 * (K + 1))) N <<= 1;
        std::vector<std::complex<double>> buf(N, 0.0);
        buf[0] = qh[0] * h;
        for (int k = 1; k <= K; ++k) {
            buf[k] = qh[k] * h;
            buf[N - k] = qh[k] * h;
        }
        fft_inplace(buf, false);
        for (const auto& z : buf)
            if (!(z.real() > 0))
                throw std::runtime_error("kernel symbol not positive definite");
    }
    return t;
}

} // namespace nlgrad
