#include "nlgrad/operators.hpp"
#include "nlgrad/fft.hpp"
#include "nlgrad/par.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nlgrad {

namespace {

void check_match(const KernelTable& t, const DomainGrid& g) {
    if (std::abs(t.grid_h - g.h) > 1e-12 * g.h)
        throw std::invalid_argument("kernel table spacing does not match the grid");
    if (t.K != g.K)
        throw std::invalid_argument("kernel table width does not match the grid horizon");
}

void expect_support(const DomainGrid& g, const Field& f, Support s, const char* who) {
    check_field(g, f);
    if (f.support != s)
        throw std::invalid_argument(std::string(who) + ": wrong field support");
}

// Convolution values at all Omega nodes, as a plain vector.
Eigen::VectorXd conv_omega(const KernelTable& t, const DomainGrid& g,
                           const Eigen::VectorXd& u) {
    const int K = g.K;
    const double h = g.h;
    const int n_om = static_cast<int>(g.omega.size());
    Eigen::VectorXd out(n_om);
    parallel_for(n_om, [&](long m) {
        const int i = g.omega[m];
        double acc = 0;
        for (int k = -K; k <= K; ++k)
            acc += t.q_weights[K + k] * u[i - k];
        out[m] = acc * h;
    });
    return out;
}

double pv_at(const KernelTable& t, const DomainGrid& g,
             const Eigen::VectorXd& u, int i) {
    const int K = g.K;
    double acc = 0;
    for (int k = -K; k <= K; ++k) {
        if (k == 0) continue;
        acc += t.d_weights[K + k] * (u[i - k] - u[i]);
    }
    return acc * g.h;
}

} // namespace

Field convolve_Q(const KernelTable& t, const DomainGrid& g, const Field& u) {
    check_match(t, g);
    expect_support(g, u, Support::OmegaDelta, "convolve_Q");
    return {Support::Omega, conv_omega(t, g, u.values)};
}

Field nonlocal_gradient(const KernelTable& t, const DomainGrid& g, const Field& u) {
    check_match(t, g);
    expect_support(g, u, Support::OmegaDelta, "nonlocal_gradient");
    const int K = g.K;
    const double h = g.h;
    const int n_om = static_cast<int>(g.omega.size());
    if (n_om < 3) throw std::invalid_argument("nonlocal_gradient: grid too small");
    const Eigen::VectorXd cv = conv_omega(t, g, u.values);
    Eigen::VectorXd out(n_om);
    parallel_for(n_om, [&](long m) {
        if (g.depth(static_cast<int>(m)) >= K)
            out[m] = pv_at(t, g, u.values, g.omega[m]);
        else if (m == 0)
            out[m] = (-3.0 * cv[0] + 4.0 * cv[1] - cv[2]) / (2 * h);
        else if (m == n_om - 1)
            out[m] = (3.0 * cv[n_om - 1] - 4.0 * cv[n_om - 2] + cv[n_om - 3]) / (2 * h);
        else
            out[m] = (cv[m + 1] - cv[m - 1]) / (2 * h);
    });
    return {Support::Omega, out};
}

Field nonlocal_divergence(const KernelTable& t, const DomainGrid& g, const Field& psi) {
    check_match(t, g);
    expect_support(g, psi, Support::OmegaDelta, "nonlocal_divergence");
    const int n_om = static_cast<int>(g.omega.size());
    Eigen::VectorXd out(n_om);
    parallel_for(n_om, [&](long m) {
        out[m] = pv_at(t, g, psi.values, g.omega[m]);
    });
    return {Support::Omega, out};
}

Field nonlocal_boundary_operator(const KernelTable& t, const DomainGrid& g,
                                 const Field& phi) {
    check_match(t, g);
    expect_support(g, phi, Support::Omega, "nonlocal_boundary_operator");
    const int K = g.K;
    const double h = g.h;
    const int n = g.n_cells;
    Eigen::VectorXd ext = Eigen::VectorXd::Zero(n);
    for (std::size_t m = 0; m < g.omega.size(); ++m)
        ext[g.omega[m]] = phi.values[m];
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    const auto collar = g.collar();
    for (int i : collar) {
        double acc = 0;
        for (int k = -K; k <= K; ++k) {
            if (k == 0) continue;
            const int j = i - k;
            const double uj = (j >= 0 && j < n) ? ext[j] : 0.0;
            acc += t.d_weights[K + k] * (uj - ext[i]);
        }
        out[i] = -acc * h;
    }
    return {Support::OmegaDelta, out};
}

TorusTransform build_torus(const KernelTable& t, double length, std::size_t n_modes) {
    if (!is_pow2(n_modes) || n_modes < 8)
        throw std::invalid_argument("build_torus: n_modes must be a power of two >= 8");
    if (!(length > 0) || std::abs(length / n_modes - t.grid_h) > 1e-12 * t.grid_h)
        throw std::invalid_argument("build_torus: length / n_modes must equal the table spacing");
    const std::size_t K = static_cast<std::size_t>(t.K);
    if (n_modes < 2 * K + 2)
        throw std::invalid_argument("build_torus: torus shorter than the kernel support");

    const double h = t.grid_h;
    std::vector<std::complex<double>> buf(n_modes, 0.0);
    buf[0] = t.q_weights[t.K] * h;
    for (std::size_t k = 1; k <= K; ++k) {
        buf[k] = t.q_weights[t.K + static_cast<int>(k)] * h;
        buf[n_modes - k] = t.q_weights[t.K - static_cast<int>(k)] * h;
    }
    fft_inplace(buf, false);

    TorusTransform tt;
    tt.length = length;
    tt.n_modes = n_modes;
    tt.grid_h = h;
    tt.q_hat = std::move(buf);
    tt.min_real_q_hat = tt.q_hat[0].real();
    for (std::size_t j = 0; j < n_modes; ++j) {
        const double re = tt.q_hat[j].real();
        if (!(re > 0))
            throw std::runtime_error("build_torus: symbol not positive at mode " +
                                     std::to_string(j) + "; refine the grid");
        if (re < tt.min_real_q_hat) tt.min_real_q_hat = re;
    }
    if (std::abs(tt.q_hat[0].real() - 1.0) > 1e-10)
        throw std::runtime_error("build_torus: unit mass lost in transform");
    return tt;
}

namespace {

std::vector<double> torus_multiply(const TorusTransform& tt,
                                   const std::vector<double>& v, bool inverse) {
    if (v.size() != tt.n_modes)
        throw std::invalid_argument("torus field has wrong sample count");
    std::vector<std::complex<double>> buf(v.begin(), v.end());
    fft_inplace(buf, false);
    for (std::size_t j = 0; j < buf.size(); ++j)
        buf[j] = inverse ? buf[j] / tt.q_hat[j] : buf[j] * tt.q_hat[j];
    fft_inplace(buf, true);
    std::vector<double> out(v.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = buf[j].real();
    return out;
}

} // namespace

std::vector<double> torus_convolve(const TorusTransform& tt, const std::vector<double>& v) {
    return torus_multiply(tt, v, false);
}

std::vector<double> apply_P(const TorusTransform& tt, const std::vector<double>& v) {
    return torus_multiply(tt, v, true);
}

std::size_t torus_offset(const TorusTransform& tt, const DomainGrid& g) {
    if (std::abs(tt.grid_h - g.h) > 1e-12 * g.h)
        throw std::invalid_argument("torus spacing does not match the grid");
    if (tt.n_modes < static_cast<std::size_t>(g.n_cells))
        throw std::invalid_argument("torus smaller than the grid");
    return (tt.n_modes - static_cast<std::size_t>(g.n_cells)) / 2;
}

std::size_t pick_torus_modes(const DomainGrid& g) {
    // Half-period must cover half the window plus seven horizons: three
    // between the data and the truncation ramp, two for the ramp itself,
    // two between the ramp and the wrap seam.
    const double need = (g.b - g.a + 2 * g.delta) / 2 + 7 * g.delta;
    std::size_t n = 1;
    while (n * g.h < 2 * need || n < static_cast<std::size_t>(g.n_cells) + 2) n <<= 1;
    return n;
}

std::vector<double> extend_modulo_N(const KernelTable& t, const DomainGrid& g,
                                    const TorusTransform& tt, const Field& u) {
    check_match(t, g);
    expect_support(g, u, Support::OmegaDelta, "extend_modulo_N");
    const double h = g.h;
    const double half = tt.length / 2;
    const double ramp1 = half - 2 * g.delta;
    const double ramp0 = ramp1 - 2 * g.delta;
    const double window_half = (g.b - g.a + 2 * g.delta) / 2;
    if (ramp0 < window_half + 3 * g.delta)
        throw std::invalid_argument(
            "extend_modulo_N: torus too small for the reflection and ramp");

    const std::size_t N = tt.n_modes;
    const std::size_t j0 = torus_offset(tt, g);
    const Eigen::VectorXd v = conv_omega(t, g, u.values);
    const long n_om = static_cast<long>(g.omega.size());
    const long left = static_cast<long>(j0) + g.omega.front();
    const long right = static_cast<long>(j0) + g.omega.back();

    std::vector<double> w(N, 0.0);
    for (long m = 0; m < n_om; ++m) w[left + m] = v[m];
    // Even reflection across the two cell edges at a and b, then constant
    // continuation of the reflected end values.
    for (long m = 0; m < n_om; ++m) {
        if (right + 1 + m < static_cast<long>(N)) w[right + 1 + m] = v[n_om - 1 - m];
        if (left - 1 - m >= 0) w[left - 1 - m] = v[m];
    }
    for (long j = 0; j < left - n_om; ++j) w[j] = v[n_om - 1];
    for (long j = right + 1 + n_om; j < static_cast<long>(N); ++j) w[j] = v[0];

    // Smooth truncation to zero before the wrap seam, centered on Omega.
    const double xc = (g.a + g.b) / 2;
    const double x0 = g.nodes[0] - static_cast<double>(j0) * h;
    CutoffProfile ramp{ramp1, ramp0 / ramp1};
    for (std::size_t j = 0; j < N; ++j) {
        const double dist = std::abs(x0 + static_cast<double>(j) * h - xc);
        w[j] *= eval_cutoff(ramp, dist);
    }
    return apply_P(tt, w);
}

} // namespace nlgrad
