#pragma once
#include "nlgrad/domain.hpp"
#include "nlgrad/kernels.hpp"

#include <complex>
#include <cstddef>
#include <vector>

namespace nlgrad {

// v(x_i) = sum_k q_weights[K+k] u(x_{i-k}) h at every Omega node. The stencil
// of an Omega node never leaves the grid, so no extension is involved.
Field convolve_Q(const KernelTable& t, const DomainGrid& g, const Field& u);

// Nonlocal gradient of u on Omega. Two row types, switching at depth K:
// rows deeper than the horizon use the principal-value stencil
//     sum_{k != 0} d_weights[K+k] (u(x_{i-k}) - u(x_i)) h,
// rows within one horizon of the boundary differentiate the convolution
// instead (centered differences of convolve_Q, one-sided at the two edge
// nodes). The two agree to O(h^{1-s}) on smooth data; near the boundary the
// difference form is the one that annihilates solutions of the constant
// convolution problem, which is what the zero-gradient space is built from.
Field nonlocal_gradient(const KernelTable& t, const DomainGrid& g, const Field& u);

// Principal-value stencil at every Omega node (in one dimension gradient and
// divergence share it). Using the pure stencil here, and in the gradient
// wherever a test function can be nonzero, makes the duality
//   integrate(D u * psi, Omega) = -integrate(u * div psi)
// an exact matrix-transpose identity for psi vanishing off the deep interior.
Field nonlocal_divergence(const KernelTable& t, const DomainGrid& g, const Field& psi);

// -div of the zero-extension of phi, kept on the two-sided boundary collar.
// Returned as a field over the whole grid that is zero away from the collar.
Field nonlocal_boundary_operator(const KernelTable& t, const DomainGrid& g, const Field& phi);

// Periodic spectral realization of the inverse of convolve_Q.
struct TorusTransform {
    double length = 0;      // full period
    std::size_t n_modes = 0;
    double grid_h = 0;      // length / n_modes, matches the table it was built from
    std::vector<std::complex<double>> q_hat;
    double min_real_q_hat = 0;
};

TorusTransform build_torus(const KernelTable& t, double length, std::size_t n_modes);

std::vector<double> torus_convolve(const TorusTransform& tt, const std::vector<double>& v);

// Inverse convolution: IDFT of DFT(v) / q_hat.
std::vector<double> apply_P(const TorusTransform& tt, const std::vector<double>& v);

// Index of the torus sample holding grid node 0 when the grid is embedded
// centered on the torus.
std::size_t torus_offset(const TorusTransform& tt, const DomainGrid& g);

// Smallest power-of-two mode count whose torus both contains the grid and
// leaves room for the reflection and truncation stages of extend_modulo_N.
std::size_t pick_torus_modes(const DomainGrid& g);

// Extension operator: u on Omega_delta is mapped to a torus field w with
// D w = D u on Omega up to discretization error, by pushing v = Q*u through
// a classical even-reflection extension, a smooth truncation, and the
// spectral inverse. u - w restricted to Omega_delta then has vanishing
// nonlocal gradient up to the same error.
std::vector<double> extend_modulo_N(const KernelTable& t, const DomainGrid& g,
                                    const TorusTransform& tt, const Field& u);

} // namespace nlgrad
