#pragma once
#include <vector>

namespace nlgrad {

// Radial cutoff: 1 on [0, mu*delta], smooth bump transition on (mu*delta, delta),
// 0 beyond. C-infinity, non-increasing, values in [0,1].
struct CutoffProfile {
    double delta = 1.0;
    double mu = 0.5;
};

double eval_cutoff(const CutoffProfile& p, double r);

// c with  c * 2 * int_0^delta wbar(r) r^{-s} dr = 1  (one-dimensional scaling).
// The endpoint singularity is removed exactly by the substitution r = t^{1/(1-s)}.
double normalization_constant(const CutoffProfile& p, double s);

// Q(x) = c * int_{|x|}^delta wbar(r) r^{-(1+s)} dr; zero for |x| >= delta; even.
// Rejects x = 0 (the kernel is singular there; cell averages cover that cell).
double eval_Q(const CutoffProfile& p, double s, double c_norm, double x);

// Precomputed quadrature weights on a uniform grid of spacing grid_h.
// Both weight sequences are stored centered: index K+k holds the weight of
// cell k, k = -K..K.  q_weights is symmetric with exact discrete unit mass
// (sum * h = 1 after one global rescale); d_weights is antisymmetric with a
// zero central weight, cell averages of d(z) = Q'(z), plus a first-moment
// correction on the innermost ring so the gradient stencil reproduces
// linear functions exactly.
struct KernelTable {
    double s = 0.5;
    CutoffProfile profile;
    double c_norm = 0;
    double grid_h = 0;
    int K = 0;
    std::vector<double> q_weights;  // size 2K+1
    std::vector<double> d_weights;  // size 2K+1
};

KernelTable build_kernel_table(const CutoffProfile& p, double s, double grid_h);

} // namespace nlgrad
