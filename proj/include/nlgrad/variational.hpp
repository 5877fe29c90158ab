#pragma once
#include "nlgrad/domain.hpp"
#include "nlgrad/kernels.hpp"
#include "nlgrad/zero_grad.hpp"

#include <functional>
#include <vector>

namespace nlgrad {

// Quadratic nonlocal Neumann problem: minimize
//   1/2 int_Omega |D u|^2 - int F u    over the complement of the
// zero-gradient space. The density is the fixed quadratic |A|^2/2.
struct NeumannProblem {
    DomainGrid grid;
    KernelTable table;
    Field forcing;  // support OmegaDelta
};

struct NeumannSolution {
    Field minimizer;             // support OmegaDelta
    double energy = 0;
    double el_residual = 0;      // max nodal defect against complement tests
    double projection_norm = 0;  // L2 norm of the zero-gradient component
    int iterations = 0;
    std::vector<double> energy_trace;  // objective after each iterate
};

// h-weighted L2-orthogonal projection onto the basis column span.
Field project_N(const NBasis& basis, const Field& u);

// Gram operator of the energy: S u with u^T S u = h * sum over interior
// edges of ((Q*u)' )^2, the squared staggered difference of the convolution.
// Its null space is exactly the zero-gradient column span.
Field apply_stiffness(const KernelTable& t, const DomainGrid& g, const Field& u);

enum class PoincareMode {
    ZeroTraceZeroMean,  // u = 0 on the collar, zero interior mean
    Complement,         // orthogonal complement of the zero-gradient space
};

struct EigenIterationInfo {
    int iterations = 0;
    double eigenvalue = 0;  // converged Rayleigh quotient of the restricted stiffness
};

// Smallest C with ||u||_{L2(window)} <= C ||D u||_{L2(interior)} on the
// constraint set: 1/sqrt(lambda_min) of the stiffness restricted to the
// subspace, by factorization plus inverse power iteration (tolerance 1e-8,
// seeded start vector).
double poincare_constant(const NBasis& basis, const KernelTable& t,
                         const DomainGrid& g, PoincareMode mode,
                         EigenIterationInfo* info = nullptr, unsigned seed = 42);

// start, when given, seeds the iteration with its admissible component; the
// minimizer is independent of it.
NeumannSolution minimize_neumann(const NeumannProblem& problem, const NBasis& basis,
                                 const Field* start = nullptr);

// Second-order reference solve of -u'' = F on (a,b) with reflecting ends and
// zero-mean normalization, on the interior nodes of the same grid. F is
// de-meaned first; the defect that removes is written to *mean_defect.
Field classical_neumann(const DomainGrid& g, const Field& F,
                        double* mean_defect = nullptr);

struct LocalizationRow {
    double s = 0;
    double l2_error = 0;     // vs the classical solution, means matched on Omega
    double energy_gap = 0;   // vs the discrete classical energy
    double el_residual = 0;
};

// Fixed grid, one nonlocal minimization per s; forcing sampled from F at the
// interior nodes and zero on the collar (the limit problem only sees F on
// the interior).
std::vector<LocalizationRow> localization_sweep(
    double a, double b, double delta, double mu,
    const std::function<double(double)>& F,
    const std::vector<double>& s_list, int n_cells);

} // namespace nlgrad
