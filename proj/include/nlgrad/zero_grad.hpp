#pragma once
#include "nlgrad/domain.hpp"
#include "nlgrad/kernels.hpp"
#include "nlgrad/operators.hpp"

#include <Eigen/Cholesky>
#include <utility>

namespace nlgrad {

// Data for the constant-convolution problem: find h on the full window with
// h = g on the outer collar and Q*h = c at every interior node.
struct BoundaryData {
    double c = 0;
    Field g;  // support GammaDelta
};

enum class SolveMethod { Auto, DenseLU, Iterative };

// Collocation solve of the constant-convolution problem. Unknowns sit at the
// interior nodes; dense LU up to 4000 cells, unrestarted GMRES with an
// FFT-embedded band matvec above that. The max-norm residual of Q*h - c over
// the interior is written to *residual_out when given, and the solve fails
// hard if it exceeds 1e-8.
Field solve_C(const KernelTable& t, const DomainGrid& g, const BoundaryData& data,
              double* residual_out = nullptr, SolveMethod method = SolveMethod::Auto);

// Column space of the discrete zero-gradient functions: the solve for
// (c,g) = (1,0) plus one solve per collar node indicator. gram_factor is the
// Cholesky factorization of the h-weighted Gram matrix, ready for orthogonal
// projection.
struct NBasis {
    DomainGrid grid;
    double s = 0;
    Eigen::MatrixXd columns;                 // n_cells x (1 + collar count)
    Eigen::LLT<Eigen::MatrixXd> gram_factor;
};

NBasis build_n_basis(const KernelTable& t, const DomainGrid& g);

// The pair (integral of Q*h over the interior, trace of h on the collar).
// Restricted to the zero-gradient space this map is an isomorphism onto
// (constant, boundary data) pairs.
std::pair<double, Field> phi_map(const KernelTable& t, const DomainGrid& g, const Field& h);

// The pair (integral of h over the interior, trace on the collar).
std::pair<double, Field> psi_map(const DomainGrid& g, const Field& h);

// P applied to a smooth torus field that is constant across the closed
// interval (a,b), restricted to the grid. Such functions have vanishing
// nonlocal gradient on the interior.
Field smooth_n_member(const TorusTransform& tt, const std::vector<double>& v,
                      const DomainGrid& g);

// Interior mean m of the (1,0) solve. Nonzero mean certifies that a
// zero-trace member of the space with vanishing mean must vanish; asserts
// |m| > 1e-8 and returns m.
double uniqueness_check(const KernelTable& t, const DomainGrid& g);

} // namespace nlgrad
