#include "nlgrad/variational.hpp"
#include "nlgrad/errors.hpp"
#include "nlgrad/operators.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace nlgrad {

namespace {

// Differences of the convolution across the n_om - 1 interior edges.
Eigen::VectorXd edge_values(const KernelTable& t, const DomainGrid& g,
                            const Eigen::VectorXd& u) {
    Field cv = convolve_Q(t, g, Field{Support::OmegaDelta, u});
    const int n_om = static_cast<int>(g.omega.size());
    Eigen::VectorXd e(n_om - 1);
    for (int r = 0; r + 1 < n_om; ++r)
        e[r] = (cv.values[r + 1] - cv.values[r]) / g.h;
    return e;
}

// Adjoint of the edge map composed with the convolution, times h: the
// stiffness is S u = h Gs^T (Gs u) with Gs the edge-difference operator.
Eigen::VectorXd stiffness_from_edges(const KernelTable& t, const DomainGrid& g,
                                     const Eigen::VectorXd& e) {
    const int n_om = static_cast<int>(g.omega.size());
    Eigen::VectorXd w(n_om);
    for (int m = 0; m < n_om; ++m) {
        const double lo = m > 0 ? e[m - 1] : 0.0;
        const double hi = m < n_om - 1 ? e[m] : 0.0;
        w[m] = (lo - hi) / g.h;
    }
    const int om0 = g.omega.front();
    Eigen::VectorXd out(g.n_cells);
    for (int j = 0; j < g.n_cells; ++j) {
        const int m_lo = std::max(0, j - g.K - om0);
        const int m_hi = std::min(n_om - 1, j + g.K - om0);
        double acc = 0;
        for (int m = m_lo; m <= m_hi; ++m)
            acc += t.q_weights[g.K + om0 + m - j] * w[m];
        out[j] = g.h * g.h * acc;
    }
    return out;
}

Eigen::VectorXd apply_S(const KernelTable& t, const DomainGrid& g,
                        const Eigen::VectorXd& u) {
    return stiffness_from_edges(t, g, edge_values(t, g, u));
}

Eigen::VectorXd n_component(const NBasis& basis, const Eigen::VectorXd& u) {
    Eigen::VectorXd rhs = basis.grid.h * (basis.columns.transpose() * u);
    return basis.columns * basis.gram_factor.solve(rhs);
}

Eigen::VectorXd complement(const NBasis& basis, const Eigen::VectorXd& u) {
    return u - n_component(basis, u);
}

// Dense edge-difference-of-convolution matrix, (n_om - 1) x n_cells.
Eigen::MatrixXd dense_edge_matrix(const KernelTable& t, const DomainGrid& g) {
    const int n_om = static_cast<int>(g.omega.size());
    Eigen::MatrixXd Gs = Eigen::MatrixXd::Zero(n_om - 1, g.n_cells);
    for (int r = 0; r + 1 < n_om; ++r) {
        const int iu = g.omega[r + 1], il = g.omega[r];
        for (int k = -g.K; k <= g.K; ++k) {
            Gs(r, iu - k) += t.q_weights[g.K + k];
            Gs(r, il - k) -= t.q_weights[g.K + k];
        }
    }
    return Gs;  // the h from the weights cancels the 1/h of the difference
}

double smallest_eigenvalue(const Eigen::MatrixXd& A, unsigned seed,
                           EigenIterationInfo* info) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
    if (ldlt.info() != Eigen::Success)
        throw std::runtime_error("restricted stiffness could not be factorized");
    const int m = static_cast<int>(A.rows());
    std::mt19937 rng(seed);
    std::normal_distribution<double> dist;
    Eigen::VectorXd x(m);
    for (int i = 0; i < m; ++i) x[i] = dist(rng);
    x.normalize();
    double rho_prev = 0;
    for (int it = 0; it < 50000; ++it) {
        Eigen::VectorXd y = ldlt.solve(x);
        const double norm = y.norm();
        if (!(norm > 0))
            throw std::runtime_error("eigen-iteration broke down");
        x = y / norm;
        const double rho = x.dot(A * x);
        if (it > 0 && std::abs(rho - rho_prev) <= 1e-8 * std::abs(rho)) {
            if (!(rho > 0))
                throw std::runtime_error("restricted stiffness is not positive");
            if (info) *info = {it + 1, rho};
            return rho;
        }
        rho_prev = rho;
    }
    throw std::runtime_error("eigen-iteration did not converge");
}

} // namespace

Field project_N(const NBasis& basis, const Field& u) {
    check_field(basis.grid, u);
    if (u.support != Support::OmegaDelta)
        throw std::invalid_argument("project_N: field must live on the full window");
    return {Support::OmegaDelta, n_component(basis, u.values)};
}

Field apply_stiffness(const KernelTable& t, const DomainGrid& g, const Field& u) {
    check_field(g, u);
    if (u.support != Support::OmegaDelta)
        throw std::invalid_argument("apply_stiffness: field must live on the full window");
    return {Support::OmegaDelta, apply_S(t, g, u.values)};
}

double poincare_constant(const NBasis& basis, const KernelTable& t,
                         const DomainGrid& g, PoincareMode mode,
                         EigenIterationInfo* info, unsigned seed) {
    const int n = g.n_cells;
    const int n_om = static_cast<int>(g.omega.size());
    Eigen::MatrixXd Z;
    if (mode == PoincareMode::ZeroTraceZeroMean) {
        // Orthonormal complement of the constant vector, embedded at the
        // interior coordinates.
        Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(n_om, 1);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(ones);
        Eigen::MatrixXd Q = qr.householderQ();
        Z = Eigen::MatrixXd::Zero(n, n_om - 1);
        for (int m = 0; m < n_om; ++m) Z.row(g.omega[m]) = Q.row(m).tail(n_om - 1);
    } else {
        if (basis.grid.n_cells != n || std::abs(basis.grid.h - g.h) > 1e-12 * g.h)
            throw std::invalid_argument("poincare_constant: basis grid mismatch");
        const int dim = static_cast<int>(basis.columns.cols());
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis.columns);
        Eigen::MatrixXd Q = qr.householderQ();
        Z = Q.rightCols(n - dim);
    }
    const Eigen::MatrixXd B = dense_edge_matrix(t, g) * Z;
    const double lambda = smallest_eigenvalue(B.transpose() * B, seed, info);
    return 1.0 / std::sqrt(lambda);
}

NeumannSolution minimize_neumann(const NeumannProblem& problem, const NBasis& basis,
                                 const Field* start) {
    const DomainGrid& g = problem.grid;
    const KernelTable& t = problem.table;
    check_field(g, problem.forcing);
    if (problem.forcing.support != Support::OmegaDelta)
        throw std::invalid_argument("minimize_neumann: forcing must live on the full window");
    if (basis.grid.n_cells != g.n_cells || std::abs(basis.grid.h - g.h) > 1e-12 * g.h)
        throw std::invalid_argument("minimize_neumann: basis grid mismatch");

    const Eigen::VectorXd f = g.h * complement(basis, problem.forcing.values);
    const Eigen::VectorXd b = complement(basis, f);
    const double nb = b.norm();

    NeumannSolution sol;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(g.n_cells);
    Eigen::VectorXd Sx = Eigen::VectorXd::Zero(g.n_cells);
    if (nb > 0) {
        if (start) {
            check_field(g, *start);
            if (start->support != Support::OmegaDelta)
                throw std::invalid_argument(
                    "minimize_neumann: start must live on the full window");
            x = complement(basis, start->values);
            Sx = apply_S(t, g, x);
        }
        Eigen::VectorXd r = b - complement(basis, Sx);
        Eigen::VectorXd p = r;
        double rs = r.squaredNorm();
        const double tol = 1e-10 * nb;
        const int budget = 10 * g.n_cells;
        int it = 0;
        while (std::sqrt(rs) > tol && it < budget) {
            const Eigen::VectorXd mid = apply_S(t, g, complement(basis, p));
            const Eigen::VectorXd Ap = complement(basis, mid);
            const double denom = p.dot(Ap);
            if (!(denom > 0))
                throw std::runtime_error("reduced system lost positive definiteness");
            const double alpha = rs / denom;
            x += alpha * p;
            Sx += alpha * mid;
            r -= alpha * Ap;
            const double rs2 = r.squaredNorm();
            p = r + (rs2 / rs) * p;
            rs = rs2;
            ++it;
            sol.energy_trace.push_back(0.5 * x.dot(Sx) - f.dot(x));
        }
        if (std::sqrt(rs) > tol)
            throw std::runtime_error("minimization did not converge in " +
                                     std::to_string(budget) + " iterations");
        sol.iterations = it;
    }

    x = complement(basis, x);
    Sx = apply_S(t, g, x);
    sol.minimizer = {Support::OmegaDelta, x};
    sol.energy = 0.5 * x.dot(Sx) - f.dot(x);
    sol.el_residual = complement(basis, Sx - f).cwiseAbs().maxCoeff();
    const double u_norm = std::sqrt(g.h) * x.norm();
    sol.projection_norm = std::sqrt(g.h) * n_component(basis, x).norm();
    if (u_norm > 0 && sol.projection_norm > 1e-8 * u_norm)
        throw ToleranceError("minimizer drifted off the admissible complement");
    return sol;
}

Field classical_neumann(const DomainGrid& g, const Field& F, double* mean_defect) {
    check_field(g, F);
    if (F.support != Support::Omega)
        throw std::invalid_argument("classical_neumann: forcing must live on the interior");
    const int n = static_cast<int>(g.omega.size());
    if (n < 3) throw std::invalid_argument("classical_neumann: too few interior nodes");
    const double mean = F.values.mean();
    if (mean_defect) *mean_defect = mean;
    Eigen::VectorXd rhs = (F.values.array() - mean) * (g.h * g.h);

    // -u'' with reflecting ends; the first row is pinned to u[0] = 0 to fix
    // the constant, the mean is removed afterwards.
    Eigen::VectorXd lo = Eigen::VectorXd::Constant(n, -1.0);
    Eigen::VectorXd di = Eigen::VectorXd::Constant(n, 2.0);
    Eigen::VectorXd up = Eigen::VectorXd::Constant(n, -1.0);
    di[n - 1] = 1.0;
    di[0] = 1.0;
    up[0] = 0.0;
    lo[0] = 0.0;
    rhs[0] = 0.0;

    // Thomas sweep.
    for (int i = 1; i < n; ++i) {
        const double wfac = lo[i] / di[i - 1];
        di[i] -= wfac * up[i - 1];
        rhs[i] -= wfac * rhs[i - 1];
    }
    Eigen::VectorXd u(n);
    u[n - 1] = rhs[n - 1] / di[n - 1];
    for (int i = n - 2; i >= 0; --i) u[i] = (rhs[i] - up[i] * u[i + 1]) / di[i];
    u.array() -= u.mean();
    return {Support::Omega, u};
}

std::vector<LocalizationRow> localization_sweep(
    double a, double b, double delta, double mu,
    const std::function<double(double)>& F,
    const std::vector<double>& s_list, int n_cells) {
    const DomainGrid g = build_grid(a, b, delta, n_cells);
    const int n_om = static_cast<int>(g.omega.size());

    Eigen::VectorXd F_omega(n_om);
    for (int m = 0; m < n_om; ++m) F_omega[m] = F(g.nodes[g.omega[m]]);
    Eigen::VectorXd F_full = Eigen::VectorXd::Zero(g.n_cells);
    for (int m = 0; m < n_om; ++m) F_full[g.omega[m]] = F_omega[m];

    const Field u_cl = classical_neumann(g, Field{Support::Omega, F_omega});
    double e_cl = 0;
    for (int r = 0; r + 1 < n_om; ++r) {
        const double d = (u_cl.values[r + 1] - u_cl.values[r]) / g.h;
        e_cl += d * d;
    }
    e_cl = 0.5 * g.h * e_cl - g.h * F_omega.dot(u_cl.values);

    std::vector<LocalizationRow> rows;
    for (double s : s_list) {
        const KernelTable t = build_kernel_table({delta, mu}, s, g.h);
        const NBasis basis = build_n_basis(t, g);
        NeumannProblem problem{g, t, Field{Support::OmegaDelta, F_full}};
        const NeumannSolution sol = minimize_neumann(problem, basis);
        Eigen::VectorXd u_om(n_om);
        for (int m = 0; m < n_om; ++m) u_om[m] = sol.minimizer.values[g.omega[m]];
        u_om.array() -= u_om.mean();
        Eigen::VectorXd ref = u_cl.values;  // already zero mean
        const double l2 = std::sqrt(g.h * (u_om - ref).squaredNorm());
        rows.push_back({s, l2, std::abs(sol.energy - e_cl), sol.el_residual});
    }
    return rows;
}

} // namespace nlgrad
