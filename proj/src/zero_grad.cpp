#include "nlgrad/zero_grad.hpp"
#include "nlgrad/errors.hpp"
#include "nlgrad/fft.hpp"
#include "nlgrad/par.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nlgrad {

namespace {

constexpr int kDenseLimit = 4000;
constexpr double kResidualTol = 1e-8;

void check_data(const DomainGrid& g, const BoundaryData& data) {
    check_field(g, data.g);
    if (data.g.support != Support::GammaDelta)
        throw std::invalid_argument("solve_C: boundary data must live on the collar");
}

// Right-hand side c - (Q-weights applied to the zero-padded collar data).
Eigen::VectorXd collocation_rhs(const KernelTable& t, const DomainGrid& g,
                                double c, const Eigen::VectorXd& gvals) {
    Field padded{Support::OmegaDelta, Eigen::VectorXd::Zero(g.n_cells)};
    for (std::size_t j = 0; j < g.gamma.size(); ++j)
        padded.values[g.gamma[j]] = gvals[j];
    Field coupled = convolve_Q(t, g, padded);
    return Eigen::VectorXd::Constant(g.omega.size(), c) - coupled.values;
}

Eigen::MatrixXd collocation_matrix(const KernelTable& t, const DomainGrid& g) {
    const int n_om = static_cast<int>(g.omega.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n_om, n_om);
    for (int m = 0; m < n_om; ++m)
        for (int j = 0; j < n_om; ++j) {
            const int d = g.omega[m] - g.omega[j];
            if (d >= -g.K && d <= g.K) A(m, j) = t.q_weights[g.K + d] * g.h;
        }
    return A;
}

// FFT-embedded application of the banded Toeplitz interior operator.
struct BandApply {
    std::size_t M = 0;
    int n_om = 0;
    std::vector<std::complex<double>> c_hat;

    BandApply(const KernelTable& t, const DomainGrid& g) {
        n_om = static_cast<int>(g.omega.size());
        if (g.omega.back() - g.omega.front() + 1 != n_om)
            throw std::logic_error("interior nodes are not contiguous");
        M = 1;
        while (M < static_cast<std::size_t>(n_om + 2 * g.K + 1)) M <<= 1;
        std::vector<std::complex<double>> c(M, 0.0);
        for (int d = 0; d <= g.K; ++d) {
            c[d] = t.q_weights[g.K + d] * g.h;
            if (d > 0) c[M - d] = t.q_weights[g.K + d] * g.h;
        }
        fft_inplace(c, false);
        c_hat = std::move(c);
    }

    Eigen::VectorXd operator()(const Eigen::VectorXd& x) const {
        std::vector<std::complex<double>> buf(M, 0.0);
        for (int j = 0; j < n_om; ++j) buf[j] = x[j];
        fft_inplace(buf, false);
        for (std::size_t j = 0; j < M; ++j) buf[j] *= c_hat[j];
        fft_inplace(buf, true);
        Eigen::VectorXd y(n_om);
        for (int j = 0; j < n_om; ++j) y[j] = buf[j].real();
        return y;
    }
};

// Unrestarted GMRES with Givens rotations.
Eigen::VectorXd gmres(const BandApply& apply, const Eigen::VectorXd& b,
                      double rel_tol, int max_iter) {
    const int n = static_cast<int>(b.size());
    const double bnorm = b.norm();
    if (bnorm == 0) return Eigen::VectorXd::Zero(n);
    std::vector<Eigen::VectorXd> V;
    V.push_back(b / bnorm);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(max_iter + 1, max_iter);
    Eigen::VectorXd cs(max_iter), sn(max_iter);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(max_iter + 1);
    beta[0] = bnorm;
    int k = 0;
    bool converged = false;
    while (k < max_iter) {
        Eigen::VectorXd w = apply(V[k]);
        for (int j = 0; j <= k; ++j) {
            H(j, k) = w.dot(V[j]);
            w -= H(j, k) * V[j];
        }
        const double hnext = w.norm();
        for (int j = 0; j < k; ++j) {
            const double tmp = cs[j] * H(j, k) + sn[j] * H(j + 1, k);
            H(j + 1, k) = -sn[j] * H(j, k) + cs[j] * H(j + 1, k);
            H(j, k) = tmp;
        }
        const double denom = std::hypot(H(k, k), hnext);
        cs[k] = H(k, k) / denom;
        sn[k] = hnext / denom;
        H(k, k) = denom;
        beta[k + 1] = -sn[k] * beta[k];
        beta[k] = cs[k] * beta[k];
        ++k;
        if (std::abs(beta[k]) <= rel_tol * bnorm || hnext == 0) {
            converged = true;
            break;
        }
        V.push_back(w / hnext);
    }
    if (!converged && std::abs(beta[k]) > rel_tol * bnorm)
        throw std::runtime_error("iterative interior solve did not converge");
    Eigen::VectorXd y = H.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(
        beta.head(k));
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < k; ++j) x += y[j] * V[j];
    return x;
}

Field assemble(const DomainGrid& g, const Eigen::VectorXd& interior,
               const Eigen::VectorXd& gvals) {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(g.n_cells);
    for (std::size_t m = 0; m < g.omega.size(); ++m) full[g.omega[m]] = interior[m];
    for (std::size_t j = 0; j < g.gamma.size(); ++j) full[g.gamma[j]] = gvals[j];
    return {Support::OmegaDelta, full};
}

double check_residual(const KernelTable& t, const DomainGrid& g, const Field& h,
                      double c, double* residual_out) {
    Field conv = convolve_Q(t, g, h);
    const double res = (conv.values.array() - c).abs().maxCoeff();
    if (residual_out) *residual_out = res;
    if (!(res <= kResidualTol))
        throw ToleranceError("interior residual " + std::to_string(res) +
                             " exceeds tolerance");
    return res;
}

} // namespace

Field solve_C(const KernelTable& t, const DomainGrid& g, const BoundaryData& data,
              double* residual_out, SolveMethod method) {
    check_data(g, data);
    const Eigen::VectorXd rhs = collocation_rhs(t, g, data.c, data.g.values);
    Eigen::VectorXd interior;
    const bool dense = method == SolveMethod::DenseLU ||
                       (method == SolveMethod::Auto && g.n_cells <= kDenseLimit);
    if (dense) {
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(collocation_matrix(t, g));
        const double rc = lu.rcond();
        if (!(rc > 1e-14))
            throw std::runtime_error(
                "collocation matrix numerically singular, rcond estimate " +
                std::to_string(rc));
        interior = lu.solve(rhs);
    } else {
        BandApply apply(t, g);
        interior = gmres(apply, rhs, 1e-12, 500);
    }
    Field h = assemble(g, interior, data.g.values);
    check_residual(t, g, h, data.c, residual_out);
    return h;
}

NBasis build_n_basis(const KernelTable& t, const DomainGrid& g) {
    const int n_gamma = static_cast<int>(g.gamma.size());
    const int dim = 1 + n_gamma;
    NBasis basis;
    basis.grid = g;
    basis.s = t.s;
    basis.columns.resize(g.n_cells, dim);

    if (g.n_cells <= kDenseLimit) {
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(collocation_matrix(t, g));
        if (!(lu.rcond() > 1e-14))
            throw std::runtime_error("collocation matrix numerically singular");
        Eigen::VectorXd zeros = Eigen::VectorXd::Zero(n_gamma);
        basis.columns.col(0) =
            assemble(g, lu.solve(collocation_rhs(t, g, 1.0, zeros)), zeros).values;
        for (int j = 0; j < n_gamma; ++j) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(n_gamma);
            e[j] = 1.0;
            basis.columns.col(1 + j) =
                assemble(g, lu.solve(collocation_rhs(t, g, 0.0, e)), e).values;
        }
        // Residual sweep over all columns in one convolution pass each.
        for (int j = 0; j < dim; ++j) {
            Field col{Support::OmegaDelta, basis.columns.col(j)};
            const double c = j == 0 ? 1.0 : 0.0;
            Field conv = convolve_Q(t, g, col);
            const double res = (conv.values.array() - c).abs().maxCoeff();
            if (!(res <= kResidualTol))
                throw ToleranceError("basis column " + std::to_string(j) +
                                     " residual " + std::to_string(res));
        }
    } else {
        Eigen::VectorXd zeros = Eigen::VectorXd::Zero(n_gamma);
        basis.columns.col(0) =
            solve_C(t, g, {1.0, {Support::GammaDelta, zeros}}).values;
        for (int j = 0; j < n_gamma; ++j) {
            Eigen::VectorXd e = Eigen::VectorXd::Zero(n_gamma);
            e[j] = 1.0;
            basis.columns.col(1 + j) =
                solve_C(t, g, {0.0, {Support::GammaDelta, e}}).values;
        }
    }

    Eigen::MatrixXd gram = g.h * (basis.columns.transpose() * basis.columns);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    if (es.info() != Eigen::Success || !(es.eigenvalues().minCoeff() > 1e-20))
        throw std::runtime_error("basis columns numerically dependent");
    basis.gram_factor = Eigen::LLT<Eigen::MatrixXd>(gram);
    if (basis.gram_factor.info() != Eigen::Success)
        throw std::runtime_error("basis Gram factorization failed");
    return basis;
}

std::pair<double, Field> phi_map(const KernelTable& t, const DomainGrid& g,
                                 const Field& h) {
    Field conv = convolve_Q(t, g, h);
    Eigen::VectorXd trace(g.gamma.size());
    for (std::size_t j = 0; j < g.gamma.size(); ++j) trace[j] = h.values[g.gamma[j]];
    return {integrate(g, conv), Field{Support::GammaDelta, trace}};
}

std::pair<double, Field> psi_map(const DomainGrid& g, const Field& h) {
    check_field(g, h);
    if (h.support != Support::OmegaDelta)
        throw std::invalid_argument("psi_map: field must live on the full window");
    double mean = 0;
    for (int i : g.omega) mean += h.values[i];
    Eigen::VectorXd trace(g.gamma.size());
    for (std::size_t j = 0; j < g.gamma.size(); ++j) trace[j] = h.values[g.gamma[j]];
    return {g.h * mean, Field{Support::GammaDelta, trace}};
}

Field smooth_n_member(const TorusTransform& tt, const std::vector<double>& v,
                      const DomainGrid& g) {
    if (v.size() != tt.n_modes)
        throw std::invalid_argument("smooth_n_member: wrong sample count");
    const std::size_t j0 = torus_offset(tt, g);
    double lo = v[j0 + g.omega.front()], hi = lo;
    for (int i : g.omega) {
        lo = std::min(lo, v[j0 + i]);
        hi = std::max(hi, v[j0 + i]);
    }
    if (hi - lo > 1e-12)
        throw std::invalid_argument(
            "smooth_n_member: samples are not constant across the interior");
    const std::vector<double> w = apply_P(tt, v);
    Eigen::VectorXd vals(g.n_cells);
    for (int i = 0; i < g.n_cells; ++i) vals[i] = w[j0 + i];
    return {Support::OmegaDelta, vals};
}

double uniqueness_check(const KernelTable& t, const DomainGrid& g) {
    Eigen::VectorXd zeros = Eigen::VectorXd::Zero(g.gamma.size());
    Field h1 = solve_C(t, g, {1.0, {Support::GammaDelta, zeros}});
    double m = 0;
    for (int i : g.omega) m += h1.values[i];
    m *= g.h;
    if (!(std::abs(m) > 1e-8))
        throw std::runtime_error("interior mean of the unit solve is numerically zero");
    return m;
}

} // namespace nlgrad
