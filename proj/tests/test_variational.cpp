#include "doctest.h"

#include "nlgrad/domain.hpp"
#include "nlgrad/errors.hpp"
#include "nlgrad/kernels.hpp"
#include "nlgrad/operators.hpp"
#include "nlgrad/variational.hpp"
#include "nlgrad/zero_grad.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

using namespace nlgrad;

namespace {

struct Setup {
    DomainGrid g;
    KernelTable t;
    NBasis basis;
};

Setup make(int n, double s = 0.5) {
    Setup st;
    st.g = build_grid(-3, 3, 1, n);
    st.t = build_kernel_table({1.0, 0.5}, s, st.g.h);
    st.basis = build_n_basis(st.t, st.g);
    return st;
}

Field cos_forcing(const DomainGrid& g) {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(g.n_cells);
    for (int i : g.omega) f[i] = std::cos(M_PI * g.nodes[i] / 3.0);
    return {Support::OmegaDelta, f};
}

// Edge-difference matrix rebuilt from the raw weights, for dense reference
// computations (the library never forms it for production solves).
Eigen::MatrixXd dense_edges(const KernelTable& t, const DomainGrid& g) {
    const int n_om = static_cast<int>(g.omega.size());
    Eigen::MatrixXd Gs = Eigen::MatrixXd::Zero(n_om - 1, g.n_cells);
    for (int r = 0; r + 1 < n_om; ++r)
        for (int k = -g.K; k <= g.K; ++k) {
            Gs(r, g.omega[r + 1] - k) += t.q_weights[g.K + k];
            Gs(r, g.omega[r] - k) -= t.q_weights[g.K + k];
        }
    return Gs;
}

double lagrange3(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys, double x) {
    const int n = static_cast<int>(xs.size());
    int idx = static_cast<int>(
        std::lower_bound(xs.data(), xs.data() + n, x) - xs.data());
    idx = std::clamp(idx, 1, n - 2);
    const double x0 = xs[idx - 1], x1 = xs[idx], x2 = xs[idx + 1];
    const double y0 = ys[idx - 1], y1 = ys[idx], y2 = ys[idx + 1];
    return y0 * (x - x1) * (x - x2) / ((x0 - x1) * (x0 - x2)) +
           y1 * (x - x0) * (x - x2) / ((x1 - x0) * (x1 - x2)) +
           y2 * (x - x0) * (x - x1) / ((x2 - x0) * (x2 - x1));
}

// Interior restriction of the minimizer for the cosine problem, de-meaned,
// together with the interior nodes.
std::pair<Eigen::VectorXd, Eigen::VectorXd> cos_minimizer_interior(int n) {
    Setup st = make(n);
    NeumannProblem problem{st.g, st.t, cos_forcing(st.g)};
    NeumannSolution sol = minimize_neumann(problem, st.basis);
    const int n_om = static_cast<int>(st.g.omega.size());
    Eigen::VectorXd u(n_om), xs(n_om);
    for (int m = 0; m < n_om; ++m) {
        u[m] = sol.minimizer.values[st.g.omega[m]];
        xs[m] = st.g.nodes[st.g.omega[m]];
    }
    u.array() -= u.mean();
    return {xs, u};
}

} // namespace

TEST_CASE("projection is idempotent, symmetric, and fixes the span") {
    Setup st = make(400);
    std::mt19937 gen(5);
    std::normal_distribution<double> nd;
    Eigen::VectorXd uv(400), vv(400);
    for (int i = 0; i < 400; ++i) { uv[i] = nd(gen); vv[i] = nd(gen); }
    Field u{Support::OmegaDelta, uv}, v{Support::OmegaDelta, vv};

    Field pu = project_N(st.basis, u);
    Field ppu = project_N(st.basis, pu);
    CHECK((ppu.values - pu.values).cwiseAbs().maxCoeff() <= 1e-10);

    Field pv = project_N(st.basis, v);
    double lhs = st.g.h * pu.values.dot(vv);
    double rhs = st.g.h * uv.dot(pv.values);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));

    for (int j : {0, 37, 100}) {
        Field col{Support::OmegaDelta, st.basis.columns.col(j)};
        Field pc = project_N(st.basis, col);
        CHECK((pc.values - col.values).cwiseAbs().maxCoeff() <= 1e-9);
    }
}

TEST_CASE("stiffness operator matches its dense form") {
    Setup st = make(400);
    Eigen::MatrixXd Gs = dense_edges(st.t, st.g);
    Eigen::MatrixXd S = st.g.h * Gs.transpose() * Gs;

    std::mt19937 gen(9);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 3; ++trial) {
        Eigen::VectorXd uv(400);
        for (int i = 0; i < 400; ++i) uv[i] = nd(gen);
        Field u{Support::OmegaDelta, uv};
        Eigen::VectorXd ref = S * uv;
        Eigen::VectorXd got = apply_stiffness(st.t, st.g, u).values;
        double scale = std::max(1.0, ref.cwiseAbs().maxCoeff());
        CHECK((got - ref).cwiseAbs().maxCoeff() <= 1e-9 * scale);

        // symmetry and positive semidefiniteness through the operator form
        Eigen::VectorXd wv(400);
        for (int i = 0; i < 400; ++i) wv[i] = nd(gen);
        Field w{Support::OmegaDelta, wv};
        double a = wv.dot(got);
        double b = uv.dot(apply_stiffness(st.t, st.g, w).values);
        CHECK(std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)));
        CHECK(uv.dot(got) >= -1e-10 * scale);
    }

    // zero-gradient columns span the null space
    for (int j : {0, 50}) {
        Field col{Support::OmegaDelta, st.basis.columns.col(j)};
        CHECK(apply_stiffness(st.t, st.g, col).values.cwiseAbs().maxCoeff() <= 1e-8);
    }
}

TEST_CASE("smallest restricted eigenvalue against a dense eigensolver") {
    Setup st = make(400);
    const int n = 400;
    Eigen::MatrixXd Gs = dense_edges(st.t, st.g);
    Eigen::MatrixXd A = Gs.transpose() * Gs;

    auto reference = [&](const Eigen::MatrixXd& removed) {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(removed);
        Eigen::MatrixXd Qm =
            Eigen::MatrixXd(qr.householderQ()).leftCols(removed.cols());
        Eigen::MatrixXd Pc = Eigen::MatrixXd::Identity(n, n) - Qm * Qm.transpose();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Pc * A * Pc);
        REQUIRE(es.info() == Eigen::Success);
        Eigen::VectorXd ev = es.eigenvalues();
        const int cut = static_cast<int>(removed.cols());
        CHECK(ev[cut - 1] <= 1e-4);   // the projected-out block is numerically zero
        CHECK(ev[cut] > 0.1);
        return ev[cut];
    };

    // trace-and-mean constraint: collar indicators plus the interior constant
    Eigen::MatrixXd rem1 =
        Eigen::MatrixXd::Zero(n, static_cast<int>(st.g.gamma.size()) + 1);
    for (std::size_t j = 0; j < st.g.gamma.size(); ++j) rem1(st.g.gamma[j], j) = 1.0;
    for (int i : st.g.omega) rem1(i, static_cast<int>(st.g.gamma.size())) = 1.0;

    EigenIterationInfo info1, info2;
    double C1 = poincare_constant(st.basis, st.t, st.g,
                                  PoincareMode::ZeroTraceZeroMean, &info1);
    double C2 = poincare_constant(st.basis, st.t, st.g, PoincareMode::Complement,
                                  &info2);

    double lam1 = reference(rem1);
    double lam2 = reference(st.basis.columns);
    CHECK(C1 == doctest::Approx(1.0 / std::sqrt(lam1)).epsilon(1e-6));
    CHECK(C2 == doctest::Approx(1.0 / std::sqrt(lam2)).epsilon(1e-6));

    CHECK(std::abs(C1 - 2.075299) <= 1e-3);
    CHECK(std::abs(C2 - 2.038055) <= 1e-3);
    CHECK(C2 <= C1 * (1.0 + 1e-6));   // larger constraint set, smaller constant

    CHECK(info1.iterations >= 2);
    CHECK(info1.eigenvalue == doctest::Approx(1.0 / (C1 * C1)).epsilon(1e-12));
    CHECK(info2.iterations >= 2);
}

TEST_CASE("zero forcing minimizes to zero") {
    Setup st = make(400);
    Field zero{Support::OmegaDelta, Eigen::VectorXd::Zero(400)};
    NeumannSolution sol = minimize_neumann({st.g, st.t, zero}, st.basis);
    CHECK(sol.minimizer.values.cwiseAbs().maxCoeff() == 0.0);
    CHECK(sol.iterations == 0);
    CHECK(sol.energy == 0.0);
}

TEST_CASE("minimizer properties for a cosine load") {
    Setup st = make(400);
    NeumannProblem problem{st.g, st.t, cos_forcing(st.g)};
    NeumannSolution sol = minimize_neumann(problem, st.basis);

    CHECK(sol.el_residual <= 1e-8);
    double u_norm = std::sqrt(st.g.h) * sol.minimizer.values.norm();
    CHECK(sol.projection_norm <= 1e-8 * std::max(1.0, u_norm));
    CHECK(sol.energy < 0);   // the zero candidate is admissible

    for (std::size_t k = 1; k < sol.energy_trace.size(); ++k)
        CHECK(sol.energy_trace[k] <=
              sol.energy_trace[k - 1] + 1e-10 * (1.0 + std::abs(sol.energy_trace[k - 1])));

    // warm start from unrelated data lands on the same minimizer
    std::mt19937 gen(3);
    std::normal_distribution<double> nd;
    Eigen::VectorXd sv(400);
    for (int i = 0; i < 400; ++i) sv[i] = nd(gen);
    Field start{Support::OmegaDelta, sv};
    NeumannSolution warm = minimize_neumann(problem, st.basis, &start);
    CHECK((warm.minimizer.values - sol.minimizer.values).cwiseAbs().maxCoeff() <= 1e-8);

    // loads differing by a zero-gradient component give the same minimizer
    Field shifted{Support::OmegaDelta,
                  problem.forcing.values + 0.5 * st.basis.columns.col(20)};
    NeumannSolution other = minimize_neumann({st.g, st.t, shifted}, st.basis);
    CHECK((other.minimizer.values - sol.minimizer.values).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("reference two-point solver") {
    DomainGrid g = build_grid(-3, 3, 1, 600);
    const int n_om = static_cast<int>(g.omega.size());
    Eigen::VectorXd fv(n_om), ref(n_om);
    for (int m = 0; m < n_om; ++m) {
        double x = g.nodes[g.omega[m]];
        fv[m] = std::cos(M_PI * x / 3.0);
        ref[m] = 9.0 / (M_PI * M_PI) * std::cos(M_PI * x / 3.0);
    }
    double defect = -1;
    Field u = classical_neumann(g, {Support::Omega, fv}, &defect);
    CHECK(std::abs(defect) <= 1e-14);
    CHECK((u.values - ref).cwiseAbs().maxCoeff() <= 1e-4);

    Field c{Support::Omega, Eigen::VectorXd::Constant(n_om, 2.5)};
    Field uc = classical_neumann(g, c, &defect);
    CHECK(defect == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(uc.values.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("minimizers converge under refinement") {
    auto [x320, u320] = cos_minimizer_interior(320);
    auto [x640, u640] = cos_minimizer_interior(640);
    auto [x1280, u1280] = cos_minimizer_interior(1280);

    auto dist = [](const Eigen::VectorXd& xc, const Eigen::VectorXd& uc,
                   const Eigen::VectorXd& xf, const Eigen::VectorXd& uf) {
        double acc = 0;
        const double hf = xf[1] - xf[0];
        for (int m = 0; m < xf.size(); ++m) {
            double d = lagrange3(xc, uc, xf[m]) - uf[m];
            acc += d * d;
        }
        return std::sqrt(hf * acc);
    };
    double gap1 = dist(x320, u320, x640, u640);
    double gap2 = dist(x640, u640, x1280, u1280);
    CHECK(gap1 < 0.2);
    CHECK(gap2 < gap1);
    CHECK(gap2 <= 0.85 * gap1);
}

TEST_CASE("sharper concentration brings the minimizer to the local solution") {
    auto F = [](double x) { return std::cos(M_PI * x / 3.0); };
    auto rows = localization_sweep(-3, 3, 1, 0.5, F, {0.5, 0.99}, 640);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].s == 0.5);
    CHECK(rows[1].s == 0.99);
    CHECK(std::abs(rows[0].l2_error - 0.265564) <= 2e-3);
    CHECK(std::abs(rows[1].l2_error - 0.007457) <= 2e-3);
    CHECK(std::abs(rows[0].energy_gap - 0.167579) <= 2e-3);
    CHECK(std::abs(rows[1].energy_gap - 0.005037) <= 2e-3);
    CHECK(rows[0].el_residual <= 1e-8);
    CHECK(rows[1].el_residual <= 1e-8);
}

TEST_CASE("variational argument validation") {
    Setup st = make(400);
    Field wrong{Support::Omega, Eigen::VectorXd::Zero(support_size(st.g, Support::Omega))};
    CHECK_THROWS_AS(project_N(st.basis, wrong), std::invalid_argument);
    CHECK_THROWS_AS(apply_stiffness(st.t, st.g, wrong), std::invalid_argument);
    CHECK_THROWS_AS(minimize_neumann({st.g, st.t, wrong}, st.basis),
                    std::invalid_argument);
    Field bad_cl{Support::OmegaDelta, Eigen::VectorXd::Zero(400)};
    CHECK_THROWS_AS(classical_neumann(st.g, bad_cl), std::invalid_argument);
}
