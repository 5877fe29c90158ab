#include "doctest.h"

#include "nlgrad/domain.hpp"
#include "nlgrad/kernels.hpp"
#include "nlgrad/operators.hpp"
#include "nlgrad/zero_grad.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace nlgrad;

namespace {

struct Setup {
    DomainGrid g;
    KernelTable t;
};

Setup make(int n, double s = 0.5) {
    Setup st;
    st.g = build_grid(-3, 3, 1, n);
    st.t = build_kernel_table({1.0, 0.5}, s, st.g.h);
    return st;
}

Field collar_const(const DomainGrid& g, double v) {
    return {Support::GammaDelta,
            Eigen::VectorXd::Constant(static_cast<int>(g.gamma.size()), v)};
}

} // namespace

TEST_CASE("unit data reproduces the constant one") {
    auto [g, t] = make(600);
    double res = -1;
    Field h = solve_C(t, g, {1.0, collar_const(g, 1.0)}, &res);
    CHECK(res >= 0);
    CHECK(res <= 1e-8);
    CHECK((h.values.array() - 1.0).abs().maxCoeff() <= 1e-10);
}

TEST_CASE("zero data gives the zero solution") {
    auto [g, t] = make(600);
    Field h = solve_C(t, g, {0.0, collar_const(g, 0.0)});
    CHECK(h.values.cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("solutions superpose") {
    auto [g, t] = make(600);
    Field u1 = solve_C(t, g, {1.0, collar_const(g, 0.0)});
    Field u2 = solve_C(t, g, {0.0, collar_const(g, -1.0)});
    Field u3 = solve_C(t, g, {0.7, collar_const(g, -1.0)});
    Eigen::VectorXd combo = 0.7 * u1.values + u2.values;
    CHECK((u3.values - combo).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("iterative and dense interior solves agree") {
    auto [g, t] = make(4200);   // above the dense cutoff, Auto goes iterative
    BoundaryData data{0.0, collar_const(g, -1.0)};
    Field it = solve_C(t, g, data);
    Field lu = solve_C(t, g, data, nullptr, SolveMethod::DenseLU);
    CHECK((it.values - lu.values).cwiseAbs().maxCoeff() <= 1e-7);
}

TEST_CASE("basis has one column per collar node plus the unit solve") {
    auto [g, t] = make(600);
    NBasis basis = build_n_basis(t, g);
    CHECK(basis.columns.rows() == 600);
    CHECK(basis.columns.cols() == 1 + static_cast<int>(g.gamma.size()));
    CHECK(basis.columns.cols() == 151);
}

TEST_CASE("solutions have vanishing nonlocal gradient") {
    auto [g, t] = make(2000);
    Field h10 = solve_C(t, g, {1.0, collar_const(g, 0.0)});
    CHECK(nonlocal_gradient(t, g, h10).values.cwiseAbs().maxCoeff() <= 1e-6);

    Eigen::VectorXd spike = Eigen::VectorXd::Zero(static_cast<int>(g.gamma.size()));
    spike[127] = 1.0;
    Field hs = solve_C(t, g, {0.0, {Support::GammaDelta, spike}});
    CHECK(nonlocal_gradient(t, g, hs).values.cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("the pairing map reads back constant and trace") {
    auto [g, t] = make(600);
    Field h10 = solve_C(t, g, {1.0, collar_const(g, 0.0)});
    auto [c1, tr1] = phi_map(t, g, h10);
    CHECK(c1 == doctest::Approx(6.0).epsilon(1e-6));   // length of the interior
    CHECK(tr1.values.cwiseAbs().maxCoeff() <= 1e-12);

    Eigen::VectorXd spike = Eigen::VectorXd::Zero(static_cast<int>(g.gamma.size()));
    spike[40] = 1.0;
    Field hs = solve_C(t, g, {0.0, {Support::GammaDelta, spike}});
    auto [c2, tr2] = phi_map(t, g, hs);
    CHECK(std::abs(c2) <= 1e-6);
    CHECK((tr2.values - spike).cwiseAbs().maxCoeff() <= 1e-12);

    auto [m, tr3] = psi_map(g, hs);
    CHECK(std::isfinite(m));
    CHECK((tr3.values - spike).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("unit solve has robustly nonzero interior mass") {
    auto [g, t] = make(600);
    double m = uniqueness_check(t, g);
    CHECK(m > 1e-8);
    CHECK(m == doctest::Approx(6.185825).epsilon(0.05 / 6.185825));
}

TEST_CASE("smooth torus members and their validation") {
    DomainGrid g = build_grid(-3, 3, 1, 400);
    KernelTable t = build_kernel_table({1.0, 0.5}, 0.5, g.h);
    std::size_t N = pick_torus_modes(g);
    TorusTransform tt = build_torus(t, static_cast<double>(N) * g.h, N);
    std::size_t j0 = torus_offset(tt, g);

    auto bump = [](double y) {
        return std::abs(y) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - y * y)) : 0.0;
    };
    double x0 = g.nodes[0] - static_cast<double>(j0) * g.h;
    std::vector<double> v(N);
    for (std::size_t j = 0; j < N; ++j) {
        double x = x0 + static_cast<double>(j) * g.h;
        v[j] = 2.0 + 3.0 * bump((x - 5.0) / 0.8);   // varies only beyond the window
    }
    Field member = smooth_n_member(tt, v, g);
    CHECK(member.support == Support::OmegaDelta);
    CHECK(nonlocal_gradient(t, g, member).values.cwiseAbs().maxCoeff() <= 1e-3);

    std::vector<double> bad(N);
    for (std::size_t j = 0; j < N; ++j)
        bad[j] = x0 + static_cast<double>(j) * g.h;   // linear across the interior
    CHECK_THROWS_AS(smooth_n_member(tt, bad, g), std::invalid_argument);
}

TEST_CASE("boundary data must live on the collar") {
    auto [g, t] = make(400);
    Field wrong{Support::Omega, Eigen::VectorXd::Zero(support_size(g, Support::Omega))};
    CHECK_THROWS_AS(solve_C(t, g, {0.0, wrong}), std::invalid_argument);
}
