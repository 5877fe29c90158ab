#include "doctest.h"

#include "nlgrad/domain.hpp"

#include <cmath>
#include <stdexcept>

using namespace nlgrad;

TEST_CASE("grid over (-3,3) with unit horizon and 800 cells") {
    DomainGrid g = build_grid(-3, 3, 1.0, 800);
    CHECK(g.h == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(g.n_cells == 800);
    CHECK(g.nodes.size() == 800);
    CHECK(g.omega.size() == 600);
    CHECK(g.gamma.size() == 200);
    CHECK(g.K == 100);
    CHECK(g.delta_snapped == doctest::Approx(1.0).epsilon(1e-14));

    // strictly increasing nodes, none on the boundary of (-3,3)
    for (int i = 1; i < g.n_cells; ++i) CHECK(g.nodes[i] > g.nodes[i - 1]);
    for (int i : g.omega) {
        CHECK(g.nodes[i] > -3.0);
        CHECK(g.nodes[i] < 3.0);
    }
    for (int i : g.gamma) CHECK((g.nodes[i] <= -3.0 || g.nodes[i] >= 3.0));

    // interior indices are one contiguous run
    CHECK(g.omega.front() == 100);
    CHECK(g.omega.back() == 699);
    for (std::size_t p = 1; p < g.omega.size(); ++p)
        CHECK(g.omega[p] == g.omega[p - 1] + 1);

    CHECK(g.omega_minus().size() == 400);
    CHECK(g.gamma_minus().size() == 200);
    CHECK(g.collar().size() == 400);
    CHECK(g.depth(0) == 0);
    CHECK(g.depth(599) == 0);
    CHECK(g.depth(300) == 299);
}

TEST_CASE("grid with a horizon that does not divide the spacing") {
    DomainGrid g = build_grid(0, 1, 0.25, 160);
    CHECK(g.h == doctest::Approx(1.5 / 160).epsilon(1e-14));
    CHECK(g.omega.size() + g.gamma.size() == 160);
    CHECK(g.K >= 4);
    // snapped horizon lands within half a cell of the requested one
    CHECK(std::abs(g.delta_snapped - 0.25) <= g.h / 2 + 1e-15);
}

TEST_CASE("grid rejects bad geometry") {
    CHECK_THROWS_AS(build_grid(1, 1, 0.1, 100), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(3, -3, 1.0, 100), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(-3, 3, 3.0, 100), std::invalid_argument);  // delta = (b-a)/2
    CHECK_THROWS_AS(build_grid(-3, 3, 5.0, 100), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(-3, 3, 0.0, 100), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(-3, 3, 1.0, 8), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(-3, 3, 1.0, 20), std::invalid_argument);  // delta/h < 4
}

TEST_CASE("support sizes, nodes, and integration") {
    DomainGrid g = build_grid(-3, 3, 1.0, 800);
    CHECK(support_size(g, Support::OmegaDelta) == 800);
    CHECK(support_size(g, Support::Omega) == 600);
    CHECK(support_size(g, Support::GammaDelta) == 200);
    CHECK(support_nodes(g, Support::Omega).size() == 600);
    CHECK(support_nodes(g, Support::GammaDelta)[0] == doctest::Approx(g.nodes[0]));

    Field ones{Support::OmegaDelta, Eigen::VectorXd::Ones(800)};
    CHECK(integrate(g, ones) == doctest::Approx(8.0).epsilon(1e-13));
    Field ones_om{Support::Omega, Eigen::VectorXd::Ones(600)};
    CHECK(integrate(g, ones_om) == doctest::Approx(6.0).epsilon(1e-13));
    Field ones_ga{Support::GammaDelta, Eigen::VectorXd::Ones(200)};
    CHECK(integrate(g, ones_ga) == doctest::Approx(2.0).epsilon(1e-13));

    Field bad{Support::Omega, Eigen::VectorXd::Ones(599)};
    CHECK_THROWS_AS(check_field(g, bad), std::invalid_argument);
}
