#include "CLI11.hpp"

#include "nlgrad/csv.hpp"
#include "nlgrad/domain.hpp"
#include "nlgrad/errors.hpp"
#include "nlgrad/kernels.hpp"
#include "nlgrad/operators.hpp"
#include "nlgrad/selftest.hpp"
#include "nlgrad/variational.hpp"
#include "nlgrad/zero_grad.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace nlgrad;

struct Geometry {
    std::vector<double> omega{-3.0, 3.0};
    double delta = 1.0;
    double mu = 0.5;
    int n_cells = 2000;
};

void add_geometry(CLI::App* cmd, Geometry& geo) {
    cmd->add_option("--omega", geo.omega, "interval endpoints a b")->expected(2);
    cmd->add_option("--delta", geo.delta, "interaction horizon");
    cmd->add_option("--mu", geo.mu, "cutoff plateau fraction of the horizon");
    cmd->add_option("--n-cells", geo.n_cells, "cells across the padded window");
}

DomainGrid make_grid(const Geometry& geo) {
    return build_grid(geo.omega[0], geo.omega[1], geo.delta, geo.n_cells);
}

double bump(double y) { return std::abs(y) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - y * y)) : 0.0; }

// Boundary data descriptors: const:<v>, linear, csv:<path> (value column,
// one row per collar node).
Eigen::VectorXd boundary_values(const std::string& spec, const DomainGrid& g) {
    const auto n = static_cast<Eigen::Index>(g.gamma.size());
    if (spec.rfind("const:", 0) == 0)
        return Eigen::VectorXd::Constant(n, std::stod(spec.substr(6)));
    if (spec == "linear") {
        Eigen::VectorXd v(n);
        for (Eigen::Index j = 0; j < n; ++j) v[j] = g.nodes[g.gamma[j]];
        return v;
    }
    if (spec.rfind("csv:", 0) == 0) {
        const std::string path = spec.substr(4);
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open boundary data file " + path);
        std::vector<double> vals;
        std::string line;
        bool first = true;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::istringstream ls(line);
            std::string xs, vs;
            if (!std::getline(ls, xs, ',') || !std::getline(ls, vs))
                throw std::invalid_argument("boundary data needs x,value rows: " + line);
            try {
                vals.push_back(std::stod(vs));
            } catch (...) {
                if (first) {
                    first = false;
                    continue;  // header row
                }
                throw std::invalid_argument("bad boundary value in row: " + line);
            }
            first = false;
        }
        if (static_cast<Eigen::Index>(vals.size()) != n)
            throw std::invalid_argument(
                "boundary data has " + std::to_string(vals.size()) + " rows, collar has " +
                std::to_string(n) + " nodes");
        Eigen::VectorXd v(n);
        for (Eigen::Index j = 0; j < n; ++j) v[j] = vals[static_cast<std::size_t>(j)];
        return v;
    }
    throw std::invalid_argument("boundary data must be const:<v>, linear, or csv:<path>");
}

std::function<double(double)> forcing_fn(const std::string& spec, double a, double b) {
    if (spec == "cos") {
        const double mid = (a + b) / 2, half = (b - a) / 2;
        return [mid, half](double x) { return std::cos(M_PI * (x - mid) / half); };
    }
    if (spec.rfind("const:", 0) == 0) {
        const double v = std::stod(spec.substr(6));
        return [v](double) { return v; };
    }
    throw std::invalid_argument("forcing must be cos or const:<value>");
}

void kernel_columns(const KernelTable& t, Eigen::VectorXd& x, Eigen::VectorXd& q,
                    Eigen::VectorXd& wb, Eigen::VectorXd& d) {
    const Eigen::Index nw = 2 * t.K + 1;
    x.resize(nw);
    q.resize(nw);
    wb.resize(nw);
    d.resize(nw);
    for (int k = -t.K; k <= t.K; ++k) {
        const Eigen::Index i = t.K + k;
        x[i] = k * t.grid_h;
        q[i] = t.q_weights[static_cast<std::size_t>(i)];
        wb[i] = eval_cutoff(t.profile, std::abs(x[i]));
        d[i] = t.d_weights[static_cast<std::size_t>(i)];
    }
}

void run_kernel(const Geometry& geo, double s, const std::string& out,
                const std::string& svg) {
    DomainGrid g = make_grid(geo);  // validates the geometry, fixes h
    KernelTable t = build_kernel_table({geo.delta, geo.mu}, s, g.h);
    Eigen::VectorXd x, q, wb, d;
    kernel_columns(t, x, q, wb, d);
    double mass = 0;
    for (double qv : t.q_weights) mass += qv;
    mass *= t.grid_h;
    std::printf("normalization c = %.12g, discrete kernel mass = %.17g, K = %d\n",
                t.c_norm, mass, t.K);
    write_table_csv(out, {"x", "Q", "wbar", "d"}, {x, q, wb, d});
    if (!svg.empty()) write_line_svg(svg, x, q);
}

void run_solve_c(const Geometry& geo, double s, double c, const std::string& gspec,
                 const std::string& out, const std::string& svg) {
    DomainGrid g = make_grid(geo);
    KernelTable t = build_kernel_table({geo.delta, geo.mu}, s, g.h);
    Field bd{Support::GammaDelta, boundary_values(gspec, g)};
    double resid = 0;
    Field u = solve_C(t, g, {c, bd}, &resid);
    double mean = 0;
    for (int i : g.omega) mean += u.values[i];
    mean /= static_cast<double>(g.omega.size());
    std::printf("solved %d cells, interior residual %.3e, interior mean %.9g\n",
                g.n_cells, resid, mean);
    write_field_csv(out, g.nodes, u.values);
    if (!svg.empty()) write_line_svg(svg, g.nodes, u.values);
}

void run_smooth_n(const Geometry& geo, double s, const std::string& out,
                  const std::string& svg) {
    DomainGrid g = make_grid(geo);
    KernelTable t = build_kernel_table({geo.delta, geo.mu}, s, g.h);
    const std::size_t n = pick_torus_modes(g);
    TorusTransform tt = build_torus(t, static_cast<double>(n) * g.h, n);
    const std::size_t j0 = torus_offset(tt, g);
    const double cl = geo.omega[0] - geo.delta, cr = geo.omega[1] + geo.delta;
    std::vector<double> v(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = g.nodes[0] + (static_cast<double>(j) - static_cast<double>(j0)) * g.h;
        v[j] = 1.0 + 5.0 * bump((x - cl) / geo.delta) - 2.0 * bump((x - cr) / geo.delta);
    }
    Field u = smooth_n_member(tt, v, g);
    Field du = nonlocal_gradient(t, g, u);
    double lo = u.values[g.gamma.front()], hi = lo;
    for (int i : g.gamma) {
        lo = std::min(lo, u.values[i]);
        hi = std::max(hi, u.values[i]);
    }
    std::printf("max |D| = %.3e on the interior, collar range %.6f\n",
                du.values.cwiseAbs().maxCoeff(), hi - lo);
    write_field_csv(out, g.nodes, u.values);
    if (!svg.empty()) write_line_svg(svg, g.nodes, u.values);
}

void run_neumann(const Geometry& geo, double s, const std::string& fspec,
                 const std::string& out) {
    auto F = forcing_fn(fspec, geo.omega[0], geo.omega[1]);
    auto rows = localization_sweep(geo.omega[0], geo.omega[1], geo.delta, geo.mu, F,
                                   {s}, geo.n_cells);
    const auto& r = rows.front();
    std::printf("s = %g: l2_error %.6f, energy_gap %.6f, el_residual %.3e\n", r.s,
                r.l2_error, r.energy_gap, r.el_residual);
    write_sweep_csv(out, rows);
}

void run_localize(const Geometry& geo, const std::vector<double>& s_list,
                  const std::string& fspec, const std::string& out,
                  const std::string& svg) {
    auto F = forcing_fn(fspec, geo.omega[0], geo.omega[1]);
    auto rows = localization_sweep(geo.omega[0], geo.omega[1], geo.delta, geo.mu, F,
                                   s_list, geo.n_cells);
    std::printf("swept %zu orders, l2_error %.6f -> %.6f\n", rows.size(),
                rows.front().l2_error, rows.back().l2_error);
    write_sweep_csv(out, rows);
    if (!svg.empty()) {
        if (rows.size() < 2)
            throw std::invalid_argument("--svg needs at least two sweep points");
        Eigen::VectorXd xs(rows.size()), ys(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            xs[static_cast<Eigen::Index>(i)] = rows[i].s;
            ys[static_cast<Eigen::Index>(i)] = rows[i].l2_error;
        }
        write_line_svg(svg, xs, ys);
    }
}

void run_poincare(const Geometry& geo, double s, const std::string& mode,
                  unsigned seed, const std::string& out) {
    if (mode != "1" && mode != "2" && mode != "both")
        throw std::invalid_argument("--mode must be 1, 2, or both");
    DomainGrid g = make_grid(geo);
    KernelTable t = build_kernel_table({geo.delta, geo.mu}, s, g.h);
    NBasis basis = build_n_basis(t, g);
    std::vector<double> modes, constants;
    if (mode != "2") {
        EigenIterationInfo info;
        double c = poincare_constant(basis, t, g, PoincareMode::ZeroTraceZeroMean,
                                     &info, seed);
        std::printf("mode 1 (zero trace, zero mean): C = %.9f, lambda_min = %.6e, "
                    "%d iterations\n",
                    c, info.eigenvalue, info.iterations);
        modes.push_back(1);
        constants.push_back(c);
    }
    if (mode != "1") {
        EigenIterationInfo info;
        double c = poincare_constant(basis, t, g, PoincareMode::Complement, &info, seed);
        std::printf("mode 2 (complement): C = %.9f, lambda_min = %.6e, %d iterations\n",
                    c, info.eigenvalue, info.iterations);
        modes.push_back(2);
        constants.push_back(c);
    }
    if (!out.empty()) {
        Eigen::VectorXd mv(modes.size()), cv(constants.size());
        for (std::size_t i = 0; i < modes.size(); ++i) {
            mv[static_cast<Eigen::Index>(i)] = modes[i];
            cv[static_cast<Eigen::Index>(i)] = constants[i];
        }
        write_table_csv(out, {"mode", "constant"}, {mv, cv});
    }
}

bool run_selftest(const std::string& out_dir, int only) {
    bool all = true;
    for (int id = 1; id <= kCriterionCount; ++id) {
        if (only != 0 && id != only) continue;
        CriterionResult r = run_criterion(id, out_dir);
        std::puts(format_criterion_line(r).c_str());
        all = all && r.pass;
    }
    return all;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-horizon fractional gradients: kernels, constant-convolution "
                 "solves, Neumann minimization, localization"};
    app.require_subcommand(1);

    Geometry geo_kernel, geo_solve, geo_smooth, geo_neumann, geo_localize, geo_poincare;
    double s_kernel = 0.5, s_solve = 0.5, s_smooth = 0.5, s_neumann = 0.5, s_poincare = 0.5;
    std::string out_kernel = "kernel.csv", out_solve = "solve_c.csv",
                out_smooth = "smooth_n.csv", out_neumann = "neumann.csv",
                out_localize = "localize.csv", out_poincare, svg_kernel, svg_solve,
                svg_smooth, svg_localize;
    double cval = 0.0;
    std::string gspec = "const:-1";
    std::string forcing_neumann = "cos", forcing_localize = "cos";
    std::vector<double> s_list{0.5, 0.7, 0.9, 0.99};
    std::string mode = "both";
    unsigned seed = 42;
    std::string selftest_dir = "selftest_artifacts";
    int selftest_only = 0;

    CLI::App* c_kernel = app.add_subcommand("kernel", "dump kernel profile and weights");
    add_geometry(c_kernel, geo_kernel);
    c_kernel->add_option("--s", s_kernel, "fractional order in (0,1)");
    c_kernel->add_option("--out", out_kernel, "csv path");
    c_kernel->add_option("--svg", svg_kernel, "optional svg line plot path");

    CLI::App* c_solve = app.add_subcommand(
        "solve-c", "solve the constant-convolution problem with collar data");
    add_geometry(c_solve, geo_solve);
    c_solve->add_option("--s", s_solve, "fractional order in (0,1)");
    c_solve->add_option("--c", cval, "interior convolution constant");
    c_solve->add_option("--g", gspec, "collar data: const:<v>, linear, or csv:<path>");
    c_solve->add_option("--out", out_solve, "csv path");
    c_solve->add_option("--svg", svg_solve, "optional svg line plot path");

    CLI::App* c_smooth = app.add_subcommand(
        "smooth-n", "spectral zero-gradient member from a two-bump smooth profile");
    add_geometry(c_smooth, geo_smooth);
    c_smooth->add_option("--s", s_smooth, "fractional order in (0,1)");
    c_smooth->add_option("--out", out_smooth, "csv path");
    c_smooth->add_option("--svg", svg_smooth, "optional svg line plot path");

    CLI::App* c_neumann =
        app.add_subcommand("neumann", "minimize the Neumann energy at a single order");
    add_geometry(c_neumann, geo_neumann);
    c_neumann->add_option("--s", s_neumann, "fractional order in (0,1)");
    c_neumann->add_option("--forcing", forcing_neumann, "cos or const:<value>");
    c_neumann->add_option("--out", out_neumann, "csv path");

    CLI::App* c_localize =
        app.add_subcommand("localize", "sweep orders toward the classical limit");
    add_geometry(c_localize, geo_localize);
    c_localize->add_option("--s-list", s_list, "comma-separated orders, swept in order")
        ->delimiter(',');
    c_localize->add_option("--forcing", forcing_localize, "cos or const:<value>");
    c_localize->add_option("--out", out_localize, "csv path");
    c_localize->add_option("--svg", svg_localize, "optional svg of error vs order");

    CLI::App* c_poincare =
        app.add_subcommand("poincare", "restricted-stiffness Poincare constants");
    add_geometry(c_poincare, geo_poincare);
    c_poincare->add_option("--s", s_poincare, "fractional order in (0,1)");
    c_poincare->add_option("--mode", mode, "1, 2, or both");
    c_poincare->add_option("--seed", seed, "eigen-iteration start vector seed");
    c_poincare->add_option("--out", out_poincare, "optional csv path");

    CLI::App* c_selftest =
        app.add_subcommand("selftest", "run the acceptance checks and print one line each");
    c_selftest->add_option("--out-dir", selftest_dir, "artifact directory");
    c_selftest->add_option("--criterion", selftest_only, "run a single check")
        ->check(CLI::Range(1, 12));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(c_kernel))
            run_kernel(geo_kernel, s_kernel, out_kernel, svg_kernel);
        else if (app.got_subcommand(c_solve))
            run_solve_c(geo_solve, s_solve, cval, gspec, out_solve, svg_solve);
        else if (app.got_subcommand(c_smooth))
            run_smooth_n(geo_smooth, s_smooth, out_smooth, svg_smooth);
        else if (app.got_subcommand(c_neumann))
            run_neumann(geo_neumann, s_neumann, forcing_neumann, out_neumann);
        else if (app.got_subcommand(c_localize))
            run_localize(geo_localize, s_list, forcing_localize, out_localize,
                         svg_localize);
        else if (app.got_subcommand(c_poincare))
            run_poincare(geo_poincare, s_poincare, mode, seed, out_poincare);
        else if (app.got_subcommand(c_selftest))
            return run_selftest(selftest_dir, selftest_only) ? 0 : 2;
        return 0;
    } catch (const nlgrad::ToleranceError& e) {
        std::fprintf(stderr, "tolerance failure: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
