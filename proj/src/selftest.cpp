#include "nlgrad/selftest.hpp"

#include "nlgrad/csv.hpp"
#include "nlgrad/domain.hpp"
#include "nlgrad/kernels.hpp"
#include "nlgrad/operators.hpp"
#include "nlgrad/variational.hpp"
#include "nlgrad/zero_grad.hpp"

#include <Eigen/SVD>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nlgrad {

namespace {

namespace fs = std::filesystem;

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list args;
    va_start(args, pattern);
    std::vsnprintf(buf, sizeof buf, pattern, args);
    va_end(args);
    return buf;
}

Field window_field(const DomainGrid& g, double (*f)(double)) {
    Eigen::VectorXd v(g.n_cells);
    for (int i = 0; i < g.n_cells; ++i) v[i] = f(g.nodes[i]);
    return {Support::OmegaDelta, v};
}

Field gamma_const(const DomainGrid& g, double value) {
    return {Support::GammaDelta,
            Eigen::VectorXd::Constant(static_cast<Eigen::Index>(g.gamma.size()), value)};
}

double bump(double y) { return std::abs(y) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - y * y)) : 0.0; }

// Worst-case gap between the gradient and the centered difference of the
// convolution for u = exp(-x^2); shrinks under refinement.
double translation_gap(int n_cells) {
    DomainGrid g = build_grid(-3, 3, 1.0, n_cells);
    KernelTable t = build_kernel_table({1.0, 0.5}, 0.5, g.h);
    Field u = window_field(g, +[](double x) { return std::exp(-x * x); });
    Field cv = convolve_Q(t, g, u);
    Field du = nonlocal_gradient(t, g, u);
    double gap = 0;
    for (Eigen::Index m = 1; m + 1 < cv.values.size(); ++m) {
        double fd = (cv.values[m + 1] - cv.values[m - 1]) / (2 * g.h);
        gap = std::max(gap, std::abs(du.values[m] - fd));
    }
    return gap;
}

CriterionResult kernel_mass(int id) {
    const CutoffProfile p{1.0, 0.5};
    boost::math::quadrature::tanh_sinh<double> integ;
    double worst = 0;
    for (double s : {0.3, 0.5, 0.7, 0.9}) {
        double c = normalization_constant(p, s);
        double mass =
            2.0 * integ.integrate([&](double x) { return eval_Q(p, s, c, x); }, 0.0, p.delta);
        worst = std::max(worst, std::abs(mass - 1.0));
    }
    return {id, worst <= 1e-8, fmt("worst |int Q - 1| = %.3e over s in {0.3,0.5,0.7,0.9}", worst)};
}

CriterionResult linear_gradient(int id) {
    DomainGrid g = build_grid(-3, 3, 1.0, 2000);
    KernelTable t = build_kernel_table({1.0, 0.5}, 0.5, g.h);
    Field u = window_field(g, +[](double x) { return 2 * x; });
    Field du = nonlocal_gradient(t, g, u);
    double worst = (du.values.array() - 2.0).abs().maxCoeff();
    return {id, worst <= 1e-3, fmt("max |D(2x) - 2| = %.3e at n=2000", worst)};
}

CriterionResult translation_identity(int id) {
    double coarse = translation_gap(1000);
    double fine = translation_gap(2000);
    double ratio = coarse / fine;
    return {id, ratio >= 1.5,
            fmt("gap %.3e (n=1000) -> %.3e (n=2000), ratio %.2f", coarse, fine, ratio)};
}

CriterionResult inverse_identity(int id) {
    const std::size_t n = 2048;
    const double length = 16.0, h = length / static_cast<double>(n);
    KernelTable t = build_kernel_table({1.0, 0.5}, 0.5, h);
    TorusTransform tt = build_torus(t, length, n);
    std::vector<double> v(n);
    for (std::size_t j = 0; j < n; ++j) {
        double x = -length / 2 + (static_cast<double>(j) + 0.5) * h;
        v[j] = std::exp(-x * x) * std::cos(x);
    }
    std::vector<double> w = torus_convolve(tt, v);
    std::vector<double> r = apply_P(tt, w);
    double num = 0, den = 0;
    for (std::size_t j = 0; j < n; ++j) {
        num += (r[j] - v[j]) * (r[j] - v[j]);
        den += v[j] * v[j];
    }
    double rel = std::sqrt(num / den);
    return {id, rel <= 1e-8,
            fmt("relative l2 roundtrip gap %.3e, min Re symbol %.3f", rel, tt.min_real_q_hat)};
}

CriterionResult figure2(int id) {
    DomainGrid g = build_grid(-3, 3, 1.0, 2000);
    KernelTable t = build_kernel_table({1.0, 0.5}, 0.5, g.h);
    double resid = 0;
    Field u = solve_C(t, g, {0.0, gamma_const(g, -1.0)}, &resid);
    double mean = 0;
    for (int i : g.omega) mean += u.values[i];
    mean /= static_cast<double>(g.omega.size());
    int lo = g.omega.front(), hi = g.omega.back();
    double jump_l = std::abs(u.values[lo] - u.values[lo - 1]);
    double jump_r = std::abs(u.values[hi + 1] - u.values[hi]);
    // Sign changes of the mean-free field across the whole window; the two
    // boundary jumps cross the interior mean and count.
    int changes = 0;
    auto sgn = [](double v) { return (v > 0) - (v < 0); };
    for (int i = 0; i + 1 < g.n_cells; ++i) {
        int a = sgn(u.values[i] - mean), b = sgn(u.values[i + 1] - mean);
        if (a * b < 0) ++changes;
    }
    bool pass = resid <= 1e-8 && jump_l >= 0.1 && jump_r >= 0.1 && changes >= 3;
    return {id, pass,
            fmt("residual %.3e, jumps %.2f/%.2f, %d sign changes about the interior mean",
                resid, jump_l, jump_r, changes)};
}

CriterionResult figure3_member(int id) {
    DomainGrid g = build_grid(-3, 3, 1.0, 2000);
    KernelTable t = build_kernel_table({1.0, 0.5}, 0.5, g.h);
    std::size_t n = pick_torus_modes(g);
    TorusTransform tt = build_torus(t, static_cast<double>(n) * g.h, n);
    std::size_t j0 = torus_offset(tt, g);
    std::vector<double> v(n);
    for (std::size_t j = 0; j < n; ++j) {
        double x = g.nodes[0] + (static_cast<double>(j) - static_cast<double>(j0)) * g.h;
        v[j] = 1.0 + 5.0 * bump(x + 4.0) - 2.0 * bump(x - 4.0);
    }
    Field u = smooth_n_member(tt, v, g);
    Field du = nonlocal_gradient(t, g, u);
    double dmax = du.values.cwiseAbs().maxCoeff();
    double lo = u.values[g.gamma.front()], hi = lo;
    for (int i : g.gamma) {
        lo = std::min(lo, u.values[i]);
        hi = std::max(hi, u.values[i]);
    }
    bool pass = dmax <= 1e-4 && (hi - lo) > 0.5;
    return {id, pass, fmt("max |D| = %.3e on the interior, collar range %.3f", dmax, hi - lo)};
}

CriterionResult basis_characterization(int id) {
    DomainGrid g = build_grid(-3, 3, 1.0, 800);
    KernelTable t = build_kernel_table({1.0, 0.5}, 0.5, g.h);
    NBasis basis = build_n_basis(t, g);
    int dim = static_cast<int>(basis.columns.cols());
    int expected = 1 + static_cast<int>(g.gamma.size());
    Eigen::MatrixXd images(expected, dim);
    for (int j = 0; j < dim; ++j) {
        Field col{Support::OmegaDelta, basis.columns.col(j)};
        auto [m, trace] = psi_map(g, col);
        images(0, j) = m;
        images.block(1, j, trace.values.size(), 1) = trace.values;
    }
    double sigma_min =
        Eigen::BDCSVD<Eigen::MatrixXd>(images).singularValues().minCoeff();
    bool pass = dim == expected && sigma_min > 1e-10;
    return {id, pass,
            fmt("dimension %d (expected %d), smallest singular value of the images %.3e",
                dim, expected, sigma_min)};
}

CriterionResult superposition(int id) {
    DomainGrid g = build_grid(-3, 3, 1.0, 2000);
    KernelTable t = build_kernel_table({1.0, 0.5}, 0.5, g.h);
    Field u1 = solve_C(t, g, {1.0, gamma_const(g, 0.0)});
    Field u2 = solve_C(t, g, {0.0, gamma_const(g, -1.0)});
    Field u3 = solve_C(t, g, {0.7, gamma_const(g, -1.0)});
    double lin = (u3.values - 0.7 * u1.values - u2.values).cwiseAbs().maxCoeff();
    double worst_d = 0;
    for (const Field* u : {&u1, &u2, &u3}) {
        Field du = nonlocal_gradient(t, g, *u);
        worst_d = std::max(worst_d, du.values.cwiseAbs().maxCoeff());
    }
    // Membership holds across the order range, not just at s = 1/2.
    for (double s : {0.3, 0.9}) {
        KernelTable ts = build_kernel_table({1.0, 0.5}, s, g.h);
        Field us = solve_C(ts, g, {1.0, gamma_const(g, 0.0)});
        Field du = nonlocal_gradient(ts, g, us);
        worst_d = std::max(worst_d, du.values.cwiseAbs().maxCoeff());
    }
    bool pass = lin <= 1e-9 && worst_d <= 1e-6;
    return {id, pass, fmt("superposition gap %.3e, worst max |D| over solves %.3e", lin, worst_d)};
}

CriterionResult poincare_stability(int id) {
    double c1[2], c2[2];
    int k = 0;
    for (int n : {400, 800}) {
        DomainGrid g = build_grid(-3, 3, 1.0, n);
        KernelTable t = build_kernel_table({1.0, 0.5}, 0.5, g.h);
        NBasis basis = build_n_basis(t, g);
        c1[k] = poincare_constant(basis, t, g, PoincareMode::ZeroTraceZeroMean);
        c2[k] = poincare_constant(basis, t, g, PoincareMode::Complement);
        ++k;
    }
    bool finite = std::isfinite(c1[0]) && std::isfinite(c1[1]) && std::isfinite(c2[0]) &&
                  std::isfinite(c2[1]) && c1[0] > 0 && c1[1] > 0 && c2[0] > 0 && c2[1] > 0;
    double drift1 = std::abs(c1[0] - c1[1]) / c1[1];
    double drift2 = std::abs(c2[0] - c2[1]) / c2[1];
    bool ordered = c2[0] <= c1[0] * (1 + 1e-6) && c2[1] <= c1[1] * (1 + 1e-6);
    bool pass = finite && drift1 <= 0.05 && drift2 <= 0.05 && ordered;
    return {id, pass,
            fmt("zero-trace %.6f -> %.6f, complement %.6f -> %.6f (drift %.2f%%/%.2f%%)",
                c1[0], c1[1], c2[0], c2[1], 100 * drift1, 100 * drift2)};
}

CriterionResult neumann_wellposed(int id) {
    DomainGrid g = build_grid(-3, 3, 1.0, 1200);
    KernelTable t = build_kernel_table({1.0, 0.5}, 0.5, g.h);
    NBasis basis = build_n_basis(t, g);
    Eigen::VectorXd fv = Eigen::VectorXd::Zero(g.n_cells);
    for (int i : g.omega) fv[i] = std::cos(M_PI * g.nodes[i] / 3.0);
    Field forcing{Support::OmegaDelta, fv};
    Field proj = project_N(basis, forcing);
    Field projected{Support::OmegaDelta, forcing.values - proj.values};
    NeumannSolution sol = minimize_neumann({g, t, projected}, basis);
    Eigen::VectorXd res =
        apply_stiffness(t, g, sol.minimizer).values - g.h * projected.values;
    double el_full = res.cwiseAbs().maxCoeff();
    bool pass = sol.projection_norm <= 1e-8 && el_full <= 1e-8;
    return {id, pass,
            fmt("projection norm %.3e, full-space stationarity gap %.3e, %d cg iterations",
                sol.projection_norm, el_full, sol.iterations)};
}

CriterionResult localization(int id) {
    std::vector<LocalizationRow> rows = localization_sweep(
        -3, 3, 1.0, 0.5, [](double x) { return std::cos(M_PI * x / 3.0); },
        {0.5, 0.7, 0.9, 0.99}, 1200);
    bool decreasing = true;
    for (std::size_t i = 1; i < rows.size(); ++i)
        decreasing = decreasing && rows[i].l2_error < rows[i - 1].l2_error;
    double ratio = rows.back().l2_error / rows.front().l2_error;
    bool pass = decreasing && ratio <= 0.25;
    std::ostringstream oss;
    oss << "l2 errors";
    for (const auto& r : rows) oss << fmt(" %.4f", r.l2_error);
    oss << fmt(", final/first %.1f%%", 100 * ratio);
    return {id, pass, oss.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CriterionResult determinism(int id, const std::string& scratch_dir) {
    if (scratch_dir.empty())
        throw std::invalid_argument("determinism check needs a scratch directory");
    fs::path base(scratch_dir);
    fs::path run1 = base / "run1", run2 = base / "run2";
    write_selftest_artifacts(run1.string());
    write_selftest_artifacts(run2.string());
    const char* names[] = {"kernel_half.csv", "fig2_n400.csv", "sweep_n400.csv",
                           "poincare_n400.csv"};
    for (const char* name : names) {
        if (slurp(run1 / name) != slurp(run2 / name))
            return {id, false, fmt("artifact %s differs between runs", name)};
    }
    return {id, true, "4 artifact files byte-identical across two runs"};
}

} // namespace

void write_selftest_artifacts(const std::string& dir) {
    fs::create_directories(dir);
    fs::path base(dir);

    DomainGrid g = build_grid(-3, 3, 1.0, 400);
    KernelTable t = build_kernel_table({1.0, 0.5}, 0.5, g.h);

    Eigen::Index nw = 2 * t.K + 1;
    Eigen::VectorXd x(nw), q(nw), wb(nw), d(nw);
    for (int k = -t.K; k <= t.K; ++k) {
        Eigen::Index i = t.K + k;
        x[i] = k * t.grid_h;
        q[i] = t.q_weights[static_cast<std::size_t>(i)];
        wb[i] = eval_cutoff(t.profile, std::abs(x[i]));
        d[i] = t.d_weights[static_cast<std::size_t>(i)];
    }
    write_table_csv((base / "kernel_half.csv").string(), {"x", "Q", "wbar", "d"},
                    {x, q, wb, d});

    Field u = solve_C(t, g, {0.0, gamma_const(g, -1.0)});
    write_field_csv((base / "fig2_n400.csv").string(), g.nodes, u.values);

    std::vector<LocalizationRow> rows = localization_sweep(
        -3, 3, 1.0, 0.5, [](double xx) { return std::cos(M_PI * xx / 3.0); }, {0.5, 0.9},
        400);
    write_sweep_csv((base / "sweep_n400.csv").string(), rows);

    NBasis basis = build_n_basis(t, g);
    Eigen::VectorXd modes(2), constants(2);
    modes << 1, 2;
    constants << poincare_constant(basis, t, g, PoincareMode::ZeroTraceZeroMean),
        poincare_constant(basis, t, g, PoincareMode::Complement);
    write_table_csv((base / "poincare_n400.csv").string(), {"mode", "constant"},
                    {modes, constants});
}

CriterionResult run_criterion(int id, const std::string& scratch_dir) {
    try {
        switch (id) {
            case 1: return kernel_mass(id);
            case 2: return linear_gradient(id);
            case 3: return translation_identity(id);
            case 4: return inverse_identity(id);
            case 5: return figure2(id);
            case 6: return figure3_member(id);
            case 7: return basis_characterization(id);
            case 8: return superposition(id);
            case 9: return poincare_stability(id);
            case 10: return neumann_wellposed(id);
            case 11: return localization(id);
            case 12: return determinism(id, scratch_dir);
            default: throw std::invalid_argument(fmt("no criterion %d", id));
        }
    } catch (const std::exception& e) {
        return {id, false, fmt("exception: %s", e.what())};
    }
}

std::string format_criterion_line(const CriterionResult& r) {
    return fmt("criterion %02d %s (%s)", r.id, r.pass ? "PASS" : "FAIL", r.detail.c_str());
}

} // namespace nlgrad
