#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nlgrad/domain.hpp"
#include "nlgrad/errors.hpp"
#include "nlgrad/kernels.hpp"
#include "nlgrad/operators.hpp"
#include "nlgrad/selftest.hpp"
#include "nlgrad/variational.hpp"
#include "nlgrad/zero_grad.hpp"

#include <optional>

namespace py = pybind11;
using namespace nlgrad;

PYBIND11_MODULE(_core, m) {
    m.doc() = "finite-horizon fractional gradients, zero-gradient spaces, and "
              "nonlocal Neumann problems on one-dimensional grids";

    py::register_exception<ToleranceError>(m, "ToleranceError");

    py::enum_<Support>(m, "Support")
        .value("OmegaDelta", Support::OmegaDelta)
        .value("Omega", Support::Omega)
        .value("GammaDelta", Support::GammaDelta);

    py::class_<Field>(m, "Field")
        .def(py::init([](Support s, Eigen::VectorXd v) {
                 return Field{s, std::move(v)};
             }),
             py::arg("support"), py::arg("values"))
        .def_readwrite("support", &Field::support)
        .def_readwrite("values", &Field::values);

    py::class_<DomainGrid>(m, "DomainGrid")
        .def_readonly("a", &DomainGrid::a)
        .def_readonly("b", &DomainGrid::b)
        .def_readonly("delta", &DomainGrid::delta)
        .def_readonly("delta_snapped", &DomainGrid::delta_snapped)
        .def_readonly("n_cells", &DomainGrid::n_cells)
        .def_readonly("K", &DomainGrid::K)
        .def_readonly("h", &DomainGrid::h)
        .def_readonly("nodes", &DomainGrid::nodes)
        .def_readonly("omega", &DomainGrid::omega)
        .def_readonly("gamma", &DomainGrid::gamma)
        .def("depth", &DomainGrid::depth, py::arg("omega_pos"))
        .def("omega_minus", &DomainGrid::omega_minus)
        .def("gamma_minus", &DomainGrid::gamma_minus)
        .def("collar", &DomainGrid::collar);

    m.def("build_grid", &build_grid, py::arg("a"), py::arg("b"), py::arg("delta"),
          py::arg("n_cells"));
    m.def("support_size", &support_size, py::arg("grid"), py::arg("support"));
    m.def("support_nodes", &support_nodes, py::arg("grid"), py::arg("support"));
    m.def("integrate", &integrate, py::arg("grid"), py::arg("field"));

    py::class_<CutoffProfile>(m, "CutoffProfile")
        .def(py::init([](double delta, double mu) {
                 return CutoffProfile{delta, mu};
             }),
             py::arg("delta") = 1.0, py::arg("mu") = 0.5)
        .def_readwrite("delta", &CutoffProfile::delta)
        .def_readwrite("mu", &CutoffProfile::mu);

    m.def("eval_cutoff", &eval_cutoff, py::arg("profile"), py::arg("r"));
    m.def("normalization_constant", &normalization_constant, py::arg("profile"),
          py::arg("s"));
    m.def("eval_Q", &eval_Q, py::arg("profile"), py::arg("s"), py::arg("c_norm"),
          py::arg("x"));

    py::class_<KernelTable>(m, "KernelTable")
        .def_readonly("s", &KernelTable::s)
        .def_readonly("profile", &KernelTable::profile)
        .def_readonly("c_norm", &KernelTable::c_norm)
        .def_readonly("grid_h", &KernelTable::grid_h)
        .def_readonly("K", &KernelTable::K)
        .def_readonly("q_weights", &KernelTable::q_weights)
        .def_readonly("d_weights", &KernelTable::d_weights);

    m.def("build_kernel_table", &build_kernel_table, py::arg("profile"),
          py::arg("s"), py::arg("grid_h"));

    m.def("convolve_Q", &convolve_Q, py::arg("table"), py::arg("grid"), py::arg("u"));
    m.def("nonlocal_gradient", &nonlocal_gradient, py::arg("table"), py::arg("grid"),
          py::arg("u"));
    m.def("nonlocal_divergence", &nonlocal_divergence, py::arg("table"),
          py::arg("grid"), py::arg("psi"));
    m.def("nonlocal_boundary_operator", &nonlocal_boundary_operator,
          py::arg("table"), py::arg("grid"), py::arg("phi"));

    py::class_<TorusTransform>(m, "TorusTransform")
        .def_readonly("length", &TorusTransform::length)
        .def_readonly("n_modes", &TorusTransform::n_modes)
        .def_readonly("grid_h", &TorusTransform::grid_h)
        .def_readonly("min_real_q_hat", &TorusTransform::min_real_q_hat);

    m.def("build_torus", &build_torus, py::arg("table"), py::arg("length"),
          py::arg("n_modes"));
    m.def("torus_convolve", &torus_convolve, py::arg("torus"), py::arg("v"));
    m.def("apply_P", &apply_P, py::arg("torus"), py::arg("v"));
    m.def("torus_offset", &torus_offset, py::arg("torus"), py::arg("grid"));
    m.def("pick_torus_modes", &pick_torus_modes, py::arg("grid"));
    m.def("extend_modulo_N", &extend_modulo_N, py::arg("table"), py::arg("grid"),
          py::arg("torus"), py::arg("u"));

    py::class_<BoundaryData>(m, "BoundaryData")
        .def(py::init([](double c, Field g) {
                 return BoundaryData{c, std::move(g)};
             }),
             py::arg("c"), py::arg("g"))
        .def_readwrite("c", &BoundaryData::c)
        .def_readwrite("g", &BoundaryData::g);

    py::enum_<SolveMethod>(m, "SolveMethod")
        .value("Auto", SolveMethod::Auto)
        .value("DenseLU", SolveMethod::DenseLU)
        .value("Iterative", SolveMethod::Iterative);

    m.def(
        "solve_C",
        [](const KernelTable& t, const DomainGrid& g, const BoundaryData& data,
           SolveMethod method) {
            double residual = 0;
            Field h = solve_C(t, g, data, &residual, method);
            return py::make_tuple(h, residual);
        },
        py::arg("table"), py::arg("grid"), py::arg("data"),
        py::arg("method") = SolveMethod::Auto,
        "returns (solution field, max-norm interior residual)");

    py::class_<NBasis>(m, "NBasis")
        .def_readonly("grid", &NBasis::grid)
        .def_readonly("s", &NBasis::s)
        .def_readonly("columns", &NBasis::columns);

    m.def("build_n_basis", &build_n_basis, py::arg("table"), py::arg("grid"));
    m.def("phi_map", &phi_map, py::arg("table"), py::arg("grid"), py::arg("h"));
    m.def("psi_map", &psi_map, py::arg("grid"), py::arg("h"));
    m.def("smooth_n_member", &smooth_n_member, py::arg("torus"), py::arg("v"),
          py::arg("grid"));
    m.def("uniqueness_check", &uniqueness_check, py::arg("table"), py::arg("grid"));

    m.def("project_N", &project_N, py::arg("basis"), py::arg("u"));
    m.def("apply_stiffness", &apply_stiffness, py::arg("table"), py::arg("grid"),
          py::arg("u"));

    py::enum_<PoincareMode>(m, "PoincareMode")
        .value("ZeroTraceZeroMean", PoincareMode::ZeroTraceZeroMean)
        .value("Complement", PoincareMode::Complement);

    py::class_<EigenIterationInfo>(m, "EigenIterationInfo")
        .def_readonly("iterations", &EigenIterationInfo::iterations)
        .def_readonly("eigenvalue", &EigenIterationInfo::eigenvalue);

    m.def(
        "poincare_constant",
        [](const NBasis& basis, const KernelTable& t, const DomainGrid& g,
           PoincareMode mode, unsigned seed) {
            EigenIterationInfo info;
            double c = poincare_constant(basis, t, g, mode, &info, seed);
            return py::make_tuple(c, info);
        },
        py::arg("basis"), py::arg("table"), py::arg("grid"), py::arg("mode"),
        py::arg("seed") = 42u, "returns (constant, iteration info)");

    py::class_<NeumannProblem>(m, "NeumannProblem")
        .def(py::init([](DomainGrid grid, KernelTable table, Field forcing) {
                 return NeumannProblem{std::move(grid), std::move(table),
                                       std::move(forcing)};
             }),
             py::arg("grid"), py::arg("table"), py::arg("forcing"))
        .def_readwrite("grid", &NeumannProblem::grid)
        .def_readwrite("table", &NeumannProblem::table)
        .def_readwrite("forcing", &NeumannProblem::forcing);

    py::class_<NeumannSolution>(m, "NeumannSolution")
        .def_readonly("minimizer", &NeumannSolution::minimizer)
        .def_readonly("energy", &NeumannSolution::energy)
        .def_readonly("el_residual", &NeumannSolution::el_residual)
        .def_readonly("projection_norm", &NeumannSolution::projection_norm)
        .def_readonly("iterations", &NeumannSolution::iterations)
        .def_readonly("energy_trace", &NeumannSolution::energy_trace);

    m.def(
        "minimize_neumann",
        [](const NeumannProblem& problem, const NBasis& basis,
           std::optional<Field> start) {
            return minimize_neumann(problem, basis, start ? &*start : nullptr);
        },
        py::arg("problem"), py::arg("basis"), py::arg("start") = py::none());

    m.def(
        "classical_neumann",
        [](const DomainGrid& g, const Field& F) {
            double defect = 0;
            Field u = classical_neumann(g, F, &defect);
            return py::make_tuple(u, defect);
        },
        py::arg("grid"), py::arg("forcing"),
        "returns (solution field, removed forcing mean)");

    py::class_<LocalizationRow>(m, "LocalizationRow")
        .def_readonly("s", &LocalizationRow::s)
        .def_readonly("l2_error", &LocalizationRow::l2_error)
        .def_readonly("energy_gap", &LocalizationRow::energy_gap)
        .def_readonly("el_residual", &LocalizationRow::el_residual);

    m.def("localization_sweep", &localization_sweep, py::arg("a"), py::arg("b"),
          py::arg("delta"), py::arg("mu"), py::arg("F"), py::arg("s_list"),
          py::arg("n_cells"));

    py::class_<CriterionResult>(m, "CriterionResult")
        .def_readonly("id", &CriterionResult::id)
        .def_readonly("pass_", &CriterionResult::pass)
        .def_readonly("detail", &CriterionResult::detail);

    m.attr("CRITERION_COUNT") = kCriterionCount;
    m.def("run_criterion", &run_criterion, py::arg("id"), py::arg("scratch_dir"));
    m.def("format_criterion_line", &format_criterion_line, py::arg("result"));
    m.def("write_selftest_artifacts", &write_selftest_artifacts, py::arg("dir"));
}
