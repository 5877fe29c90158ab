#pragma once
#include <Eigen/Dense>
#include <vector>

namespace nlgrad {

// Uniform cell-centered grid over the expanded interval (a-delta, b+delta).
// Nodes are cell midpoints, so none can land exactly on the boundary of
// (a,b); classification by strict inequalities is unambiguous.
//
// delta_snapped = K*h is the horizon the convolution stencils actually use;
// K = round(delta/h), clamped so every stencil centered at an Omega node
// stays inside the grid.
struct DomainGrid {
    double a = 0, b = 0;
    double delta = 0;          // requested horizon (defines the window)
    double delta_snapped = 0;  // K*h, what stencils use
    int n_cells = 0;
    int K = 0;                 // stencil half-width in cells
    double h = 0;
    Eigen::VectorXd nodes;     // size n_cells, strictly increasing
    std::vector<int> omega;    // indices with a < x < b, ascending
    std::vector<int> gamma;    // complement (two side collars), ascending

    // Derived sets. Depth of an Omega node = its offset from the nearest
    // end of the omega index range (0 for the two nodes hugging the
    // boundary).
    int depth(int omega_pos) const {
        int m = static_cast<int>(omega.size());
        return omega_pos < m - 1 - omega_pos ? omega_pos : m - 1 - omega_pos;
    }
    std::vector<int> omega_minus() const;  // depth >= K (distance > delta from boundary)
    std::vector<int> gamma_minus() const;  // omega with depth < K
    std::vector<int> collar() const;       // gamma plus gamma_minus, ascending
};

enum class Support { OmegaDelta, Omega, GammaDelta };

struct Field {
    Support support = Support::OmegaDelta;
    Eigen::VectorXd values;
};

DomainGrid build_grid(double a, double b, double delta, int n_cells);

// Node count backing a support tag.
int support_size(const DomainGrid& g, Support s);

// Node positions of a support (subset view of grid.nodes).
Eigen::VectorXd support_nodes(const DomainGrid& g, Support s);

void check_field(const DomainGrid& g, const Field& f);

// Midpoint rule: h * sum of values over the field's support.
double integrate(const DomainGrid& g, const Field& f);

} // namespace nlgrad
