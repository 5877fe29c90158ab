#include "nlgrad/domain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace nlgrad {

std::vector<int> DomainGrid::omega_minus() const {
    std::vector<int> out;
    int m = static_cast<int>(omega.size());
    for (int p = 0; p < m; ++p)
        if (depth(p) >= K) out.push_back(omega[p]);
    return out;
}

std::vector<int> DomainGrid::gamma_minus() const {
    std::vector<int> out;
    int m = static_cast<int>(omega.size());
    for (int p = 0; p < m; ++p)
        if (depth(p) < K) out.push_back(omega[p]);
    return out;
}

std::vector<int> DomainGrid::collar() const {
    std::vector<int> out = gamma;
    for (int i : gamma_minus()) out.push_back(i);
    std::sort(out.begin(), out.end());
    return out;
}

DomainGrid build_grid(double a, double b, double delta, int n_cells) {
    if (!(b > a)) throw std::invalid_argument("build_grid: requires b > a");
    if (!(delta > 0) || !(delta < (b - a) / 2))
        throw std::invalid_argument("build_grid: requires 0 < delta < (b-a)/2");
    if (n_cells < 16) throw std::invalid_argument("build_grid: n_cells must be >= 16");

    DomainGrid g;
    g.a = a;
    g.b = b;
    g.delta = delta;
    g.n_cells = n_cells;
    g.h = (b - a + 2 * delta) / n_cells;
    g.nodes.resize(n_cells);
    for (int i = 0; i < n_cells; ++i)
        g.nodes[i] = (a - delta) + (i + 0.5) * g.h;
    for (int i = 0; i < n_cells; ++i) {
        if (g.nodes[i] > a && g.nodes[i] < b)
            g.omega.push_back(i);
        else
            g.gamma.push_back(i);
    }
    if (g.omega.empty()) throw std::invalid_argument("build_grid: no Omega nodes");
    int K = static_cast<int>(std::lround(delta / g.h));
    // The stencil centered at any Omega node must stay inside the grid.
    int first = g.omega.front(), last = g.omega.back();
    K = std::min(K, std::min(first, n_cells - 1 - last));
    if (K < 4)
        throw std::invalid_argument("build_grid: n_cells too small, need delta/h >= 4");
    g.K = K;
    g.delta_snapped = K * g.h;
    return g;
}

int support_size(const DomainGrid& g, Support s) {
    switch (s) {
        case Support::OmegaDelta: return g.n_cells;
        case Support::Omega: return static_cast<int>(g.omega.size());
        case Support::GammaDelta: return static_cast<int>(g.gamma.size());
    }
    return 0;
}

Eigen::VectorXd support_nodes(const DomainGrid& g, Support s) {
    if (s == Support::OmegaDelta) return g.nodes;
    const auto& idx = (s == Support::Omega) ? g.omega : g.gamma;
    Eigen::VectorXd x(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) x[k] = g.nodes[idx[k]];
    return x;
}

void check_field(const DomainGrid& g, const Field& f) {
    if (f.values.size() != support_size(g, f.support))
        throw std::invalid_argument("field: value count does not match support (" +
                                    std::to_string(f.values.size()) + " vs " +
                                    std::to_string(support_size(g, f.support)) + ")");
    if (!f.values.allFinite())
        throw std::invalid_argument("field: values must be finite");
}

double integrate(const DomainGrid& g, const Field& f) {
    check_field(g, f);
    return g.h * f.values.sum();
}

} // namespace nlgrad
