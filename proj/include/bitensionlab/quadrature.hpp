#pragma once

// Tensor-product quadrature over the parameter rectangle and the midpoint
// sample grids used by pointwise checks.

#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <vector>

#include "bitensionlab/error.hpp"
#include "bitensionlab/immersion.hpp"
#include "bitensionlab/parallel.hpp"

namespace bitensionlab {

struct AxisQuadrature {
    QuadRule rule = QuadRule::gauss_legendre;
    std::vector<double> nodes;
    std::vector<double> weights;
};

inline AxisQuadrature axis_quadrature(QuadRule rule, int count, double a, double b) {
    if (count < 1) fail(Errc::bad_parameter, "quadrature needs at least one node per axis");
    AxisQuadrature q;
    q.rule = rule;
    const auto n = static_cast<std::size_t>(count);
    q.nodes.resize(n);
    q.weights.resize(n);
    if (rule == QuadRule::periodic_trapezoid) {
        const double h = (b - a) / count;
        for (std::size_t i = 0; i < n; ++i) {
            q.nodes[i] = a + static_cast<double>(i) * h;
            q.weights[i] = h;
        }
        return q;
    }
    std::unique_ptr<gsl_integration_glfixed_table, void (*)(gsl_integration_glfixed_table*)> table(
        gsl_integration_glfixed_table_alloc(n), gsl_integration_glfixed_table_free);
    if (!table) fail(Errc::bad_parameter, "cannot build Gauss-Legendre table");
    for (std::size_t i = 0; i < n; ++i) gsl_integration_glfixed_point(a, b, i, &q.nodes[i], &q.weights[i], table.get());
    return q;
}

struct QuadratureGrid {
    AxisQuadrature x;
    AxisQuadrature y;

    static QuadratureGrid for_domain(const Domain& d, int nx, int ny) {
        return {axis_quadrature(d.rule_x, nx, d.x0, d.x1), axis_quadrature(d.rule_y, ny, d.y0, d.y1)};
    }

    std::size_t size() const noexcept { return x.nodes.size() * y.nodes.size(); }
    Point2 point(std::size_t k) const { return {x.nodes[k / y.nodes.size()], y.nodes[k % y.nodes.size()]}; }
    double weight(std::size_t k) const { return x.weights[k / y.nodes.size()] * y.weights[k % y.nodes.size()]; }
};

/// Cell-midpoint sample grid; never touches an edge, so polar-chart poles are avoided.
inline std::vector<Point2> midpoint_grid(const Domain& d, int nx, int ny) {
    if (nx < 1 || ny < 1) fail(Errc::bad_parameter, "grid needs at least one point per axis");
    std::vector<Point2> pts;
    pts.reserve(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            pts.push_back({d.x0 + (i + 0.5) * (d.x1 - d.x0) / nx, d.y0 + (j + 0.5) * (d.y1 - d.y0) / ny});
    return pts;
}

/// Neumaier-compensated sum in index order.
inline double stable_sum(const std::vector<double>& v) {
    double s = 0.0;
    double c = 0.0;
    for (double x : v) {
        const double t = s + x;
        c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
        s = t;
    }
    return s + c;
}

/// Integrals of several fields against v_g in one pass: result[i] is
/// sum_k w_k * field(k)[i] * sqrt(det g) over the grid.
template <class F>
std::vector<double> integrate_fields(const Immersion& imm, const QuadratureGrid& grid, int order, F&& field) {
    if (!imm.domain().compact()) fail(Errc::not_compact, "integral needs a closed surface domain");
    auto per_point = parallel_map(grid.size(), [&](std::size_t k) {
        const PointJets pj(imm, grid.point(k), order);
        std::vector<double> v = field(pj);
        const double dv = grid.weight(k) * std::sqrt(pj.det_metric());
        for (auto& x : v) x *= dv;
        return v;
    });
    std::vector<double> out;
    if (per_point.empty()) return out;
    const std::size_t m = per_point.front().size();
    out.resize(m);
    std::vector<double> column(per_point.size());
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < per_point.size(); ++k) column[k] = per_point[k][i];
        out[i] = stable_sum(column);
    }
    return out;
}

template <class F>
double integrate_chart(const Immersion& imm, const QuadratureGrid& grid, int order, F&& field) {
    return integrate_fields(imm, grid, order, [&](const PointJets& pj) { return std::vector<double>{field(pj)}; })[0];
}

struct GuardedIntegrals {
    std::vector<double> values;   // at the requested grid
    std::vector<double> refined;  // at twice the nodes per axis
    double max_shift = 0.0;
};

/// Integrates at (nx, ny) and (2nx, 2ny); GridTooCoarse if any value moves by
/// more than ten times `tolerance`.
template <class F>
GuardedIntegrals integrate_guarded(const Immersion& imm, int nx, int ny, int order, double tolerance, F&& field) {
    GuardedIntegrals g;
    g.values = integrate_fields(imm, QuadratureGrid::for_domain(imm.domain(), nx, ny), order, field);
    g.refined = integrate_fields(imm, QuadratureGrid::for_domain(imm.domain(), 2 * nx, 2 * ny), order, field);
    for (std::size_t i = 0; i < g.values.size(); ++i) g.max_shift = std::max(g.max_shift, std::abs(g.values[i] - g.refined[i]));
    if (g.max_shift > 10.0 * tolerance) {
        fail(Errc::grid_too_coarse, "doubling the quadrature nodes moved an integral by " + std::to_string(g.max_shift));
    }
    return g;
}

}  // namespace bitensionlab
