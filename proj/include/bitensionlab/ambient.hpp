#pragma once

// Chart-based Riemannian ambient manifolds (N, h).
//
// Curvature convention: R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y] and the
// (0,4) tensor is R(X,Y,Z,W) = <R(X,Y)W, Z>, so round spheres have positive
// sectional curvature R(U,V,U,V) / |U ^ V|^2.
//
// Metric derivatives are taken symbolically on the metric expressions and then
// evaluated on jets of the composed map, so every ambient quantity along a
// surface inherits its jet order from the surface parametrisation.

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bitensionlab/error.hpp"
#include "bitensionlab/expr.hpp"
#include "bitensionlab/jet.hpp"

namespace bitensionlab {

/// Valid region of a chart. `ball_radius` restricts to |u| < radius.
struct ChartDomain {
    std::optional<double> ball_radius;
    std::string description = "all of R^n";
};

/// Ambient geometry along a map, as jets in the surface parameters.
/// Index layout: metric(a,b) = metric[a*n+b]; christoffel Gamma^a_{bc} =
/// christoffel[(a*n+b)*n+c]; riemann R^a_{bcd} = riemann[((a*n+b)*n+c)*n+d]
/// with R(d_c, d_d) d_b = R^a_{bcd} d_a.
struct AmbientJets {
    int dim = 0;
    std::vector<Jet> metric;
    std::vector<Jet> inverse;
    std::vector<Jet> christoffel;
    std::vector<Jet> riemann;

    const Jet& h(int a, int b) const { return metric[idx(a, b)]; }
    const Jet& hinv(int a, int b) const { return inverse[idx(a, b)]; }
    const Jet& gamma(int a, int b, int c) const { return christoffel[idx(a, b, c)]; }
    const Jet& riem(int a, int b, int c, int d) const { return riemann[idx(a, b, c, d)]; }

    std::size_t idx(int a, int b) const { return static_cast<std::size_t>(a * dim + b); }
    std::size_t idx(int a, int b, int c) const { return static_cast<std::size_t>((a * dim + b) * dim + c); }
    std::size_t idx(int a, int b, int c, int d) const {
        return static_cast<std::size_t>(((a * dim + b) * dim + c) * dim + d);
    }
};

/// Curvature data at one chart point.
struct AmbientCurvature {
    int dim = 0;
    std::vector<double> metric;       // h_ab
    std::vector<double> riemann;      // R^a_{bcd}
    std::vector<double> riemann_low;  // R(X_c, X_d, X_a, X_b) stored at [((c*n+d)*n+a)*n+b]
    std::vector<double> ricci;        // Ric_ab

    /// R(X,Y,Z,W) = <R(X,Y)W, Z>.
    double r04(std::span<const double> x, std::span<const double> y, std::span<const double> z,
               std::span<const double> w) const {
        const int n = dim;
        double s = 0.0;
        for (int c = 0; c < n; ++c)
            for (int d = 0; d < n; ++d)
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        s += riemann_low[static_cast<std::size_t>(((c * n + d) * n + a) * n + b)] * x[static_cast<std::size_t>(c)] *
                             y[static_cast<std::size_t>(d)] * z[static_cast<std::size_t>(a)] * w[static_cast<std::size_t>(b)];
        return s;
    }

    double inner(std::span<const double> u, std::span<const double> v) const {
        double s = 0.0;
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b)
                s += metric[static_cast<std::size_t>(a * dim + b)] * u[static_cast<std::size_t>(a)] * v[static_cast<std::size_t>(b)];
        return s;
    }

    double sectional(std::span<const double> u, std::span<const double> v) const {
        const double area2 = inner(u, u) * inner(v, v) - inner(u, v) * inner(u, v);
        if (!(area2 > 0.0)) fail(Errc::bad_parameter, "sectional curvature needs independent vectors");
        return r04(u, v, u, v) / area2;
    }

    double ric(std::span<const double> u, std::span<const double> v) const {
        double s = 0.0;
        for (int a = 0; a < dim; ++a)
            for (int b = 0; b < dim; ++b)
                s += ricci[static_cast<std::size_t>(a * dim + b)] * u[static_cast<std::size_t>(a)] * v[static_cast<std::size_t>(b)];
        return s;
    }
};

namespace detail {

/// Inverse of an n x n matrix of jets (Gauss-Jordan, pivoting on the constant
/// term). Throws metric_degenerate on a vanishing pivot.
inline std::vector<Jet> invert_jet_matrix(const std::vector<Jet>& m, int n) {
    const int order = m.front().order();
    std::vector<Jet> a = m;
    std::vector<Jet> inv(static_cast<std::size_t>(n * n), Jet(order));
    for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(i * n + i)] = Jet(order, 1.0);
    auto at = [n](std::vector<Jet>& v, int r, int c) -> Jet& { return v[static_cast<std::size_t>(r * n + c)]; };
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r) {
            if (std::abs(at(a, r, col).value()) > std::abs(at(a, pivot, col).value())) pivot = r;
        }
        if (std::abs(at(a, pivot, col).value()) < 1e-300) fail(Errc::metric_degenerate, "singular metric");
        if (pivot != col) {
            for (int c = 0; c < n; ++c) {
                std::swap(at(a, pivot, c), at(a, col, c));
                std::swap(at(inv, pivot, c), at(inv, col, c));
            }
        }
        const Jet rp = reciprocal(at(a, col, col));
        for (int c = 0; c < n; ++c) {
            at(a, col, c) = at(a, col, c) * rp;
            at(inv, col, c) = at(inv, col, c) * rp;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const Jet f = at(a, r, col);
            if (f.is_zero()) continue;
            for (int c = 0; c < n; ++c) {
                at(a, r, c) -= f * at(a, col, c);
                at(inv, r, c) -= f * at(inv, col, c);
            }
        }
    }
    return inv;
}

/// Cholesky test for positive definiteness of a symmetric matrix of values.
inline bool positive_definite(std::vector<double> m, int n) {
    for (int j = 0; j < n; ++j) {
        double d = m[static_cast<std::size_t>(j * n + j)];
        for (int k = 0; k < j; ++k) d -= m[static_cast<std::size_t>(j * n + k)] * m[static_cast<std::size_t>(j * n + k)];
        if (!(d > 0.0)) return false;
        const double l = std::sqrt(d);
        m[static_cast<std::size_t>(j * n + j)] = l;
        for (int i = j + 1; i < n; ++i) {
            double s = m[static_cast<std::size_t>(i * n + j)];
            for (int k = 0; k < j; ++k) s -= m[static_cast<std::size_t>(i * n + k)] * m[static_cast<std::size_t>(j * n + k)];
            m[static_cast<std::size_t>(i * n + j)] = s / l;
        }
    }
    return true;
}

// Set of compiled expressions with structurally-identical entries shared.
class ExprTable {
public:
    std::size_t add(const Expr& e, const std::vector<std::string>& slots) {
        const std::string key = to_string(e);
        if (auto it = index_.find(key); it != index_.end()) return it->second;
        exprs_.emplace_back(e, slots);
        index_.emplace(key, exprs_.size() - 1);
        return exprs_.size() - 1;
    }

    const CompiledExpr& operator[](std::size_t i) const { return exprs_[i]; }

    std::vector<Jet> evaluate(std::span<const Jet> slots, int order, Point2 base) const {
        std::vector<Jet> out;
        out.reserve(exprs_.size());
        for (const auto& e : exprs_) out.push_back(e.eval(slots, order, base));
        return out;
    }

private:
    std::vector<CompiledExpr> exprs_;
    std::map<std::string, std::size_t> index_;
};

}  // namespace detail

class AmbientManifold {
public:
    /// General chart metric from the n x n component expressions (row-major;
    /// only the upper triangle is read, symmetry is imposed) in variables u1..un.
    AmbientManifold(int dim, const std::vector<Expr>& metric, std::string label, ChartDomain chart = {})
        : dim_(dim), label_(std::move(label)), chart_(std::move(chart)) {
        if (dim < 2) fail(Errc::bad_parameter, "ambient dimension must be at least 2");
        if (metric.size() != static_cast<std::size_t>(dim * dim)) {
            fail(Errc::bad_parameter, "metric needs n*n component expressions");
        }
        for (int a = 0; a < dim; ++a) {
            for (int b = 0; b < dim; ++b) {
                metric_.push_back(a <= b ? metric[static_cast<std::size_t>(a * dim + b)]
                                         : metric[static_cast<std::size_t>(b * dim + a)]);
            }
        }
        build();
    }

    static AmbientManifold euclidean(int n) {
        check_dim(n);
        return AmbientManifold(n, diagonal(n, expr::constant(1.0)), "euclidean(" + std::to_string(n) + ")");
    }

    /// Round sphere of radius r in the stereographic chart from the north pole:
    /// h = 4 r^4 / (r^2 + |u|^2)^2 du^2, sectional curvature 1/r^2.
    static AmbientManifold sphere(int n, double r) {
        check_dim(n);
        if (!(r > 0.0)) fail(Errc::bad_parameter, "sphere radius must be positive");
        const std::string r2 = detail::format_double(r * r);
        const std::string factor = detail::format_double(4.0 * r * r * r * r) + "/(" + r2 + " + " + squared_norm(n) + ")^2";
        ChartDomain chart;
        chart.description = "stereographic chart, all of R^n (north pole at infinity)";
        return AmbientManifold(n, diagonal(n, parse_expr(factor)),
                               "sphere(" + std::to_string(n) + "," + detail::format_double(r) + ")", chart);
    }

    /// Hyperbolic space of curvature -1/r^2 in the Poincare ball |u| < r:
    /// h = 4 r^4 / (r^2 - |u|^2)^2 du^2.
    static AmbientManifold hyperbolic(int n, double r) {
        check_dim(n);
        if (!(r > 0.0)) fail(Errc::bad_parameter, "hyperbolic radius must be positive");
        const std::string r2 = detail::format_double(r * r);
        const std::string factor = detail::format_double(4.0 * r * r * r * r) + "/(" + r2 + " - (" + squared_norm(n) + "))^2";
        ChartDomain chart;
        chart.ball_radius = r;
        chart.description = "Poincare ball |u| < " + detail::format_double(r);
        return AmbientManifold(n, diagonal(n, parse_expr(factor)),
                               "hyperbolic(" + std::to_string(n) + "," + detail::format_double(r) + ")", chart);
    }

    /// Conformally flat metric factor(u) * delta, where `factor` is lambda^2.
    static AmbientManifold conformal(int n, const Expr& factor, ChartDomain chart = {}) {
        check_dim(n);
        return AmbientManifold(n, diagonal(n, factor), "conformal(" + std::to_string(n) + "," + to_string(factor) + ")",
                               std::move(chart));
    }

    int dim() const noexcept { return dim_; }
    const std::string& label() const noexcept { return label_; }
    const ChartDomain& chart() const noexcept { return chart_; }
    const Expr& metric_expr(int a, int b) const { return metric_[static_cast<std::size_t>(a * dim_ + b)]; }

    static std::string coordinate_name(int a) { return "u" + std::to_string(a + 1); }
    const std::vector<std::string>& coordinate_names() const noexcept { return names_; }

    void check_chart(std::span<const double> u) const {
        double r2 = 0.0;
        for (double v : u) {
            if (!std::isfinite(v)) fail(Errc::chart_violation, "non-finite chart coordinate");
            r2 += v * v;
        }
        if (chart_.ball_radius && !(std::sqrt(r2) < *chart_.ball_radius)) {
            fail(Errc::chart_violation, "point outside " + chart_.description);
        }
    }

    /// Ambient metric, inverse, Christoffel symbols and curvature along a map
    /// whose chart coordinates are given as jets. Orders: metric and inverse at
    /// `metric_order`, Christoffels at `christoffel_order`, curvature at
    /// `curvature_order` (negative skips the curvature).
    AmbientJets along(std::span<const Jet> coords, int metric_order, int christoffel_order,
                      int curvature_order) const {
        const int n = dim_;
        if (static_cast<int>(coords.size()) != n) fail(Errc::bad_parameter, "coordinate count does not match dimension");
        std::vector<double> u0;
        for (const auto& c : coords) u0.push_back(c.value());
        check_chart(u0);
        const Point2 base = coords.front().base_point();

        auto truncated = [&](int order) {
            std::vector<Jet> t;
            t.reserve(coords.size());
            for (const auto& c : coords) t.push_back(c.truncated(order));
            return t;
        };

        AmbientJets out;
        out.dim = n;
        {
            const auto slots = truncated(metric_order);
            const auto vals = h_table_.evaluate(slots, metric_order, base);
            out.metric.reserve(static_cast<std::size_t>(n * n));
            std::vector<double> h0;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    out.metric.push_back(vals[h_index_[static_cast<std::size_t>(a * n + b)]]);
                    h0.push_back(out.metric.back().value());
                }
            if (!detail::positive_definite(h0, n)) fail(Errc::metric_degenerate, "metric is not positive definite");
            out.inverse = inverse_of(out.metric);
        }

        const int co = christoffel_order;
        {
            const auto slots = truncated(co);
            const auto dvals = dh_table_.evaluate(slots, co, base);
            auto dh = [&](int c, int a, int b) -> const Jet& {
                return dvals[dh_index_[static_cast<std::size_t>((c * n + a) * n + b)]];
            };
            out.christoffel.assign(static_cast<std::size_t>(n * n * n), Jet(co, 0.0, base));
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    for (int c = b; c < n; ++c) {
                        Jet s(co, 0.0, base);
                        for (int d = 0; d < n; ++d) {
                            const Jet& hi = out.inverse[static_cast<std::size_t>(a * n + d)];
                            if (hi.is_zero()) continue;
                            Jet lower = dh(b, d, c) + dh(c, d, b) - dh(d, b, c);
                            if (lower.is_zero()) continue;
                            s += hi.truncated(co) * lower;
                        }
                        s *= 0.5;
                        out.christoffel[out.idx(a, b, c)] = s;
                        out.christoffel[out.idx(a, c, b)] = s;
                    }
        }

        if (curvature_order >= 0) {
            const int ro = curvature_order;
            const auto slots = truncated(ro);
            const auto dvals = dh_table_.evaluate(slots, ro, base);
            const auto ddvals = ddh_table_.evaluate(slots, ro, base);
            auto dh = [&](int c, int a, int b) -> const Jet& {
                return dvals[dh_index_[static_cast<std::size_t>((c * n + a) * n + b)]];
            };
            auto ddh = [&](int e, int c, int a, int b) -> const Jet& {
                return ddvals[ddh_index_[static_cast<std::size_t>(((e * n + c) * n + a) * n + b)]];
            };
            std::vector<Jet> hinv;
            for (const auto& j : out.inverse) hinv.push_back(j.truncated(ro));
            std::vector<Jet> gam;
            for (const auto& j : out.christoffel) gam.push_back(j.truncated(ro));

            // d_e h^{ad} = -h^{ap} d_e h_{pq} h^{qd}
            std::vector<Jet> dinv(static_cast<std::size_t>(n * n * n), Jet(ro, 0.0, base));
            for (int e = 0; e < n; ++e)
                for (int a = 0; a < n; ++a)
                    for (int d = a; d < n; ++d) {
                        Jet s(ro, 0.0, base);
                        for (int p = 0; p < n; ++p) {
                            const Jet& hap = hinv[static_cast<std::size_t>(a * n + p)];
                            if (hap.is_zero()) continue;
                            for (int q = 0; q < n; ++q) {
                                const Jet& hqd = hinv[static_cast<std::size_t>(q * n + d)];
                                const Jet& dpq = dh(e, p, q);
                                if (hqd.is_zero() || dpq.is_zero()) continue;
                                s -= hap * dpq * hqd;
                            }
                        }
                        dinv[static_cast<std::size_t>((e * n + a) * n + d)] = s;
                        dinv[static_cast<std::size_t>((e * n + d) * n + a)] = s;
                    }

            // d_e Gamma^a_{bc}
            std::vector<Jet> dgam(static_cast<std::size_t>(n * n * n * n), Jet(ro, 0.0, base));
            auto dg = [&](int e, int a, int b, int c) -> Jet& {
                return dgam[static_cast<std::size_t>(((e * n + a) * n + b) * n + c)];
            };
            for (int e = 0; e < n; ++e)
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        for (int c = b; c < n; ++c) {
                            Jet s(ro, 0.0, base);
                            for (int d = 0; d < n; ++d) {
                                const Jet& di = dinv[static_cast<std::size_t>((e * n + a) * n + d)];
                                const Jet& hi = hinv[static_cast<std::size_t>(a * n + d)];
                                if (!di.is_zero()) {
                                    Jet lower = dh(b, d, c) + dh(c, d, b) - dh(d, b, c);
                                    if (!lower.is_zero()) s += di * lower;
                                }
                                if (!hi.is_zero()) {
                                    Jet lower2 = ddh(e, b, d, c) + ddh(e, c, d, b) - ddh(e, d, b, c);
                                    if (!lower2.is_zero()) s += hi * lower2;
                                }
                            }
                            s *= 0.5;
                            dg(e, a, b, c) = s;
                            dg(e, a, c, b) = s;
                        }

            out.riemann.assign(static_cast<std::size_t>(n * n * n * n), Jet(ro, 0.0, base));
            auto G = [&](int a, int b, int c) -> const Jet& { return gam[out.idx(a, b, c)]; };
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    for (int c = 0; c < n; ++c)
                        for (int d = c + 1; d < n; ++d) {
                            Jet s = dg(c, a, d, b) - dg(d, a, c, b);
                            for (int e = 0; e < n; ++e) {
                                if (!G(a, c, e).is_zero() && !G(e, d, b).is_zero()) s += G(a, c, e) * G(e, d, b);
                                if (!G(a, d, e).is_zero() && !G(e, c, b).is_zero()) s -= G(a, d, e) * G(e, c, b);
                            }
                            out.riemann[out.idx(a, b, c, d)] = s;
                            out.riemann[out.idx(a, b, d, c)] = -s;
                        }
        }
        return out;
    }

private:
    static void check_dim(int n) {
        if (n < 2) fail(Errc::bad_parameter, "ambient dimension must be at least 2");
    }

    static std::string squared_norm(int n) {
        std::string s;
        for (int a = 0; a < n; ++a) {
            if (a) s += " + ";
            s += coordinate_name(a) + "^2";
        }
        return s;
    }

    static std::vector<Expr> diagonal(int n, const Expr& factor) {
        std::vector<Expr> m(static_cast<std::size_t>(n * n), expr::constant(0.0));
        for (int a = 0; a < n; ++a) m[static_cast<std::size_t>(a * n + a)] = factor;
        return m;
    }

    std::vector<Jet> inverse_of(const std::vector<Jet>& h) const {
        const int n = dim_;
        if (diagonal_) {
            std::vector<Jet> inv(static_cast<std::size_t>(n * n), Jet(h.front().order(), 0.0, h.front().base_point()));
            for (int a = 0; a < n; ++a) {
                inv[static_cast<std::size_t>(a * n + a)] = reciprocal(h[static_cast<std::size_t>(a * n + a)]);
            }
            return inv;
        }
        return detail::invert_jet_matrix(h, n);
    }

    void build() {
        const int n = dim_;
        for (int a = 0; a < n; ++a) names_.push_back(coordinate_name(a));
        for (const auto& e : metric_) {
            for (const auto& v : free_variables(e)) {
                if (std::find(names_.begin(), names_.end(), v) == names_.end()) {
                    fail(Errc::unbound_variable, "metric uses unknown variable '" + v + "'");
                }
            }
        }
        diagonal_ = true;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (a != b && !expr::is_const(metric_expr(a, b), 0.0)) diagonal_ = false;

        h_index_.resize(static_cast<std::size_t>(n * n));
        dh_index_.resize(static_cast<std::size_t>(n * n * n));
        ddh_index_.resize(static_cast<std::size_t>(n * n * n * n));
        std::vector<Expr> d1(static_cast<std::size_t>(n * n * n));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) h_index_[static_cast<std::size_t>(a * n + b)] = h_table_.add(metric_expr(a, b), names_);
        for (int c = 0; c < n; ++c)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    Expr d = differentiate(metric_expr(a, b), names_[static_cast<std::size_t>(c)]);
                    d1[static_cast<std::size_t>((c * n + a) * n + b)] = d;
                    dh_index_[static_cast<std::size_t>((c * n + a) * n + b)] = dh_table_.add(d, names_);
                }
        for (int e = 0; e < n; ++e)
            for (int c = 0; c < n; ++c)
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b) {
                        // mixed partials commute: build from the lower index pair
                        const int lo = std::min(e, c);
                        const int hi = std::max(e, c);
                        Expr d = differentiate(d1[static_cast<std::size_t>((lo * n + a) * n + b)],
                                               names_[static_cast<std::size_t>(hi)]);
                        ddh_index_[static_cast<std::size_t>(((e * n + c) * n + a) * n + b)] = ddh_table_.add(d, names_);
                    }
    }

    int dim_;
    std::string label_;
    ChartDomain chart_;
    std::vector<Expr> metric_;
    std::vector<std::string> names_;
    bool diagonal_ = false;
    detail::ExprTable h_table_, dh_table_, ddh_table_;
    std::vector<std::size_t> h_index_, dh_index_, ddh_index_;
};

/// Christoffel symbols Gamma^a_{bc} at a chart point, layout [(a*n+b)*n+c].
inline std::vector<double> christoffel_at(const AmbientManifold& m, std::span<const double> u) {
    std::vector<Jet> coords;
    for (double v : u) coords.emplace_back(0, v);
    const auto amb = m.along(coords, 0, 0, -1);
    std::vector<double> out;
    for (const auto& j : amb.christoffel) out.push_back(j.value());
    return out;
}

/// Riemann, (0,4) and Ricci tensors at a chart point.
inline AmbientCurvature curvature_at(const AmbientManifold& m, std::span<const double> u) {
    std::vector<Jet> coords;
    for (double v : u) coords.emplace_back(0, v);
    const auto amb = m.along(coords, 0, 0, 0);
    const int n = m.dim();
    AmbientCurvature out;
    out.dim = n;
    for (const auto& j : amb.metric) out.metric.push_back(j.value());
    for (const auto& j : amb.riemann) out.riemann.push_back(j.value());
    out.riemann_low.assign(static_cast<std::size_t>(n * n * n * n), 0.0);
    for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    double s = 0.0;
                    for (int e = 0; e < n; ++e) {
                        s += out.metric[static_cast<std::size_t>(a * n + e)] * out.riemann[amb.idx(e, b, c, d)];
                    }
                    out.riemann_low[static_cast<std::size_t>(((c * n + d) * n + a) * n + b)] = s;
                }
    out.ricci.assign(static_cast<std::size_t>(n * n), 0.0);
    for (int y = 0; y < n; ++y)
        for (int z = 0; z < n; ++z) {
            double s = 0.0;
            for (int a = 0; a < n; ++a) s += out.riemann[amb.idx(a, z, a, y)];
            out.ricci[static_cast<std::size_t>(y * n + z)] = s;
        }
    return out;
}

/// Builds one of the named manifold kinds.
inline AmbientManifold make_builtin_manifold(const std::string& kind, int n, double r = 1.0,
                                             const std::string& factor = "") {
    if (kind == "euclidean") return AmbientManifold::euclidean(n);
    if (kind == "sphere") return AmbientManifold::sphere(n, r);
    if (kind == "hyperbolic") return AmbientManifold::hyperbolic(n, r);
    if (kind == "conformal") return AmbientManifold::conformal(n, parse_expr(factor));
    fail(Errc::bad_parameter, "unknown manifold kind '" + kind + "'");
}

}  // namespace bitensionlab
