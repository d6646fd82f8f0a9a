#pragma once

// Surface maps phi: U in R^2 -> chart(N) and their pointwise geometry.
//
// All jet work happens in the coordinate basis (d/dx, d/dy). Quantities are
// projected onto the Gram-Schmidt frame only when values are read out, so the
// frame itself is never differentiated.

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bitensionlab/ambient.hpp"
#include "bitensionlab/error.hpp"
#include "bitensionlab/expr.hpp"
#include "bitensionlab/jet.hpp"

namespace bitensionlab {

enum class QuadRule { periodic_trapezoid, gauss_legendre };
enum class Topology { patch, sphere, torus };

inline std::string_view quad_rule_name(QuadRule r) {
    return r == QuadRule::periodic_trapezoid ? "periodic-trapezoid" : "gauss-legendre";
}

inline std::string_view topology_name(Topology t) {
    switch (t) {
        case Topology::sphere: return "sphere";
        case Topology::torus: return "torus";
        case Topology::patch: break;
    }
    return "patch";
}

struct Domain {
    double x0 = 0.0;
    double x1 = 1.0;
    double y0 = 0.0;
    double y1 = 1.0;
    bool periodic_x = false;
    bool periodic_y = false;
    QuadRule rule_x = QuadRule::gauss_legendre;
    QuadRule rule_y = QuadRule::gauss_legendre;
    // What the chart covers once periodic edges are glued and degenerate
    // edges (poles of a polar chart) are collapsed.
    Topology topology = Topology::patch;

    bool compact() const noexcept { return topology != Topology::patch; }

    int euler_characteristic() const {
        switch (topology) {
            case Topology::sphere: return 2;
            case Topology::torus: return 0;
            case Topology::patch: break;
        }
        fail(Errc::not_compact, "domain is not a closed surface");
    }

    void validate() const {
        if (!(std::isfinite(x0) && std::isfinite(x1) && x0 < x1) ||
            !(std::isfinite(y0) && std::isfinite(y1) && y0 < y1)) {
            fail(Errc::bad_parameter, "domain needs x0 < x1 and y0 < y1");
        }
        if ((rule_x == QuadRule::periodic_trapezoid && !periodic_x) ||
            (rule_y == QuadRule::periodic_trapezoid && !periodic_y)) {
            fail(Errc::bad_parameter, "periodic trapezoid rule on a non-periodic axis");
        }
        if (topology == Topology::torus && !(periodic_x && periodic_y)) {
            fail(Errc::bad_parameter, "a torus domain must be periodic in both directions");
        }
    }

    bool contains(Point2 p) const noexcept {
        const bool ox = periodic_x || (p.x >= x0 && p.x <= x1);
        const bool oy = periodic_y || (p.y >= y0 && p.y <= y1);
        return ox && oy;
    }
};

/// Tensor field on the surface in the coordinate basis. `width` is 1 for real
/// tensors and n for tensors with values in the ambient tangent space.
/// Component (I, a) sits at I * width + a, with I the base-2 flattening of the
/// surface indices, first index most significant.
struct TensorJets {
    int rank = 0;
    int width = 1;
    std::vector<Jet> c;

    static TensorJets zeros(int rank, int width, int order, Point2 base) {
        TensorJets t;
        t.rank = rank;
        t.width = width;
        t.c.assign((std::size_t{1} << rank) * static_cast<std::size_t>(width), Jet(order, 0.0, base));
        return t;
    }

    int order() const { return c.front().order(); }
    std::size_t count() const noexcept { return std::size_t{1} << rank; }
    Jet& at(std::size_t i, int a = 0) { return c[i * static_cast<std::size_t>(width) + static_cast<std::size_t>(a)]; }
    const Jet& at(std::size_t i, int a = 0) const {
        return c[i * static_cast<std::size_t>(width) + static_cast<std::size_t>(a)];
    }

    TensorJets truncated(int order) const {
        if (order == this->order()) return *this;
        TensorJets t = *this;
        for (auto& j : t.c) j = j.truncated(order);
        return t;
    }

    TensorJets scaled(double s) const {
        TensorJets t = *this;
        for (auto& j : t.c) j *= s;
        return t;
    }
};

enum class MetricMode { induced, prescribed };

class Immersion {
public:
    Immersion(std::shared_ptr<const AmbientManifold> ambient, std::vector<Expr> coords, Domain domain,
              std::string label = {})
        : ambient_(std::move(ambient)), coords_(std::move(coords)), domain_(domain), label_(std::move(label)) {
        if (!ambient_) fail(Errc::bad_parameter, "immersion needs an ambient manifold");
        if (static_cast<int>(coords_.size()) != ambient_->dim()) {
            fail(Errc::bad_parameter, "immersion needs one coordinate expression per ambient dimension");
        }
        domain_.validate();
        const std::vector<std::string> slots = {"x", "y"};
        for (const auto& e : coords_) compiled_.emplace_back(e, slots);
    }

    /// A map with a prescribed domain metric g11, g12, g22 instead of the induced one.
    static Immersion with_metric(std::shared_ptr<const AmbientManifold> ambient, std::vector<Expr> coords,
                                 std::array<Expr, 3> metric, Domain domain, std::string label = {}) {
        Immersion m(std::move(ambient), std::move(coords), domain, std::move(label));
        const std::vector<std::string> slots = {"x", "y"};
        for (const auto& e : metric) m.compiled_metric_.emplace_back(e, slots);
        m.metric_ = std::move(metric);
        return m;
    }

    const AmbientManifold& ambient() const noexcept { return *ambient_; }
    const std::shared_ptr<const AmbientManifold>& ambient_ptr() const noexcept { return ambient_; }
    const std::vector<Expr>& coords() const noexcept { return coords_; }
    const Domain& domain() const noexcept { return domain_; }
    const std::string& label() const noexcept { return label_; }
    MetricMode metric_mode() const noexcept { return metric_ ? MetricMode::prescribed : MetricMode::induced; }
    bool induced() const noexcept { return !metric_; }
    const std::optional<std::array<Expr, 3>>& prescribed_metric() const noexcept { return metric_; }

    void require_immersion(std::string_view what) const {
        if (!induced()) fail(Errc::bad_parameter, std::string(what) + " requires an immersion with its induced metric");
    }

    std::vector<Jet> coordinate_jets(Point2 p, int order) const {
        const std::array<Jet, 2> xy = {Jet::coordinate(0, order, p), Jet::coordinate(1, order, p)};
        std::vector<Jet> out;
        out.reserve(compiled_.size());
        for (const auto& c : compiled_) out.push_back(c.eval(xy, order, p));
        return out;
    }

    std::array<Jet, 3> metric_jets(Point2 p, int order) const {
        const std::array<Jet, 2> xy = {Jet::coordinate(0, order, p), Jet::coordinate(1, order, p)};
        return {compiled_metric_[0].eval(xy, order, p), compiled_metric_[1].eval(xy, order, p),
                compiled_metric_[2].eval(xy, order, p)};
    }

private:
    std::shared_ptr<const AmbientManifold> ambient_;
    std::vector<Expr> coords_;
    std::vector<CompiledExpr> compiled_;
    std::optional<std::array<Expr, 3>> metric_;
    std::vector<CompiledExpr> compiled_metric_;
    Domain domain_;
    std::string label_;
};

namespace detail {

// A jet array kept at its natural order plus lazily truncated copies.
class OrderLadder {
public:
    OrderLadder() = default;
    explicit OrderLadder(std::vector<Jet> top) : top_(std::move(top)) {}

    int order() const { return top_.front().order(); }
    const std::vector<Jet>& top() const noexcept { return top_; }

    const std::vector<Jet>& at(int order) const {
        if (order == this->order()) return top_;
        auto& slot = lowered_[static_cast<std::size_t>(order)];
        if (!slot) {
            std::vector<Jet> v;
            v.reserve(top_.size());
            for (const auto& j : top_) v.push_back(j.truncated(order));
            slot = std::move(v);
        }
        return *slot;
    }

private:
    std::vector<Jet> top_;
    mutable std::array<std::optional<std::vector<Jet>>, kMaxJetOrder + 1> lowered_;
};

inline void require_order(int have, int need, std::string_view what) {
    if (have < need) {
        fail(Errc::order_too_low,
             std::string(what) + " needs jet order >= " + std::to_string(need) + ", got " + std::to_string(have));
    }
}

}  // namespace detail

/// Every jet-valued quantity of a map at one parameter point, built on demand.
/// Orders with K = jet order of phi: dphi and g at K-1, Christoffels, nabla dphi
/// and tau at K-2, and one less for every further covariant derivative.
/// Not thread-safe (lazy caches); build one per point per thread.
class PointJets {
public:
    PointJets(const Immersion& imm, Point2 p, int order) : imm_(&imm), p_(p), order_(order), n_(imm.ambient().dim()) {
        if (order > kMaxJetOrder) fail(Errc::bad_parameter, "jet order above " + std::to_string(kMaxJetOrder));
        detail::require_order(order, 2, "surface geometry");
        if (!imm.domain().contains(p)) fail(Errc::bad_parameter, "point outside the parameter domain");
        const int n = n_;
        phi_ = imm.coordinate_jets(p, order);

        dphi_ = TensorJets::zeros(1, n, order - 1, p);
        for (int i = 0; i < 2; ++i)
            for (int a = 0; a < n; ++a) dphi_.at(static_cast<std::size_t>(i), a) = phi_[static_cast<std::size_t>(a)].partial(i);

        amb_ = imm.ambient().along(phi_, order - 1, order - 2, std::max(order - 3, 0));
        h_ = detail::OrderLadder(amb_.metric);
        gamma_n_ = detail::OrderLadder(amb_.christoffel);

        build_metric();
        build_connection();
    }

    const Immersion& immersion() const noexcept { return *imm_; }
    int order() const noexcept { return order_; }
    int dim() const noexcept { return n_; }
    Point2 point() const noexcept { return p_; }

    const std::vector<Jet>& phi() const noexcept { return phi_; }
    const TensorJets& dphi() const noexcept { return dphi_; }
    const AmbientJets& ambient() const noexcept { return amb_; }

    /// g_ij and g^ij at order K-1.
    const TensorJets& metric() const noexcept { return g_; }
    const TensorJets& inverse_metric() const noexcept { return ginv_; }
    double det_metric() const noexcept { return detg_; }

    /// Christoffel symbols Gamma^k_ij of g at index (k*2+i)*2+j, order K-2.
    const std::vector<Jet>& christoffel() const noexcept { return gamma_m_.top(); }

    /// h-inner product of two ambient vectors, truncated to `order`.
    Jet inner(std::span<const Jet> u, std::span<const Jet> v, int order) const {
        const auto& h = h_.at(order);
        Jet s(order, 0.0, p_);
        for (int a = 0; a < n_; ++a)
            for (int b = 0; b < n_; ++b) {
                const Jet& hab = h[static_cast<std::size_t>(a * n_ + b)];
                if (hab.is_zero()) continue;
                s.add_product(hab, u[static_cast<std::size_t>(a)].truncated(order) * v[static_cast<std::size_t>(b)].truncated(order));
            }
        return s;
    }

    std::span<const Jet> vec(const TensorJets& t, std::size_t i) const {
        return {t.c.data() + i * static_cast<std::size_t>(t.width), static_cast<std::size_t>(t.width)};
    }

    /// Covariant derivative in the pull-back connection; the new index comes first.
    TensorJets covariant(const TensorJets& t) const {
        const int o = t.order() - 1;
        detail::require_order(o + 1, 1, "covariant derivative");
        const TensorJets tl = t.truncated(o);
        const int r = t.rank;
        const int w = t.width;
        const auto& G = gamma_m_.at(o);
        const std::vector<Jet>* A = w > 1 ? &conn_.at(o) : nullptr;
        const std::size_t cnt = t.count();
        TensorJets out = TensorJets::zeros(r + 1, w, o, p_);
        for (int k = 0; k < 2; ++k) {
            for (std::size_t I = 0; I < cnt; ++I) {
                const std::size_t J = static_cast<std::size_t>(k) * cnt + I;
                for (int a = 0; a < w; ++a) out.at(J, a) = t.at(I, a).partial(k);
                if (A) {
                    for (int a = 0; a < w; ++a)
                        for (int c = 0; c < w; ++c)
                            out.at(J, a).add_product((*A)[static_cast<std::size_t>((k * n_ + a) * n_ + c)], tl.at(I, c));
                }
                for (int s = 0; s < r; ++s) {
                    const int shift = r - 1 - s;
                    const int is = static_cast<int>((I >> shift) & 1U);
                    for (int l = 0; l < 2; ++l) {
                        const Jet& gam = G[static_cast<std::size_t>((l * 2 + k) * 2 + is)];
                        if (gam.is_zero()) continue;
                        const std::size_t Il = (I & ~(std::size_t{1} << shift)) | (static_cast<std::size_t>(l) << shift);
                        for (int a = 0; a < w; ++a) out.at(J, a).add_product(gam, tl.at(Il, a), -1.0);
                    }
                }
            }
        }
        return out;
    }

    /// g^{ij} contraction of the first two indices.
    TensorJets trace(const TensorJets& t) const {
        if (t.rank < 2) fail(Errc::bad_parameter, "trace needs two indices");
        const int o = t.order();
        const auto& gi = ginv_ladder_.at(o);
        const std::size_t rest = t.count() / 4;
        TensorJets out = TensorJets::zeros(t.rank - 2, t.width, o, p_);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                const Jet& gij = gi[static_cast<std::size_t>(i * 2 + j)];
                if (gij.is_zero()) continue;
                for (std::size_t I = 0; I < rest; ++I)
                    for (int a = 0; a < t.width; ++a)
                        out.at(I, a).add_product(gij, t.at(static_cast<std::size_t>(i * 2 + j) * rest + I, a));
            }
        return out;
    }

    /// Normal part of an ambient-vector-valued tensor: v - dphi(g^{-1} <dphi, v>).
    TensorJets normal_part(const TensorJets& t) const {
        imm_->require_immersion("normal projection");
        const int o = t.order();
        const TensorJets dp = dphi_.truncated(o);
        const auto& gi = ginv_ladder_.at(o);
        TensorJets out = t;
        for (std::size_t I = 0; I < t.count(); ++I) {
            std::array<Jet, 2> tangential = {inner(vec(dp, 0), vec(t, I), o), inner(vec(dp, 1), vec(t, I), o)};
            for (int k = 0; k < 2; ++k) {
                Jet coef(o, 0.0, p_);
                for (int l = 0; l < 2; ++l) coef.add_product(gi[static_cast<std::size_t>(k * 2 + l)], tangential[static_cast<std::size_t>(l)]);
                for (int a = 0; a < n_; ++a) out.at(I, a).add_product(coef, dp.at(static_cast<std::size_t>(k), a), -1.0);
            }
        }
        return out;
    }

    TensorJets scalar(const Jet& f) const {
        TensorJets t;
        t.rank = 0;
        t.width = 1;
        t.c = {f};
        return t;
    }

    /// |v|^2 for an ambient-vector field (rank 0).
    Jet norm2(const TensorJets& v) const { return inner(vec(v, 0), vec(v, 0), v.order()); }

    // -- second fundamental form, tension and friends ------------------------

    /// (nabla dphi)_ij, order K-2. For an immersion this is the second
    /// fundamental form B(d_i, d_j), already normal.
    const TensorJets& hessian_map() const { return hess_map_; }

    /// tau(phi) = trace nabla dphi, order K-2.
    const TensorJets& tension() const {
        if (!tau_) tau_ = trace(hess_map_);
        return *tau_;
    }

    /// Mean curvature vector H = tau/2 (immersions), order K-2.
    TensorJets mean_curvature() const {
        imm_->require_immersion("mean curvature");
        return tension().scaled(0.5);
    }

    /// nabla tau, order K-3.
    const TensorJets& nabla_tension() const {
        detail::require_order(order_, 3, "nabla tau");
        if (!dtau_) dtau_ = covariant(tension());
        return *dtau_;
    }

    /// Second covariant derivative of tau, order K-4.
    const TensorJets& nabla2_tension() const {
        detail::require_order(order_, 4, "second derivative of tau");
        if (!ddtau_) ddtau_ = covariant(nabla_tension());
        return *ddtau_;
    }

    /// (nabla^2 dphi)_kij = (nabla_k nabla dphi)_ij, order K-3.
    const TensorJets& nabla_hessian_map() const {
        detail::require_order(order_, 3, "third fundamental form");
        if (!dhess_) dhess_ = covariant(hess_map_);
        return *dhess_;
    }

    /// sum_{ij} g^{ij} R^a_{bcd} dphi_j^b dphi_i^c v^d, i.e. trace R^N(dphi(.), v) dphi(.).
    TensorJets curvature_trace(const TensorJets& v) const {
        const int o = v.order();
        if (o > curvature_order()) fail(Errc::order_too_low, "ambient curvature is not available at this order");
        const auto& gi = ginv_ladder_.at(o);
        const TensorJets dp = dphi_.truncated(o);
        const int n = n_;
        std::vector<Jet> w(static_cast<std::size_t>(n * n), Jet(o, 0.0, p_));
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j)
                        w[static_cast<std::size_t>(b * n + c)].add_product(gi[static_cast<std::size_t>(i * 2 + j)],
                                                                          dp.at(static_cast<std::size_t>(j), b) * dp.at(static_cast<std::size_t>(i), c));
        TensorJets out = TensorJets::zeros(0, n, o, p_);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    for (int d = 0; d < n; ++d) {
                        const Jet& r = amb_.riem(a, b, c, d);
                        if (r.is_zero()) continue;
                        out.at(0, a).add_product(r.truncated(o), w[static_cast<std::size_t>(b * n + c)] * v.at(0, d).truncated(o));
                    }
        return out;
    }

    /// tau_2 = trace nabla^2 tau - trace R^N(dphi, tau) dphi, order K-4.
    const TensorJets& bitension() const {
        detail::require_order(order_, 4, "tau_2");
        if (!tau2_) {
            TensorJets t = trace(nabla2_tension());
            const TensorJets rc = curvature_trace(tension().truncated(t.order()));
            for (std::size_t k = 0; k < t.c.size(); ++k) t.c[k] -= rc.c[k];
            tau2_ = std::move(t);
        }
        return *tau2_;
    }

    /// <dphi, nabla tau> = g^{ij} h(dphi_i, nabla_j tau), order K-3.
    Jet dphi_dot_nabla_tau() const {
        const TensorJets& dt = nabla_tension();
        const int o = dt.order();
        const TensorJets dp = dphi_.truncated(o);
        const auto& gi = ginv_ladder_.at(o);
        Jet s(o, 0.0, p_);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                s.add_product(gi[static_cast<std::size_t>(i * 2 + j)], inner(vec(dp, static_cast<std::size_t>(i)), vec(dt, static_cast<std::size_t>(j)), o));
        return s;
    }

    /// T_ij = h(dphi_i, nabla_j tau) + h(dphi_j, nabla_i tau), order K-3.
    const TensorJets& t_tensor() const {
        detail::require_order(order_, 3, "T tensor");
        if (!t_) {
            const TensorJets& dt = nabla_tension();
            const int o = dt.order();
            const TensorJets dp = dphi_.truncated(o);
            TensorJets t = TensorJets::zeros(2, 1, o, p_);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    t.at(static_cast<std::size_t>(i * 2 + j)) =
                        inner(vec(dp, static_cast<std::size_t>(i)), vec(dt, static_cast<std::size_t>(j)), o) +
                        inner(vec(dp, static_cast<std::size_t>(j)), vec(dt, static_cast<std::size_t>(i)), o);
                }
            t_ = std::move(t);
        }
        return *t_;
    }

    /// Biharmonic stress-energy tensor S_2 in coordinates, order K-3.
    const TensorJets& s2() const {
        detail::require_order(order_, 3, "S_2");
        if (!s2_) {
            const TensorJets& t = t_tensor();
            const int o = t.order();
            const Jet tau2 = norm2(tension().truncated(o));
            const Jet coef = 0.5 * tau2 + dphi_dot_nabla_tau();
            const auto& g = g_ladder_.at(o);
            TensorJets s = TensorJets::zeros(2, 1, o, p_);
            for (std::size_t k = 0; k < 4; ++k) s.at(k) = coef * g[k] - t.at(k);
            s2_ = std::move(s);
        }
        return *s2_;
    }

    /// nabla S_2 (first index = derivative), order K-4.
    const TensorJets& nabla_s2() const {
        detail::require_order(order_, 4, "nabla S_2");
        if (!ds2_) ds2_ = covariant(s2());
        return *ds2_;
    }

    /// div S_2 (a covector), order K-4.
    const TensorJets& div_s2() const {
        detail::require_order(order_, 4, "div S_2");
        if (!divs2_) divs2_ = trace(nabla_s2());
        return *divs2_;
    }

    /// Rough Laplacian -trace nabla^2 S_2, order K-5.
    const TensorJets& rough_laplacian_s2() const {
        detail::require_order(order_, 5, "rough Laplacian of S_2");
        if (!lap_s2_) lap_s2_ = trace(covariant(nabla_s2())).scaled(-1.0);
        return *lap_s2_;
    }

    // -- intrinsic curvature ---------------------------------------------------

    /// R^l_{bcd} of g at index ((l*2+b)*2+c)*2+d, order K-3.
    const std::vector<Jet>& surface_riemann() const {
        detail::require_order(order_, 3, "intrinsic curvature");
        if (!riem_m_) {
            const int o = order_ - 3;
            const auto& G = gamma_m_.at(o);
            const auto& Gt = gamma_m_.top();
            auto g = [&](int a, int b, int c) -> const Jet& { return G[static_cast<std::size_t>((a * 2 + b) * 2 + c)]; };
            std::vector<Jet> R(16, Jet(o, 0.0, p_));
            for (int l = 0; l < 2; ++l)
                for (int b = 0; b < 2; ++b)
                    for (int c = 0; c < 2; ++c)
                        for (int d = 0; d < 2; ++d) {
                            if (c == d) continue;
                            Jet s = Gt[static_cast<std::size_t>((l * 2 + d) * 2 + b)].partial(c) -
                                    Gt[static_cast<std::size_t>((l * 2 + c) * 2 + b)].partial(d);
                            for (int e = 0; e < 2; ++e) {
                                s.add_product(g(l, c, e), g(e, d, b));
                                s.add_product(g(l, d, e), g(e, c, b), -1.0);
                            }
                            R[static_cast<std::size_t>(((l * 2 + b) * 2 + c) * 2 + d)] = s;
                        }
            riem_m_ = std::move(R);
        }
        return *riem_m_;
    }

    /// Gaussian curvature K = g_{0k} R^k_{101} / det g, order K-3.
    const Jet& gauss_curvature() const {
        if (!kjet_) {
            const auto& R = surface_riemann();
            const int o = order_ - 3;
            const auto& g = g_ladder_.at(o);
            Jet num = g[0] * R[static_cast<std::size_t>(((0 * 2 + 1) * 2 + 0) * 2 + 1)] +
                      g[1] * R[static_cast<std::size_t>(((1 * 2 + 1) * 2 + 0) * 2 + 1)];
            const Jet det = g[0] * g[3] - g[1] * g[2];
            kjet_ = num / det;
        }
        return *kjet_;
    }

    // -- normal bundle ---------------------------------------------------------

    /// nabla-perp H along d/dx, d/dy, order K-3.
    const TensorJets& normal_nabla_h() const {
        detail::require_order(order_, 3, "nabla-perp H");
        if (!dperp_h_) dperp_h_ = normal_part(covariant(mean_curvature()));
        return *dperp_h_;
    }

    /// Second normal covariant derivative of H, order K-4.
    const TensorJets& normal_hessian_h() const {
        detail::require_order(order_, 4, "Laplacian-perp H");
        if (!ddperp_h_) ddperp_h_ = normal_part(covariant(normal_nabla_h()));
        return *ddperp_h_;
    }

    // -- scalar calculus -------------------------------------------------------

    /// Hess f = nabla df (order of f minus 2).
    TensorJets hessian(const Jet& f) const { return covariant(covariant(scalar(f))); }

    /// Laplace-Beltrami with the geometer's sign: -g^{ij} Hess_ij.
    Jet laplacian(const Jet& f) const { return -trace(hessian(f)).c.front(); }

    /// |df|^2 = g^{ij} f_i f_j (order of f minus 1).
    Jet grad_norm2(const Jet& f) const {
        const int o = f.order() - 1;
        const auto& gi = ginv_ladder_.at(o);
        const std::array<Jet, 2> d = {f.partial(0), f.partial(1)};
        Jet s(o, 0.0, p_);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) s.add_product(gi[static_cast<std::size_t>(i * 2 + j)], d[static_cast<std::size_t>(i)] * d[static_cast<std::size_t>(j)]);
        return s;
    }

    // -- frame ------------------------------------------------------------------

    /// Gram-Schmidt frame: frame()[p] holds the (d/dx, d/dy) coordinates of X_p.
    const std::array<std::array<double, 2>, 2>& frame() const noexcept { return frame_; }

    /// Values of a tensor with every surface index contracted against the frame.
    /// Same layout as the input: I * width + a.
    std::vector<double> in_frame(const TensorJets& t) const {
        const std::size_t cnt = t.count();
        const int w = t.width;
        std::vector<double> out(cnt * static_cast<std::size_t>(w), 0.0);
        for (std::size_t P = 0; P < cnt; ++P) {
            for (std::size_t I = 0; I < cnt; ++I) {
                double coef = 1.0;
                for (int s = 0; s < t.rank; ++s) {
                    const int shift = t.rank - 1 - s;
                    coef *= frame_[(P >> shift) & 1U][(I >> shift) & 1U];
                }
                if (coef == 0.0) continue;
                for (int a = 0; a < w; ++a)
                    out[P * static_cast<std::size_t>(w) + static_cast<std::size_t>(a)] += coef * t.at(I, a).value();
            }
        }
        return out;
    }

    /// h-inner product of ambient vectors given as values.
    double inner_value(std::span<const double> u, std::span<const double> v) const {
        double s = 0.0;
        for (int a = 0; a < n_; ++a)
            for (int b = 0; b < n_; ++b) s += amb_.h(a, b).value() * u[static_cast<std::size_t>(a)] * v[static_cast<std::size_t>(b)];
        return s;
    }

    /// R^N(U,V,Z,W) = <R(U,V)W, Z> from curvature values.
    double ambient_r04(std::span<const double> u, std::span<const double> v, std::span<const double> z,
                       std::span<const double> w) const {
        const int n = n_;
        double s = 0.0;
        for (int a = 0; a < n; ++a)
            for (int e = 0; e < n; ++e) {
                const double hae = amb_.h(a, e).value();
                if (hae == 0.0 || z[static_cast<std::size_t>(a)] == 0.0) continue;
                for (int b = 0; b < n; ++b)
                    for (int c = 0; c < n; ++c)
                        for (int d = 0; d < n; ++d) {
                            s += hae * z[static_cast<std::size_t>(a)] * amb_.riem(e, b, c, d).value() * w[static_cast<std::size_t>(b)] *
                                 u[static_cast<std::size_t>(c)] * v[static_cast<std::size_t>(d)];
                        }
            }
        return s;
    }

    /// R^N(U,V)W as values.
    std::vector<double> ambient_curvature_apply(std::span<const double> u, std::span<const double> v,
                                                std::span<const double> w) const {
        const int n = n_;
        std::vector<double> out(static_cast<std::size_t>(n), 0.0);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    for (int d = 0; d < n; ++d)
                        out[static_cast<std::size_t>(a)] += amb_.riem(a, b, c, d).value() * w[static_cast<std::size_t>(b)] *
                                                            u[static_cast<std::size_t>(c)] * v[static_cast<std::size_t>(d)];
        return out;
    }

    int curvature_order() const noexcept { return std::max(order_ - 3, 0); }

private:
    void build_metric() {
        const int o = order_ - 1;
        g_ = TensorJets::zeros(2, 1, o, p_);
        if (imm_->induced()) {
            for (int i = 0; i < 2; ++i)
                for (int j = i; j < 2; ++j) {
                    const Jet v = inner(vec(dphi_, static_cast<std::size_t>(i)), vec(dphi_, static_cast<std::size_t>(j)), o);
                    g_.at(static_cast<std::size_t>(i * 2 + j)) = v;
                    g_.at(static_cast<std::size_t>(j * 2 + i)) = v;
                }
        } else {
            const auto m = imm_->metric_jets(p_, o);
            g_.at(0) = m[0];
            g_.at(1) = m[1];
            g_.at(2) = m[1];
            g_.at(3) = m[2];
        }
        const Jet det = g_.at(0) * g_.at(3) - g_.at(1) * g_.at(2);
        detg_ = det.value();
        const double scale = std::abs(g_.at(0).value() * g_.at(3).value());
        const bool bad = !(detg_ > 1e-13 * scale) || !(g_.at(0).value() > 0.0) || !std::isfinite(detg_);
        if (bad) {
            if (imm_->induced()) fail(Errc::immersion_degenerate, "dphi does not have rank 2 at this point");
            fail(Errc::metric_degenerate, "prescribed domain metric is not positive definite");
        }
        const Jet rdet = reciprocal(det);
        ginv_ = TensorJets::zeros(2, 1, o, p_);
        ginv_.at(0) = g_.at(3) * rdet;
        ginv_.at(1) = -(g_.at(1) * rdet);
        ginv_.at(2) = ginv_.at(1);
        ginv_.at(3) = g_.at(0) * rdet;
        g_ladder_ = detail::OrderLadder(g_.c);
        ginv_ladder_ = detail::OrderLadder(ginv_.c);

        const double g00 = g_.at(0).value();
        const double g01 = g_.at(1).value();
        const double a = 1.0 / std::sqrt(g00);
        const double b = std::sqrt(g00 / detg_);
        frame_ = {{{a, 0.0}, {-b * g01 / g00, b}}};
    }

    void build_connection() {
        const int o = order_ - 2;
        const int n = n_;
        // Surface Christoffels
        std::array<Jet, 8> dg;  // d_l g_ij at (l*2+i)*2+j
        for (int l = 0; l < 2; ++l)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) dg[static_cast<std::size_t>((l * 2 + i) * 2 + j)] = g_.at(static_cast<std::size_t>(i * 2 + j)).partial(l);
        auto d = [&](int l, int i, int j) -> const Jet& { return dg[static_cast<std::size_t>((l * 2 + i) * 2 + j)]; };
        const auto& gi = ginv_ladder_.at(o);
        std::vector<Jet> G(8, Jet(o, 0.0, p_));
        for (int k = 0; k < 2; ++k)
            for (int i = 0; i < 2; ++i)
                for (int j = i; j < 2; ++j) {
                    Jet s(o, 0.0, p_);
                    for (int l = 0; l < 2; ++l) s.add_product(gi[static_cast<std::size_t>(k * 2 + l)], d(i, j, l) + d(j, i, l) - d(l, i, j), 0.5);
                    G[static_cast<std::size_t>((k * 2 + i) * 2 + j)] = s;
                    G[static_cast<std::size_t>((k * 2 + j) * 2 + i)] = s;
                }
        gamma_m_ = detail::OrderLadder(std::move(G));

        // Pull-back connection matrices A_k^a_c = Gamma^a_{bc}(phi) d_k phi^b.
        const TensorJets dp = dphi_.truncated(o);
        const auto& GN = gamma_n_.at(o);
        std::vector<Jet> A(static_cast<std::size_t>(2 * n * n), Jet(o, 0.0, p_));
        for (int k = 0; k < 2; ++k)
            for (int a = 0; a < n; ++a)
                for (int c = 0; c < n; ++c) {
                    Jet& s = A[static_cast<std::size_t>((k * n + a) * n + c)];
                    for (int b = 0; b < n; ++b) {
                        const Jet& gam = GN[static_cast<std::size_t>((a * n + b) * n + c)];
                        if (gam.is_zero()) continue;
                        s.add_product(gam, dp.at(static_cast<std::size_t>(k), b));
                    }
                }
        conn_ = detail::OrderLadder(std::move(A));
        hess_map_ = covariant(dphi_);
    }

    const Immersion* imm_;
    Point2 p_;
    int order_;
    int n_;
    std::vector<Jet> phi_;
    TensorJets dphi_;
    AmbientJets amb_;
    detail::OrderLadder h_;
    detail::OrderLadder gamma_n_;
    TensorJets g_;
    TensorJets ginv_;
    double detg_ = 0.0;
    detail::OrderLadder g_ladder_;
    detail::OrderLadder ginv_ladder_;
    detail::OrderLadder gamma_m_;
    detail::OrderLadder conn_;
    std::array<std::array<double, 2>, 2> frame_{};
    TensorJets hess_map_;

    mutable std::optional<TensorJets> tau_, dtau_, ddtau_, dhess_, tau2_, t_, s2_, ds2_, divs2_, lap_s2_;
    mutable std::optional<TensorJets> dperp_h_, ddperp_h_;
    mutable std::optional<std::vector<Jet>> riem_m_;
    mutable std::optional<Jet> kjet_;
};

// ---------------------------------------------------------------------------
// Frame-level geometry

struct PointGeometry {
    Point2 p;
    std::array<std::array<double, 2>, 2> frame{};  // X_p in (d/dx, d/dy) coordinates
    std::array<double, 3> g{};                     // g11, g12, g22
    std::array<std::vector<double>, 3> B;          // B(X1,X1), B(X1,X2), B(X2,X2)
    std::vector<double> H;
    double normH2 = 0.0;
    std::array<double, 3> A_H{};  // <A_H X_p, X_q>: 11, 12, 22
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double mu = 0.0;
    double K = 0.0;                         // intrinsic when the jet order allows, else from Gauss
    double K_gauss = 0.0;                   // sec^N(X1,X2) + <B11,B22> - |B12|^2
    std::optional<double> gauss_residual;   // |K - K_gauss| when K is intrinsic
    double normal_defect = 0.0;             // max |<B(X_p,X_q), dphi(X_r)>|
    std::array<double, 8> conn{};           // Gamma^k_ij values

    double norm_A_H2() const { return A_H[0] * A_H[0] + 2.0 * A_H[1] * A_H[1] + A_H[2] * A_H[2]; }
};

namespace detail {

inline std::vector<double> tangent_value(const PointJets& pj, int p) {
    const auto& E = pj.frame();
    std::vector<double> v(static_cast<std::size_t>(pj.dim()), 0.0);
    for (int k = 0; k < 2; ++k)
        for (int a = 0; a < pj.dim(); ++a)
            v[static_cast<std::size_t>(a)] += E[static_cast<std::size_t>(p)][static_cast<std::size_t>(k)] * pj.dphi().at(static_cast<std::size_t>(k), a).value();
    return v;
}

}  // namespace detail

inline PointGeometry geometry_at(const PointJets& pj) {
    pj.immersion().require_immersion("surface geometry");
    const int n = pj.dim();
    PointGeometry out;
    out.p = pj.point();
    out.frame = pj.frame();
    out.g = {pj.metric().at(0).value(), pj.metric().at(1).value(), pj.metric().at(3).value()};
    const auto Bf = pj.in_frame(pj.hessian_map());
    auto Bvec = [&](std::size_t I) {
        return std::vector<double>(Bf.begin() + static_cast<std::ptrdiff_t>(I) * n, Bf.begin() + static_cast<std::ptrdiff_t>(I + 1) * n);
    };
    out.B = {Bvec(0), Bvec(1), Bvec(3)};
    out.H.assign(static_cast<std::size_t>(n), 0.0);
    for (int a = 0; a < n; ++a) out.H[static_cast<std::size_t>(a)] = 0.5 * (out.B[0][static_cast<std::size_t>(a)] + out.B[2][static_cast<std::size_t>(a)]);
    out.normH2 = pj.inner_value(out.H, out.H);
    out.A_H = {pj.inner_value(out.B[0], out.H), pj.inner_value(out.B[1], out.H), pj.inner_value(out.B[2], out.H)};

    const double half_tr = 0.5 * (out.A_H[0] + out.A_H[2]);
    const double half_diff = 0.5 * (out.A_H[0] - out.A_H[2]);
    const double disc = std::hypot(half_diff, out.A_H[1]);
    out.lambda1 = half_tr + disc;
    out.lambda2 = half_tr - disc;
    out.mu = 2.0 * disc;

    const auto x1 = detail::tangent_value(pj, 0);
    const auto x2 = detail::tangent_value(pj, 1);
    const double sec = pj.ambient_r04(x1, x2, x1, x2);
    out.K_gauss = sec + pj.inner_value(out.B[0], out.B[2]) - pj.inner_value(out.B[1], out.B[1]);
    if (pj.order() >= 3) {
        out.K = pj.gauss_curvature().value();
        out.gauss_residual = std::abs(out.K - out.K_gauss);
    } else {
        out.K = out.K_gauss;
    }
    for (const auto& b : out.B) {
        out.normal_defect = std::max({out.normal_defect, std::abs(pj.inner_value(b, x1)), std::abs(pj.inner_value(b, x2))});
    }
    for (std::size_t k = 0; k < 8; ++k) out.conn[k] = pj.christoffel()[k].value();
    return out;
}

inline PointGeometry geometry_at(const Immersion& imm, Point2 p, int order = 3) {
    return geometry_at(PointJets(imm, p, order));
}

/// Frobenius norm of A_H - |H|^2 Id in the orthonormal frame.
inline double pseudo_umbilic_residual(const PointGeometry& geo) {
    const double a = geo.A_H[0] - geo.normH2;
    const double c = geo.A_H[2] - geo.normH2;
    return std::sqrt(a * a + 2.0 * geo.A_H[1] * geo.A_H[1] + c * c);
}

inline double pseudo_umbilic_residual(const Immersion& imm, Point2 p) {
    return pseudo_umbilic_residual(geometry_at(imm, p, 2));
}

struct NormalDerivatives {
    std::array<std::vector<double>, 2> nabla_perp_h;  // along X1, X2
    double norm2 = 0.0;                               // |nabla-perp H|^2
    std::array<double, 2> h_dot_nabla{};              // <nabla-perp_{X_i} H, H>
    std::vector<double> laplacian;                    // Laplacian-perp H (empty below order 4)
    std::optional<double> laplacian_dot_h;
};

inline NormalDerivatives normal_derivatives_at(const PointJets& pj) {
    const int n = pj.dim();
    NormalDerivatives out;
    const auto d = pj.in_frame(pj.normal_nabla_h());
    const auto h = pj.in_frame(pj.mean_curvature());
    for (std::size_t p = 0; p < 2; ++p) {
        out.nabla_perp_h[p].assign(d.begin() + static_cast<std::ptrdiff_t>(p) * n, d.begin() + static_cast<std::ptrdiff_t>(p + 1) * n);
        out.norm2 += pj.inner_value(out.nabla_perp_h[p], out.nabla_perp_h[p]);
        out.h_dot_nabla[p] = pj.inner_value(out.nabla_perp_h[p], h);
    }
    if (pj.order() >= 4) {
        const TensorJets lap = pj.trace(pj.normal_hessian_h()).scaled(-1.0);
        out.laplacian.resize(static_cast<std::size_t>(n));
        for (int a = 0; a < n; ++a) out.laplacian[static_cast<std::size_t>(a)] = lap.at(0, a).value();
        out.laplacian_dot_h = pj.inner_value(out.laplacian, h);
    }
    return out;
}

inline NormalDerivatives normal_derivatives_at(const Immersion& imm, Point2 p, int order = 4) {
    return normal_derivatives_at(PointJets(imm, p, order));
}

}  // namespace bitensionlab
