#pragma once

// Tension, bitension, the biharmonic stress-energy tensor and scalar calculus
// on the surface, read out in the orthonormal frame. The jet work lives in
// PointJets; this layer only picks quantities and projects them.
//
// Every Laplacian here is the nonnegative one, -trace of the second covariant
// derivative: on the line, Delta f = -f''.

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "bitensionlab/immersion.hpp"
#include "bitensionlab/quadrature.hpp"

namespace bitensionlab {

template <class T>
struct BasicSymTensor2 {
    T s11{};
    T s12{};
    T s22{};

    T norm2() const { return s11 * s11 + 2.0 * s12 * s12 + s22 * s22; }
    T trace() const { return s11 + s22; }
};

using SymTensor2 = BasicSymTensor2<double>;

inline double frobenius_distance(const SymTensor2& a, const SymTensor2& b) {
    return std::sqrt(SymTensor2{a.s11 - b.s11, a.s12 - b.s12, a.s22 - b.s22}.norm2());
}

/// Frame components of a rank-2 real tensor given in coordinates.
inline SymTensor2 sym_in_frame(const PointJets& pj, const TensorJets& t) {
    const auto v = pj.in_frame(t);
    return {v[0], 0.5 * (v[1] + v[2]), v[3]};
}

inline std::vector<double> values_of(const TensorJets& t) {
    std::vector<double> out;
    out.reserve(t.c.size());
    for (const auto& j : t.c) out.push_back(j.value());
    return out;
}

struct BienergyBundle {
    std::vector<double> tau;                      // tension field, ambient vector
    std::optional<std::vector<double>> tau2;      // bitension (order >= 4)
    std::optional<SymTensor2> S2;                 // order >= 3
    std::optional<std::array<double, 2>> divS2;   // on X1, X2 (order >= 4)
    double normtau2 = 0.0;
    double e2_density = 0.0;                      // |tau|^2 / 2
};

inline std::vector<double> tension_at(const PointJets& pj) { return values_of(pj.tension()); }
inline std::vector<double> tension_at(const Immersion& imm, Point2 p, int order = 2) {
    return tension_at(PointJets(imm, p, order));
}

inline std::vector<double> bitension_at(const PointJets& pj) { return values_of(pj.bitension()); }
inline std::vector<double> bitension_at(const Immersion& imm, Point2 p, int order = 4) {
    return bitension_at(PointJets(imm, p, order));
}

inline SymTensor2 s2_at(const PointJets& pj) { return sym_in_frame(pj, pj.s2()); }
inline SymTensor2 s2_at(const Immersion& imm, Point2 p, int order = 3) { return s2_at(PointJets(imm, p, order)); }

inline SymTensor2 t_tensor_at(const PointJets& pj) { return sym_in_frame(pj, pj.t_tensor()); }
inline SymTensor2 t_tensor_at(const Immersion& imm, Point2 p, int order = 3) {
    return t_tensor_at(PointJets(imm, p, order));
}

inline std::array<double, 2> div_s2_at(const PointJets& pj) {
    const auto v = pj.in_frame(pj.div_s2());
    return {v[0], v[1]};
}
inline std::array<double, 2> div_s2_at(const Immersion& imm, Point2 p, int order = 4) {
    return div_s2_at(PointJets(imm, p, order));
}

/// <dphi(X_i), tau_2> for i = 1, 2: the right-hand side of the Hilbert identity.
inline std::array<double, 2> dphi_dot_tau2_at(const PointJets& pj) {
    const auto t2 = bitension_at(pj);
    std::array<double, 2> out{};
    const auto& E = pj.frame();
    for (int p = 0; p < 2; ++p) {
        std::vector<double> x(static_cast<std::size_t>(pj.dim()), 0.0);
        for (int k = 0; k < 2; ++k)
            for (int a = 0; a < pj.dim(); ++a)
                x[static_cast<std::size_t>(a)] += E[static_cast<std::size_t>(p)][static_cast<std::size_t>(k)] * pj.dphi().at(static_cast<std::size_t>(k), a).value();
        out[static_cast<std::size_t>(p)] = pj.inner_value(x, t2);
    }
    return out;
}

inline SymTensor2 rough_laplacian_s2_at(const PointJets& pj) { return sym_in_frame(pj, pj.rough_laplacian_s2()); }
inline SymTensor2 rough_laplacian_s2_at(const Immersion& imm, Point2 p, int order = 5) {
    return rough_laplacian_s2_at(PointJets(imm, p, order));
}

/// A rank-2 tensor field given by coordinate component expressions
/// (S_xx, S_xy, S_yy in x and y), as jets at `order`.
inline TensorJets tensor_field(const PointJets& pj, const std::array<CompiledExpr, 3>& comps, int order) {
    const Point2 p = pj.point();
    const std::array<Jet, 2> xy = {Jet::coordinate(0, order, p), Jet::coordinate(1, order, p)};
    TensorJets t = TensorJets::zeros(2, 1, order, p);
    t.at(0) = comps[0].eval(xy, order, p);
    t.at(1) = comps[1].eval(xy, order, p);
    t.at(2) = t.at(1);
    t.at(3) = comps[2].eval(xy, order, p);
    return t;
}

inline std::array<CompiledExpr, 3> compile_tensor_field(const std::array<Expr, 3>& comps) {
    const std::vector<std::string> slots = {"x", "y"};
    return {CompiledExpr(comps[0], slots), CompiledExpr(comps[1], slots), CompiledExpr(comps[2], slots)};
}

/// -trace nabla^2 S for any coordinate tensor field S (needs order >= 2).
inline TensorJets rough_laplacian(const PointJets& pj, const TensorJets& s) {
    return pj.trace(pj.covariant(pj.covariant(s))).scaled(-1.0);
}

/// <A, B> = g^{ik} g^{jl} A_ij B_kl for rank-2 tensors, as a value.
inline double tensor_inner_value(const PointJets& pj, const TensorJets& a, const TensorJets& b) {
    const auto fa = pj.in_frame(a);
    const auto fb = pj.in_frame(b);
    double s = 0.0;
    for (std::size_t k = 0; k < fa.size(); ++k) s += fa[k] * fb[k];
    return s;
}

struct ScalarCalculus {
    std::array<double, 2> grad{};  // df(X1), df(X2)
    SymTensor2 hess;               // (nabla df)(X_p, X_q)
    double laplacian = 0.0;        // -trace Hess f
};

/// f must carry two more orders than the values wanted.
inline ScalarCalculus scalar_calculus_at(const PointJets& pj, const Jet& f) {
    detail::require_order(f.order(), 2, "Hessian");
    ScalarCalculus out;
    const TensorJets df = pj.covariant(pj.scalar(f));
    const auto g = pj.in_frame(df);
    out.grad = {g[0], g[1]};
    const TensorJets h = pj.covariant(df);
    out.hess = sym_in_frame(pj, h);
    out.laplacian = -out.hess.trace();
    return out;
}

inline BienergyBundle bienergy_at(const PointJets& pj) {
    BienergyBundle b;
    b.tau = tension_at(pj);
    b.normtau2 = pj.inner_value(b.tau, b.tau);
    b.e2_density = 0.5 * b.normtau2;
    if (pj.order() >= 3) b.S2 = s2_at(pj);
    if (pj.order() >= 4) {
        b.tau2 = bitension_at(pj);
        b.divS2 = div_s2_at(pj);
    }
    return b;
}

/// E_2 = 1/2 integral of |tau|^2 v_g.
inline double bienergy_total(const Immersion& imm, const QuadratureGrid& grid) {
    return integrate_chart(imm, grid, 2, [](const PointJets& pj) { return 0.5 * pj.norm2(pj.tension()).value(); });
}

inline double bienergy_total(const Immersion& imm, int nx = 64, int ny = 64) {
    return bienergy_total(imm, QuadratureGrid::for_domain(imm.domain(), nx, ny));
}

}  // namespace bitensionlab
