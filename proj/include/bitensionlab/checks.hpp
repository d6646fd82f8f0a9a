#pragma once

// Identity checkers. Each one evaluates both sides of an identity through the
// jet pipeline, on a midpoint sample grid (pointwise identities) or a
// quadrature grid (integral identities), and reduces to a ResidualReport.
//
// Tolerances are relative to the size of the identity: a point passes when
// |lhs - rhs| <= tol * max(1, largest term). The reported residual is already
// divided by max(1, largest term), so verdict = pass iff max_residual <= tolerance.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "bitensionlab/bienergy.hpp"
#include "bitensionlab/catalog.hpp"
#include "bitensionlab/immersion.hpp"
#include "bitensionlab/parallel.hpp"
#include "bitensionlab/quadrature.hpp"

namespace bitensionlab {

enum class Verdict { pass, fail, degenerate, skipped };

constexpr std::string_view verdict_name(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::degenerate: return "degenerate";
        case Verdict::skipped: return "skipped";
    }
    return "unknown";
}

struct PointResidual {
    Point2 p;
    double residual = 0.0;                // scaled, compared against the tolerance
    std::map<std::string, double> values;  // named ingredients, raw
};

struct ResidualReport {
    std::string check;
    std::string example;
    std::string grid;
    int jet_order = 0;
    double tolerance = 0.0;
    double max_residual = 0.0;
    double mean_residual = 0.0;
    Verdict verdict = Verdict::skipped;
    std::vector<PointResidual> points;
    std::map<std::string, double> summary;
    std::string note;

    bool ok() const { return verdict != Verdict::fail; }

    /// Largest raw value of a named per-point ingredient (NaN if absent everywhere).
    double max_value(const std::string& key) const {
        double m = std::nan("");
        for (const auto& pt : points) {
            auto it = pt.values.find(key);
            if (it != pt.values.end() && !(it->second <= m)) m = it->second;
        }
        return m;
    }
};

struct CheckOptions {
    int nx = 24;  // pointwise sample grid
    int ny = 24;
    int qx = 64;  // quadrature nodes per axis
    int qy = 64;
    int jet_order = 5;
    double tol_factor = 1.0;
    double pointwise_tol = 1e-7;
    double quadrature_tol = 1e-6;
    double eps_mu = 1e-6;  // times (1 + |H|^2)
    double k0 = 1.0;
    bool convergence_guard = true;

    double pointwise() const { return pointwise_tol * tol_factor; }
    double quadrature() const { return quadrature_tol * tol_factor; }
};

/// Minimum jet order of each named check.
inline int check_min_order(std::string_view check) {
    if (check == "prop3") return 2;
    if (check == "s2form" || check == "lemma") return 3;
    if (check == "tau2" || check == "hilbert" || check == "thm1" || check == "thm3") return 4;
    if (check == "prop2" || check == "thm2") return 5;
    fail(Errc::bad_parameter, "unknown check '" + std::string(check) + "'");
}

inline const std::vector<std::string>& check_names() {
    static const std::vector<std::string> names = {"tau2", "hilbert", "lemma", "prop2", "thm1",
                                                   "thm2", "thm3",    "prop3", "s2form"};
    return names;
}

/// One-line statement of what each check measures.
inline std::string_view check_description(std::string_view check) {
    if (check == "tau2") return "bitension tau_2 = trace nabla^2 tau - trace R(dphi, tau) dphi vanishes pointwise";
    if (check == "hilbert") return "div S_2 + <dphi, tau_2> = 0 for every map, biharmonic or not";
    if (check == "lemma")
        return "(nabla^2 dphi)(X,Y,Z) - (nabla^2 dphi)(Z,Y,X) = R(X,Z)dphi(Y) - dphi(R^M(X,Z)Y) for all frame triples";
    if (check == "prop2") return "rough Laplacian of S_2 = -2K S_2 + Hess|tau|^2 + (K|tau|^2 + Delta|tau|^2) g for biharmonic maps";
    if (check == "thm1")
        return "closed surfaces: integral |nabla S_2|^2 + 2K(|S_2|^2 - |tau|^4/2) - |d|tau|^2|^2 vanishes for biharmonic maps, "
               "plus the integration-by-parts ingredients";
    if (check == "thm2")
        return "biharmonic CMC surfaces: lambda_{1,2} = |H|^2 +- sqrt(D/2), D > 0, Delta ln D = -4K, Gauss form, "
               "Delta ln mu = -2K away from pseudo-umbilical points; normal equation everywhere";
    if (check == "thm3") return "isothermal chart: d/dzbar <B(dz,dz), H> = (A + iB)/4, holomorphic exactly when |H| is constant";
    if (check == "prop3") return "|A_H|^2 <= 2 K0 |H|^2 for biharmonic CMC surfaces in ambients with sectional curvature <= K0";
    if (check == "s2form") return "S_2 = -2|H|^2 g + 4 A_H for immersed surfaces";
    fail(Errc::bad_parameter, "unknown check '" + std::string(check) + "'");
}

namespace detail {

inline double scaled(double raw, double scale) { return raw / std::max(1.0, scale); }

inline double euclid(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

/// Per-point outcome before reduction.
struct Sample {
    double residual = 0.0;  // scaled
    std::map<std::string, double> values;
    bool degenerate = false;
};

inline std::string grid_label(int nx, int ny) { return std::to_string(nx) + "x" + std::to_string(ny); }

inline void reduce(ResidualReport& r, bool all_degenerate) {
    std::vector<double> res;
    res.reserve(r.points.size());
    r.max_residual = 0.0;
    for (const auto& pt : r.points) {
        res.push_back(pt.residual);
        // NaN counts as a failure, never as a pass
        if (!(pt.residual <= r.max_residual)) r.max_residual = std::isnan(pt.residual) ? INFINITY : pt.residual;
    }
    r.mean_residual = res.empty() ? 0.0 : stable_sum(res) / static_cast<double>(res.size());
    if (!(r.max_residual <= r.tolerance)) {
        r.verdict = Verdict::fail;
    } else {
        r.verdict = all_degenerate && !r.points.empty() ? Verdict::degenerate : Verdict::pass;
    }
}

template <class F>
ResidualReport run_pointwise(std::string check, const Immersion& imm, const CheckOptions& opt, F&& sample) {
    detail::require_order(opt.jet_order, check_min_order(check), check);
    ResidualReport r;
    r.check = std::move(check);
    r.example = imm.label();
    r.grid = grid_label(opt.nx, opt.ny);
    r.jet_order = opt.jet_order;
    r.tolerance = opt.pointwise();
    const auto pts = midpoint_grid(imm.domain(), opt.nx, opt.ny);
    auto samples = parallel_map(pts.size(), [&](std::size_t k) {
        const PointJets pj(imm, pts[k], opt.jet_order);
        return sample(pj);
    });
    bool all_degenerate = true;
    r.points.reserve(pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k) {
        all_degenerate = all_degenerate && samples[k].degenerate;
        r.points.push_back({pts[k], samples[k].residual, std::move(samples[k].values)});
    }
    reduce(r, all_degenerate);
    return r;
}

inline TensorJets value_tensor(int rank, int width, Point2 p, const std::vector<double>& v) {
    TensorJets t = TensorJets::zeros(rank, width, 0, p);
    for (std::size_t k = 0; k < v.size(); ++k) t.c[k] = Jet(0, v[k], p);
    return t;
}

inline double sym_norm(const SymTensor2& s) { return std::sqrt(s.norm2()); }

inline SymTensor2 sym_combine(std::initializer_list<std::pair<double, SymTensor2>> terms) {
    SymTensor2 out;
    for (const auto& [c, s] : terms) {
        out.s11 += c * s.s11;
        out.s12 += c * s.s12;
        out.s22 += c * s.s22;
    }
    return out;
}

inline const SymTensor2 kIdentity{1.0, 0.0, 1.0};

}  // namespace detail

// ---------------------------------------------------------------------------
// Pointwise identities

/// tau_2 = 0. Terms: trace nabla^2 tau and trace R(dphi, tau) dphi.
inline ResidualReport check_tau2(const Immersion& imm, const CheckOptions& opt = {}) {
    return detail::run_pointwise("tau2", imm, opt, [](const PointJets& pj) {
        const auto t2 = bitension_at(pj);
        const TensorJets lap = pj.trace(pj.nabla2_tension());
        const TensorJets rc = pj.curvature_trace(pj.tension().truncated(lap.order()));
        const double n = std::sqrt(std::max(0.0, pj.inner_value(t2, t2)));
        const auto lv = values_of(lap);
        const auto rv = values_of(rc);
        const double scale = std::max(std::sqrt(std::max(0.0, pj.inner_value(lv, lv))), std::sqrt(std::max(0.0, pj.inner_value(rv, rv))));
        detail::Sample s;
        s.residual = detail::scaled(n, scale);
        s.values = {{"norm_tau2", n}, {"scale", scale}};
        return s;
    });
}

/// div S_2 = -<dphi, tau_2>, for every map (div S(Y) = sum_i (nabla_{X_i} S)(X_i, Y)).
inline ResidualReport check_hilbert(const Immersion& imm, const CheckOptions& opt = {}) {
    return detail::run_pointwise("hilbert", imm, opt, [](const PointJets& pj) {
        const auto div = div_s2_at(pj);
        const auto rhs = dphi_dot_tau2_at(pj);
        const std::array<double, 2> diff = {div[0] + rhs[0], div[1] + rhs[1]};
        const double lhs_n = detail::euclid(div);
        const double rhs_n = detail::euclid(rhs);
        const double raw = detail::euclid(diff);
        detail::Sample s;
        s.residual = detail::scaled(raw, std::max(lhs_n, rhs_n));
        s.values = {{"absolute", raw}, {"div_s2", lhs_n}, {"dphi_tau2", rhs_n}};
        return s;
    });
}

/// Residual tensor of the commutation identity, all surface indices in the
/// frame, at (X, Y, Z) -> ((X*2+Y)*2+Z)*n + a. Needs jet order >= 3.
inline std::vector<double> commutation_residuals(const PointJets& pj) {
    const int n = pj.dim();
    const TensorJets& N = pj.nabla_hessian_map();
    const auto& Rm = pj.surface_riemann();
    std::vector<double> raw(static_cast<std::size_t>(8 * n), 0.0);
    std::vector<double> dp(static_cast<std::size_t>(2 * n));
    for (std::size_t k = 0; k < dp.size(); ++k) dp[k] = pj.dphi().c[k].value();
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int z = 0; z < 2; ++z) {
                const std::size_t I = static_cast<std::size_t>((x * 2 + y) * 2 + z);
                const std::size_t J = static_cast<std::size_t>((z * 2 + y) * 2 + x);
                const std::span<const double> dx(dp.data() + x * n, static_cast<std::size_t>(n));
                const std::span<const double> dy(dp.data() + y * n, static_cast<std::size_t>(n));
                const std::span<const double> dz(dp.data() + z * n, static_cast<std::size_t>(n));
                const auto rn = pj.ambient_curvature_apply(dx, dz, dy);
                for (int a = 0; a < n; ++a) {
                    double v = N.at(I, a).value() - N.at(J, a).value() - rn[static_cast<std::size_t>(a)];
                    for (int l = 0; l < 2; ++l)
                        v += dp[static_cast<std::size_t>(l * n + a)] * Rm[static_cast<std::size_t>(((l * 2 + y) * 2 + x) * 2 + z)].value();
                    raw[I * static_cast<std::size_t>(n) + static_cast<std::size_t>(a)] = v;
                }
            }
    return pj.in_frame(detail::value_tensor(3, n, pj.point(), raw));
}

/// |(nabla^2 dphi)(X,Y,Z) - (nabla^2 dphi)(Z,Y,X) - R(X,Z)dphi(Y) + dphi(R^M(X,Z)Y)|
/// for frame indices X, Y, Z.
inline double check_commutation(const PointJets& pj, int x, int y, int z) {
    if (x < 0 || x > 1 || y < 0 || y > 1 || z < 0 || z > 1) fail(Errc::bad_parameter, "frame index must be 0 or 1");
    const int n = pj.dim();
    const auto r = commutation_residuals(pj);
    const std::size_t I = static_cast<std::size_t>((x * 2 + y) * 2 + z) * static_cast<std::size_t>(n);
    std::vector<double> v(r.begin() + static_cast<std::ptrdiff_t>(I), r.begin() + static_cast<std::ptrdiff_t>(I) + n);
    return std::sqrt(std::max(0.0, pj.inner_value(v, v)));
}

inline double check_commutation(const Immersion& imm, Point2 p, int x, int y, int z, int order = 5) {
    return check_commutation(PointJets(imm, p, order), x, y, z);
}

/// Commutation identity for all eight index triples; per point the worst one.
inline ResidualReport check_lemma(const Immersion& imm, const CheckOptions& opt = {}) {
    return detail::run_pointwise("lemma", imm, opt, [](const PointJets& pj) {
        const int n = pj.dim();
        const auto r = commutation_residuals(pj);
        double worst = 0.0;
        for (std::size_t I = 0; I < 8; ++I) {
            std::vector<double> v(r.begin() + static_cast<std::ptrdiff_t>(I) * n, r.begin() + static_cast<std::ptrdiff_t>(I + 1) * n);
            worst = std::max(worst, std::sqrt(std::max(0.0, pj.inner_value(v, v))));
        }
        const auto third = pj.in_frame(pj.nabla_hessian_map());
        double scale = 0.0;
        for (std::size_t I = 0; I < 8; ++I) {
            std::vector<double> v(third.begin() + static_cast<std::ptrdiff_t>(I) * n, third.begin() + static_cast<std::ptrdiff_t>(I + 1) * n);
            scale = std::max(scale, std::sqrt(std::max(0.0, pj.inner_value(v, v))));
        }
        detail::Sample s;
        s.residual = detail::scaled(worst, scale);
        s.values = {{"absolute", worst}, {"scale", scale}};
        return s;
    });
}

/// Rough Laplacian of S_2 against -2K S_2 + Hess|tau|^2 + (K|tau|^2 + Delta|tau|^2) g.
inline ResidualReport check_prop2(const Immersion& imm, const CheckOptions& opt = {}) {
    return detail::run_pointwise("prop2", imm, opt, [](const PointJets& pj) {
        const SymTensor2 lap = rough_laplacian_s2_at(pj);
        const SymTensor2 s2 = s2_at(pj);
        const double K = pj.gauss_curvature().value();
        const Jet f = pj.norm2(pj.tension());
        const ScalarCalculus sc = scalar_calculus_at(pj, f);
        const double f0 = f.value();
        const double gcoef = K * f0 + sc.laplacian;
        const SymTensor2 diff = detail::sym_combine({{1.0, lap}, {2.0 * K, s2}, {-1.0, sc.hess}, {-gcoef, detail::kIdentity}});
        const double raw = detail::sym_norm(diff);
        const double scale = std::max({detail::sym_norm(lap), 2.0 * std::abs(K) * detail::sym_norm(s2), detail::sym_norm(sc.hess),
                                       std::abs(gcoef) * std::sqrt(2.0)});
        const auto t2 = bitension_at(pj);
        detail::Sample s;
        s.residual = detail::scaled(raw, scale);
        s.values = {{"absolute", raw}, {"scale", scale}, {"norm_tau2", std::sqrt(std::max(0.0, pj.inner_value(t2, t2)))}};
        return s;
    });
}

/// S_2 = -2|H|^2 g + 4 A_H for immersed surfaces.
inline ResidualReport check_s2form(const Immersion& imm, const CheckOptions& opt = {}) {
    imm.require_immersion("S_2 closed form");
    return detail::run_pointwise("s2form", imm, opt, [](const PointJets& pj) {
        const SymTensor2 s2 = s2_at(pj);
        const PointGeometry geo = geometry_at(pj);
        const SymTensor2 ah{geo.A_H[0], geo.A_H[1], geo.A_H[2]};
        const SymTensor2 diff = detail::sym_combine({{1.0, s2}, {2.0 * geo.normH2, detail::kIdentity}, {-4.0, ah}});
        const double raw = detail::sym_norm(diff);
        const double scale = std::max({detail::sym_norm(s2), 2.0 * std::sqrt(2.0) * geo.normH2, 4.0 * detail::sym_norm(ah)});
        detail::Sample s;
        s.residual = detail::scaled(raw, scale);
        s.values = {{"absolute", raw}, {"scale", scale}};
        return s;
    });
}

/// max over the grid of |A_H|^2 - 2 K0 |H|^2 (signed: it is a bound).
inline ResidualReport check_prop3_bound(const Immersion& imm, const CheckOptions& opt = {}) {
    if (!(opt.k0 > 0.0)) fail(Errc::bad_parameter, "the curvature bound K0 must be positive");
    imm.require_immersion("shape operator bound");
    const double k0 = opt.k0;
    return detail::run_pointwise("prop3", imm, opt, [k0](const PointJets& pj) {
        const PointGeometry geo = geometry_at(pj);
        const double a2 = geo.norm_A_H2();
        const double bound = 2.0 * k0 * geo.normH2;
        detail::Sample s;
        s.residual = detail::scaled(a2 - bound, std::max(a2, bound));
        s.values = {{"norm_A_H2", a2}, {"bound", bound}, {"gap", std::abs(a2 - bound)}};
        return s;
    });
}

// ---------------------------------------------------------------------------
// CMC structure

namespace detail {

/// sum_i R^N(X_i, V, X_i, V) as a jet, for an ambient vector field V.
inline Jet trace_sectional(const PointJets& pj, const TensorJets& v) {
    const int o = std::min(v.order(), pj.curvature_order());
    const int n = pj.dim();
    const TensorJets dp = pj.dphi().truncated(o);
    const TensorJets gi = pj.inverse_metric().truncated(o);
    const TensorJets vl = v.truncated(o);
    const Point2 p = pj.point();
    std::vector<Jet> w(static_cast<std::size_t>(n * n), Jet(o, 0.0, p));
    for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    w[static_cast<std::size_t>(a * n + c)].add_product(gi.at(static_cast<std::size_t>(i * 2 + j)),
                                                                       dp.at(static_cast<std::size_t>(i), a) * dp.at(static_cast<std::size_t>(j), c));
    // R(X, V)V component e, then paired with X through h
    Jet out(o, 0.0, p);
    const auto& amb = pj.ambient();
    for (int e = 0; e < n; ++e)
        for (int b = 0; b < n; ++b)
            for (int d = 0; d < n; ++d) {
                const Jet vv = vl.at(0, b) * vl.at(0, d);
                for (int c = 0; c < n; ++c) {
                    const Jet& r = amb.riem(e, b, c, d);
                    if (r.is_zero()) continue;
                    Jet hw(o, 0.0, p);
                    for (int a = 0; a < n; ++a) {
                        const Jet& h = amb.h(a, e);
                        if (h.is_zero()) continue;
                        hw.add_product(h.truncated(o), w[static_cast<std::size_t>(a * n + c)]);
                    }
                    out.add_product(hw, r.truncated(o) * vv);
                }
            }
    return out;
}

inline std::array<double, 2> frame_gradient(const PointJets& pj, const Jet& f) {
    const auto g = pj.in_frame(pj.covariant(pj.scalar(f)));
    return {g[0], g[1]};
}

}  // namespace detail

/// Structure of biharmonic CMC surfaces: eigenvalues of A_H from D, positivity
/// of D, Delta ln D = -4K, the Gauss form, Delta ln mu = -2K, and the normal
/// part of the biharmonic equation. Skipped when |H| is not constant.
inline ResidualReport check_thm2(const Immersion& imm, const CheckOptions& opt = {}) {
    detail::require_order(opt.jet_order, check_min_order("thm2"), "thm2");
    imm.require_immersion("CMC structure");
    const double tol = opt.pointwise();

    // CMC precondition on the sample grid
    const auto pts = midpoint_grid(imm.domain(), opt.nx, opt.ny);
    const auto drift = parallel_map(pts.size(), [&](std::size_t k) {
        const PointJets pj(imm, pts[k], 3);
        const Jet h2 = pj.norm2(pj.mean_curvature());
        return detail::scaled(detail::euclid(detail::frame_gradient(pj, h2)), h2.value());
    });
    const double worst_drift = *std::max_element(drift.begin(), drift.end());
    if (worst_drift > tol) {
        ResidualReport r;
        r.check = "thm2";
        r.example = imm.label();
        r.grid = detail::grid_label(opt.nx, opt.ny);
        r.jet_order = opt.jet_order;
        r.tolerance = tol;
        r.verdict = Verdict::skipped;
        r.summary["cmc_drift"] = worst_drift;
        r.note = "NotCMC: |d|H|^2| reaches " + detail::format_double(worst_drift);
        return r;
    }

    const double eps_mu = opt.eps_mu;
    ResidualReport rep = detail::run_pointwise("thm2", imm, opt, [eps_mu](const PointJets& pj) {
        const PointGeometry geo = geometry_at(pj);
        const TensorJets H = pj.mean_curvature();
        const Jet h2 = pj.norm2(H);
        const double H2 = geo.normH2;

        const Jet dprime = detail::trace_sectional(pj, H);
        const TensorJets dh = pj.normal_nabla_h();
        const int od = dh.order();
        const TensorJets gi = pj.inverse_metric().truncated(od);
        Jet dh2(od, 0.0, pj.point());
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                dh2.add_product(gi.at(static_cast<std::size_t>(i * 2 + j)),
                                pj.inner(pj.vec(dh, static_cast<std::size_t>(i)), pj.vec(dh, static_cast<std::size_t>(j)), od));
        const Jet h2l = h2.truncated(od);
        const Jet D = dprime.truncated(od) - dh2 - 2.0 * h2l * h2l;

        const double Dv = D.value();
        const double Dp = dprime.value();
        const double a2 = geo.norm_A_H2();
        const double K = geo.K;

        detail::Sample s;
        s.values["D"] = Dv;
        s.values["Dprime"] = Dp;
        s.values["mu"] = geo.mu;
        s.values["lambda_gap"] = std::max(std::abs(geo.lambda1 - H2), std::abs(geo.lambda2 - H2));
        const double normal_eq = dh2.value() + a2 - Dp;
        s.values["normal_eq"] = normal_eq;
        double worst = detail::scaled(std::abs(normal_eq), std::max({dh2.value(), a2, std::abs(Dp)}));

        if (geo.mu > eps_mu * (1.0 + H2)) {
            const double root = std::sqrt(std::max(Dv, 0.0) / 2.0);
            const double ra = std::max(std::abs(geo.lambda1 - (H2 + root)), std::abs(geo.lambda2 - (H2 - root)));
            s.values["eigen"] = ra;
            worst = std::max(worst, detail::scaled(ra, std::max(std::abs(geo.lambda1), std::abs(geo.lambda2))));
            const double rb = std::max(0.0, -Dv);
            s.values["positivity"] = rb;
            worst = std::max(worst, detail::scaled(rb, std::max(std::abs(Dp), 2.0 * H2 * H2)));
            if (Dv > 0.0 && D.order() >= 2) {
                const double lnD = pj.laplacian(ln(D)).value();
                const double rc = std::abs(lnD + 4.0 * K);
                s.values["laplacian_ln_D"] = rc;
                worst = std::max(worst, detail::scaled(rc, std::max(std::abs(lnD), 4.0 * std::abs(K))));
            }
            const auto x1 = detail::tangent_value(pj, 0);
            const auto x2 = detail::tangent_value(pj, 1);
            const double sec = pj.ambient_r04(x1, x2, x1, x2);
            const double gform = K - 2.0 * H2 + Dp / (2.0 * H2);
            const double rd = std::abs(sec - gform);
            s.values["gauss_form"] = rd;
            worst = std::max(worst, detail::scaled(rd, std::max({std::abs(sec), std::abs(K), 2.0 * H2, std::abs(Dp / (2.0 * H2))})));

            // mu^2 = (tr A_H)^2 - 4 det A_H from coordinate jets of <B_ij, H>
            const TensorJets& B = pj.hessian_map();
            const int ob = B.order();
            const TensorJets gib = pj.inverse_metric().truncated(ob);
            const TensorJets gb = pj.metric().truncated(ob);
            std::array<Jet, 4> a;
            for (std::size_t I = 0; I < 4; ++I) a[I] = pj.inner(pj.vec(B, I), pj.vec(H, 0), ob);
            Jet tr(ob, 0.0, pj.point());
            for (std::size_t I = 0; I < 4; ++I) tr.add_product(gib.at(I), a[I]);
            const Jet det = (a[0] * a[3] - a[1] * a[2]) / (gb.at(0) * gb.at(3) - gb.at(1) * gb.at(2));
            const Jet mu = sqrt(tr * tr - 4.0 * det);
            const double lnmu = pj.laplacian(ln(mu)).value();
            const double re = std::abs(lnmu + 2.0 * K);
            s.values["laplacian_ln_mu"] = re;
            worst = std::max(worst, detail::scaled(re, std::max(std::abs(lnmu), 2.0 * std::abs(K))));
        } else {
            s.degenerate = true;
            const double rD = std::abs(Dv);
            worst = std::max(worst, detail::scaled(rD, std::max(std::abs(Dp), 2.0 * H2 * H2)));
            worst = std::max(worst, detail::scaled(s.values["lambda_gap"], H2));
        }
        s.residual = worst;
        return s;
    });
    rep.summary["cmc_drift"] = worst_drift;
    if (rep.verdict == Verdict::degenerate) rep.note = "pseudo-umbilical at every sample point; only the degenerate branch applies";
    return rep;
}

// ---------------------------------------------------------------------------
// Hopf-type differential

struct HopfValues {
    std::complex<double> f;
    std::complex<double> dzbar_f;
    std::complex<double> rhs;  // (A + iB) / 4
};

/// f = <B(dz, dz), H> and its d/dzbar in an isothermal chart (needs order >= 3).
inline HopfValues hopf_at(const PointJets& pj, double tol) {
    const TensorJets& B = pj.hessian_map();
    const int o = B.order();
    const double g11 = pj.metric().at(0).value();
    const double g12 = pj.metric().at(1).value();
    const double g22 = pj.metric().at(3).value();
    if (std::abs(g11 - g22) + std::abs(g12) > tol * std::abs(g11)) {
        fail(Errc::not_isothermal, "chart is not isothermal at (" + detail::format_double(pj.point().x) + ", " +
                                       detail::format_double(pj.point().y) + ")");
    }
    const TensorJets H = pj.mean_curvature();
    const Jet h2 = pj.norm2(H);
    const Jet lam2 = pj.metric().at(0).truncated(o);
    const Jet fr = 0.5 * (lam2 * h2 - pj.inner(pj.vec(B, 3), pj.vec(H, 0), o));
    const Jet fi = -0.5 * pj.inner(pj.vec(B, 1), pj.vec(H, 0), o);
    HopfValues out;
    out.f = {fr.value(), fi.value()};
    out.dzbar_f = {0.5 * (fr.partial(0).value() - fi.partial(1).value()), 0.5 * (fr.partial(1).value() + fi.partial(0).value())};
    const double A = -0.5 * g11 * h2.partial(0).value();
    const double Bc = 0.5 * g11 * h2.partial(1).value();
    out.rhs = std::complex<double>(A, Bc) / 4.0;
    return out;
}

/// d/dzbar f = (A + iB)/4; the summary also carries max |d/dzbar f| alone.
inline ResidualReport check_thm3(const Immersion& imm, const CheckOptions& opt = {}) {
    imm.require_immersion("Hopf differential");
    const double tol = opt.pointwise();
    ResidualReport r = detail::run_pointwise("thm3", imm, opt, [tol](const PointJets& pj) {
        const HopfValues hv = hopf_at(pj, tol);
        const double raw = std::abs(hv.dzbar_f - hv.rhs);
        detail::Sample s;
        s.residual = detail::scaled(raw, std::max(std::abs(hv.dzbar_f), std::abs(hv.rhs)));
        s.values = {{"absolute", raw}, {"holomorphic", std::abs(hv.dzbar_f)}, {"abs_f", std::abs(hv.f)}};
        return s;
    });
    r.summary["max_dzbar_f"] = r.max_value("holomorphic");
    r.summary["max_abs_f"] = r.max_value("abs_f");
    double mn = INFINITY;
    for (const auto& pt : r.points) mn = std::min(mn, pt.values.at("abs_f"));
    r.summary["min_abs_f"] = mn;
    return r;
}

// ---------------------------------------------------------------------------
// Integral identities

struct ThmOneIntegrals {
    double I_grad = 0.0;
    double I_curv = 0.0;
    double I_rhs = 0.0;
    double parts_laplacian = 0.0;   // integral <Delta S_2, S_2> - |nabla S_2|^2 (order 5 only)
    double parts_divergence = 0.0;  // integral div S_2(grad |tau|^2, .)
    bool has_laplacian = false;
    double shift = 0.0;             // change under node doubling, when guarded
    double gap() const { return I_grad + I_curv - I_rhs; }
};

namespace detail {

inline std::vector<double> thm1_fields(const PointJets& pj) {
    const TensorJets& S = pj.s2();
    const auto dS = pj.in_frame(pj.nabla_s2());
    double grad2 = 0.0;
    for (double v : dS) grad2 += v * v;
    const SymTensor2 sf = sym_in_frame(pj, S);
    const Jet f = pj.norm2(pj.tension());
    const double tau4 = f.value() * f.value();
    const double K = pj.gauss_curvature().value();
    const double df2 = pj.grad_norm2(f).value();

    // omega_j = g^{ik} S_ij d_k|tau|^2
    const int o = std::min(S.order(), f.order() - 1);
    const TensorJets gi = pj.inverse_metric().truncated(o);
    const std::array<Jet, 2> df = {f.partial(0).truncated(o), f.partial(1).truncated(o)};
    TensorJets omega = TensorJets::zeros(1, 1, o, pj.point());
    for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i)
            for (int k = 0; k < 2; ++k)
                omega.at(static_cast<std::size_t>(j))
                    .add_product(gi.at(static_cast<std::size_t>(i * 2 + k)), S.at(static_cast<std::size_t>(i * 2 + j)).truncated(o) * df[static_cast<std::size_t>(k)]);
    const double divw = pj.trace(pj.covariant(omega)).c.front().value();

    double lap_inner = 0.0;
    if (pj.order() >= 5) {
        const SymTensor2 l = rough_laplacian_s2_at(pj);
        lap_inner = l.s11 * sf.s11 + 2.0 * l.s12 * sf.s12 + l.s22 * sf.s22;
    }
    return {grad2, 2.0 * K * (sf.norm2() - 0.5 * tau4), df2, lap_inner - grad2, divw};
}

}  // namespace detail

inline ThmOneIntegrals thm1_integrals(const Immersion& imm, int qx, int qy, int order, std::optional<double> guard_tol = {}) {
    detail::require_order(order, 4, "thm1");
    ThmOneIntegrals out;
    std::vector<double> v;
    if (guard_tol) {
        const GuardedIntegrals g = integrate_guarded(imm, qx, qy, order, *guard_tol, detail::thm1_fields);
        v = g.values;
        out.shift = g.max_shift;
    } else {
        v = integrate_fields(imm, QuadratureGrid::for_domain(imm.domain(), qx, qy), order, detail::thm1_fields);
    }
    out.I_grad = v[0];
    out.I_curv = v[1];
    out.I_rhs = v[2];
    out.has_laplacian = order >= 5;
    out.parts_laplacian = out.has_laplacian ? v[3] : 0.0;
    out.parts_divergence = v[4];
    return out;
}

/// integral <Delta S, S> - integral |nabla S|^2 for a coordinate tensor field
/// S (components S_xx, S_xy, S_yy in x and y) over a closed domain.
inline double parts_identity(const Immersion& imm, const std::array<Expr, 3>& comps, int qx, int qy, int order = 4) {
    const auto compiled = compile_tensor_field(comps);
    const auto v = integrate_fields(imm, QuadratureGrid::for_domain(imm.domain(), qx, qy), order, [&](const PointJets& pj) {
        const TensorJets S = tensor_field(pj, compiled, 2);
        const TensorJets lap = rough_laplacian(pj, S);
        const auto dS = pj.in_frame(pj.covariant(S));
        double grad2 = 0.0;
        for (double x : dS) grad2 += x * x;
        return std::vector<double>{tensor_inner_value(pj, lap, S.truncated(0)), grad2};
    });
    return v[0] - v[1];
}

/// Integral identity for biharmonic maps of closed surfaces:
/// integral |nabla S_2|^2 + 2K(|S_2|^2 - |tau|^4/2) - |d|tau|^2|^2 = 0,
/// together with the two integration-by-parts ingredients.
inline ResidualReport check_thm1(const Immersion& imm, const CheckOptions& opt = {}) {
    detail::require_order(opt.jet_order, check_min_order("thm1"), "thm1");
    if (!imm.domain().compact()) fail(Errc::not_compact, "integral identity needs a closed surface");
    const double tol = opt.quadrature();
    const ThmOneIntegrals t = thm1_integrals(imm, opt.qx, opt.qy, opt.jet_order, opt.convergence_guard ? std::optional<double>(tol) : std::nullopt);
    ResidualReport r;
    r.check = "thm1";
    r.example = imm.label();
    r.grid = detail::grid_label(opt.qx, opt.qy);
    r.jet_order = opt.jet_order;
    r.tolerance = tol;
    r.summary = {{"I_grad", t.I_grad}, {"I_curv", t.I_curv}, {"I_rhs", t.I_rhs}, {"gap", t.gap()},
                 {"parts_divergence", t.parts_divergence}};
    if (t.has_laplacian) r.summary["parts_laplacian"] = t.parts_laplacian;
    if (opt.convergence_guard) r.summary["refinement_shift"] = t.shift;
    const double scale = std::max({std::abs(t.I_grad), std::abs(t.I_curv), std::abs(t.I_rhs)});
    r.max_residual = detail::scaled(std::max({std::abs(t.gap()), std::abs(t.parts_laplacian), std::abs(t.parts_divergence)}), scale);
    r.mean_residual = r.max_residual;
    r.verdict = r.max_residual <= tol ? Verdict::pass : Verdict::fail;
    if (!t.has_laplacian) r.note = "jet order 4: the rough-Laplacian ingredient needs order 5 and was not evaluated";
    return r;
}

// ---------------------------------------------------------------------------
// Misc pointwise quantities

struct RemarkOneValues {
    double quantity = 0.0;  // 2|S_2|^2 - |tau|^4
    double pseudo_umbilic = 0.0;
};

inline RemarkOneValues remark1_at(const PointJets& pj) {
    const SymTensor2 s = s2_at(pj);
    const double t2 = pj.norm2(pj.tension()).value();
    return {2.0 * s.norm2() - t2 * t2, pseudo_umbilic_residual(geometry_at(pj))};
}

// ---------------------------------------------------------------------------
// Catalog self-check

struct PointSurvey {
    double norm_tau = 0.0;
    double norm_tau2 = 0.0;
    double cmc_drift = 0.0;  // |d|H|^2|
    double K = 0.0;
    double normH2 = 0.0;
    double pseudo_umbilic = 0.0;
};

inline PointSurvey survey_at(const PointJets& pj) {
    PointSurvey s;
    const auto t = tension_at(pj);
    s.norm_tau = std::sqrt(std::max(0.0, pj.inner_value(t, t)));
    const auto t2 = bitension_at(pj);
    s.norm_tau2 = std::sqrt(std::max(0.0, pj.inner_value(t2, t2)));
    if (!pj.immersion().induced()) {
        // a map with a prescribed domain metric: no extrinsic geometry
        s.K = pj.gauss_curvature().value();
        s.normH2 = s.pseudo_umbilic = s.cmc_drift = std::nan("");
        return s;
    }
    const PointGeometry geo = geometry_at(pj);
    s.K = geo.K;
    s.normH2 = geo.normH2;
    s.pseudo_umbilic = pseudo_umbilic_residual(geo);
    s.cmc_drift = detail::euclid(detail::frame_gradient(pj, pj.norm2(pj.mean_curvature())));
    return s;
}

inline std::vector<PointSurvey> survey(const Immersion& imm, int nx, int ny, int order = 4) {
    const auto pts = midpoint_grid(imm.domain(), nx, ny);
    return parallel_map(pts.size(), [&](std::size_t k) { return survey_at(PointJets(imm, pts[k], order)); });
}

struct ExpectationResult {
    Expectation expected;
    double measured = 0.0;  // max deviation over the grid
    bool holds = false;     // measured <= tolerance
    bool pass = false;
};

inline std::vector<ExpectationResult> verify_expectations(const ExampleInstance& inst, int nx = 12, int ny = 12) {
    const auto pts = survey(*inst.immersion, nx, ny);
    auto worst = [&](auto&& f) {
        double m = 0.0;
        for (const auto& s : pts) {
            const double v = f(s);
            if (!(v <= m)) m = v;  // NaN propagates
        }
        return m;
    };
    std::vector<ExpectationResult> out;
    for (const auto& e : inst.expected) {
        ExpectationResult r;
        r.expected = e;
        const auto& p = e.property;
        const double target = std::holds_alternative<double>(e.value) ? std::get<double>(e.value) : 0.0;
        if (p == "biharmonic") r.measured = worst([](const PointSurvey& s) { return s.norm_tau2; });
        else if (p == "harmonic") r.measured = worst([](const PointSurvey& s) { return s.norm_tau; });
        else if (p == "cmc") r.measured = worst([](const PointSurvey& s) { return s.cmc_drift; });
        else if (p == "pseudo_umbilical") r.measured = worst([](const PointSurvey& s) { return s.pseudo_umbilic; });
        else if (p == "flat") r.measured = worst([](const PointSurvey& s) { return std::abs(s.K); });
        else if (p == "K") r.measured = worst([&](const PointSurvey& s) { return std::abs(s.K - target); });
        else if (p == "normH2") r.measured = worst([&](const PointSurvey& s) { return std::abs(s.normH2 - target); });
        else fail(Errc::bad_parameter, "unknown expected property '" + p + "'");
        r.holds = r.measured <= e.tolerance;
        r.pass = std::holds_alternative<bool>(e.value) ? r.holds == std::get<bool>(e.value) : r.holds;
        out.push_back(r);
    }
    return out;
}

}  // namespace bitensionlab
