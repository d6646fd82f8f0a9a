// Acceptance run: one PASS/FAIL line per criterion, each followed by the
// measured numbers it was decided on. Exit status is nonzero if any fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bitensionlab/catalog.hpp"
#include "bitensionlab/runner.hpp"
#include "bitensionlab/scan.hpp"
#include "test_support.hpp"

using namespace bitensionlab;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        detail << "\n      " << (ok ? "ok   " : "FAIL ") << what;
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

ExampleInstance sphere_s3(double r) { return instantiate_example("small-sphere-S3", {{"r", r}}); }
ExampleInstance biharmonic_sphere() { return sphere_s3(1.0 / std::sqrt(2.0)); }
ExampleInstance clifford_s4() { return instantiate_example("clifford-torus-S4"); }

std::vector<ExampleInstance> random_corpus() {
    std::vector<ExampleInstance> out;
    for (double spherical : {0.0, 1.0})
        for (int seed = 1; seed <= 10; ++seed)
            out.push_back(instantiate_example("perturbed-random", {{"seed", double(seed)}, {"spherical", spherical}}));
    return out;
}

std::vector<ExampleInstance> immersion_corpus() {
    std::vector<ExampleInstance> out;
    for (const auto& spec : example_registry()) out.push_back(spec.instantiate());
    out.push_back(sphere_s3(0.6));
    for (auto& inst : random_corpus()) out.push_back(std::move(inst));
    return out;
}

Outcome criterion1() {
    Outcome o;
    for (const auto& inst : {biharmonic_sphere(), clifford_s4()}) {
        const double v = check_tau2(*inst.immersion).max_value("norm_tau2");
        o.require(v <= 1e-7, inst.name + " max ||tau_2|| = " + fmt(v) + " <= 1e-7");
    }
    for (const auto& inst : {instantiate_example("unit-sphere-R3"), sphere_s3(0.6)}) {
        const double v = check_tau2(*inst.immersion).max_value("norm_tau2");
        o.require(v >= 1e-2, inst.label + " max ||tau_2|| = " + fmt(v) + " >= 1e-2");
    }
    return o;
}

Outcome criterion2() {
    Outcome o;
    CheckOptions opt;
    opt.nx = opt.ny = 12;
    const Family family = [](double r) { return sphere_s3(r).immersion; };
    const ScanResult s = scan_family(family, 0.3, 0.999, 64, scan_residual("tau2", opt));
    bool found = false;
    for (const auto& m : s.minima) {
        if (!m.below_tolerance || m.at_boundary) continue;
        found = true;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.10f", m.param);
        o.require(std::abs(m.param - 0.7071068) <= 1e-6,
                  std::string("interior minimum at r = ") + buf + " (residual " + fmt(m.residual) + "), |r - 0.7071068| <= 1e-6");
    }
    o.require(found, "an interior minimum below 1e-7 exists");
    return o;
}

Outcome criterion3() {
    Outcome o;
    double hil = 0.0;
    double lem = 0.0;
    int n = 0;
    for (const auto& inst : random_corpus()) {
        hil = std::max(hil, check_hilbert(*inst.immersion).max_value("absolute"));
        lem = std::max(lem, check_lemma(*inst.immersion).max_value("absolute"));
        ++n;
    }
    o.require(n == 20, std::to_string(n) + " random immersions (10 in R^3, 10 in S^3)");
    o.require(hil <= 1e-7, "max Hilbert residual " + fmt(hil) + " <= 1e-7");
    o.require(lem <= 1e-7, "max commutation residual " + fmt(lem) + " <= 1e-7");
    return o;
}

Outcome criterion4() {
    Outcome o;
    for (const auto& inst : {biharmonic_sphere(), clifford_s4()}) {
        const double v = check_prop2(*inst.immersion).max_value("absolute");
        o.require(v <= 1e-7, inst.name + " Frobenius residual " + fmt(v) + " <= 1e-7");
    }
    const double ctl = check_prop2(*sphere_s3(0.6).immersion).max_value("absolute");
    o.require(ctl >= 1e-2, "small sphere r = 0.6 residual " + fmt(ctl) + " >= 1e-2");
    return o;
}

Outcome criterion5() {
    Outcome o;
    CheckOptions opt;
    opt.jet_order = 3;
    double worst = 0.0;
    int n = 0;
    for (const auto& inst : immersion_corpus()) {
        worst = std::max(worst, check_s2form(*inst.immersion, opt).max_value("absolute"));
        ++n;
    }
    o.require(worst <= 1e-9, "max ||S_2 + 2|H|^2 g - 4 A_H|| over " + std::to_string(n) + " immersions = " + fmt(worst) + " <= 1e-9");
    return o;
}

Outcome criterion6() {
    Outcome o;
    for (const auto& inst : {biharmonic_sphere(), clifford_s4()}) {
        const auto t = thm1_integrals(*inst.immersion, 64, 64, 5);
        o.require(std::abs(t.I_grad) <= 1e-8, inst.name + " int |nabla S_2|^2 = " + fmt(t.I_grad));
        o.require(std::abs(t.I_curv) <= 1e-8, inst.name + " 2 int K(|S_2|^2 - |tau|^4/2) = " + fmt(t.I_curv));
        o.require(std::abs(t.I_rhs) <= 1e-8, inst.name + " int |d|tau|^2|^2 = " + fmt(t.I_rhs));
    }
    const auto plane = instantiate_example("plane-R3");
    const double gap = parts_identity(*plane.immersion, {parse_expr("sin(x)*cos(y)"), parse_expr("cos(2*x + y)"), parse_expr("exp(sin(y))")},
                                      64, 64);
    o.require(std::abs(gap) <= 1e-6, "flat torus, synthetic tensor: |int <Delta S, S> - int |nabla S|^2| = " + fmt(std::abs(gap)) + " <= 1e-6");
    return o;
}

Outcome criterion7() {
    Outcome o;
    for (const auto& inst : {biharmonic_sphere(), clifford_s4()}) {
        const auto r = check_thm2(*inst.immersion);
        o.require(r.verdict == Verdict::degenerate, inst.name + " classified degenerate (pseudo-umbilical everywhere)");
        o.require(std::abs(r.max_value("D")) <= 1e-8, inst.name + " max |D| = " + fmt(std::abs(r.max_value("D"))) + " <= 1e-8");
        o.require(r.max_value("lambda_gap") <= 1e-8, inst.name + " max |lambda_i - |H|^2| = " + fmt(r.max_value("lambda_gap")) + " <= 1e-8");
        const auto b = check_prop3_bound(*inst.immersion);
        o.require(b.max_value("gap") <= 1e-8, inst.name + " K0 = 1 bound gap " + fmt(b.max_value("gap")) + " <= 1e-8");
        o.require(b.verdict == Verdict::pass, inst.name + " |A_H|^2 <= 2 K0 |H|^2 holds");
    }
    const double ne = check_thm2(*sphere_s3(0.6).immersion).max_value("normal_eq");
    o.require(ne >= 1e-2, "small sphere r = 0.6 normal-equation residual " + fmt(ne) + " >= 1e-2");
    return o;
}

Outcome criterion8() {
    Outcome o;
    const auto cyl = check_thm3(*instantiate_example("cylinder-R3").immersion);
    o.require(cyl.max_value("absolute") <= 1e-8, "cylinder Cauchy-Riemann residual " + fmt(cyl.max_value("absolute")) + " <= 1e-8");
    o.require(cyl.summary.at("min_abs_f") > 1e-3, "cylinder |f| = " + fmt(cyl.summary.at("min_abs_f")) + " is nonzero");
    for (const auto& inst : {instantiate_example("small-sphere-S3-isothermal"), clifford_s4()}) {
        const auto r = check_thm3(*inst.immersion);
        o.require(r.max_value("absolute") <= 1e-8, inst.name + " Cauchy-Riemann residual " + fmt(r.max_value("absolute")) + " <= 1e-8");
        o.require(r.summary.at("max_abs_f") <= 1e-9, inst.name + " max |f| = " + fmt(r.summary.at("max_abs_f")) + " <= 1e-9");
    }
    bool rejected = false;
    try {
        (void)check_thm3(*instantiate_example("unit-sphere-R3").immersion);
    } catch (const Error& e) {
        rejected = e.code() == Errc::not_isothermal;
    }
    o.require(rejected, "polar chart of the round sphere rejected with NotIsothermal");
    return o;
}

Outcome criterion9() {
    Outcome o;
    double min_q = INFINITY;
    int points = 0;
    int mismatched = 0;
    for (const auto& inst : immersion_corpus()) {
        for (const Point2& p : midpoint_grid(inst.immersion->domain(), 24, 24)) {
            const RemarkOneValues v = remark1_at(PointJets(*inst.immersion, p, 3));
            min_q = std::min(min_q, v.quantity);
            if ((std::abs(v.quantity) <= 1e-8) != (v.pseudo_umbilic <= 1e-8)) ++mismatched;
            ++points;
        }
    }
    o.require(min_q >= -1e-10, "min 2|S_2|^2 - |tau|^4 over " + std::to_string(points) + " points = " + fmt(min_q) + " >= -1e-10");
    o.require(mismatched == 0, std::to_string(mismatched) + " points where equality and pseudo-umbilicity disagree");
    return o;
}

Outcome criterion10() {
    Outcome o;
    {
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> coord(-1.0, 1.0);
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const auto r = testing::random_expression(rng, 3);
            const double u = coord(rng);
            const double v = coord(rng);
            const Jet j = eval_expr(parse_expr(r.text), {{"u", Jet::coordinate(0, 2, {u, v})}, {"v", Jet::coordinate(1, 2, {u, v})}});
            for (auto [a, b] : {std::pair{1, 0}, std::pair{0, 1}, std::pair{2, 0}, std::pair{1, 1}, std::pair{0, 2}}) {
                const double fd = testing::richardson_derivative(r.eval, u, v, a, b);
                worst = std::max(worst, std::abs(j.derivative(a, b) - fd) / std::max(1.0, std::abs(fd)));
            }
        }
        o.require(worst <= 1e-8, "100 random expressions: worst relative jet vs Richardson gap " + fmt(worst) + " <= 1e-8");
    }
    {
        struct Case {
            AmbientManifold m;
            double k;
            double chart;
        };
        const std::vector<Case> cases = {{AmbientManifold::euclidean(3), 0.0, 3.0},  {AmbientManifold::sphere(3, 1.0), 1.0, 1.5},
                                         {AmbientManifold::sphere(4, 1.0), 1.0, 1.5}, {AmbientManifold::sphere(3, 2.0), 0.25, 3.0},
                                         {AmbientManifold::hyperbolic(3, 1.0), -1.0, 0.5}, {AmbientManifold::hyperbolic(2, 2.0), -0.25, 1.0}};
        std::mt19937_64 rng(7);
        double worst = 0.0;
        for (const auto& c : cases) {
            const int n = c.m.dim();
            std::uniform_real_distribution<double> d(-1.0, 1.0);
            for (int k = 0; k < 10; ++k) {
                std::vector<double> u(static_cast<std::size_t>(n)), x(u.size()), y(u.size());
                for (auto& t : u) t = d(rng) * c.chart / std::sqrt(double(n));
                for (auto& t : x) t = d(rng);
                for (auto& t : y) t = d(rng);
                worst = std::max(worst, std::abs(curvature_at(c.m, u).sectional(x, y) - c.k));
            }
        }
        o.require(worst <= 1e-9, "built-in ambients: worst sectional curvature error " + fmt(worst) + " <= 1e-9");
    }
    for (const auto& spec : example_registry()) {
        const auto inst = spec.instantiate();
        if (!inst.immersion->domain().compact()) continue;
        const double total = integrate_chart(*inst.immersion, QuadratureGrid::for_domain(inst.immersion->domain(), 64, 64), 4,
                                             [](const PointJets& pj) { return geometry_at(pj).K; });
        const double expect = 2.0 * M_PI * inst.immersion->domain().euler_characteristic();
        o.require(std::abs(total - expect) <= 1e-8,
                  inst.name + " int K = " + fmt(total) + " vs " + fmt(expect) + " (gap " + fmt(std::abs(total - expect)) + ")");
    }
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"biharmonic instances and controls (||tau_2||)", criterion1},
        {"biharmonic radius recovery by scan", criterion2},
        {"universal identities on 20 random immersions", criterion3},
        {"rough Laplacian formula for S_2 on surfaces", criterion4},
        {"closed form of S_2 for immersed surfaces", criterion5},
        {"integral identity on closed biharmonic surfaces", criterion6},
        {"CMC structure: degenerate branch and shape operator bound", criterion7},
        {"Hopf differential machinery", criterion8},
        {"nonnegativity of 2|S_2|^2 - |tau|^4", criterion9},
        {"kernel validation", criterion10},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        bool pass = false;
        std::string detail;
        try {
            const Outcome o = criteria[i].second();
            pass = o.pass;
            detail = o.detail.str();
        } catch (const std::exception& e) {
            detail = std::string("\n      FAIL error: ") + e.what();
        }
        if (!pass) ++failed;
        std::printf("criterion %2zu: %s  %s%s\n", i + 1, pass ? "PASS" : "FAIL", criteria[i].first.c_str(), detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
    return failed == 0 ? 0 : 1;
}
