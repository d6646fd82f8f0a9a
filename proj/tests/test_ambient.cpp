#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "bitensionlab/ambient.hpp"
#include "test_support.hpp"

using namespace bitensionlab;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<double> random_point(std::mt19937_64& rng, int n, double scale) {
    std::uniform_real_distribution<double> d(-scale, scale);
    std::vector<double> u(static_cast<std::size_t>(n));
    for (auto& v : u) v = d(rng);
    return u;
}

// Gamma^a_bc from central differences of metric values (no symbolic derivatives).
std::vector<double> christoffel_by_differences(const AmbientManifold& m, std::vector<double> u, double h = 1e-4) {
    const int n = m.dim();
    auto metric_at = [&](const std::vector<double>& p) {
        std::vector<double> g;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) g.push_back(CompiledExpr(m.metric_expr(a, b), m.coordinate_names()).eval_value(p));
        return g;
    };
    std::vector<std::vector<double>> dg(static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c) {
        auto up = u;
        auto dn = u;
        up[static_cast<std::size_t>(c)] += h;
        dn[static_cast<std::size_t>(c)] -= h;
        const auto gp = metric_at(up);
        const auto gm = metric_at(dn);
        for (std::size_t k = 0; k < gp.size(); ++k) dg[static_cast<std::size_t>(c)].push_back((gp[k] - gm[k]) / (2 * h));
    }
    // inverse of a diagonal or 2x2 metric is enough for these tests
    const auto g = metric_at(u);
    std::vector<double> out(static_cast<std::size_t>(n * n * n), 0.0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                const double ginv = 1.0 / g[static_cast<std::size_t>(a * n + a)];
                auto d = [&](int k, int i, int j) { return dg[static_cast<std::size_t>(k)][static_cast<std::size_t>(i * n + j)]; };
                out[static_cast<std::size_t>((a * n + b) * n + c)] = 0.5 * ginv * (d(b, a, c) + d(c, a, b) - d(a, b, c));
            }
    return out;
}

}  // namespace

TEST_CASE("euclidean space is flat") {
    const auto m = AmbientManifold::euclidean(3);
    const std::vector<double> u = {0.3, -1.0, 2.0};
    for (double g : christoffel_at(m, u)) CHECK(g == 0.0);
    const auto curv = curvature_at(m, u);
    for (double r : curv.riemann_low) CHECK(r == 0.0);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) CHECK(curv.metric[static_cast<std::size_t>(a * 3 + b)] == (a == b ? 1.0 : 0.0));
}

TEST_CASE("round spheres have sectional curvature 1/r^2") {
    std::mt19937_64 rng(1);
    const auto s3 = AmbientManifold::sphere(3, 1.0);
    for (int k = 0; k < 5; ++k) {
        const auto u = random_point(rng, 3, 1.5);
        const auto c = curvature_at(s3, u);
        const auto x = random_point(rng, 3, 1.0);
        const auto y = random_point(rng, 3, 1.0);
        CHECK_THAT(c.sectional(x, y), WithinAbs(1.0, 1e-9));
    }
    const auto s32 = AmbientManifold::sphere(3, 2.0);
    const auto c = curvature_at(s32, std::vector<double>{0.4, 0.1, -0.7});
    CHECK_THAT(c.sectional(std::vector<double>{1, 0, 0}, std::vector<double>{0, 1, 1}), WithinAbs(0.25, 1e-9));
}

TEST_CASE("hyperbolic ball has constant negative curvature") {
    std::mt19937_64 rng(2);
    const auto h2 = AmbientManifold::hyperbolic(2, 2.0);
    for (int k = 0; k < 5; ++k) {
        const auto u = random_point(rng, 2, 1.0);
        CHECK_THAT(curvature_at(h2, u).sectional(std::vector<double>{1, 0}, std::vector<double>{0, 1}), WithinAbs(-0.25, 1e-9));
    }
    CHECK(testing::throws_code([&] { (void)curvature_at(h2, std::vector<double>{2.5, 0.0}); }, Errc::chart_violation));
}

TEST_CASE("sign convention: unit sphere curvature is +1") {
    for (int n : {2, 3, 4, 5}) {
        const auto c = curvature_at(AmbientManifold::sphere(n, 1.0), std::vector<double>(static_cast<std::size_t>(n), 0.2));
        std::vector<double> e0(static_cast<std::size_t>(n), 0.0), e1(static_cast<std::size_t>(n), 0.0);
        e0[0] = 1.0;
        e1[1] = 1.0;
        CHECK(c.sectional(e0, e1) > 0.0);
        CHECK_THAT(c.sectional(e0, e1), WithinAbs(1.0, 1e-9));
    }
}

TEST_CASE("Christoffel symbols") {
    const auto s2 = AmbientManifold::sphere(2, 1.0);
    for (double g : christoffel_at(s2, std::vector<double>{0.0, 0.0})) CHECK_THAT(g, WithinAbs(0.0, 1e-15));

    const auto conf = AmbientManifold::conformal(2, parse_expr("exp(2*u1)"));
    std::mt19937_64 rng(3);
    for (int k = 0; k < 5; ++k) {
        const auto u = random_point(rng, 2, 1.0);
        const auto g = christoffel_at(conf, u);
        CHECK_THAT(g[0], WithinAbs(1.0, 1e-13));  // Gamma^1_11
        const auto fd = christoffel_by_differences(conf, u);
        for (std::size_t i = 0; i < g.size(); ++i) CHECK_THAT(g[i], WithinAbs(fd[i], 1e-7));
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c)
                    CHECK(g[static_cast<std::size_t>((a * 2 + b) * 2 + c)] == g[static_cast<std::size_t>((a * 2 + c) * 2 + b)]);
    }
    const auto s3 = AmbientManifold::sphere(3, 1.3);
    const std::vector<double> u = {0.2, -0.4, 0.9};
    const auto g = christoffel_at(s3, u);
    const auto fd = christoffel_by_differences(s3, u);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK_THAT(g[i], WithinAbs(fd[i], 1e-7));
}

TEST_CASE("unit 4-sphere matches the constant-curvature model") {
    std::mt19937_64 rng(4);
    const auto s4 = AmbientManifold::sphere(4, 1.0);
    for (int k = 0; k < 5; ++k) {
        const auto u = random_point(rng, 4, 1.2);
        const auto c = curvature_at(s4, u);
        const auto x = random_point(rng, 4, 1.0);
        const auto y = random_point(rng, 4, 1.0);
        const auto z = random_point(rng, 4, 1.0);
        const auto w = random_point(rng, 4, 1.0);
        const double model = c.inner(x, z) * c.inner(y, w) - c.inner(x, w) * c.inner(y, z);
        CHECK_THAT(c.r04(x, y, z, w), WithinAbs(model, 1e-9 * std::max(1.0, std::abs(model))));
    }
}

TEST_CASE("Ricci curvature of the 3-sphere") {
    for (double r : {0.5, 1.0, 2.0}) {
        const auto c = curvature_at(AmbientManifold::sphere(3, r), std::vector<double>{0.3, 0.2, -0.1});
        const std::vector<double> uvec = {0.7, -0.2, 0.4};
        CHECK_THAT(c.ric(uvec, uvec), WithinAbs(2.0 / (r * r) * c.inner(uvec, uvec), 1e-9 * c.inner(uvec, uvec) / (r * r)));
    }
}

TEST_CASE("algebraic symmetries and first Bianchi identity") {
    std::mt19937_64 rng(5);
    std::vector<AmbientManifold> manifolds = {
        AmbientManifold::sphere(3, 1.0), AmbientManifold::sphere(4, 0.8), AmbientManifold::hyperbolic(3, 2.0),
        AmbientManifold::conformal(3, parse_expr("exp(u1 - 0.5*u2*u3)")),
        AmbientManifold(3,
                        {parse_expr("2 + sin(u2)"), parse_expr("0.3*u3"), parse_expr("0"), parse_expr("0.3*u3"),
                         parse_expr("1 + u1^2"), parse_expr("0.1*cos(u1)"), parse_expr("0"), parse_expr("0.1*cos(u1)"),
                         parse_expr("3")},
                        "general")};
    for (const auto& m : manifolds) {
        const int n = m.dim();
        const auto u = random_point(rng, n, 0.5);
        const auto c = curvature_at(m, u);
        auto R = [&](int a, int b, int cc, int d) {
            return c.riemann_low[static_cast<std::size_t>(((a * n + b) * n + cc) * n + d)];
        };
        double worst = 0.0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int cc = 0; cc < n; ++cc)
                    for (int d = 0; d < n; ++d) {
                        worst = std::max(worst, std::abs(R(a, b, cc, d) + R(b, a, cc, d)));
                        worst = std::max(worst, std::abs(R(a, b, cc, d) + R(a, b, d, cc)));
                        worst = std::max(worst, std::abs(R(a, b, cc, d) - R(cc, d, a, b)));
                        worst = std::max(worst, std::abs(R(a, b, cc, d) + R(b, cc, a, d) + R(cc, a, b, d)));
                    }
        CHECK(worst <= 1e-10);
    }
}

TEST_CASE("unit conformal factor behaves exactly like euclidean space") {
    const auto e = AmbientManifold::euclidean(3);
    const auto c = AmbientManifold::conformal(3, parse_expr("1"));
    const std::vector<double> u = {0.1, 0.2, 0.3};
    CHECK(christoffel_at(e, u) == christoffel_at(c, u));
    CHECK(curvature_at(e, u).riemann_low == curvature_at(c, u).riemann_low);
}

TEST_CASE("bad parameters and degenerate metrics") {
    CHECK(testing::throws_code([] { (void)AmbientManifold::sphere(3, 0.0); }, Errc::bad_parameter));
    CHECK(testing::throws_code([] { (void)AmbientManifold::hyperbolic(3, -1.0); }, Errc::bad_parameter));
    CHECK(testing::throws_code([] { (void)AmbientManifold::euclidean(1); }, Errc::bad_parameter));
    CHECK(testing::throws_code([] { (void)make_builtin_manifold("torus", 3); }, Errc::bad_parameter));
    const AmbientManifold bad(2, {parse_expr("1"), parse_expr("2"), parse_expr("2"), parse_expr("1")}, "indefinite");
    CHECK(testing::throws_code([&] { (void)christoffel_at(bad, std::vector<double>{0.0, 0.0}); }, Errc::metric_degenerate));
    CHECK(testing::throws_code([] { (void)AmbientManifold(2, {parse_expr("w"), parse_expr("0"), parse_expr("0"), parse_expr("1")}, "x"); },
                               Errc::unbound_variable));
}
