#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "bitensionlab/expr.hpp"
#include "test_support.hpp"

using namespace bitensionlab;
using Catch::Matchers::WithinAbs;

namespace {

JetEnv uv_env(double u, double v, int order) {
    const Point2 p{u, v};
    return {{"u", Jet::coordinate(0, order, p)}, {"v", Jet::coordinate(1, order, p)}};
}

std::size_t syntax_offset(const std::string& text) {
    try {
        (void)parse_expr(text);
    } catch (const Error& e) {
        if (e.code() == Errc::syntax_error) return e.offset();
    }
    return 0;
}

}  // namespace

TEST_CASE("precedence and associativity") {
    CHECK(structurally_equal(parse_expr("u + v * w"),
                             expr::binary(BinaryOp::add, expr::variable("u"),
                                          expr::binary(BinaryOp::mul, expr::variable("v"), expr::variable("w")))));
    CHECK(structurally_equal(parse_expr("a - b - c"), parse_expr("(a - b) - c")));
    CHECK(structurally_equal(parse_expr("a / b / c"), parse_expr("(a / b) / c")));
    CHECK(structurally_equal(parse_expr("a ^ b ^ c"), parse_expr("a ^ (b ^ c)")));
    CHECK(structurally_equal(parse_expr("-u^2"), expr::negate(parse_expr("u^2"))));
    CHECK(structurally_equal(parse_expr("-u * v"), parse_expr("(-u) * v")));
    CHECK(structurally_equal(parse_expr(" u\t*\nv "), parse_expr("u*v")));
}

TEST_CASE("printing is a parse fixed point") {
    const Expr e = parse_expr("4/(1 + u^2 + v^2)^2");
    const std::string printed = to_string(e);
    CHECK(structurally_equal(parse_expr(printed), e));
    CHECK(to_string(parse_expr(printed)) == printed);
}

TEST_CASE("syntax errors carry positions") {
    CHECK(syntax_offset("sin(u") == 6);
    CHECK(syntax_offset("u +") == 4);
    CHECK(syntax_offset("u $ v") == 3);
    CHECK(syntax_offset("") == 1);
    CHECK(syntax_offset("sin + 1") == 1);
    CHECK(testing::throws_code([] { (void)parse_expr("abs(u)"); }, Errc::unknown_function));
    CHECK(testing::throws_code([] { (void)parse_expr("foo(u)"); }, Errc::unknown_function));
}

TEST_CASE("parser is total on arbitrary bytes") {
    std::mt19937_64 rng(42);
    const std::string alphabet = "uv()+-*/^ .e0123456789sincoxplqrtab$\t";
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::uniform_int_distribution<int> len(0, 24);
    std::uniform_int_distribution<int> raw(0, 255);
    for (int trial = 0; trial < 3000; ++trial) {
        std::string s;
        const int n = len(rng);
        for (int i = 0; i < n; ++i) s += trial % 3 == 0 ? static_cast<char>(raw(rng)) : alphabet[pick(rng)];
        try {
            const Expr e = parse_expr(s);
            CHECK(structurally_equal(parse_expr(to_string(e)), e));
        } catch (const Error& err) {
            const bool expected = err.code() == Errc::syntax_error || err.code() == Errc::unknown_function;
            CHECK(expected);
            if (err.code() == Errc::syntax_error) CHECK(err.offset() >= 1);
        }
    }
    CHECK(syntax_offset(std::string(5000, '(')) > 0);
}

TEST_CASE("random expressions round-trip through the printer") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto r = testing::random_expression(rng, 4);
        const Expr e = parse_expr(r.text);
        CHECK(structurally_equal(parse_expr(to_string(e)), e));
    }
}

TEST_CASE("evaluation over jets") {
    const Jet f = eval_expr(parse_expr("u*u + v"), uv_env(0.0, 0.0, 2));
    CHECK(f.coeff(0, 0) == 0.0);
    CHECK(f.coeff(0, 1) == 1.0);
    CHECK(f.coeff(2, 0) == 1.0);
    CHECK(f.coeff(1, 1) == 0.0);

    const Jet e = eval_expr(parse_expr("exp(u+v)"), uv_env(0.3, 0.4, 2));
    CHECK_THAT(e.derivative(1, 1), WithinAbs(std::exp(0.7), 1e-12));
    const double fd = testing::richardson_derivative([](double u, double v) { return std::exp(u + v); }, 0.3, 0.4, 1, 1);
    CHECK_THAT(e.derivative(1, 1), WithinAbs(fd, 1e-8));

    CHECK(testing::throws_code([] { (void)eval_expr(parse_expr("1/u"), uv_env(0.0, 0.0, 2)); }, Errc::singular_compose));
    CHECK(testing::throws_code([] { (void)eval_expr(parse_expr("u + w"), uv_env(0.0, 0.0, 2)); }, Errc::unbound_variable));
    CHECK_THAT(eval_expr(parse_expr("2*pi"), uv_env(0.0, 0.0, 1)).value(), WithinAbs(2.0 * M_PI, 1e-15));
    CHECK_THAT(eval_expr(parse_expr("u^-2"), uv_env(-2.0, 0.0, 1)).value(), WithinAbs(0.25, 1e-15));
    CHECK_THAT(eval_expr(parse_expr("u^v"), uv_env(2.0, 3.0, 1)).value(), WithinAbs(8.0, 1e-13));
}

TEST_CASE("jet evaluation matches finite differences on random expressions") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto r = testing::random_expression(rng, 3);
        const Expr e = parse_expr(r.text);
        const double u = coord(rng);
        const double v = coord(rng);
        const Jet j = eval_expr(e, uv_env(u, v, 2));
        for (auto [a, b] : {std::pair{1, 0}, std::pair{0, 1}, std::pair{2, 0}, std::pair{1, 1}, std::pair{0, 2}}) {
            const double fd = testing::richardson_derivative(r.eval, u, v, a, b);
            const double scale = std::max(1.0, std::abs(fd));
            CHECK(std::abs(j.derivative(a, b) - fd) <= 1e-8 * scale);
        }
    }
}

TEST_CASE("symbolic derivatives agree with jet derivatives") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const auto r = testing::random_expression(rng, 3);
        const Expr e = parse_expr(r.text);
        const Expr du = differentiate(e, "u");
        const Expr dv = differentiate(e, "v");
        const auto env = uv_env(0.3, -0.6, 2);
        const Jet j = eval_expr(e, env);
        CHECK_THAT(eval_expr(du, env).value(), WithinAbs(j.derivative(1, 0), 1e-11));
        CHECK_THAT(eval_expr(dv, env).value(), WithinAbs(j.derivative(0, 1), 1e-11));
        CHECK_THAT(eval_expr(differentiate(du, "v"), env).value(), WithinAbs(j.derivative(1, 1), 1e-10));
    }
}
