#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "bitensionlab/jet.hpp"
#include "test_support.hpp"

using namespace bitensionlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinULP;

namespace {

Jet x_at(Point2 p, int order) { return Jet::coordinate(0, order, p); }
Jet y_at(Point2 p, int order) { return Jet::coordinate(1, order, p); }

Jet random_jet(std::mt19937_64& rng, int order) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    Jet j(order);
    for (int deg = 0; deg <= order; ++deg)
        for (int jj = 0; jj <= deg; ++jj) j.set_coeff(deg - jj, jj, d(rng));
    return j;
}

}  // namespace

TEST_CASE("jet storage is dense and triangular") {
    for (int k = 0; k <= kMaxJetOrder; ++k) {
        CHECK(Jet(k).size() == static_cast<std::size_t>((k + 1) * (k + 2) / 2));
    }
    CHECK(Jet(5).size() == 21);
    CHECK(testing::throws_code([] { Jet(6); }, Errc::bad_parameter));
    CHECK(testing::throws_code([] { Jet(-1); }, Errc::bad_parameter));
}

TEST_CASE("polynomial x^2 + y at the origin") {
    const Point2 o{0.0, 0.0};
    const Jet f = x_at(o, 2) * x_at(o, 2) + y_at(o, 2);
    CHECK(f.coeff(0, 0) == 0.0);
    CHECK(f.coeff(1, 0) == 0.0);
    CHECK(f.coeff(0, 1) == 1.0);
    CHECK(f.coeff(2, 0) == 1.0);
    CHECK(f.coeff(1, 1) == 0.0);
    CHECK(f.coeff(0, 2) == 0.0);
}

TEST_CASE("sine Taylor coefficients") {
    const Jet s = sin(x_at({0.0, 0.0}, 3));
    CHECK_THAT(s.coeff(0, 0), WithinAbs(0.0, 1e-16));
    CHECK_THAT(s.coeff(1, 0), WithinAbs(1.0, 1e-16));
    CHECK_THAT(s.coeff(2, 0), WithinAbs(0.0, 1e-16));
    CHECK_THAT(s.coeff(3, 0), WithinAbs(-1.0 / 6.0, 1e-16));
}

TEST_CASE("mixed derivative of exp(x+y) against Richardson differences") {
    const Point2 p{0.3, 0.4};
    const Jet e = exp(x_at(p, 3) + y_at(p, 3));
    const double jet = e.derivative(1, 1);
    const double fd = testing::richardson_derivative([](double x, double y) { return std::exp(x + y); }, 0.3, 0.4, 1, 1);
    CHECK_THAT(jet, WithinAbs(std::exp(0.7), 1e-12));
    CHECK_THAT(jet, WithinAbs(fd, 1e-8));
}

TEST_CASE("jet_extract") {
    const Point2 o{0.0, 0.0};
    const Jet x = x_at(o, 3);
    const Jet y = y_at(o, 3);
    const Jet f = x * x * y + 3.0;
    CHECK(f.derivative(2, 0) == 0.0);
    CHECK(f.derivative(2, 1) == 2.0);
    CHECK(testing::throws_code([&] { (void)f.derivative(3, 1); }, Errc::index_out_of_order));

    const Point2 p{0.5, 0.2};
    const Jet g = sin(x_at(p, 2)) * cos(y_at(p, 2));
    const double fd = testing::richardson_derivative(
        [](double a, double b) { return std::sin(a) * std::cos(b); }, 0.5, 0.2, 1, 1);
    CHECK_THAT(g.derivative(1, 1), WithinAbs(-std::cos(0.5) * std::sin(0.2), 1e-12));
    CHECK_THAT(g.derivative(1, 1), WithinAbs(fd, 1e-8));
}

TEST_CASE("order mismatch and singular compositions are errors") {
    const Jet a(2, 1.0);
    const Jet b(3, 1.0);
    CHECK(testing::throws_code([&] { (void)(a + b); }, Errc::order_mismatch));
    CHECK(testing::throws_code([&] { (void)(a * b); }, Errc::order_mismatch));
    const Jet z = x_at({0.0, 0.0}, 2);
    CHECK(testing::throws_code([&] { (void)(a / z); }, Errc::singular_compose));
    CHECK(testing::throws_code([&] { (void)ln(z); }, Errc::singular_compose));
    CHECK(testing::throws_code([&] { (void)sqrt(z - 1.0); }, Errc::singular_compose));
    CHECK(testing::throws_code([&] { (void)Jet(0).partial(0); }, Errc::order_too_low));
}

TEST_CASE("ring axioms on random jets") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const int order = trial % (kMaxJetOrder + 1);
        const Jet a = random_jet(rng, order);
        const Jet b = random_jet(rng, order);
        const Jet c = random_jet(rng, order);
        const Jet d1 = (a + b) * c - (a * c + b * c);
        const Jet d2 = a * (b * c) - (a * b) * c;
        for (double v : d1.coeffs()) CHECK(std::abs(v) <= 1e-13 * 10);
        for (double v : d2.coeffs()) CHECK(std::abs(v) <= 1e-13 * 10);
    }
}

TEST_CASE("derivative chain relations for sin and exp") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const Jet a = random_jet(rng, 4);
        for (int axis = 0; axis < 2; ++axis) {
            const Jet lhs = sin(a).partial(axis);
            const Jet rhs = cos(a).truncated(3) * a.partial(axis);
            for (std::size_t k = 0; k < lhs.size(); ++k) CHECK_THAT(lhs.coeffs()[k], WithinAbs(rhs.coeffs()[k], 1e-12));
            const Jet le = exp(a).partial(axis);
            const Jet re = exp(a).truncated(3) * a.partial(axis);
            for (std::size_t k = 0; k < le.size(); ++k) CHECK_THAT(le.coeffs()[k], WithinAbs(re.coeffs()[k], 1e-12));
        }
    }
}

TEST_CASE("polynomial derivatives are exact") {
    // f = sum over monomials of q_ij x^i y^j with small integer coefficients,
    // expanded at a dyadic point; compare against hand differentiation.
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> coef(-3, 3);
    for (int trial = 0; trial < 20; ++trial) {
        const int order = 5;
        int q[6][6] = {};
        for (int i = 0; i <= order; ++i)
            for (int j = 0; i + j <= order; ++j) q[i][j] = coef(rng);
        const Point2 p{0.5, -0.25};
        const Jet x = x_at(p, order);
        const Jet y = y_at(p, order);
        Jet f(order);
        for (int i = 0; i <= order; ++i)
            for (int j = 0; i + j <= order; ++j) f += q[i][j] * pow(x, i) * pow(y, j);
        for (int a = 0; a <= order; ++a)
            for (int b = 0; a + b <= order; ++b) {
                double exact = 0.0;
                for (int i = a; i <= order; ++i)
                    for (int j = b; i + j <= order; ++j) {
                        double fall = q[i][j];
                        for (int k = 0; k < a; ++k) fall *= (i - k);
                        for (int k = 0; k < b; ++k) fall *= (j - k);
                        exact += fall * std::pow(p.x, i - a) * std::pow(p.y, j - b);
                    }
                CHECK_THAT(f.derivative(a, b), WithinULP(exact, 4) || WithinAbs(exact, 1e-13));
            }
    }
}

TEST_CASE("partial lowers the order and truncation keeps the prefix") {
    const Point2 p{0.1, 0.2};
    const Jet f = exp(x_at(p, 4)) * y_at(p, 4);
    const Jet fx = f.partial(0);
    CHECK(fx.order() == 3);
    CHECK_THAT(fx.value(), WithinAbs(std::exp(0.1) * 0.2, 1e-15));
    const Jet t = f.truncated(2);
    CHECK(t.order() == 2);
    CHECK(t.coeff(1, 1) == f.coeff(1, 1));
    CHECK(testing::throws_code([&] { (void)t.truncated(3); }, Errc::order_too_low));
}

TEST_CASE("real powers and ln agree with their closed forms") {
    const Point2 p{0.7, 0.0};
    const Jet x = x_at(p, 4);
    const Jet r = pow(x, 1.5);
    CHECK_THAT(r.derivative(2, 0), WithinAbs(0.75 / std::sqrt(0.7), 1e-13));
    CHECK_THAT(ln(x).derivative(3, 0), WithinAbs(2.0 / (0.7 * 0.7 * 0.7), 1e-12));
    CHECK_THAT(sqrt(x).derivative(1, 0), WithinAbs(0.5 / std::sqrt(0.7), 1e-14));
    CHECK_THAT(tan(x).derivative(1, 0), WithinAbs(1.0 / std::pow(std::cos(0.7), 2), 1e-13));
    CHECK_THAT(pow(x - 2.0, -2).value(), WithinAbs(1.0 / 1.69, 1e-15));
}
