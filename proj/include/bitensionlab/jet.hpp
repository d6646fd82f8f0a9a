#pragma once

// Truncated bivariate Taylor polynomials ("jets").
//
// A jet of order k at a base point p stores the Taylor coefficients c_ij of a
// function f around p for every monomial x^i y^j with i + j <= k, where x and y
// are the offsets from p. Arithmetic and elementary functions act on the
// truncated series exactly, so derivatives up to order k come out with no
// discretisation error.

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>

#include "bitensionlab/error.hpp"

namespace bitensionlab {

inline constexpr int kMaxJetOrder = 5;

/// Parameter point (x, y) of a surface chart.
struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

namespace detail {

constexpr std::size_t jet_size(int order) {
    return static_cast<std::size_t>((order + 1) * (order + 2) / 2);
}

constexpr std::size_t jet_index(int i, int j) {
    const int d = i + j;
    return static_cast<std::size_t>(d * (d + 1) / 2 + j);
}

inline constexpr std::size_t kJetCapacity = jet_size(kMaxJetOrder);

// Product table for one order: every (a, b, c) coefficient triple with
// monomial(a) * monomial(b) = monomial(c) and deg(c) <= order.
struct ProductTable {
    std::array<std::array<unsigned char, 3>, 126> entries{};
    std::size_t count = 0;
};

constexpr ProductTable make_product_table(int order) {
    ProductTable t;
    for (int da = 0; da <= order; ++da) {
        for (int ja = 0; ja <= da; ++ja) {
            for (int db = 0; da + db <= order; ++db) {
                for (int jb = 0; jb <= db; ++jb) {
                    const int ia = da - ja;
                    const int ib = db - jb;
                    t.entries[t.count++] = {static_cast<unsigned char>(jet_index(ia, ja)),
                                            static_cast<unsigned char>(jet_index(ib, jb)),
                                            static_cast<unsigned char>(jet_index(ia + ib, ja + jb))};
                }
            }
        }
    }
    return t;
}

inline constexpr std::array<ProductTable, kMaxJetOrder + 1> kProductTables = {
    make_product_table(0), make_product_table(1), make_product_table(2),
    make_product_table(3), make_product_table(4), make_product_table(5)};

constexpr double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

}  // namespace detail

class Jet {
public:
    Jet() = default;

    explicit Jet(int order, double constant = 0.0, Point2 base = {}) : order_(order), base_(base) {
        if (order < 0 || order > kMaxJetOrder) {
            fail(Errc::bad_parameter, "jet order " + std::to_string(order) + " outside [0, 5]");
        }
        c_[0] = constant;
    }

    static Jet constant(double value, int order, Point2 base = {}) { return Jet(order, value, base); }

    /// Coordinate function x (axis 0) or y (axis 1) expanded around `base`.
    static Jet coordinate(int axis, int order, Point2 base) {
        Jet j(order, axis == 0 ? base.x : base.y, base);
        if (order >= 1) j.c_[axis == 0 ? 1 : 2] = 1.0;
        return j;
    }

    int order() const noexcept { return order_; }
    std::size_t size() const noexcept { return detail::jet_size(order_); }
    Point2 base_point() const noexcept { return base_; }
    std::span<const double> coeffs() const noexcept { return {c_.data(), size()}; }

    double value() const noexcept { return c_[0]; }

    /// Taylor coefficient of x^i y^j.
    double coeff(int i, int j) const {
        check_index(i, j);
        return c_[detail::jet_index(i, j)];
    }

    void set_coeff(int i, int j, double v) {
        check_index(i, j);
        c_[detail::jet_index(i, j)] = v;
    }

    /// Partial derivative d^{i+j} f / dx^i dy^j at the base point.
    double derivative(int i, int j) const {
        return coeff(i, j) * detail::factorial(i) * detail::factorial(j);
    }

    /// Jet of df/dx (axis 0) or df/dy (axis 1); the order drops by one.
    Jet partial(int axis) const {
        if (order_ == 0) fail(Errc::order_too_low, "cannot differentiate an order-0 jet");
        Jet r(order_ - 1, 0.0, base_);
        for (int d = 0; d < order_; ++d) {
            for (int j = 0; j <= d; ++j) {
                const int i = d - j;
                r.c_[detail::jet_index(i, j)] =
                    axis == 0 ? (i + 1) * c_[detail::jet_index(i + 1, j)]
                              : (j + 1) * c_[detail::jet_index(i, j + 1)];
            }
        }
        return r;
    }

    Jet truncated(int order) const {
        if (order > order_) {
            fail(Errc::order_too_low, "cannot raise jet order " + std::to_string(order_) + " to " +
                                          std::to_string(order));
        }
        Jet r(order, 0.0, base_);
        for (std::size_t k = 0; k < r.size(); ++k) r.c_[k] = c_[k];
        return r;
    }

    bool is_zero() const noexcept {
        for (std::size_t k = 0; k < size(); ++k) {
            if (c_[k] != 0.0) return false;
        }
        return true;
    }

    Jet operator-() const {
        Jet r = *this;
        for (std::size_t k = 0; k < size(); ++k) r.c_[k] = -c_[k];
        return r;
    }

    Jet& operator+=(const Jet& o) {
        check_same_order(o);
        for (std::size_t k = 0; k < size(); ++k) c_[k] += o.c_[k];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        check_same_order(o);
        for (std::size_t k = 0; k < size(); ++k) c_[k] -= o.c_[k];
        return *this;
    }
    Jet& operator*=(const Jet& o) {
        *this = *this * o;
        return *this;
    }
    Jet& operator/=(const Jet& o) {
        *this = *this / o;
        return *this;
    }
    Jet& operator+=(double s) {
        c_[0] += s;
        return *this;
    }
    Jet& operator-=(double s) {
        c_[0] -= s;
        return *this;
    }
    Jet& operator*=(double s) {
        for (std::size_t k = 0; k < size(); ++k) c_[k] *= s;
        return *this;
    }
    Jet& operator/=(double s) {
        if (s == 0.0) fail(Errc::singular_compose, "division by zero scalar");
        for (std::size_t k = 0; k < size(); ++k) c_[k] /= s;
        return *this;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator+(Jet a, double s) { return a += s; }
    friend Jet operator+(double s, Jet a) { return a += s; }
    friend Jet operator-(Jet a, double s) { return a -= s; }
    friend Jet operator-(double s, const Jet& a) { return (-a) += s; }
    friend Jet operator*(Jet a, double s) { return a *= s; }
    friend Jet operator*(double s, Jet a) { return a *= s; }
    friend Jet operator/(Jet a, double s) { return a /= s; }

    /// *this += s * a * b without a temporary; the hot loop of tensor contractions.
    void add_product(const Jet& a, const Jet& b, double s = 1.0) {
        check_same_order(a);
        check_same_order(b);
        const auto& table = detail::kProductTables[static_cast<std::size_t>(order_)];
        for (std::size_t k = 0; k < table.count; ++k) {
            const auto& e = table.entries[k];
            c_[e[2]] += s * a.c_[e[0]] * b.c_[e[1]];
        }
    }

    friend Jet operator*(const Jet& a, const Jet& b) {
        a.check_same_order(b);
        Jet r(a.order_, 0.0, a.base_);
        const auto& table = detail::kProductTables[static_cast<std::size_t>(a.order_)];
        for (std::size_t k = 0; k < table.count; ++k) {
            const auto& e = table.entries[k];
            r.c_[e[2]] += a.c_[e[0]] * b.c_[e[1]];
        }
        return r;
    }

    friend Jet operator/(const Jet& a, const Jet& b);
    friend Jet operator/(double s, const Jet& b);

    /// Applies a univariate power series sum_k series[k] t^k to the
    /// nonconstant part of this jet; series must hold order()+1 terms.
    Jet compose(std::span<const double> series) const {
        Jet delta = *this;
        delta.c_[0] = 0.0;
        Jet r(order_, series[static_cast<std::size_t>(order_)], base_);
        for (int k = order_ - 1; k >= 0; --k) {
            r = r * delta;
            r.c_[0] += series[static_cast<std::size_t>(k)];
        }
        return r;
    }

private:
    void check_index(int i, int j) const {
        if (i < 0 || j < 0 || i + j > order_) {
            fail(Errc::index_out_of_order, "multi-index (" + std::to_string(i) + "," +
                                               std::to_string(j) + ") exceeds jet order " +
                                               std::to_string(order_));
        }
    }

    void check_same_order(const Jet& o) const {
        if (o.order_ != order_) {
            fail(Errc::order_mismatch, "jet orders " + std::to_string(order_) + " and " +
                                           std::to_string(o.order_));
        }
    }

    int order_ = 0;
    Point2 base_{};
    std::array<double, detail::kJetCapacity> c_{};
};

/// Elementary functions available to jets and to the expression language.
enum class JetFn { sin, cos, tan, exp, ln, sqrt, pow_real };

inline Jet reciprocal(const Jet& b) {
    const double b0 = b.value();
    if (b0 == 0.0) fail(Errc::singular_compose, "division by a jet with zero constant term");
    std::array<double, kMaxJetOrder + 1> s{};
    double p = 1.0 / b0;
    for (int k = 0; k <= b.order(); ++k) {
        s[static_cast<std::size_t>(k)] = (k % 2 == 0 ? p : -p);
        p /= b0;
    }
    return b.compose(s);
}

inline Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
inline Jet operator/(double s, const Jet& b) { return reciprocal(b) * s; }

inline Jet exp(const Jet& a) {
    std::array<double, kMaxJetOrder + 1> s{};
    const double e = std::exp(a.value());
    for (int k = 0; k <= a.order(); ++k) s[static_cast<std::size_t>(k)] = e / detail::factorial(k);
    return a.compose(s);
}

inline Jet sin(const Jet& a) {
    std::array<double, kMaxJetOrder + 1> s{};
    const double sv = std::sin(a.value());
    const double cv = std::cos(a.value());
    const std::array<double, 4> cycle = {sv, cv, -sv, -cv};
    for (int k = 0; k <= a.order(); ++k) {
        s[static_cast<std::size_t>(k)] = cycle[static_cast<std::size_t>(k % 4)] / detail::factorial(k);
    }
    return a.compose(s);
}

inline Jet cos(const Jet& a) {
    std::array<double, kMaxJetOrder + 1> s{};
    const double sv = std::sin(a.value());
    const double cv = std::cos(a.value());
    const std::array<double, 4> cycle = {cv, -sv, -cv, sv};
    for (int k = 0; k <= a.order(); ++k) {
        s[static_cast<std::size_t>(k)] = cycle[static_cast<std::size_t>(k % 4)] / detail::factorial(k);
    }
    return a.compose(s);
}

inline Jet tan(const Jet& a) {
    const Jet c = cos(a);
    if (std::abs(c.value()) < 1e-300) fail(Errc::singular_compose, "tan at a pole");
    return sin(a) / c;
}

inline Jet ln(const Jet& a) {
    const double a0 = a.value();
    if (!(a0 > 0.0)) fail(Errc::singular_compose, "ln of a jet with nonpositive constant term");
    std::array<double, kMaxJetOrder + 1> s{};
    s[0] = std::log(a0);
    double p = 1.0;
    for (int k = 1; k <= a.order(); ++k) {
        p /= a0;
        s[static_cast<std::size_t>(k)] = (k % 2 == 1 ? p : -p) / k;
    }
    return a.compose(s);
}

namespace detail {

inline Jet integer_power(const Jet& a, long n) {
    if (n < 0) return integer_power(reciprocal(a), -n);
    Jet result(a.order(), 1.0, a.base_point());
    Jet base = a;
    while (n > 0) {
        if (n & 1) result = result * base;
        n >>= 1;
        if (n > 0) base = base * base;
    }
    return result;
}

}  // namespace detail

/// a^p for real p. Integer exponents use repeated multiplication (valid for
/// any sign of the constant term); other exponents need a positive constant term.
inline Jet pow(const Jet& a, double p) {
    if (std::nearbyint(p) == p && std::abs(p) <= 64.0) {
        return detail::integer_power(a, static_cast<long>(p));
    }
    const double a0 = a.value();
    if (!(a0 > 0.0)) fail(Errc::singular_compose, "non-integer power of a jet with nonpositive constant term");
    std::array<double, kMaxJetOrder + 1> s{};
    double binom = 1.0;
    for (int k = 0; k <= a.order(); ++k) {
        s[static_cast<std::size_t>(k)] = binom * std::pow(a0, p - k);
        binom *= (p - k) / (k + 1);
    }
    return a.compose(s);
}

inline Jet sqrt(const Jet& a) {
    if (!(a.value() > 0.0)) fail(Errc::singular_compose, "sqrt of a jet with nonpositive constant term");
    return pow(a, 0.5);
}

inline Jet apply(JetFn fn, const Jet& a, double exponent = 1.0) {
    switch (fn) {
        case JetFn::sin: return sin(a);
        case JetFn::cos: return cos(a);
        case JetFn::tan: return tan(a);
        case JetFn::exp: return exp(a);
        case JetFn::ln: return ln(a);
        case JetFn::sqrt: return sqrt(a);
        case JetFn::pow_real: return pow(a, exponent);
    }
    return a;
}

}  // namespace bitensionlab
