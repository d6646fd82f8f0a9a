#pragma once

// Scalar expression language used by spec files and the built-in catalog.
//
// Grammar (whitespace is insignificant):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?            (right associative)
//   primary := number | identifier | identifier '(' expr ')' | '(' expr ')'
//
// Functions: sin cos tan exp ln sqrt. The identifier `pi` is the constant.
// Numbers are unsigned decimal literals with an optional exponent.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "bitensionlab/error.hpp"
#include "bitensionlab/jet.hpp"

namespace bitensionlab {

enum class BinaryOp : char { add = '+', sub = '-', mul = '*', div = '/', pow = '^' };

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ConstNode {
    double value;
};
struct VarNode {
    std::string name;
};
struct NegNode {
    Expr arg;
};
struct BinaryNode {
    BinaryOp op;
    Expr lhs;
    Expr rhs;
};
struct CallNode {
    JetFn fn;
    Expr arg;
};

struct ExprNode {
    std::variant<ConstNode, VarNode, NegNode, BinaryNode, CallNode> node;
};

namespace expr {

inline Expr constant(double v) { return std::make_shared<const ExprNode>(ExprNode{ConstNode{v}}); }
inline Expr variable(std::string name) {
    return std::make_shared<const ExprNode>(ExprNode{VarNode{std::move(name)}});
}
inline Expr negate(Expr a) { return std::make_shared<const ExprNode>(ExprNode{NegNode{std::move(a)}}); }
inline Expr binary(BinaryOp op, Expr a, Expr b) {
    return std::make_shared<const ExprNode>(ExprNode{BinaryNode{op, std::move(a), std::move(b)}});
}
inline Expr call(JetFn fn, Expr a) {
    return std::make_shared<const ExprNode>(ExprNode{CallNode{fn, std::move(a)}});
}

inline const ConstNode* const_node(const Expr& e) { return std::get_if<ConstNode>(&e->node); }

inline bool is_const(const Expr& e, double v) {
    const auto* c = const_node(e);
    return c != nullptr && c->value == v;
}

inline std::string_view function_name(JetFn fn) {
    switch (fn) {
        case JetFn::sin: return "sin";
        case JetFn::cos: return "cos";
        case JetFn::tan: return "tan";
        case JetFn::exp: return "exp";
        case JetFn::ln: return "ln";
        case JetFn::sqrt: return "sqrt";
        case JetFn::pow_real: return "pow";
    }
    return "?";
}

inline std::optional<JetFn> function_by_name(std::string_view name) {
    static const std::pair<std::string_view, JetFn> table[] = {
        {"sin", JetFn::sin}, {"cos", JetFn::cos},   {"tan", JetFn::tan},
        {"exp", JetFn::exp}, {"ln", JetFn::ln},     {"sqrt", JetFn::sqrt}};
    for (const auto& [n, fn] : table) {
        if (n == name) return fn;
    }
    return std::nullopt;
}

}  // namespace expr

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

class ExprParser {
public:
    explicit ExprParser(std::string_view text) : text_(text) {}

    Expr parse() {
        skip_ws();
        Expr e = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) {
            syntax("unexpected character '" + std::string(1, text_[pos_]) + "'");
        }
        return e;
    }

private:
    static constexpr int kMaxDepth = 200;

    [[noreturn]] void syntax(const std::string& what) const {
        throw Error(Errc::syntax_error, what, pos_ + 1);
    }

    void skip_ws() {
        while (pos_ < text_.size() &&
               (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r')) {
            ++pos_;
        }
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    struct DepthGuard {
        explicit DepthGuard(ExprParser& p) : parser(p) {
            if (++parser.depth_ > kMaxDepth) parser.syntax("expression nested too deeply");
        }
        ~DepthGuard() { --parser.depth_; }
        ExprParser& parser;
    };

    Expr parse_expr() {
        DepthGuard guard(*this);
        Expr lhs = parse_term();
        while (true) {
            if (peek('+')) {
                ++pos_;
                lhs = expr::binary(BinaryOp::add, lhs, parse_term());
            } else if (peek('-')) {
                ++pos_;
                lhs = expr::binary(BinaryOp::sub, lhs, parse_term());
            } else {
                return lhs;
            }
        }
    }

    Expr parse_term() {
        Expr lhs = parse_unary();
        while (true) {
            if (peek('*')) {
                ++pos_;
                lhs = expr::binary(BinaryOp::mul, lhs, parse_unary());
            } else if (peek('/')) {
                ++pos_;
                lhs = expr::binary(BinaryOp::div, lhs, parse_unary());
            } else {
                return lhs;
            }
        }
    }

    Expr parse_unary() {
        DepthGuard guard(*this);
        if (peek('-')) {
            ++pos_;
            return expr::negate(parse_unary());
        }
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_primary();
        if (peek('^')) {
            ++pos_;
            return expr::binary(BinaryOp::pow, base, parse_unary());
        }
        return base;
    }

    static bool ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
    static bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
    static bool digit(char c) { return c >= '0' && c <= '9'; }

    Expr parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) syntax("unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Expr inner = parse_expr();
            expect(')');
            return inner;
        }
        if (digit(c) || c == '.') return parse_number();
        if (ident_start(c)) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
            const std::string name(text_.substr(start, pos_ - start));
            if (peek('(')) {
                const auto fn = expr::function_by_name(name);
                if (!fn) throw Error(Errc::unknown_function, "unknown function '" + name + "'", start + 1);
                ++pos_;
                Expr arg = parse_expr();
                expect(')');
                return expr::call(*fn, arg);
            }
            if (expr::function_by_name(name)) {
                pos_ = start;
                syntax("function '" + name + "' used without an argument list");
            }
            if (name == "pi") return expr::constant(3.14159265358979323846);
            return expr::variable(name);
        }
        syntax("unexpected character '" + std::string(1, c) + "'");
    }

    Expr parse_number() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && digit(text_[pos_])) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && digit(text_[pos_])) ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t q = pos_ + 1;
            if (q < text_.size() && (text_[q] == '+' || text_[q] == '-')) ++q;
            if (q < text_.size() && digit(text_[q])) {
                pos_ = q;
                while (pos_ < text_.size() && digit(text_[pos_])) ++pos_;
            }
        }
        double value = 0.0;
        const char* first = text_.data() + start;
        const char* last = text_.data() + pos_;
        const auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr != last) {
            pos_ = start;
            syntax("malformed number");
        }
        return expr::constant(value);
    }

    void expect(char c) {
        if (!peek(c)) syntax(std::string("expected '") + c + "'");
        ++pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int depth_ = 0;
};

}  // namespace detail

/// Parses `text`; throws Error(syntax_error) with a 1-based byte offset, or
/// Error(unknown_function).
inline Expr parse_expr(std::string_view text) { return detail::ExprParser(text).parse(); }

// ---------------------------------------------------------------------------
// Printing and structural comparison

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

// Binding strength: additive 1, multiplicative 2, unary minus 3, power 4, atom 5.
inline int precedence(const Expr& e) {
    return std::visit(
        [](const auto& n) -> int {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ConstNode>) {
                return n.value < 0 || std::signbit(n.value) ? 3 : 5;
            } else if constexpr (std::is_same_v<T, VarNode> || std::is_same_v<T, CallNode>) {
                return 5;
            } else if constexpr (std::is_same_v<T, NegNode>) {
                return 3;
            } else {
                switch (n.op) {
                    case BinaryOp::add:
                    case BinaryOp::sub: return 1;
                    case BinaryOp::mul:
                    case BinaryOp::div: return 2;
                    case BinaryOp::pow: return 4;
                }
                return 0;
            }
        },
        e->node);
}

inline void print_into(const Expr& e, std::string& out);

inline void print_child(const Expr& e, int min_prec, std::string& out) {
    if (precedence(e) < min_prec) {
        out += '(';
        print_into(e, out);
        out += ')';
    } else {
        print_into(e, out);
    }
}

inline void print_into(const Expr& e, std::string& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ConstNode>) {
                if (std::signbit(n.value)) {
                    out += '-';
                    out += format_double(-n.value);
                } else {
                    out += format_double(n.value);
                }
            } else if constexpr (std::is_same_v<T, VarNode>) {
                out += n.name;
            } else if constexpr (std::is_same_v<T, NegNode>) {
                out += '-';
                print_child(n.arg, 3, out);
            } else if constexpr (std::is_same_v<T, CallNode>) {
                out += expr::function_name(n.fn);
                out += '(';
                print_into(n.arg, out);
                out += ')';
            } else {
                const int p = precedence(e);
                if (n.op == BinaryOp::pow) {
                    // base binds tighter than '^'; the exponent is parsed as unary.
                    print_child(n.lhs, 5, out);
                    out += '^';
                    print_child(n.rhs, 3, out);
                } else {
                    print_child(n.lhs, p, out);
                    out += ' ';
                    out += static_cast<char>(n.op);
                    out += ' ';
                    print_child(n.rhs, p + 1, out);
                }
            }
        },
        e->node);
}

}  // namespace detail

inline std::string to_string(const Expr& e) {
    std::string out;
    detail::print_into(e, out);
    return out;
}

inline bool structurally_equal(const Expr& a, const Expr& b) {
    if (a.get() == b.get()) return true;
    if (a->node.index() != b->node.index()) return false;
    return std::visit(
        [&](const auto& na) -> bool {
            using T = std::decay_t<decltype(na)>;
            const auto& nb = std::get<T>(b->node);
            if constexpr (std::is_same_v<T, ConstNode>) {
                return na.value == nb.value;
            } else if constexpr (std::is_same_v<T, VarNode>) {
                return na.name == nb.name;
            } else if constexpr (std::is_same_v<T, NegNode>) {
                return structurally_equal(na.arg, nb.arg);
            } else if constexpr (std::is_same_v<T, CallNode>) {
                return na.fn == nb.fn && structurally_equal(na.arg, nb.arg);
            } else {
                return na.op == nb.op && structurally_equal(na.lhs, nb.lhs) &&
                       structurally_equal(na.rhs, nb.rhs);
            }
        },
        a->node);
}

/// Variable names referenced by `e`, sorted and unique.
inline std::vector<std::string> free_variables(const Expr& e) {
    std::vector<std::string> names;
    auto walk = [&](auto&& self, const Expr& x) -> void {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, VarNode>) {
                    names.push_back(n.name);
                } else if constexpr (std::is_same_v<T, NegNode> || std::is_same_v<T, CallNode>) {
                    self(self, n.arg);
                } else if constexpr (std::is_same_v<T, BinaryNode>) {
                    self(self, n.lhs);
                    self(self, n.rhs);
                }
            },
            x->node);
    };
    walk(walk, e);
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    return names;
}

// ---------------------------------------------------------------------------
// Construction helpers with light constant folding, and symbolic derivatives.

namespace expr {

inline Expr add(Expr a, Expr b) {
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    if (const_node(a) && const_node(b)) return constant(const_node(a)->value + const_node(b)->value);
    return binary(BinaryOp::add, std::move(a), std::move(b));
}

inline Expr neg(Expr a) {
    if (const auto* c = const_node(a)) return constant(-c->value);
    if (const auto* n = std::get_if<NegNode>(&a->node)) return n->arg;
    return negate(std::move(a));
}

inline Expr sub(Expr a, Expr b) {
    if (is_const(b, 0.0)) return a;
    if (is_const(a, 0.0)) return neg(std::move(b));
    if (const_node(a) && const_node(b)) return constant(const_node(a)->value - const_node(b)->value);
    return binary(BinaryOp::sub, std::move(a), std::move(b));
}

inline Expr mul(Expr a, Expr b) {
    if (is_const(a, 0.0) || is_const(b, 0.0)) return constant(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    if (const_node(a) && const_node(b)) return constant(const_node(a)->value * const_node(b)->value);
    return binary(BinaryOp::mul, std::move(a), std::move(b));
}

inline Expr div(Expr a, Expr b) {
    if (is_const(a, 0.0)) return constant(0.0);
    if (is_const(b, 1.0)) return a;
    return binary(BinaryOp::div, std::move(a), std::move(b));
}

inline Expr pow(Expr a, Expr b) {
    if (is_const(b, 1.0)) return a;
    if (is_const(b, 0.0)) return constant(1.0);
    return binary(BinaryOp::pow, std::move(a), std::move(b));
}

}  // namespace expr

/// Symbolic partial derivative of `e` with respect to variable `var`.
inline Expr differentiate(const Expr& e, const std::string& var) {
    using namespace expr;
    return std::visit(
        [&](const auto& n) -> Expr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ConstNode>) {
                return constant(0.0);
            } else if constexpr (std::is_same_v<T, VarNode>) {
                return constant(n.name == var ? 1.0 : 0.0);
            } else if constexpr (std::is_same_v<T, NegNode>) {
                return neg(differentiate(n.arg, var));
            } else if constexpr (std::is_same_v<T, CallNode>) {
                const Expr da = differentiate(n.arg, var);
                if (is_const(da, 0.0)) return constant(0.0);
                switch (n.fn) {
                    case JetFn::sin: return mul(call(JetFn::cos, n.arg), da);
                    case JetFn::cos: return neg(mul(call(JetFn::sin, n.arg), da));
                    case JetFn::tan: return div(da, pow(call(JetFn::cos, n.arg), constant(2.0)));
                    case JetFn::exp: return mul(e, da);
                    case JetFn::ln: return div(da, n.arg);
                    case JetFn::sqrt: return div(da, mul(constant(2.0), e));
                    case JetFn::pow_real: break;
                }
                fail(Errc::bad_parameter, "cannot differentiate function");
            } else {
                const Expr da = differentiate(n.lhs, var);
                const Expr db = differentiate(n.rhs, var);
                switch (n.op) {
                    case BinaryOp::add: return add(da, db);
                    case BinaryOp::sub: return sub(da, db);
                    case BinaryOp::mul: return add(mul(da, n.rhs), mul(n.lhs, db));
                    case BinaryOp::div:
                        if (is_const(db, 0.0)) return div(da, n.rhs);
                        return div(sub(mul(da, n.rhs), mul(n.lhs, db)), pow(n.rhs, constant(2.0)));
                    case BinaryOp::pow: {
                        if (const auto* c = const_node(n.rhs)) {
                            if (is_const(da, 0.0)) return constant(0.0);
                            return mul(mul(constant(c->value), pow(n.lhs, constant(c->value - 1.0))), da);
                        }
                        // d(a^b) = a^b (b' ln a + b a'/a)
                        return mul(e, add(mul(db, call(JetFn::ln, n.lhs)), div(mul(n.rhs, da), n.lhs)));
                    }
                }
                return constant(0.0);
            }
        },
        e->node);
}

/// Replace named variables by constants (parameters such as r), folding as we go.
inline Expr substitute(const Expr& e, const std::map<std::string, double, std::less<>>& values) {
    using namespace expr;
    if (values.empty()) return e;
    return std::visit(
        [&](const auto& n) -> Expr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ConstNode>) {
                return e;
            } else if constexpr (std::is_same_v<T, VarNode>) {
                if (auto it = values.find(n.name); it != values.end()) return constant(it->second);
                return e;
            } else if constexpr (std::is_same_v<T, NegNode>) {
                return neg(substitute(n.arg, values));
            } else if constexpr (std::is_same_v<T, CallNode>) {
                return call(n.fn, substitute(n.arg, values));
            } else {
                Expr a = substitute(n.lhs, values);
                Expr b = substitute(n.rhs, values);
                switch (n.op) {
                    case BinaryOp::add: return add(std::move(a), std::move(b));
                    case BinaryOp::sub: return sub(std::move(a), std::move(b));
                    case BinaryOp::mul: return mul(std::move(a), std::move(b));
                    case BinaryOp::div: return div(std::move(a), std::move(b));
                    case BinaryOp::pow: return pow(std::move(a), std::move(b));
                }
                return e;
            }
        },
        e->node);
}

// ---------------------------------------------------------------------------
// Evaluation

using JetEnv = std::map<std::string, Jet, std::less<>>;

namespace detail {

// Constant subtrees evaluate to a real number; used to pick integer powers
// and to fold parameter-only subexpressions such as sqrt(1 - r^2).
inline std::optional<double> constant_value(const Expr& e) {
    return std::visit(
        [&](const auto& n) -> std::optional<double> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ConstNode>) {
                return n.value;
            } else if constexpr (std::is_same_v<T, VarNode>) {
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, NegNode>) {
                auto v = constant_value(n.arg);
                if (v) return -*v;
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, CallNode>) {
                auto v = constant_value(n.arg);
                if (!v) return std::nullopt;
                double r = 0.0;
                switch (n.fn) {
                    case JetFn::sin: r = std::sin(*v); break;
                    case JetFn::cos: r = std::cos(*v); break;
                    case JetFn::tan: r = std::tan(*v); break;
                    case JetFn::exp: r = std::exp(*v); break;
                    case JetFn::ln: r = *v > 0.0 ? std::log(*v) : NAN; break;
                    case JetFn::sqrt: r = *v >= 0.0 ? std::sqrt(*v) : NAN; break;
                    case JetFn::pow_real: return std::nullopt;
                }
                // out-of-domain constants are left for jet evaluation to report
                if (!std::isfinite(r)) return std::nullopt;
                return r;
            } else {
                auto a = constant_value(n.lhs);
                auto b = constant_value(n.rhs);
                if (!a || !b) return std::nullopt;
                switch (n.op) {
                    case BinaryOp::add: return *a + *b;
                    case BinaryOp::sub: return *a - *b;
                    case BinaryOp::mul: return *a * *b;
                    case BinaryOp::div: return *a / *b;
                    case BinaryOp::pow: return std::pow(*a, *b);
                }
                return std::nullopt;
            }
        },
        e->node);
}

}  // namespace detail

/// Flattened form of an expression with variables bound to slots; evaluation
/// is a single pass over a postfix program.
class CompiledExpr {
public:
    CompiledExpr() = default;

    CompiledExpr(const Expr& e, const std::vector<std::string>& slots) {
        emit(e, slots);
        if (auto c = detail::constant_value(e)) {
            constant_ = *c;
        }
    }

    bool is_constant() const noexcept { return constant_.has_value(); }
    bool is_zero() const noexcept { return constant_ && *constant_ == 0.0; }

    Jet eval(std::span<const Jet> slots, int order, Point2 base = {}) const {
        if (constant_) return Jet(order, *constant_, base);
        std::vector<Jet> stack;
        stack.reserve(max_stack_);
        for (const auto& ins : code_) {
            switch (ins.kind) {
                case Kind::push_const: stack.emplace_back(order, ins.value, base); break;
                case Kind::push_slot: stack.push_back(slots[ins.slot]); break;
                case Kind::neg: stack.back() = -stack.back(); break;
                case Kind::fn: stack.back() = apply(ins.fn, stack.back()); break;
                case Kind::pow_const: stack.back() = pow(stack.back(), ins.value); break;
                case Kind::binary: {
                    Jet rhs = std::move(stack.back());
                    stack.pop_back();
                    Jet& lhs = stack.back();
                    switch (ins.op) {
                        case BinaryOp::add: lhs += rhs; break;
                        case BinaryOp::sub: lhs -= rhs; break;
                        case BinaryOp::mul: lhs = lhs * rhs; break;
                        case BinaryOp::div: lhs = lhs / rhs; break;
                        case BinaryOp::pow: lhs = exp(rhs * ln(lhs)); break;
                    }
                    break;
                }
            }
        }
        return stack.back();
    }

    double eval_value(std::span<const double> values) const {
        std::vector<Jet> slots;
        slots.reserve(values.size());
        for (double v : values) slots.emplace_back(0, v);
        return eval(slots, 0).value();
    }

private:
    enum class Kind : unsigned char { push_const, push_slot, neg, fn, pow_const, binary };
    struct Instr {
        Kind kind;
        BinaryOp op = BinaryOp::add;
        JetFn fn = JetFn::sin;
        std::size_t slot = 0;
        double value = 0.0;
    };

    void emit(const Expr& e, const std::vector<std::string>& slots) {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, ConstNode>) {
                    push({Kind::push_const, BinaryOp::add, JetFn::sin, 0, n.value}, +1);
                } else if constexpr (std::is_same_v<T, VarNode>) {
                    const auto it = std::find(slots.begin(), slots.end(), n.name);
                    if (it == slots.end()) fail(Errc::unbound_variable, "variable '" + n.name + "' is not bound");
                    push({Kind::push_slot, BinaryOp::add, JetFn::sin,
                          static_cast<std::size_t>(it - slots.begin()), 0.0},
                         +1);
                } else if constexpr (std::is_same_v<T, NegNode>) {
                    emit(n.arg, slots);
                    push({Kind::neg}, 0);
                } else if constexpr (std::is_same_v<T, CallNode>) {
                    // parameter-only calls fold, so sqrt(1 - r^2) at r = 1 is a plain 0
                    if (auto c = detail::constant_value(e)) {
                        push({Kind::push_const, BinaryOp::add, JetFn::sin, 0, *c}, +1);
                        return;
                    }
                    emit(n.arg, slots);
                    push({Kind::fn, BinaryOp::add, n.fn}, 0);
                } else {
                    emit(n.lhs, slots);
                    if (n.op == BinaryOp::pow) {
                        if (auto c = detail::constant_value(n.rhs)) {
                            push({Kind::pow_const, BinaryOp::pow, JetFn::pow_real, 0, *c}, 0);
                            return;
                        }
                    }
                    emit(n.rhs, slots);
                    push({Kind::binary, n.op}, -1);
                }
            },
            e->node);
    }

    void push(Instr ins, int delta) {
        code_.push_back(ins);
        depth_ += delta;
        max_stack_ = std::max(max_stack_, static_cast<std::size_t>(std::max(depth_, 0)));
    }

    std::vector<Instr> code_;
    std::optional<double> constant_;
    int depth_ = 0;
    std::size_t max_stack_ = 0;
};

/// Evaluates `e` with every variable taken from `env`. All bound jets must have
/// the same order; the result has that order.
inline Jet eval_expr(const Expr& e, const JetEnv& env) {
    const auto names = free_variables(e);
    std::vector<Jet> slots;
    slots.reserve(names.size());
    int order = -1;
    Point2 base{};
    for (const auto& name : names) {
        const auto it = env.find(name);
        if (it == env.end()) fail(Errc::unbound_variable, "variable '" + name + "' is not bound");
        if (order >= 0 && it->second.order() != order) {
            fail(Errc::order_mismatch, "environment jets have different orders");
        }
        order = it->second.order();
        base = it->second.base_point();
        slots.push_back(it->second);
    }
    if (order < 0) {
        // No variables: use the order of any environment jet (all must agree).
        for (const auto& [name, jet] : env) {
            if (order >= 0 && jet.order() != order) {
                fail(Errc::order_mismatch, "environment jets have different orders");
            }
            order = jet.order();
            base = jet.base_point();
        }
        if (order < 0) order = 0;
    }
    return CompiledExpr(e, names).eval(slots, order, base);
}

/// Value of an expression without free variables (function calls included);
/// empty if any variable remains.
inline std::optional<double> numeric_constant(const Expr& e) {
    if (!free_variables(e).empty()) return std::nullopt;
    return CompiledExpr(e, {}).eval_value({});
}

}  // namespace bitensionlab
