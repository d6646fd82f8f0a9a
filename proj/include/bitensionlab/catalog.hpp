#pragma once

// Built-in example surfaces and the plain-text spec-file loader.
//
// Spheres inside spheres are written directly in the stereographic chart of
// the big sphere (projection from (0,...,0,1)), so every example goes through
// the same chart pipeline as a user-supplied map.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "bitensionlab/ambient.hpp"
#include "bitensionlab/error.hpp"
#include "bitensionlab/expr.hpp"
#include "bitensionlab/immersion.hpp"

namespace bitensionlab {

using Params = std::map<std::string, double, std::less<>>;

struct Expectation {
    std::string property;            // biharmonic, harmonic, cmc, K, normH2, pseudo_umbilical, flat
    std::variant<bool, double> value;
    double tolerance = 1e-8;
};

struct ExampleInstance {
    std::string name;
    std::string label;
    std::string ambient_description;
    Params params;
    std::shared_ptr<const Immersion> immersion;
    std::vector<Expectation> expected;
};

struct ExampleSpec {
    std::string name;
    std::string description;
    Params defaults;
    std::function<ExampleInstance(const Params&)> build;

    ExampleInstance instantiate(const Params& overrides = {}) const {
        Params p = defaults;
        for (const auto& [k, v] : overrides) {
            if (!p.contains(k)) fail(Errc::bad_parameter, "example '" + name + "' has no parameter '" + k + "'");
            p[k] = v;
        }
        ExampleInstance inst = build(p);
        inst.name = name;
        inst.params = p;
        return inst;
    }
};

inline std::vector<std::string> expectation_properties() {
    return {"biharmonic", "harmonic", "cmc", "K", "normH2", "pseudo_umbilical", "flat"};
}

namespace detail {

inline Expr param_expr(const std::string& text, const Params& p) { return substitute(parse_expr(text), p); }

inline std::vector<Expr> param_exprs(const std::vector<std::string>& texts, const Params& p) {
    std::vector<Expr> out;
    for (const auto& t : texts) out.push_back(param_expr(t, p));
    return out;
}

inline Domain periodic_torus() {
    Domain d;
    d.x0 = 0.0;
    d.x1 = 2.0 * M_PI;
    d.y0 = 0.0;
    d.y1 = 2.0 * M_PI;
    d.periodic_x = d.periodic_y = true;
    d.rule_x = d.rule_y = QuadRule::periodic_trapezoid;
    d.topology = Topology::torus;
    return d;
}

// Polar chart: x = polar angle (Gauss-Legendre), y = azimuth (periodic).
inline Domain polar_sphere() {
    Domain d;
    d.x0 = 0.0;
    d.x1 = M_PI;
    d.y0 = 0.0;
    d.y1 = 2.0 * M_PI;
    d.periodic_y = true;
    d.rule_x = QuadRule::gauss_legendre;
    d.rule_y = QuadRule::periodic_trapezoid;
    d.topology = Topology::sphere;
    return d;
}

inline std::string num(double v) { return detail::format_double(v); }

inline std::vector<Expectation> sphere_family_expectations(double r) {
    const double inv = 1.0 / std::sqrt(2.0);
    const bool minimal = std::abs(r - 1.0) <= 1e-12;
    const bool bih = minimal || std::abs(r - inv) <= 1e-8;
    return {{"biharmonic", bih, 1e-7},
            {"harmonic", minimal, 1e-9},
            {"cmc", true, 1e-8},
            {"K", 1.0 / (r * r), 1e-8},
            {"normH2", (1.0 - r * r) / (r * r), 1e-8},
            {"pseudo_umbilical", true, 1e-8},
            {"flat", false, 1e-8}};
}

// Deterministic uniform in [-1, 1) from a 64-bit Mersenne twister (the
// engine's output is fixed by the standard, unlike the distributions).
inline double unit_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-52 - 1.0;
}

// Restrictions of low-degree polynomials to the unit sphere: smooth on the
// whole sphere, so the perturbed map is a genuine closed surface.
inline std::string random_sphere_function(std::mt19937_64& rng) {
    const std::vector<std::string> basis = {
        "cos(x)", "sin(x)*cos(y)", "sin(x)*sin(y)", "cos(x)^2", "sin(x)^2*cos(2*y)", "sin(x)*cos(x)*sin(y)"};
    std::string s;
    for (const auto& b : basis) {
        const double c = std::round(unit_uniform(rng) * 1e6) / 1e6;
        if (!s.empty()) s += " + ";
        s += "(" + num(c) + ")*" + b;
    }
    return s;
}

}  // namespace detail

inline ExampleSpec perturbed_random_spec();

inline std::vector<ExampleSpec> builtin_examples() {
    using detail::num;
    std::vector<ExampleSpec> out;

    out.push_back({"plane-R3", "flat plane z = 0 in R^3, periodic [0,2pi]^2 patch (a flat torus domain)", {},
                   [](const Params&) {
                       auto amb = std::make_shared<const AmbientManifold>(AmbientManifold::euclidean(3));
                       ExampleInstance inst;
                       inst.label = "plane in R^3";
                       inst.ambient_description = amb->label();
                       inst.immersion = std::make_shared<const Immersion>(
                           amb, detail::param_exprs({"x", "y", "0"}, {}), detail::periodic_torus(), inst.label);
                       inst.expected = {{"biharmonic", true, 1e-7}, {"harmonic", true, 1e-9}, {"cmc", true, 1e-8},
                                        {"K", 0.0, 1e-8},          {"normH2", 0.0, 1e-8},  {"pseudo_umbilical", true, 1e-8},
                                        {"flat", true, 1e-8}};
                       return inst;
                   }});

    out.push_back({"unit-sphere-R3", "round sphere of radius r in R^3, polar chart (CMC, not biharmonic)", {{"r", 1.0}},
                   [](const Params& p) {
                       const double r = p.at("r");
                       if (!(r > 0.0)) fail(Errc::bad_parameter, "sphere radius must be positive");
                       auto amb = std::make_shared<const AmbientManifold>(AmbientManifold::euclidean(3));
                       ExampleInstance inst;
                       inst.label = "sphere of radius " + num(r) + " in R^3";
                       inst.ambient_description = amb->label();
                       inst.immersion = std::make_shared<const Immersion>(
                           amb, detail::param_exprs({"r*sin(x)*cos(y)", "r*sin(x)*sin(y)", "r*cos(x)"}, p),
                           detail::polar_sphere(), inst.label);
                       inst.expected = {{"biharmonic", false, 1e-7}, {"harmonic", false, 1e-9},
                                        {"cmc", true, 1e-8},         {"K", 1.0 / (r * r), 1e-8},
                                        {"normH2", 1.0 / (r * r), 1e-8}, {"pseudo_umbilical", true, 1e-8},
                                        {"flat", false, 1e-8}};
                       return inst;
                   }});

    out.push_back({"cylinder-R3", "unit cylinder (cos x, sin x, y), y in [-1,1]; isothermal, CMC, not compact", {},
                   [](const Params&) {
                       auto amb = std::make_shared<const AmbientManifold>(AmbientManifold::euclidean(3));
                       Domain d;
                       d.x0 = 0.0;
                       d.x1 = 2.0 * M_PI;
                       d.y0 = -1.0;
                       d.y1 = 1.0;
                       d.periodic_x = true;
                       d.rule_x = QuadRule::periodic_trapezoid;
                       ExampleInstance inst;
                       inst.label = "unit cylinder in R^3";
                       inst.ambient_description = amb->label();
                       inst.immersion = std::make_shared<const Immersion>(
                           amb, detail::param_exprs({"cos(x)", "sin(x)", "y"}, {}), d, inst.label);
                       inst.expected = {{"biharmonic", false, 1e-7}, {"harmonic", false, 1e-9}, {"cmc", true, 1e-8},
                                        {"K", 0.0, 1e-8},           {"normH2", 0.25, 1e-8},   {"pseudo_umbilical", false, 1e-8},
                                        {"flat", true, 1e-8}};
                       return inst;
                   }});

    out.push_back({"clifford-minimal-S3", "minimal Clifford torus S^1(1/sqrt2) x S^1(1/sqrt2) in S^3(1)", {},
                   [](const Params&) {
                       auto amb = std::make_shared<const AmbientManifold>(AmbientManifold::sphere(3, 1.0));
                       // X = (cos x, sin x, cos y, sin y)/sqrt2, projected from the north pole.
                       const std::string den = "(sqrt(2) - sin(y))";
                       ExampleInstance inst;
                       inst.label = "minimal Clifford torus in S^3";
                       inst.ambient_description = amb->label();
                       inst.immersion = std::make_shared<const Immersion>(
                           amb, detail::param_exprs({"cos(x)/" + den, "sin(x)/" + den, "cos(y)/" + den}, {}),
                           detail::periodic_torus(), inst.label);
                       inst.expected = {{"biharmonic", true, 1e-7}, {"harmonic", true, 1e-9}, {"cmc", true, 1e-8},
                                        {"K", 0.0, 1e-8},          {"normH2", 0.0, 1e-8},  {"pseudo_umbilical", true, 1e-8},
                                        {"flat", true, 1e-8}};
                       return inst;
                   }});

    out.push_back({"small-sphere-S3",
                   "small sphere S^2(r) in S^3(1), polar chart; biharmonic iff r = 1/sqrt2 (or minimal at r = 1)",
                   {{"r", 1.0 / std::sqrt(2.0)}}, [](const Params& p) {
                       const double r = p.at("r");
                       if (!(r > 0.0 && r <= 1.0)) fail(Errc::bad_parameter, "small sphere radius must be in (0, 1]");
                       auto amb = std::make_shared<const AmbientManifold>(AmbientManifold::sphere(3, 1.0));
                       // X = (r omega, sqrt(1 - r^2)); stereographic image u = r omega / (1 - sqrt(1 - r^2)).
                       const std::string s = "(r/(1 - sqrt(1 - r^2)))";
                       ExampleInstance inst;
                       inst.label = "small sphere of radius " + num(r) + " in S^3";
                       inst.ambient_description = amb->label();
                       inst.immersion = std::make_shared<const Immersion>(
                           amb, detail::param_exprs({s + "*sin(x)*cos(y)", s + "*sin(x)*sin(y)", s + "*cos(x)"}, p),
                           detail::polar_sphere(), inst.label);
                       inst.expected = detail::sphere_family_expectations(r);
                       return inst;
                   }});

    out.push_back({"small-sphere-S3-isothermal",
                   "small sphere S^2(r) in S^3(1) in a Mercator (isothermal) chart, y in [-2,2]; for Hopf checks",
                   {{"r", 1.0 / std::sqrt(2.0)}}, [](const Params& p) {
                       const double r = p.at("r");
                       if (!(r > 0.0 && r <= 1.0)) fail(Errc::bad_parameter, "small sphere radius must be in (0, 1]");
                       auto amb = std::make_shared<const AmbientManifold>(AmbientManifold::sphere(3, 1.0));
                       const std::string s = "(r/(1 - sqrt(1 - r^2)))";
                       const std::string sech = "(2/(exp(y) + exp(-y)))";
                       const std::string tanh = "((exp(y) - exp(-y))/(exp(y) + exp(-y)))";
                       Domain d;
                       d.x0 = 0.0;
                       d.x1 = 2.0 * M_PI;
                       d.y0 = -2.0;
                       d.y1 = 2.0;
                       d.periodic_x = true;
                       d.rule_x = QuadRule::periodic_trapezoid;
                       ExampleInstance inst;
                       inst.label = "small sphere of radius " + num(r) + " in S^3 (Mercator chart)";
                       inst.ambient_description = amb->label();
                       inst.immersion = std::make_shared<const Immersion>(
                           amb,
                           detail::param_exprs({s + "*" + sech + "*cos(x)", s + "*" + sech + "*sin(x)", s + "*" + tanh}, p),
                           d, inst.label);
                       inst.expected = detail::sphere_family_expectations(r);
                       return inst;
                   }});

    out.push_back({"clifford-torus-S4",
                   "S^1(1/2) x S^1(1/2) in S^3(1/sqrt2) in S^4(1); proper biharmonic, flat, pseudo-umbilical, |H| = 1", {},
                   [](const Params&) {
                       auto amb = std::make_shared<const AmbientManifold>(AmbientManifold::sphere(4, 1.0));
                       // X = (cos x, sin x, cos y, sin y, sqrt2)/2; u = X_{1..4} / (1 - 1/sqrt2).
                       const std::string s = "(1/(2 - sqrt(2)))";
                       ExampleInstance inst;
                       inst.label = "Clifford torus in S^3(1/sqrt2) in S^4";
                       inst.ambient_description = amb->label();
                       inst.immersion = std::make_shared<const Immersion>(
                           amb,
                           detail::param_exprs({s + "*cos(x)", s + "*sin(x)", s + "*cos(y)", s + "*sin(y)"}, {}),
                           detail::periodic_torus(), inst.label);
                       inst.expected = {{"biharmonic", true, 1e-7},  {"harmonic", false, 1e-9}, {"cmc", true, 1e-8},
                                        {"K", 0.0, 1e-8},           {"normH2", 1.0, 1e-8},     {"pseudo_umbilical", true, 1e-8},
                                        {"flat", true, 1e-8}};
                       return inst;
                   }});

    out.push_back(perturbed_random_spec());
    return out;
}

/// Randomly perturbed sphere: in R^3 (spherical = 0) the unit sphere with a
/// radial bump (1 + 0.2 f) and an azimuthal shear, in S^3 (spherical = 1) the
/// same construction on the chart sphere |u| = 1.5 (a small sphere of radius
/// 12/13). Generic control: nothing expected beyond non-biharmonicity.
inline ExampleSpec perturbed_random_spec() {
    return {"perturbed-random", "coefficient-perturbed sphere in R^3 (spherical=0) or S^3 (spherical=1)",
            {{"seed", 1.0}, {"spherical", 0.0}}, [](const Params& p) {
                const double seed = p.at("seed");
                const bool spherical = p.at("spherical") != 0.0;
                if (seed < 0 || seed != std::floor(seed)) fail(Errc::bad_parameter, "seed must be a nonnegative integer");
                std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
                const std::string f = detail::random_sphere_function(rng);
                const std::string g = detail::random_sphere_function(rng);
                std::shared_ptr<const AmbientManifold> amb;
                std::string scale;
                if (spherical) {
                    amb = std::make_shared<const AmbientManifold>(AmbientManifold::sphere(3, 1.0));
                    scale = "1.5";
                } else {
                    amb = std::make_shared<const AmbientManifold>(AmbientManifold::euclidean(3));
                    scale = "1";
                }
                const std::string radial = "(" + scale + "*(1 + 0.2*(" + f + ")))";
                const std::string twist = "(0.15*(" + g + "))";
                const std::vector<std::string> coords = {radial + "*sin(x)*cos(y + " + twist + ")",
                                                         radial + "*sin(x)*sin(y + " + twist + ")", radial + "*cos(x)"};
                ExampleInstance inst;
                inst.label = std::string("perturbed sphere in ") + (spherical ? "S^3" : "R^3") + ", seed " +
                             detail::num(seed);
                inst.ambient_description = amb->label();
                inst.immersion =
                    std::make_shared<const Immersion>(amb, detail::param_exprs(coords, {}), detail::polar_sphere(), inst.label);
                inst.expected = {{"biharmonic", false, 1e-7}, {"harmonic", false, 1e-9}};
                return inst;
            }};
}

inline const std::vector<ExampleSpec>& example_registry() {
    static const std::vector<ExampleSpec> reg = builtin_examples();
    return reg;
}

inline const ExampleSpec& get_example(std::string_view name) {
    for (const auto& e : example_registry()) {
        if (e.name == name) return e;
    }
    fail(Errc::unknown_example, "no built-in example named '" + std::string(name) + "'");
}

inline ExampleInstance instantiate_example(std::string_view name, const Params& overrides = {}) {
    return get_example(name).instantiate(overrides);
}

// ---------------------------------------------------------------------------
// Spec files
//
//   bitensionlab-spec v1
//   [params]      name = number              (defaults, overridable)
//   [ambient]     kind = euclidean|sphere|hyperbolic|conformal|metric
//                 dim = n, radius = expr, factor = expr, hAB = expr
//   [immersion]   label = text, u1 ... un = expr in x, y and params
//   [metric]      g11, g12, g22 = expr       (optional prescribed domain metric)
//   [domain]      x = a : b, y = a : b, periodic = none|x|y|xy,
//                 rule_x / rule_y = gauss-legendre|periodic-trapezoid,
//                 topology = patch|sphere|torus
//   [expected]    property = true|false|expr [+- tol]
//
// '#' starts a comment. Errors carry 1-based line and column.

namespace detail {

struct SpecValue {
    std::string text;
    std::size_t line = 0;
    std::size_t column = 0;  // of the first character of text
};

[[noreturn]] inline void spec_error(const std::string& msg, std::size_t line, std::size_t column) {
    throw Error(Errc::spec_parse_error, msg, line, column);
}

inline Expr spec_expr(const SpecValue& v, const Params& params) {
    try {
        return substitute(parse_expr(v.text), params);
    } catch (const Error& e) {
        const std::size_t col = e.code() == Errc::syntax_error ? v.column + e.offset() - 1 : v.column;
        spec_error(e.what(), v.line, col);
    }
}

inline double spec_number(const SpecValue& v, const Params& params) {
    const Expr e = spec_expr(v, params);
    const auto c = numeric_constant(e);
    if (!c) spec_error("expected a constant expression", v.line, v.column);
    return *c;
}

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct ParsedSpec {
    std::string name;
    std::map<std::string, std::map<std::string, SpecValue>> sections;
    std::vector<std::pair<std::string, SpecValue>> expected;  // keeps file order
};

inline ParsedSpec parse_spec_text(const std::string& text, const std::string& name) {
    ParsedSpec out;
    out.name = name;
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    bool header = false;
    std::string section;
    const std::vector<std::string> known = {"params", "ambient", "immersion", "metric", "domain", "expected"};
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) line = line.substr(0, hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const std::size_t indent = line.find_first_not_of(" \t") + 1;
        if (!header) {
            if (t != "bitensionlab-spec v1") spec_error("expected header 'bitensionlab-spec v1'", line_no, indent);
            header = true;
            continue;
        }
        if (t.front() == '[') {
            if (t.back() != ']') spec_error("unterminated section header", line_no, indent + t.size());
            section = trim(t.substr(1, t.size() - 2));
            if (std::find(known.begin(), known.end(), section) == known.end()) {
                spec_error("unknown section '" + section + "'", line_no, indent + 1);
            }
            if (out.sections.contains(section)) spec_error("duplicate section '" + section + "'", line_no, indent + 1);
            out.sections[section];
            continue;
        }
        if (section.empty()) spec_error("key outside of any section", line_no, indent);
        const auto eq = line.find('=');
        if (eq == std::string::npos) spec_error("expected 'key = value'", line_no, indent);
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) spec_error("missing key before '='", line_no, eq + 1);
        const std::string rest = line.substr(eq + 1);
        const auto vstart = rest.find_first_not_of(" \t");
        if (vstart == std::string::npos) spec_error("missing value after '='", line_no, eq + 2);
        SpecValue v{trim(rest), line_no, eq + 2 + vstart};
        auto& sec = out.sections[section];
        if (sec.contains(key)) spec_error("duplicate key '" + key + "'", line_no, indent);
        sec[key] = v;
        if (section == "expected") out.expected.emplace_back(key, v);
    }
    if (!header) spec_error("empty spec file", line_no == 0 ? 1 : line_no, 1);
    return out;
}

inline const SpecValue& spec_require(const ParsedSpec& s, const std::string& section, const std::string& key) {
    const auto it = s.sections.find(section);
    if (it == s.sections.end()) spec_error("missing section [" + section + "]", 1, 1);
    const auto k = it->second.find(key);
    if (k == it->second.end()) spec_error("missing key '" + key + "' in [" + section + "]", 1, 1);
    return k->second;
}

inline const SpecValue* spec_find(const ParsedSpec& s, const std::string& section, const std::string& key) {
    const auto it = s.sections.find(section);
    if (it == s.sections.end()) return nullptr;
    const auto k = it->second.find(key);
    return k == it->second.end() ? nullptr : &k->second;
}

inline ExampleInstance build_from_spec(const ParsedSpec& s, const Params& params) {
    const auto& kindv = spec_require(s, "ambient", "kind");
    const auto& dimv = spec_require(s, "ambient", "dim");
    const double dimd = spec_number(dimv, params);
    if (dimd != std::floor(dimd) || dimd < 2 || dimd > 8) spec_error("dim must be an integer in [2, 8]", dimv.line, dimv.column);
    const int n = static_cast<int>(dimd);
    auto radius = [&] {
        const auto* r = spec_find(s, "ambient", "radius");
        return r ? spec_number(*r, params) : 1.0;
    };
    std::shared_ptr<const AmbientManifold> amb;
    try {
        if (kindv.text == "euclidean") {
            amb = std::make_shared<const AmbientManifold>(AmbientManifold::euclidean(n));
        } else if (kindv.text == "sphere") {
            amb = std::make_shared<const AmbientManifold>(AmbientManifold::sphere(n, radius()));
        } else if (kindv.text == "hyperbolic") {
            amb = std::make_shared<const AmbientManifold>(AmbientManifold::hyperbolic(n, radius()));
        } else if (kindv.text == "conformal") {
            amb = std::make_shared<const AmbientManifold>(
                AmbientManifold::conformal(n, spec_expr(spec_require(s, "ambient", "factor"), params)));
        } else if (kindv.text == "metric") {
            std::vector<Expr> m(static_cast<std::size_t>(n * n), expr::constant(0.0));
            for (int a = 0; a < n; ++a)
                for (int b = a; b < n; ++b) {
                    const std::string key = "h" + std::to_string(a + 1) + std::to_string(b + 1);
                    if (const auto* v = spec_find(s, "ambient", key)) {
                        m[static_cast<std::size_t>(a * n + b)] = spec_expr(*v, params);
                        m[static_cast<std::size_t>(b * n + a)] = m[static_cast<std::size_t>(a * n + b)];
                    }
                }
            amb = std::make_shared<const AmbientManifold>(n, std::move(m), "metric from spec");
        } else {
            spec_error("unknown ambient kind '" + kindv.text + "'", kindv.line, kindv.column);
        }
    } catch (const Error& e) {
        if (e.code() == Errc::spec_parse_error) throw;
        spec_error(e.what(), kindv.line, kindv.column);
    }

    std::vector<Expr> coords;
    for (int a = 0; a < n; ++a) coords.push_back(spec_expr(spec_require(s, "immersion", "u" + std::to_string(a + 1)), params));

    Domain d;
    auto range = [&](const std::string& key, double& lo, double& hi) {
        const auto& v = spec_require(s, "domain", key);
        const auto colon = v.text.find(':');
        if (colon == std::string::npos) spec_error("expected 'a : b'", v.line, v.column);
        lo = spec_number({trim(v.text.substr(0, colon)), v.line, v.column}, params);
        const auto bstart = v.text.find_first_not_of(" \t", colon + 1);
        hi = spec_number({trim(v.text.substr(colon + 1)), v.line, v.column + (bstart == std::string::npos ? colon + 1 : bstart)},
                         params);
    };
    range("x", d.x0, d.x1);
    range("y", d.y0, d.y1);
    if (const auto* v = spec_find(s, "domain", "periodic")) {
        if (v->text == "x" || v->text == "xy") d.periodic_x = true;
        if (v->text == "y" || v->text == "xy") d.periodic_y = true;
        if (v->text != "none" && v->text != "x" && v->text != "y" && v->text != "xy") {
            spec_error("periodic must be none, x, y or xy", v->line, v->column);
        }
    }
    auto rule = [&](const std::string& key, bool periodic) {
        const auto* v = spec_find(s, "domain", key);
        if (!v) return periodic ? QuadRule::periodic_trapezoid : QuadRule::gauss_legendre;
        if (v->text == "gauss-legendre") return QuadRule::gauss_legendre;
        if (v->text == "periodic-trapezoid") return QuadRule::periodic_trapezoid;
        spec_error("unknown quadrature rule '" + v->text + "'", v->line, v->column);
    };
    d.rule_x = rule("rule_x", d.periodic_x);
    d.rule_y = rule("rule_y", d.periodic_y);
    if (const auto* v = spec_find(s, "domain", "topology")) {
        if (v->text == "sphere") {
            d.topology = Topology::sphere;
        } else if (v->text == "torus") {
            d.topology = Topology::torus;
        } else if (v->text != "patch") {
            spec_error("topology must be patch, sphere or torus", v->line, v->column);
        }
    }

    ExampleInstance inst;
    const auto* labelv = spec_find(s, "immersion", "label");
    inst.label = labelv ? labelv->text : s.name;
    inst.ambient_description = amb->label();
    const auto& domv = spec_require(s, "domain", "x");
    try {
        if (s.sections.contains("metric")) {
            std::array<Expr, 3> g = {spec_expr(spec_require(s, "metric", "g11"), params),
                                     spec_expr(spec_require(s, "metric", "g12"), params),
                                     spec_expr(spec_require(s, "metric", "g22"), params)};
            inst.immersion = std::make_shared<const Immersion>(Immersion::with_metric(amb, coords, g, d, inst.label));
        } else {
            inst.immersion = std::make_shared<const Immersion>(amb, coords, d, inst.label);
        }
    } catch (const Error& e) {
        if (e.code() == Errc::spec_parse_error) throw;
        spec_error(e.what(), domv.line, domv.column);
    }

    const auto props = expectation_properties();
    for (const auto& [key, v] : s.expected) {
        if (std::find(props.begin(), props.end(), key) == props.end()) {
            spec_error("unknown expected property '" + key + "'", v.line, v.column);
        }
        Expectation ex{key, false, key == "biharmonic" ? 1e-7 : key == "harmonic" ? 1e-9 : 1e-8};
        std::string body = v.text;
        if (const auto pm = body.find("+-"); pm != std::string::npos) {
            ex.tolerance = spec_number({trim(body.substr(pm + 2)), v.line, v.column + pm + 2}, params);
            body = trim(body.substr(0, pm));
        }
        const bool boolean_property = key != "K" && key != "normH2";
        if (body == "true" || body == "false") {
            if (!boolean_property) spec_error("'" + key + "' takes a number", v.line, v.column);
            ex.value = body == "true";
        } else {
            if (boolean_property) spec_error("'" + key + "' takes true or false", v.line, v.column);
            ex.value = spec_number({body, v.line, v.column}, params);
        }
        inst.expected.push_back(ex);
    }
    return inst;
}

}  // namespace detail

inline ExampleSpec parse_spec(const std::string& text, const std::string& name = "spec") {
    auto parsed = std::make_shared<detail::ParsedSpec>(detail::parse_spec_text(text, name));
    ExampleSpec spec;
    spec.name = name;
    spec.description = "user spec file";
    if (const auto it = parsed->sections.find("params"); it != parsed->sections.end()) {
        for (const auto& [k, v] : it->second) spec.defaults[k] = detail::spec_number(v, {});
    }
    // Fail early on anything that does not depend on parameter overrides.
    (void)detail::build_from_spec(*parsed, spec.defaults);
    spec.build = [parsed](const Params& p) { return detail::build_from_spec(*parsed, p); };
    return spec;
}

inline ExampleSpec load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::spec_parse_error, "cannot open spec file '" + path + "'", 0, 0);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string name = path;
    if (const auto slash = name.find_last_of('/'); slash != std::string::npos) name = name.substr(slash + 1);
    if (const auto dot = name.rfind(".spec"); dot != std::string::npos) name = name.substr(0, dot);
    return parse_spec(ss.str(), name);
}

}  // namespace bitensionlab
