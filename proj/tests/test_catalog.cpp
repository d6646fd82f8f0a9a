#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>

#include "bitensionlab/catalog.hpp"
#include "bitensionlab/checks.hpp"
#include "test_support.hpp"

using namespace bitensionlab;
using Catch::Matchers::WithinAbs;

namespace {

const std::string kSpecs = BITENSIONLAB_SPECS_DIR;

std::optional<Expectation> expectation(const ExampleInstance& inst, const std::string& property) {
    for (const auto& e : inst.expected)
        if (e.property == property) return e;
    return std::nullopt;
}

bool expects_true(const ExampleInstance& inst, const std::string& property) {
    const auto e = expectation(inst, property);
    return e && std::holds_alternative<bool>(e->value) && std::get<bool>(e->value);
}

// every entry plus the parameter variants used as controls
std::vector<ExampleInstance> full_corpus() {
    std::vector<ExampleInstance> out;
    for (const auto& spec : example_registry()) out.push_back(spec.instantiate());
    out.push_back(instantiate_example("small-sphere-S3", {{"r", 0.6}}));
    out.push_back(instantiate_example("small-sphere-S3", {{"r", 1.0}}));
    out.push_back(instantiate_example("perturbed-random", {{"spherical", 1.0}}));
    out.push_back(instantiate_example("perturbed-random", {{"seed", 7.0}}));
    for (const char* f : {"small-sphere-S3.spec", "geodesic-sphere-H3.spec", "torus-map-R3.spec"}) {
        out.push_back(load_spec_file(kSpecs + "/" + f).instantiate());
    }
    return out;
}

Errc spec_code_of(const std::string& text, std::size_t* line = nullptr, std::size_t* column = nullptr) {
    try {
        (void)parse_spec(text).instantiate();
    } catch (const Error& e) {
        if (line) *line = e.line();
        if (column) *column = e.column();
        return e.code();
    }
    FAIL("spec text parsed without error");
    return Errc::bad_parameter;
}

const std::string kGoodSpec = R"(bitensionlab-spec v1
[params]
a = 2

[ambient]
kind = euclidean
dim = 3

[immersion]
u1 = a*cos(x)
u2 = a*sin(x)
u3 = y

[domain]
x = 0 : 2*pi
y = -1 : 1
periodic = x

[expected]
cmc = true
K = 0 +- 1e-9
)";

std::string replace(std::string text, const std::string& from, const std::string& to) {
    const auto at = text.find(from);
    REQUIRE(at != std::string::npos);
    return text.replace(at, from.size(), to);
}

}  // namespace

TEST_CASE("registry holds the required entries") {
    std::set<std::string> names;
    for (const auto& spec : example_registry()) names.insert(spec.name);
    for (const char* n : {"plane-R3", "unit-sphere-R3", "cylinder-R3", "clifford-minimal-S3", "small-sphere-S3", "clifford-torus-S4",
                          "perturbed-random"})
        CHECK(names.contains(n));
    CHECK(names.size() == example_registry().size());
    CHECK(testing::throws_code([] { (void)get_example("nonexistent"); }, Errc::unknown_example));
}

TEST_CASE("parameter validation") {
    CHECK(testing::throws_code([] { (void)instantiate_example("small-sphere-S3", {{"radius", 0.5}}); }, Errc::bad_parameter));
    CHECK(testing::throws_code([] { (void)instantiate_example("small-sphere-S3", {{"r", 1.2}}); }, Errc::bad_parameter));
    CHECK(testing::throws_code([] { (void)instantiate_example("small-sphere-S3", {{"r", 0.0}}); }, Errc::bad_parameter));
    CHECK(testing::throws_code([] { (void)instantiate_example("unit-sphere-R3", {{"r", -1.0}}); }, Errc::bad_parameter));
    CHECK(testing::throws_code([] { (void)instantiate_example("perturbed-random", {{"seed", 1.5}}); }, Errc::bad_parameter));
    CHECK(testing::throws_code([] { (void)instantiate_example("plane-R3", {{"r", 1.0}}); }, Errc::bad_parameter));
    const auto inst = instantiate_example("small-sphere-S3", {{"r", 0.6}});
    CHECK(inst.params.at("r") == 0.6);
    CHECK(instantiate_example("small-sphere-S3").params.at("r") == 1.0 / std::sqrt(2.0));
}

TEST_CASE("the documented expectations of the biharmonic entries") {
    const auto s = instantiate_example("small-sphere-S3");
    CHECK(expects_true(s, "biharmonic"));
    CHECK(expects_true(s, "pseudo_umbilical"));
    CHECK_THAT(std::get<double>(expectation(s, "K")->value), WithinAbs(2.0, 1e-14));
    CHECK_THAT(std::get<double>(expectation(s, "normH2")->value), WithinAbs(1.0, 1e-14));

    const auto c = instantiate_example("clifford-torus-S4");
    CHECK(expects_true(c, "biharmonic"));
    CHECK(expects_true(c, "flat"));
    CHECK(expects_true(c, "pseudo_umbilical"));
    CHECK_THAT(std::get<double>(expectation(c, "normH2")->value), WithinAbs(1.0, 1e-14));

    CHECK(expects_true(instantiate_example("plane-R3"), "harmonic"));
    CHECK(expects_true(instantiate_example("clifford-minimal-S3"), "harmonic"));
    CHECK(expects_true(instantiate_example("cylinder-R3"), "cmc"));
    CHECK_FALSE(expects_true(instantiate_example("unit-sphere-R3"), "biharmonic"));
}

TEST_CASE("every expected property is confirmed by the engine") {
    for (const auto& inst : full_corpus()) {
        INFO(inst.name << " " << inst.label);
        const auto results = verify_expectations(inst);
        CHECK(results.size() == inst.expected.size());
        for (const auto& r : results) {
            INFO(r.expected.property << " measured " << r.measured);
            CHECK(r.pass);
        }
    }
}

TEST_CASE("a wrong expectation is reported as failing") {
    auto inst = instantiate_example("unit-sphere-R3");
    inst.expected = {{"biharmonic", true, 1e-7}, {"K", 2.0, 1e-8}, {"cmc", true, 1e-8}};
    const auto results = verify_expectations(inst);
    REQUIRE(results.size() == 3);
    CHECK_FALSE(results[0].pass);
    CHECK_FALSE(results[1].pass);
    CHECK_THAT(results[1].measured, WithinAbs(1.0, 1e-8));
    CHECK(results[2].pass);
}

TEST_CASE("biharmonic CMC spheres are pseudo-umbilical") {
    int seen = 0;
    for (const auto& inst : full_corpus()) {
        if (!inst.immersion->induced() || inst.immersion->domain().topology != Topology::sphere) continue;
        const auto pts = survey(*inst.immersion, 12, 12);
        double tau2 = 0.0;
        double drift = 0.0;
        double pu = 0.0;
        for (const auto& p : pts) {
            tau2 = std::max(tau2, p.norm_tau2);
            drift = std::max(drift, p.cmc_drift);
            pu = std::max(pu, p.pseudo_umbilic);
        }
        if (tau2 > 1e-7 || drift > 1e-8) continue;
        INFO(inst.name << " " << inst.label);
        ++seen;
        CHECK(pu <= 1e-8);
    }
    // S^2(1/sqrt 2) from the registry and from the spec file, and the great sphere r = 1
    CHECK(seen >= 3);
}

TEST_CASE("compact biharmonic CMC surfaces with K >= 0 are flat or pseudo-umbilical") {
    int seen = 0;
    for (const auto& inst : full_corpus()) {
        if (!inst.immersion->induced() || !inst.immersion->domain().compact()) continue;
        const auto pts = survey(*inst.immersion, 12, 12);
        double tau2 = 0.0;
        double drift = 0.0;
        double max_k = 0.0;
        double min_k = INFINITY;
        double pu = 0.0;
        for (const auto& p : pts) {
            tau2 = std::max(tau2, p.norm_tau2);
            drift = std::max(drift, p.cmc_drift);
            max_k = std::max(max_k, std::abs(p.K));
            min_k = std::min(min_k, p.K);
            pu = std::max(pu, p.pseudo_umbilic);
        }
        if (tau2 > 1e-7 || drift > 1e-8 || min_k < -1e-8) continue;
        INFO(inst.name << " " << inst.label);
        ++seen;
        CHECK((max_k <= 1e-8 || pu <= 1e-8));
    }
    CHECK(seen >= 5);
}

TEST_CASE("random perturbations are reproducible and seed-dependent") {
    const auto a = instantiate_example("perturbed-random", {{"seed", 3.0}});
    const auto b = instantiate_example("perturbed-random", {{"seed", 3.0}});
    const auto c = instantiate_example("perturbed-random", {{"seed", 4.0}});
    const Point2 p{1.1, 2.3};
    const auto ga = geometry_at(*a.immersion, p);
    CHECK(ga.normH2 == geometry_at(*b.immersion, p).normH2);
    CHECK(ga.normH2 != geometry_at(*c.immersion, p).normH2);
    CHECK(pseudo_umbilic_residual(ga) > 1e-3);
}

TEST_CASE("the small-sphere spec file reproduces the built-in entry") {
    const auto from_file = load_spec_file(kSpecs + "/small-sphere-S3.spec").instantiate();
    const auto builtin = instantiate_example("small-sphere-S3");
    for (const Point2& p : midpoint_grid(builtin.immersion->domain(), 4, 4)) {
        const auto a = geometry_at(*from_file.immersion, p, 3);
        const auto b = geometry_at(*builtin.immersion, p, 3);
        CHECK_THAT(a.K, WithinAbs(b.K, 1e-12));
        CHECK_THAT(a.normH2, WithinAbs(b.normH2, 1e-12));
        CHECK_THAT(a.g[0], WithinAbs(b.g[0], 1e-12));
        CHECK_THAT(a.g[2], WithinAbs(b.g[2], 1e-12));
    }
    // parameters in spec files are overridable like built-in ones
    const auto other = load_spec_file(kSpecs + "/small-sphere-S3.spec").instantiate({{"r", 0.6}});
    CHECK_THAT(geometry_at(*other.immersion, {1.0, 1.0}).normH2, WithinAbs(0.64 / 0.36, 1e-12));
}

TEST_CASE("the hyperbolic spec has the closed-form geodesic sphere values") {
    const auto spec = load_spec_file(kSpecs + "/geodesic-sphere-H3.spec");
    for (double rho : {0.5, 1.0, 2.0}) {
        const auto inst = spec.instantiate({{"rho", rho}});
        const auto geo = geometry_at(*inst.immersion, {1.0, 0.3}, 3);
        CHECK_THAT(geo.K, WithinAbs(1.0 / std::pow(std::sinh(rho), 2), 1e-10));
        CHECK_THAT(geo.normH2, WithinAbs(1.0 / std::pow(std::tanh(rho), 2), 1e-10));
    }
}

TEST_CASE("spec files parse with the documented grammar") {
    const auto spec = parse_spec(kGoodSpec, "cyl");
    CHECK(spec.name == "cyl");
    CHECK(spec.defaults.at("a") == 2.0);
    const auto inst = spec.instantiate();
    CHECK(inst.immersion->ambient().dim() == 3);
    CHECK(inst.immersion->domain().topology == Topology::patch);
    REQUIRE(inst.expected.size() == 2);
    CHECK(inst.expected[0].property == "cmc");
    CHECK(inst.expected[1].tolerance == 1e-9);
    CHECK_THAT(geometry_at(*inst.immersion, {0.3, 0.2}).normH2, WithinAbs(1.0 / 16.0, 1e-14));
    for (const auto& r : verify_expectations(inst)) CHECK(r.pass);
    // comments and blank lines are ignored anywhere
    const auto commented = parse_spec("# leading comment\n\n" + replace(kGoodSpec, "dim = 3", "dim = 3   # three") + "\n# trailing\n");
    CHECK(commented.instantiate().immersion->ambient().dim() == 3);
}

TEST_CASE("spec parse errors carry line and column") {
    std::size_t line = 0;
    std::size_t col = 0;

    CHECK(spec_code_of("bitensionlab-spec v2\n", &line, &col) == Errc::spec_parse_error);
    CHECK(line == 1);
    CHECK(col == 1);

    CHECK(spec_code_of("", &line, &col) == Errc::spec_parse_error);

    CHECK(spec_code_of(replace(kGoodSpec, "[domain]", "[domians]"), &line, &col) == Errc::spec_parse_error);
    CHECK(line == 14);
    CHECK(col == 2);

    CHECK(spec_code_of(replace(kGoodSpec, "[domain]", "[domain"), &line, &col) == Errc::spec_parse_error);
    CHECK(line == 14);

    CHECK(spec_code_of(replace(kGoodSpec, "u3 = y", "u3 = y\nu2 = x"), &line, &col) == Errc::spec_parse_error);
    CHECK(line == 13);
    CHECK(col == 1);

    CHECK(spec_code_of(replace(kGoodSpec, "[params]", "[params]\n[params]"), &line, &col) == Errc::spec_parse_error);
    CHECK(line == 3);

    CHECK(spec_code_of(replace(kGoodSpec, "u3 = y", "u3 y"), &line, &col) == Errc::spec_parse_error);
    CHECK(line == 12);

    // an expression syntax error points inside the value: "a*cos(x" is missing ')'
    CHECK(spec_code_of(replace(kGoodSpec, "u1 = a*cos(x)", "u1 = a*cos(x"), &line, &col) == Errc::spec_parse_error);
    CHECK(line == 10);
    CHECK(col > 6);

    CHECK(spec_code_of(replace(kGoodSpec, "u2 = a*sin(x)", "u2 = a*$sin(x)"), &line, &col) == Errc::spec_parse_error);
    CHECK(line == 11);
    CHECK(col == 8);

    CHECK(spec_code_of(replace(kGoodSpec, "kind = euclidean", "kind = lorentzian"), &line, &col) == Errc::spec_parse_error);
    CHECK(line == 6);
    CHECK(col == 8);

    CHECK(spec_code_of(replace(kGoodSpec, "periodic = x", "periodic = z"), &line, &col) == Errc::spec_parse_error);
    CHECK(line == 17);
    CHECK(col == 12);

    CHECK(spec_code_of(replace(kGoodSpec, "x = 0 : 2*pi", "x = 0 .. 2*pi"), &line, &col) == Errc::spec_parse_error);
    CHECK(line == 15);

    CHECK(spec_code_of(replace(kGoodSpec, "cmc = true", "umbilic = true"), &line, &col) == Errc::spec_parse_error);
    CHECK(line == 20);

    CHECK(spec_code_of(replace(kGoodSpec, "cmc = true", "cmc = 3"), &line, &col) == Errc::spec_parse_error);
    CHECK(spec_code_of(replace(kGoodSpec, "K = 0 +- 1e-9", "K = true"), &line, &col) == Errc::spec_parse_error);
    CHECK(spec_code_of(replace(kGoodSpec, "dim = 3", "dim = 2.5"), &line, &col) == Errc::spec_parse_error);
    CHECK(line == 7);

    // a free variable in a constant slot
    CHECK(spec_code_of(replace(kGoodSpec, "a = 2", "a = x"), &line, &col) == Errc::spec_parse_error);
    CHECK(line == 3);

    // missing required section
    CHECK(spec_code_of(replace(kGoodSpec, "[ambient]\nkind = euclidean\ndim = 3\n", "")) == Errc::spec_parse_error);
}

TEST_CASE("missing spec files") {
    CHECK(testing::throws_code([] { (void)load_spec_file(kSpecs + "/does-not-exist.spec"); }, Errc::spec_parse_error));
}
