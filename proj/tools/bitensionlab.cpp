// bitensionlab: run identity checks on catalog examples or spec files, scan
// one-parameter families, and list or describe what is available.
//
// Exit codes: 0 all selected checks pass (degenerate and skipped included),
// 1 some check fails, 2 usage or input errors.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "bitensionlab/catalog.hpp"
#include "bitensionlab/report.hpp"
#include "bitensionlab/runner.hpp"
#include "bitensionlab/scan.hpp"

namespace bl = bitensionlab;

namespace {

constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bool looks_like_path(const std::string& target) {
    return target.find('/') != std::string::npos || target.ends_with(".spec") || std::filesystem::exists(target);
}

bl::ExampleSpec resolve_target(const std::string& target) {
    if (looks_like_path(target)) return bl::load_spec_file(target);
    return bl::get_example(target);
}

double parse_value(const std::string& text) {
    const auto v = bl::numeric_constant(bl::parse_expr(text));
    if (!v) throw UsageError("parameter value '" + text + "' is not a constant");
    return *v;
}

// k=v pairs become overrides; a bare name (scan only) is the swept parameter.
bl::Params parse_params(const std::vector<std::string>& items, std::optional<std::string>* swept) {
    bl::Params out;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            if (!swept) throw UsageError("--param expects name=value, got '" + item + "'");
            if (swept->has_value()) throw UsageError("only one parameter can be swept");
            *swept = bl::detail::trim(item);
            continue;
        }
        out[bl::detail::trim(item.substr(0, eq))] = parse_value(item.substr(eq + 1));
    }
    return out;
}

std::pair<int, int> parse_grid(const std::string& text) {
    int nx = 0;
    int ny = 0;
    char sep = 0;
    std::istringstream is(text);
    if (!(is >> nx)) throw UsageError("grid must look like 24x24");
    if (is >> sep) {
        if (sep != 'x' || !(is >> ny)) throw UsageError("grid must look like 24x24");
    } else {
        ny = nx;
    }
    if (nx < 1 || ny < 1) throw UsageError("grid sizes must be positive");
    return {nx, ny};
}

std::pair<double, double> parse_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw UsageError("range must look like lo:hi");
    return {parse_value(text.substr(0, colon)), parse_value(text.substr(colon + 1))};
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream os(path);
    if (!os) throw UsageError("cannot write '" + path + "'");
    os << content;
}

std::string describe_example(const bl::ExampleSpec& spec) {
    std::ostringstream os;
    os << spec.name << ": " << spec.description << '\n';
    for (const auto& [k, v] : spec.defaults) os << "  param " << k << " = " << bl::detail::format_double(v) << '\n';
    const auto inst = spec.instantiate();
    os << "  ambient " << inst.ambient_description << '\n';
    const auto& d = inst.immersion->domain();
    os << "  domain x in [" << bl::detail::format_double(d.x0) << ", " << bl::detail::format_double(d.x1) << "], y in ["
       << bl::detail::format_double(d.y0) << ", " << bl::detail::format_double(d.y1) << "], topology "
       << bl::topology_name(d.topology) << '\n';
    for (const auto& e : inst.expected) {
        os << "  expect " << e.property << " = ";
        if (std::holds_alternative<bool>(e.value)) {
            os << (std::get<bool>(e.value) ? "true" : "false");
        } else {
            os << bl::detail::format_double(std::get<double>(e.value));
        }
        os << " (tol " << bl::detail::format_double(e.tolerance) << ")\n";
    }
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical checks of bienergy identities for surfaces in Riemannian manifolds"};
    app.require_subcommand(1);

    std::string target;
    std::vector<std::string> params;
    std::string checks = "all";
    std::string grid = "24x24";
    std::string quad = "64x64";
    int jet_order = 5;
    double tol = 1.0;
    double k0 = 1.0;
    double eps_mu = 1e-6;
    std::string out;
    std::string format = "json";
    bool no_guard = false;
    bool expectations = false;

    auto* verify = app.add_subcommand("verify", "Run identity checks on an example or spec file");
    verify->add_option("target", target, "Catalog example name or spec file path")->required();
    verify->add_option("--param", params, "Parameter override name=value (repeatable)");
    verify->add_option("--checks", checks, "all, or a comma list of tau2,hilbert,lemma,prop2,thm1,thm2,thm3,prop3,s2form");
    verify->add_option("--grid", grid, "Pointwise sample grid, NxM");
    verify->add_option("--quad", quad, "Quadrature nodes for integral checks, NxM");
    verify->add_option("--jet-order", jet_order, "Jet order (2 to 5)");
    verify->add_option("--tol", tol, "Global tolerance factor");
    verify->add_option("--k0", k0, "Ambient sectional curvature bound for prop3");
    verify->add_option("--eps-mu", eps_mu, "Pseudo-umbilic threshold factor for thm2");
    verify->add_flag("--no-guard", no_guard, "Skip the quadrature node-doubling guard");
    verify->add_flag("--expectations", expectations, "Also re-verify the example's expected properties");
    verify->add_option("--out", out, "Machine report path ('-' for stdout)");
    verify->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv", "text"}));

    std::string range;
    int samples = 64;
    std::string residual = "tau2";
    std::string scan_format = "csv";
    std::string scan_grid = "6x6";
    auto* scan = app.add_subcommand("scan", "Scan a one-parameter family for residual minima");
    scan->add_option("target", target, "Catalog example name or spec file path")->required();
    scan->add_option("--param", params, "Swept parameter name, plus optional fixed name=value overrides")->required();
    scan->add_option("--range", range, "lo:hi")->required();
    scan->add_option("--samples", samples, "Number of samples");
    scan->add_option("--residual", residual, "tau2 (bitension_max), prop2 (prop2_max), hilbert, lemma, s2form");
    scan->add_option("--grid", scan_grid, "Sample grid per family member, NxM");
    scan->add_option("--jet-order", jet_order, "Jet order");
    scan->add_option("--tol", tol, "Tolerance factor for minima");
    scan->add_option("--out", out, "Output path ('-' for stdout)");
    scan->add_option("--format", scan_format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));

    auto* list = app.add_subcommand("list", "List catalog examples and checks");
    std::string describe_target;
    auto* describe = app.add_subcommand("describe", "Describe a check, catalog example or spec file");
    describe->add_option("name", describe_target, "Check name, example name or spec path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsageError;
    }

    try {
        if (*list) {
            std::cout << "examples:\n";
            for (const auto& s : bl::example_registry()) std::cout << "  " << s.name << "  " << s.description << '\n';
            std::cout << "checks:\n";
            for (const auto& c : bl::check_names()) std::cout << "  " << c << "  " << bl::check_description(c) << '\n';
            return 0;
        }

        if (*describe) {
            for (const auto& c : bl::check_names()) {
                if (c == describe_target) {
                    std::cout << c << ": " << bl::check_description(c) << "\n  minimum jet order " << bl::check_min_order(c) << '\n';
                    return 0;
                }
            }
            std::cout << describe_example(resolve_target(describe_target));
            return 0;
        }

        const bl::ExampleSpec spec = resolve_target(target);

        if (*verify) {
            const bl::Params overrides = parse_params(params, nullptr);
            const bl::ExampleInstance inst = spec.instantiate(overrides);
            bl::CheckOptions opt;
            std::tie(opt.nx, opt.ny) = parse_grid(grid);
            std::tie(opt.qx, opt.qy) = parse_grid(quad);
            opt.jet_order = jet_order;
            opt.tol_factor = tol;
            opt.k0 = k0;
            opt.eps_mu = eps_mu;
            opt.convergence_guard = !no_guard;
            if (!(tol > 0.0)) throw UsageError("--tol must be positive");
            const auto names = bl::parse_check_list(checks);
            if (jet_order < 2 || jet_order > bl::kMaxJetOrder) throw UsageError("--jet-order must be between 2 and 5");
            const auto reports = bl::run_checks(names, *inst.immersion, opt);

            bool ok = true;
            for (const auto& r : reports) ok = ok && r.ok();
            std::cout << inst.name;
            for (const auto& [k, v] : inst.params) std::cout << ' ' << k << '=' << bl::detail::format_double(v);
            std::cout << '\n' << bl::reports_text(reports);

            std::vector<bl::ExpectationResult> exp;
            if (expectations) {
                exp = bl::verify_expectations(inst);
                for (const auto& e : exp) {
                    std::cout << "expect " << e.expected.property << ": " << (e.pass ? "pass" : "fail") << " (measured "
                              << bl::detail::format_double(e.measured) << ")\n";
                    ok = ok && e.pass;
                }
            }
            std::cout << (ok ? "PASS" : "FAIL") << '\n';

            if (!out.empty()) {
                std::string body;
                if (format == "json") {
                    nlohmann::json j;
                    j["example"] = inst.name;
                    j["params"] = inst.params;
                    j["reports"] = nlohmann::json::array();
                    for (const auto& r : reports) j["reports"].push_back(bl::to_json(r));
                    if (expectations) {
                        j["expectations"] = nlohmann::json::array();
                        for (const auto& e : exp) j["expectations"].push_back(bl::to_json(e));
                    }
                    j["pass"] = ok;
                    body = j.dump(2) + "\n";
                } else if (format == "csv") {
                    body = bl::reports_csv(reports);
                } else {
                    body = bl::reports_text(reports);
                }
                write_output(out, body);
            }
            return ok ? 0 : 1;
        }

        if (*scan) {
            std::optional<std::string> swept;
            const bl::Params fixed = parse_params(params, &swept);
            if (!swept) throw UsageError("scan needs a swept parameter: --param NAME");
            if (!spec.defaults.contains(*swept)) throw UsageError("example '" + spec.name + "' has no parameter '" + *swept + "'");
            const auto [lo, hi] = parse_range(range);
            bl::CheckOptions opt;
            std::tie(opt.nx, opt.ny) = parse_grid(scan_grid);
            opt.jet_order = jet_order;
            const bl::Family family = [&](double v) {
                bl::Params p = fixed;
                p[*swept] = v;
                return spec.instantiate(p).immersion;
            };
            const bl::ScanResult res = bl::scan_family(family, lo, hi, samples, bl::scan_residual(residual, opt), 1e-7 * tol);
            std::string body;
            if (scan_format == "csv") {
                body = bl::scan_csv(res);
            } else if (scan_format == "json") {
                body = bl::to_json(res).dump(2) + "\n";
            } else {
                std::ostringstream os;
                for (const auto& [p, v] : res.rows()) os << bl::detail::format_double(p) << "  " << bl::detail::format_double(v) << '\n';
                body = os.str();
            }
            for (const auto& m : res.minima) {
                std::cerr << "minimum " << *swept << " = " << bl::detail::format_double(m.param) << "  residual "
                          << bl::detail::format_double(m.residual) << (m.below_tolerance ? "  below tolerance" : "")
                          << (m.at_boundary ? "  at range boundary" : "") << '\n';
            }
            if (!res.note.empty()) std::cerr << res.note << '\n';
            write_output(out.empty() ? "-" : out, body);
            return 0;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const bl::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    }
    return kUsageError;
}
