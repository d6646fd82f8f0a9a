#pragma once

// One-parameter family scans. Residuals are norms, so "roots" are local
// minima that dip below the tolerance; each sampled minimum is refined by
// golden-section search inside its bracketing samples.

#include <cmath>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bitensionlab/checks.hpp"

namespace bitensionlab {

using Family = std::function<std::shared_ptr<const Immersion>(double)>;
using ScanResidual = std::function<double(const Immersion&)>;

struct ScanMinimum {
    double param = 0.0;
    double residual = 0.0;
    bool below_tolerance = false;
    bool at_boundary = false;
};

struct ScanResult {
    std::vector<std::pair<double, double>> samples;
    std::vector<ScanMinimum> minima;
    double tolerance = 0.0;
    std::string note;

    /// Samples and refined minima merged in parameter order.
    std::vector<std::pair<double, double>> rows() const {
        auto out = samples;
        for (const auto& m : minima) out.emplace_back(m.param, m.residual);
        std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        out.erase(std::unique(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first == b.first; }), out.end());
        return out;
    }
};

/// Max-grid residual of a named check: tau2 (alias bitension_max), prop2
/// (prop2_max), hilbert, lemma, s2form. Raw values, not scaled.
inline ScanResidual scan_residual(std::string_view name, const CheckOptions& opt) {
    if (name == "tau2" || name == "bitension_max") {
        CheckOptions o = opt;
        o.jet_order = std::max(o.jet_order, 4);
        return [o](const Immersion& imm) { return check_tau2(imm, o).max_value("norm_tau2"); };
    }
    if (name == "prop2" || name == "prop2_max") {
        CheckOptions o = opt;
        o.jet_order = 5;
        return [o](const Immersion& imm) { return check_prop2(imm, o).max_value("absolute"); };
    }
    if (name == "hilbert") return [opt](const Immersion& imm) { return check_hilbert(imm, opt).max_value("absolute"); };
    if (name == "lemma") return [opt](const Immersion& imm) { return check_lemma(imm, opt).max_value("absolute"); };
    if (name == "s2form") return [opt](const Immersion& imm) { return check_s2form(imm, opt).max_value("absolute"); };
    fail(Errc::bad_parameter, "unknown scan residual '" + std::string(name) + "'");
}

namespace detail {

inline ScanMinimum golden_section(const std::function<double(double)>& f, double a, double b, double xtol) {
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > xtol) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return fc <= fd ? ScanMinimum{c, fc} : ScanMinimum{d, fd};
}

}  // namespace detail

inline ScanResult scan_family(const Family& family, double lo, double hi, int samples, const ScanResidual& residual,
                              double tolerance = 1e-7, double xtol = 1e-9) {
    if (!(hi > lo)) fail(Errc::empty_range, "scan range must have hi > lo");
    if (samples < 2) fail(Errc::empty_range, "scan needs at least two samples");
    auto eval = [&](double t) { return residual(*family(t)); };

    ScanResult out;
    out.tolerance = tolerance;
    const auto n = static_cast<std::size_t>(samples);
    std::vector<double> params(n);
    for (std::size_t i = 0; i < n; ++i) params[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    params.back() = hi;
    std::vector<double> res(n);
    for (std::size_t i = 0; i < n; ++i) {
        res[i] = eval(params[i]);
        out.samples.emplace_back(params[i], res[i]);
    }

    for (std::size_t i = 0; i < n; ++i) {
        const bool left_ok = i == 0 || res[i] < res[i - 1];
        const bool right_ok = i + 1 == n || res[i] <= res[i + 1];
        if (!left_ok || !right_ok) continue;
        const double a = params[i == 0 ? 0 : i - 1];
        const double b = params[i + 1 == n ? n - 1 : i + 1];
        ScanMinimum m = detail::golden_section(eval, a, b, xtol);
        if (res[i] < m.residual) m = {params[i], res[i]};
        m.at_boundary = std::abs(m.param - lo) <= 2.0 * xtol || std::abs(m.param - hi) <= 2.0 * xtol;
        m.below_tolerance = m.residual <= tolerance;
        out.minima.push_back(m);
    }
    bool any = false;
    for (const auto& m : out.minima) any = any || m.below_tolerance;
    if (!any) out.note = "NoSignChange: no residual minimum below tolerance in range";
    return out;
}

inline std::string scan_csv(const ScanResult& r) {
    std::ostringstream os;
    os << "param,residual\n";
    for (const auto& [p, v] : r.rows()) os << detail::format_double(p) << ',' << detail::format_double(v) << '\n';
    return os.str();
}

}  // namespace bitensionlab
