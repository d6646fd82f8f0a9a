#pragma once

// Dispatch from check names to checkers, with hypothesis failures turned into
// skipped reports so a full suite run never aborts on one inapplicable check.

#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bitensionlab/catalog.hpp"
#include "bitensionlab/checks.hpp"

namespace bitensionlab {

/// "all" or a comma list of check names, in canonical order, duplicates dropped.
inline std::vector<std::string> parse_check_list(const std::string& text) {
    if (text == "all") return check_names();
    std::set<std::string> wanted;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = detail::trim(item);
        if (item.empty()) continue;
        (void)check_min_order(item);  // rejects unknown names
        wanted.insert(item);
    }
    if (wanted.empty()) fail(Errc::bad_parameter, "empty check list");
    std::vector<std::string> out;
    for (const auto& c : check_names())
        if (wanted.contains(c)) out.push_back(c);
    return out;
}

namespace detail {

inline ResidualReport skipped_report(std::string_view check, const Immersion& imm, const CheckOptions& opt, std::string note) {
    ResidualReport r;
    r.check = std::string(check);
    r.example = imm.label();
    r.grid = check == "thm1" ? grid_label(opt.qx, opt.qy) : grid_label(opt.nx, opt.ny);
    r.jet_order = opt.jet_order;
    r.tolerance = check == "thm1" ? opt.quadrature() : opt.pointwise();
    r.verdict = Verdict::skipped;
    r.note = std::move(note);
    return r;
}

inline bool needs_immersion(std::string_view check) {
    return check == "s2form" || check == "prop3" || check == "thm2" || check == "thm3";
}

}  // namespace detail

inline ResidualReport run_check(std::string_view check, const Immersion& imm, const CheckOptions& opt) {
    if (!imm.induced() && detail::needs_immersion(check)) {
        return detail::skipped_report(check, imm, opt, "needs an immersion with its induced metric");
    }
    try {
        if (check == "tau2") return check_tau2(imm, opt);
        if (check == "hilbert") return check_hilbert(imm, opt);
        if (check == "lemma") return check_lemma(imm, opt);
        if (check == "prop2") return check_prop2(imm, opt);
        if (check == "thm1") return check_thm1(imm, opt);
        if (check == "thm2") return check_thm2(imm, opt);
        if (check == "thm3") return check_thm3(imm, opt);
        if (check == "prop3") return check_prop3_bound(imm, opt);
        if (check == "s2form") return check_s2form(imm, opt);
    } catch (const Error& e) {
        switch (e.code()) {
            case Errc::not_cmc:
            case Errc::not_compact:
            case Errc::not_isothermal: return detail::skipped_report(check, imm, opt, e.what());
            case Errc::grid_too_coarse: {
                ResidualReport r = detail::skipped_report(check, imm, opt, e.what());
                r.verdict = Verdict::fail;
                r.max_residual = INFINITY;
                r.mean_residual = INFINITY;
                return r;
            }
            default: throw;
        }
    }
    fail(Errc::bad_parameter, "unknown check '" + std::string(check) + "'");
}

/// Raises OrderTooLow before any work if the jet order cannot serve a selected check.
inline void require_orders(const std::vector<std::string>& checks, int jet_order) {
    for (const auto& c : checks) detail::require_order(jet_order, check_min_order(c), c);
}

inline std::vector<ResidualReport> run_checks(const std::vector<std::string>& checks, const Immersion& imm, const CheckOptions& opt) {
    require_orders(checks, opt.jet_order);
    std::vector<ResidualReport> out;
    out.reserve(checks.size());
    for (const auto& c : checks) out.push_back(run_check(c, imm, opt));
    return out;
}

}  // namespace bitensionlab
