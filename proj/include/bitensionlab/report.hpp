#pragma once

// Machine-readable output. JSON objects keep their keys sorted (nlohmann's
// default map) and doubles print in shortest round-trip form; non-finite
// values become null.

#include <json.hpp>

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "bitensionlab/checks.hpp"
#include "bitensionlab/scan.hpp"

namespace bitensionlab {

inline nlohmann::json to_json(const ResidualReport& r, bool with_points = true) {
    nlohmann::json j;
    j["check"] = r.check;
    j["example"] = r.example;
    j["grid"] = r.grid;
    j["jet_order"] = r.jet_order;
    j["tolerance"] = r.tolerance;
    j["max_residual"] = r.max_residual;
    j["mean_residual"] = r.mean_residual;
    j["verdict"] = std::string(verdict_name(r.verdict));
    if (!r.note.empty()) j["note"] = r.note;
    if (!r.summary.empty()) j["summary"] = r.summary;
    nlohmann::json pts = nlohmann::json::array();
    if (with_points) {
        for (const auto& pt : r.points) {
            nlohmann::json e;
            e["x"] = pt.p.x;
            e["y"] = pt.p.y;
            e["residual"] = pt.residual;
            e["values"] = pt.values;
            pts.push_back(std::move(e));
        }
    }
    j["points"] = std::move(pts);
    return j;
}

inline nlohmann::json to_json(const ExpectationResult& e) {
    nlohmann::json j;
    j["property"] = e.expected.property;
    if (std::holds_alternative<bool>(e.expected.value)) {
        j["expected"] = std::get<bool>(e.expected.value);
    } else {
        j["expected"] = std::get<double>(e.expected.value);
    }
    j["tolerance"] = e.expected.tolerance;
    j["measured"] = e.measured;
    j["pass"] = e.pass;
    return j;
}

inline nlohmann::json to_json(const ScanResult& s) {
    nlohmann::json j;
    j["tolerance"] = s.tolerance;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [p, v] : s.rows()) rows.push_back({{"param", p}, {"residual", v}});
    j["rows"] = std::move(rows);
    nlohmann::json mins = nlohmann::json::array();
    for (const auto& m : s.minima) {
        mins.push_back({{"param", m.param}, {"residual", m.residual}, {"below_tolerance", m.below_tolerance}, {"at_boundary", m.at_boundary}});
    }
    j["minima"] = std::move(mins);
    if (!s.note.empty()) j["note"] = s.note;
    return j;
}

inline std::string reports_csv(const std::vector<ResidualReport>& reports) {
    std::ostringstream os;
    os << "check,example,verdict,max_residual,mean_residual,tolerance\n";
    for (const auto& r : reports) {
        os << r.check << ',' << r.example << ',' << verdict_name(r.verdict) << ',' << detail::format_double(r.max_residual) << ','
           << detail::format_double(r.mean_residual) << ',' << detail::format_double(r.tolerance) << '\n';
    }
    return os.str();
}

inline std::string reports_text(const std::vector<ResidualReport>& reports) {
    std::ostringstream os;
    for (const auto& r : reports) {
        char line[256];
        std::snprintf(line, sizeof line, "%-8s %-10s max %.3e  mean %.3e  tol %.1e", r.check.c_str(),
                      std::string(verdict_name(r.verdict)).c_str(), r.max_residual, r.mean_residual, r.tolerance);
        os << line;
        if (!r.note.empty()) os << "  (" << r.note << ')';
        os << '\n';
    }
    return os.str();
}

}  // namespace bitensionlab
