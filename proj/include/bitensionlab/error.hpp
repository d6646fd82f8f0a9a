#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bitensionlab {

/// Failure categories raised by the engine.
enum class Errc {
    order_mismatch,
    singular_compose,
    index_out_of_order,
    syntax_error,
    unknown_function,
    unbound_variable,
    bad_parameter,
    metric_degenerate,
    chart_violation,
    immersion_degenerate,
    order_too_low,
    not_compact,
    grid_too_coarse,
    not_cmc,
    not_isothermal,
    empty_range,
    unknown_example,
    spec_parse_error,
};

constexpr std::string_view errc_name(Errc code) {
    switch (code) {
        case Errc::order_mismatch: return "OrderMismatch";
        case Errc::singular_compose: return "SingularCompose";
        case Errc::index_out_of_order: return "IndexOutOfOrder";
        case Errc::syntax_error: return "SyntaxError";
        case Errc::unknown_function: return "UnknownFunction";
        case Errc::unbound_variable: return "UnboundVariable";
        case Errc::bad_parameter: return "BadParameter";
        case Errc::metric_degenerate: return "MetricDegenerate";
        case Errc::chart_violation: return "ChartViolation";
        case Errc::immersion_degenerate: return "ImmersionDegenerate";
        case Errc::order_too_low: return "OrderTooLow";
        case Errc::not_compact: return "NotCompact";
        case Errc::grid_too_coarse: return "GridTooCoarse";
        case Errc::not_cmc: return "NotCMC";
        case Errc::not_isothermal: return "NotIsothermal";
        case Errc::empty_range: return "EmptyRange";
        case Errc::unknown_example: return "UnknownExample";
        case Errc::spec_parse_error: return "SpecParseError";
    }
    return "Unknown";
}

/// Exception carrying an error category and, for parse errors, a source
/// position. `offset` is a 1-based byte offset for expression syntax errors;
/// `line`/`column` are 1-based for spec-file errors. Zero means "not set".
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Error(Errc code, const std::string& message, std::size_t offset)
        : std::runtime_error(std::string(errc_name(code)) + " at offset " +
                             std::to_string(offset) + ": " + message),
          code_(code), offset_(offset) {}

    Error(Errc code, const std::string& message, std::size_t line, std::size_t column)
        : std::runtime_error(std::string(errc_name(code)) + " at line " + std::to_string(line) +
                             ", column " + std::to_string(column) + ": " + message),
          code_(code), line_(line), column_(column) {}

    Errc code() const noexcept { return code_; }
    std::size_t offset() const noexcept { return offset_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    Errc code_;
    std::size_t offset_ = 0;
    std::size_t line_ = 0;
    std::size_t column_ = 0;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace bitensionlab
