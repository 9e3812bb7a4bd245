#pragma once

#include <stdexcept>
#include <string>

namespace ltm {

/// Failure categories raised by the library. The CLI maps these onto exit codes.
enum class errc {
    invalid_params,
    outside_domain,
    on_boundary,
    empty_word,
    parse_error,
    overflow,
    non_hyperbolic_bound,
    non_hyperbolic_params,
    segment_outside_domain,
    vertex_budget_exceeded,
    insufficient_data,
    non_positive_length,
    singular_orbit,
    zero_denominator,
    degenerate_vector,
    degenerate_segment,
    config_error,
};

inline const char* to_string(errc c) noexcept {
    switch (c) {
        case errc::invalid_params: return "InvalidParams";
        case errc::outside_domain: return "OutsideDomain";
        case errc::on_boundary: return "OnBoundary";
        case errc::empty_word: return "EmptyWord";
        case errc::parse_error: return "ParseError";
        case errc::overflow: return "Overflow";
        case errc::non_hyperbolic_bound: return "NonHyperbolicBound";
        case errc::non_hyperbolic_params: return "NonHyperbolicParams";
        case errc::segment_outside_domain: return "SegmentOutsideDomain";
        case errc::vertex_budget_exceeded: return "VertexBudgetExceeded";
        case errc::insufficient_data: return "InsufficientData";
        case errc::non_positive_length: return "NonPositiveLength";
        case errc::singular_orbit: return "SingularOrbit";
        case errc::zero_denominator: return "ZeroDenominator";
        case errc::degenerate_vector: return "DegenerateVector";
        case errc::degenerate_segment: return "DegenerateSegment";
        case errc::config_error: return "ConfigError";
    }
    return "Unknown";
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

}  // namespace ltm
