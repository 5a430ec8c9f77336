// Error taxonomy shared by the C++ core and the C API.

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace irsa {

enum class ErrorCode {
    ok = 0,
    not_normalized,
    negative_probability,
    zero_degree,
    zero_total_load,
    length_mismatch,
    degree_exceeds_frame,
    empty_frame,
    count_exceeds_population,
    decoded_not_activated,
    load_exceeds_population,
    inconsistent_load,
    not_two_dimensional,
    outside_region,
    exceeds_threshold,
    parse_error,
    validation_error,
    io_error,
    invalid_argument,
};

inline const char* error_code_name(ErrorCode code)
{
    switch (code) {
        case ErrorCode::ok: return "ok";
        case ErrorCode::not_normalized: return "not_normalized";
        case ErrorCode::negative_probability: return "negative_probability";
        case ErrorCode::zero_degree: return "zero_degree";
        case ErrorCode::zero_total_load: return "zero_total_load";
        case ErrorCode::length_mismatch: return "length_mismatch";
        case ErrorCode::degree_exceeds_frame: return "degree_exceeds_frame";
        case ErrorCode::empty_frame: return "empty_frame";
        case ErrorCode::count_exceeds_population: return "count_exceeds_population";
        case ErrorCode::decoded_not_activated: return "decoded_not_activated";
        case ErrorCode::load_exceeds_population: return "load_exceeds_population";
        case ErrorCode::inconsistent_load: return "inconsistent_load";
        case ErrorCode::not_two_dimensional: return "not_two_dimensional";
        case ErrorCode::outside_region: return "outside_region";
        case ErrorCode::exceeds_threshold: return "exceeds_threshold";
        case ErrorCode::parse_error: return "parse_error";
        case ErrorCode::validation_error: return "validation_error";
        case ErrorCode::io_error: return "io_error";
        case ErrorCode::invalid_argument: return "invalid_argument";
    }
    return "unknown";
}

/// Exception carrying a stable error code alongside a human-readable message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message)
        : std::runtime_error(std::move(message)), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message)
{
    throw Error(code, message);
}

} // namespace irsa
