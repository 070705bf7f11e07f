#pragma once

#include <stdexcept>
#include <string>
#include <variant>

namespace susmod {

enum class OpErrorCode {
    duplicate_id,
    dangling_endpoint,
    illegal_endpoint_kinds,
    strategy_on_non_mitigation,
    missing_dimensions,
    unknown_id,
    unbound_role,
    unknown_role,
    kind_mismatch,
    anchor_unknown,
    anchor_in_fragment,
    binding_conflict,
    collision_exhausted,
    invalid_model,
    invalid_pattern,
    unknown_category,
    unknown_pattern,
    chain_too_short,
    io_error,
    parse_error,
};

const char* to_string(OpErrorCode code);

struct OpError {
    OpErrorCode code;
    std::string message;
};

template <typename T>
class Result {
public:
    Result(T value) : v_(std::move(value)) {}
    Result(OpError error) : v_(std::move(error)) {}

    bool ok() const { return std::holds_alternative<T>(v_); }

    const T& value() const& {
        if (!ok()) throw std::logic_error("Result::value on error: " + error().message);
        return std::get<T>(v_);
    }
    T&& value() && {
        if (!ok()) throw std::logic_error("Result::value on error: " + error().message);
        return std::get<T>(std::move(v_));
    }
    const OpError& error() const {
        if (ok()) throw std::logic_error("Result::error on success");
        return std::get<OpError>(v_);
    }

private:
    std::variant<T, OpError> v_;
};

}  // namespace susmod
