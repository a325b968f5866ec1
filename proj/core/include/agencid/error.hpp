#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace agencid {

enum class ErrorCode {
    invalid_argument,
    tag_mismatch,
    backend_mismatch,
    invalid_encoding,
    invalid_capacity,
    empty_cluster,
    index_out_of_range,
    cluster_mismatch,
    key_mismatch,
    authentication_failure,
    entropy_failure,
    duplicate,
    not_found,
    registration_refused,
    scenario_violation,
    inactive_index,
    key_unavailable,
    integrity_failure,
    journal_corruption,
    io_failure,
    insufficient_data,
};

[[nodiscard]] std::string_view to_string(ErrorCode code) noexcept;

/// Base exception for every failure raised by the library. Protocol outcomes
/// (a board outside the cluster) are never reported through this type.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what)
        , code_(code)
    {
    }

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace agencid
