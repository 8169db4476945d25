#pragma once

#include <stdexcept>
#include <string>

namespace eiscong {

enum class errc {
    not_squarefree,
    narrow_class_number_not_one,
    zero_ideal,
    not_integral,
    level_not_coprime,
    zero_modulus,
    not_primitive,
    division_by_zero,
    denominator_not_coprime,
    zero_input,
    ramified_prime,
    unsupported_argument,
    odd_weight_unsupported,
    all_constant_terms_zero,
    data_mismatch,
    missing_eigenvalue,
    parity_mismatch,
    conductor_not_coprime,
    schema_mismatch,
    duplicate_prime,
    malformed_value,
    network_error,
    translation_error,
    usage_error,
    internal_error,
};

const char* errc_name(errc c);

/// All library failures throw this; `code` discriminates spec-level error kinds.
class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
    errc code() const { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

} // namespace eiscong
