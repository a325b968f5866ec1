#pragma once

#include "agencid/bytes.hpp"
#include "agencid/rng.hpp"

#include <gmpxx.h>

#include <cstdint>

namespace agencid::pairing {

/// Integer residue modulo the group order. Only a ScalarField produces
/// reduced values; a default-constructed Scalar is zero.
class Scalar {
public:
    Scalar() = default;

    [[nodiscard]] const mpz_class& value() const noexcept { return value_; }
    [[nodiscard]] bool is_zero() const noexcept { return sgn(value_) == 0; }

    friend bool operator==(const Scalar& a, const Scalar& b) { return a.value_ == b.value_; }

private:
    friend class ScalarField;
    explicit Scalar(mpz_class v) : value_(std::move(v)) {}

    mpz_class value_;
};

/// Z_p for the prime group order p of a pairing engine.
class ScalarField {
public:
    explicit ScalarField(mpz_class order);

    [[nodiscard]] const mpz_class& order() const noexcept { return order_; }
    [[nodiscard]] std::size_t encoded_size() const noexcept { return encoded_size_; }

    [[nodiscard]] Scalar from_u64(std::uint64_t v) const;
    [[nodiscard]] Scalar reduce(const mpz_class& v) const;

    [[nodiscard]] Scalar add(const Scalar& a, const Scalar& b) const;
    [[nodiscard]] Scalar sub(const Scalar& a, const Scalar& b) const;
    [[nodiscard]] Scalar mul(const Scalar& a, const Scalar& b) const;
    [[nodiscard]] Scalar neg(const Scalar& a) const;
    /// Throws ErrorCode::invalid_argument for zero.
    [[nodiscard]] Scalar inv(const Scalar& a) const;
    [[nodiscard]] Scalar pow(const Scalar& base, std::uint64_t exponent) const;

    /// Uniform over [0, p) by rejection sampling.
    [[nodiscard]] Scalar random(Rng& rng) const;
    /// Uniform over [1, p).
    [[nodiscard]] Scalar random_nonzero(Rng& rng) const;

    /// Fixed-width big-endian encoding of encoded_size() bytes.
    [[nodiscard]] Bytes serialize(const Scalar& s) const;
    [[nodiscard]] Scalar deserialize(ByteView bytes) const;

private:
    mpz_class order_;
    std::size_t bits_;
    std::size_t encoded_size_;
};

/// Fixed-width big-endian export of a non-negative integer.
[[nodiscard]] Bytes export_fixed(const mpz_class& v, std::size_t width);
[[nodiscard]] mpz_class import_unsigned(ByteView bytes);

}  // namespace agencid::pairing
