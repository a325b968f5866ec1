#include "agencid/pairing/scalar.hpp"

#include <algorithm>

namespace agencid::pairing {

Bytes export_fixed(const mpz_class& v, std::size_t width)
{
    if (sgn(v) < 0) {
        throw Error(ErrorCode::invalid_argument, "cannot export a negative integer");
    }
    std::size_t needed = (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
    if (sgn(v) == 0) needed = 0;
    if (needed > width) {
        throw Error(ErrorCode::invalid_argument, "integer wider than its encoding");
    }
    Bytes out(width, 0);
    std::size_t count = 0;
    mpz_export(out.data() + (width - needed), &count, 1, 1, 1, 0, v.get_mpz_t());
    return out;
}

mpz_class import_unsigned(ByteView bytes)
{
    mpz_class v;
    if (!bytes.empty()) {
        mpz_import(v.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
    }
    return v;
}

ScalarField::ScalarField(mpz_class order)
    : order_(std::move(order))
    , bits_(mpz_sizeinbase(order_.get_mpz_t(), 2))
    , encoded_size_(std::max<std::size_t>(8, (bits_ + 7) / 8))
{
    if (order_ < 2) {
        throw Error(ErrorCode::invalid_argument, "group order must be at least 2");
    }
}

Scalar ScalarField::from_u64(std::uint64_t v) const
{
    mpz_class z;
    mpz_import(z.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
    return reduce(z);
}

Scalar ScalarField::reduce(const mpz_class& v) const
{
    mpz_class r;
    mpz_mod(r.get_mpz_t(), v.get_mpz_t(), order_.get_mpz_t());
    return Scalar(std::move(r));
}

Scalar ScalarField::add(const Scalar& a, const Scalar& b) const
{
    return reduce(a.value_ + b.value_);
}

Scalar ScalarField::sub(const Scalar& a, const Scalar& b) const
{
    return reduce(a.value_ - b.value_);
}

Scalar ScalarField::mul(const Scalar& a, const Scalar& b) const
{
    return reduce(a.value_ * b.value_);
}

Scalar ScalarField::neg(const Scalar& a) const
{
    return reduce(-a.value_);
}

Scalar ScalarField::inv(const Scalar& a) const
{
    mpz_class r;
    if (a.is_zero() || mpz_invert(r.get_mpz_t(), a.value_.get_mpz_t(), order_.get_mpz_t()) == 0) {
        throw Error(ErrorCode::invalid_argument, "scalar has no inverse");
    }
    return Scalar(std::move(r));
}

Scalar ScalarField::pow(const Scalar& base, std::uint64_t exponent) const
{
    mpz_class r;
    mpz_class e;
    mpz_import(e.get_mpz_t(), 1, 1, sizeof(exponent), 0, 0, &exponent);
    mpz_powm(r.get_mpz_t(), base.value_.get_mpz_t(), e.get_mpz_t(), order_.get_mpz_t());
    return Scalar(std::move(r));
}

Scalar ScalarField::random(Rng& rng) const
{
    const std::size_t nbytes = (bits_ + 7) / 8;
    const unsigned excess = static_cast<unsigned>(nbytes * 8 - bits_);
    Bytes buf(nbytes);
    for (;;) {
        rng.fill(buf);
        buf[0] = static_cast<std::uint8_t>(buf[0] & (0xffu >> excess));
        mpz_class v = import_unsigned(buf);
        if (v < order_) return Scalar(std::move(v));
    }
}

Scalar ScalarField::random_nonzero(Rng& rng) const
{
    for (;;) {
        Scalar s = random(rng);
        if (!s.is_zero()) return s;
    }
}

Bytes ScalarField::serialize(const Scalar& s) const
{
    return export_fixed(s.value_, encoded_size_);
}

Scalar ScalarField::deserialize(ByteView bytes) const
{
    if (bytes.size() != encoded_size_) {
        throw Error(ErrorCode::invalid_encoding, "scalar has wrong length");
    }
    mpz_class v = import_unsigned(bytes);
    if (v >= order_) {
        throw Error(ErrorCode::invalid_encoding, "scalar not reduced modulo the group order");
    }
    return Scalar(std::move(v));
}

}  // namespace agencid::pairing
