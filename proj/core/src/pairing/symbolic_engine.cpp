#include "agencid/pairing/symbolic_engine.hpp"

#include "rep_access.hpp"

namespace agencid::pairing {

namespace {

__extension__ typedef unsigned __int128 uint128;

mpz_class checked_modulus(std::uint64_t q)
{
    if (q < 3 || q >= (std::uint64_t{1} << 62)) {
        throw Error(ErrorCode::invalid_argument, "oracle modulus must lie in [3, 2^62)");
    }
    mpz_class z(std::to_string(q));
    if (mpz_probab_prime_p(z.get_mpz_t(), 40) == 0) {
        throw Error(ErrorCode::invalid_argument, "oracle modulus " + std::to_string(q) + " is not prime");
    }
    return z;
}

}  // namespace

SymbolicEngine::SymbolicEngine(std::uint64_t q) : PairingEngine(checked_modulus(q)), q_(q) {}

std::string SymbolicEngine::describe() const
{
    return "symbolic oracle Z_" + std::to_string(q_) + " (pair(a,b) = a*b mod q, no security)";
}

std::uint64_t SymbolicEngine::mulmod(std::uint64_t a, std::uint64_t b) const noexcept
{
    return static_cast<std::uint64_t>((static_cast<uint128>(a) * b) % q_);
}

std::uint64_t SymbolicEngine::reduce(const mpz_class& k) const
{
    static_assert(sizeof(unsigned long) == sizeof(std::uint64_t));
    return mpz_fdiv_ui(k.get_mpz_t(), q_);
}

SourceElement::Rep SymbolicEngine::do_add(const SourceElement::Rep& a, const SourceElement::Rep& b) const
{
    return (rep_as<std::uint64_t>(a) + rep_as<std::uint64_t>(b)) % q_;
}

SourceElement::Rep SymbolicEngine::do_neg(const SourceElement::Rep& a) const
{
    auto v = rep_as<std::uint64_t>(a);
    return v == 0 ? 0 : q_ - v;
}

SourceElement::Rep SymbolicEngine::do_scalar_mul(const mpz_class& k, const SourceElement::Rep& x) const
{
    return mulmod(reduce(k), rep_as<std::uint64_t>(x));
}

TargetElement::Rep SymbolicEngine::do_pair(const SourceElement::Rep& a, const SourceElement::Rep& b) const
{
    return mulmod(rep_as<std::uint64_t>(a), rep_as<std::uint64_t>(b));
}

TargetElement::Rep SymbolicEngine::do_gt_mul(const TargetElement::Rep& a, const TargetElement::Rep& b) const
{
    return (rep_as<std::uint64_t>(a) + rep_as<std::uint64_t>(b)) % q_;
}

TargetElement::Rep SymbolicEngine::do_gt_inv(const TargetElement::Rep& a) const
{
    auto v = rep_as<std::uint64_t>(a);
    return v == 0 ? 0 : q_ - v;
}

TargetElement::Rep SymbolicEngine::do_gt_pow(const TargetElement::Rep& a, const mpz_class& k) const
{
    return mulmod(reduce(k), rep_as<std::uint64_t>(a));
}

Bytes SymbolicEngine::serialize(const SourceElement& x) const
{
    ByteWriter w;
    w.u64(rep_as<std::uint64_t>(x.rep()));
    return std::move(w).take();
}

Bytes SymbolicEngine::serialize(const TargetElement& x) const
{
    ByteWriter w;
    w.u64(rep_as<std::uint64_t>(x.rep()));
    return std::move(w).take();
}

SourceElement SymbolicEngine::deserialize_source(ByteView bytes, GroupTag tag) const
{
    if (bytes.size() != 8) {
        throw Error(ErrorCode::invalid_encoding, "symbolic element must be 8 bytes");
    }
    ByteReader r(bytes);
    auto v = r.u64();
    if (v >= q_) {
        throw Error(ErrorCode::invalid_encoding, "symbolic residue not reduced");
    }
    return {tag, v};
}

TargetElement SymbolicEngine::deserialize_target(ByteView bytes) const
{
    if (bytes.size() != 8) {
        throw Error(ErrorCode::invalid_encoding, "symbolic element must be 8 bytes");
    }
    ByteReader r(bytes);
    auto v = r.u64();
    if (v >= q_) {
        throw Error(ErrorCode::invalid_encoding, "symbolic residue not reduced");
    }
    return TargetElement(v);
}

}  // namespace agencid::pairing
