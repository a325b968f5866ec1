#pragma once

#include "agencid/pairing/engine.hpp"

namespace agencid::pairing {

/// Exact-arithmetic oracle: G = G_T = (Z_q, +) with generator 1 and
/// pair(a, b) = a*b mod q. Bilinear and non-degenerate but offers no
/// security; every identity of the scheme becomes checkable by hand.
class SymbolicEngine final : public PairingEngine {
public:
    /// q must be prime and below 2^62.
    explicit SymbolicEngine(std::uint64_t q);

    [[nodiscard]] std::uint64_t modulus() const noexcept { return q_; }

    [[nodiscard]] BackendId backend_id() const noexcept override { return BackendId::symbolic; }
    [[nodiscard]] bool symmetric() const noexcept override { return true; }
    [[nodiscard]] unsigned security_level() const noexcept override { return 0; }
    [[nodiscard]] std::string describe() const override;
    [[nodiscard]] std::uint64_t variant_parameter() const noexcept override { return q_; }

    [[nodiscard]] SourceElement generator(GroupTag tag) const override { return {tag, std::uint64_t{1}}; }
    [[nodiscard]] SourceElement identity(GroupTag tag) const override { return {tag, std::uint64_t{0}}; }
    [[nodiscard]] TargetElement gt_identity() const override { return TargetElement(std::uint64_t{0}); }

    /// Element with residue v mod q, for fixtures.
    [[nodiscard]] SourceElement element(std::uint64_t v, GroupTag tag = GroupTag::first) const
    {
        return {tag, v % q_};
    }
    [[nodiscard]] TargetElement target(std::uint64_t v) const { return TargetElement(v % q_); }

    [[nodiscard]] std::size_t source_encoded_size() const noexcept override { return 8; }
    [[nodiscard]] std::size_t target_encoded_size() const noexcept override { return 8; }
    [[nodiscard]] Bytes serialize(const SourceElement& x) const override;
    [[nodiscard]] Bytes serialize(const TargetElement& x) const override;
    [[nodiscard]] SourceElement deserialize_source(ByteView bytes, GroupTag tag) const override;
    [[nodiscard]] TargetElement deserialize_target(ByteView bytes) const override;

protected:
    [[nodiscard]] SourceElement::Rep do_add(const SourceElement::Rep& a, const SourceElement::Rep& b) const override;
    [[nodiscard]] SourceElement::Rep do_neg(const SourceElement::Rep& a) const override;
    [[nodiscard]] SourceElement::Rep do_scalar_mul(const mpz_class& k, const SourceElement::Rep& x) const override;
    [[nodiscard]] TargetElement::Rep do_pair(const SourceElement::Rep& a, const SourceElement::Rep& b) const override;
    [[nodiscard]] TargetElement::Rep do_gt_mul(const TargetElement::Rep& a, const TargetElement::Rep& b) const override;
    [[nodiscard]] TargetElement::Rep do_gt_inv(const TargetElement::Rep& a) const override;
    [[nodiscard]] TargetElement::Rep do_gt_pow(const TargetElement::Rep& a, const mpz_class& k) const override;
    [[nodiscard]] const TargetElement& gt_generator() const override { return gt_generator_; }

private:
    [[nodiscard]] std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) const noexcept;
    [[nodiscard]] std::uint64_t reduce(const mpz_class& k) const;

    std::uint64_t q_;
    TargetElement gt_generator_{std::uint64_t{1}};
};

}  // namespace agencid::pairing
