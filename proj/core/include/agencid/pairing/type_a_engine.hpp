#pragma once

#include "agencid/pairing/engine.hpp"

namespace agencid::pairing {

/// Symmetric pairing on the supersingular curve E: y^2 = x^3 + x over F_q,
/// q = 3 mod 4, embedding degree 2. G is the order-r subgroup of E(F_q),
/// G_T the order-r subgroup of F_q^2*. The pairing is the reduced Tate
/// pairing evaluated on the distortion image (x, y) -> (-x, i*y).
///
/// Parameters: r = 2^159 + 2^107 + 1 (Solinas prime), q = h*r - 1 a
/// 512-bit prime with the smallest cofactor h = 0 mod 4 above 2^511 / r.
/// Elements of G encode as 65 bytes (tag byte + 512-bit x coordinate),
/// elements of G_T as 128 bytes (two 512-bit coordinates).
class TypeAEngine final : public PairingEngine {
public:
    static constexpr unsigned default_security_level = 80;

    TypeAEngine();

    [[nodiscard]] const mpz_class& field_modulus() const noexcept { return q_; }
    [[nodiscard]] const mpz_class& group_order() const noexcept { return scalars().order(); }
    [[nodiscard]] const mpz_class& cofactor() const noexcept { return h_; }

    [[nodiscard]] BackendId backend_id() const noexcept override { return BackendId::type_a; }
    [[nodiscard]] bool symmetric() const noexcept override { return true; }
    [[nodiscard]] unsigned security_level() const noexcept override { return default_security_level; }
    [[nodiscard]] std::string describe() const override;

    [[nodiscard]] SourceElement generator(GroupTag tag) const override { return {tag, generator_}; }
    [[nodiscard]] SourceElement identity(GroupTag tag) const override { return {tag, CurvePoint{}}; }
    [[nodiscard]] TargetElement gt_identity() const override { return TargetElement(Fp2{1, 0}); }

    /// True when p satisfies the curve equation (the identity included).
    [[nodiscard]] bool on_curve(const CurvePoint& p) const;

    [[nodiscard]] std::size_t source_encoded_size() const noexcept override { return 1 + field_bytes; }
    [[nodiscard]] std::size_t target_encoded_size() const noexcept override { return 2 * field_bytes; }
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
    static constexpr std::size_t field_bytes = 64;

    [[nodiscard]] CurvePoint affine_add(const CurvePoint& a, const CurvePoint& b) const;
    [[nodiscard]] CurvePoint multiply(const mpz_class& k, const CurvePoint& p) const;
    [[nodiscard]] Fp2 tate(const CurvePoint& p, const CurvePoint& q) const;
    [[nodiscard]] Fp2 fp2_mul(const Fp2& a, const Fp2& b) const;
    [[nodiscard]] Fp2 fp2_sqr(const Fp2& a) const;
    [[nodiscard]] Fp2 fp2_pow(const Fp2& a, const mpz_class& e) const;
    [[nodiscard]] Fp2 fp2_inv(const Fp2& a) const;
    [[nodiscard]] std::optional<mpz_class> sqrt(const mpz_class& a) const;

    mpz_class q_;
    mpz_class h_;
    mpz_class sqrt_exponent_;
    CurvePoint generator_;
    TargetElement gt_generator_{Fp2{1, 0}};
};

}  // namespace agencid::pairing
