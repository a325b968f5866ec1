#pragma once

#include "agencid/bytes.hpp"
#include "agencid/pairing/scalar.hpp"
#include "agencid/rng.hpp"

#include <gmpxx.h>

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace agencid::pairing {

/// Wire value identifying how elements are encoded. Written into every
/// serialized key and package so artifacts are self-describing.
enum class BackendId : std::uint8_t {
    type_a = 0x01,
    symbolic = 0x02,
    /// Reserved for baseline (individually wrapped) packages; no engine.
    ieid = 0xff,
};

[[nodiscard]] std::string_view to_string(BackendId id) noexcept;
[[nodiscard]] BackendId backend_from_byte(std::uint8_t b);

/// Which argument slot of the pairing an element lives in.
enum class GroupTag : std::uint8_t { first = 1, second = 2 };

struct EngineConfig {
    BackendId backend = BackendId::type_a;
    /// Bits of security. 0 selects the backend default.
    unsigned security_level = 0;
    /// Prime q for the symbolic backend; ignored otherwise.
    std::uint64_t oracle_modulus = 0;
    std::optional<std::uint64_t> rng_seed;

    [[nodiscard]] static EngineConfig production() { return {}; }
    [[nodiscard]] static EngineConfig symbolic(std::uint64_t q)
    {
        EngineConfig c;
        c.backend = BackendId::symbolic;
        c.oracle_modulus = q;
        return c;
    }
};

/// Affine point on the Type-A curve; `infinity` marks the identity.
struct CurvePoint {
    mpz_class x;
    mpz_class y;
    bool infinity = true;

    friend bool operator==(const CurvePoint& a, const CurvePoint& b)
    {
        if (a.infinity || b.infinity) return a.infinity == b.infinity;
        return a.x == b.x && a.y == b.y;
    }
};

/// re + im*i in F_q[i]/(i^2 + 1).
struct Fp2 {
    mpz_class re;
    mpz_class im;

    friend bool operator==(const Fp2& a, const Fp2& b) { return a.re == b.re && a.im == b.im; }
};

class SourceElement {
public:
    using Rep = std::variant<std::uint64_t, CurvePoint>;

    SourceElement(GroupTag tag, Rep rep) : tag_(tag), rep_(std::move(rep)) {}

    [[nodiscard]] GroupTag tag() const noexcept { return tag_; }
    [[nodiscard]] const Rep& rep() const noexcept { return rep_; }

    friend bool operator==(const SourceElement& a, const SourceElement& b)
    {
        return a.tag_ == b.tag_ && a.rep_ == b.rep_;
    }

private:
    GroupTag tag_;
    Rep rep_;
};

class TargetElement {
public:
    using Rep = std::variant<std::uint64_t, Fp2>;

    explicit TargetElement(Rep rep) : rep_(std::move(rep)) {}

    [[nodiscard]] const Rep& rep() const noexcept { return rep_; }

    friend bool operator==(const TargetElement& a, const TargetElement& b) { return a.rep_ == b.rep_; }

private:
    Rep rep_;
};

struct OpCounts {
    std::uint64_t pairings = 0;
    std::uint64_t source_adds = 0;
    std::uint64_t scalar_muls = 0;
    std::uint64_t gt_ops = 0;
    std::uint64_t gt_scales = 0;

    friend OpCounts operator-(const OpCounts& a, const OpCounts& b)
    {
        return {a.pairings - b.pairings, a.source_adds - b.source_adds, a.scalar_muls - b.scalar_muls,
                a.gt_ops - b.gt_ops, a.gt_scales - b.gt_scales};
    }
    friend bool operator==(const OpCounts&, const OpCounts&) = default;
};

/// Bilinear group pair (G, G_T) with G written additively and G_T through
/// combine/uncombine. Both backends are symmetric: the first and second
/// source groups coincide and `to_second` only relabels an element.
///
/// Public operations validate tags and bump instrumentation counters; the
/// counters are the only mutable state and are atomic, so an engine may be
/// shared freely between threads.
class PairingEngine {
public:
    virtual ~PairingEngine() = default;
    PairingEngine(const PairingEngine&) = delete;
    PairingEngine& operator=(const PairingEngine&) = delete;

    [[nodiscard]] virtual BackendId backend_id() const noexcept = 0;
    [[nodiscard]] virtual bool symmetric() const noexcept = 0;
    [[nodiscard]] virtual unsigned security_level() const noexcept = 0;
    [[nodiscard]] virtual std::string describe() const = 0;
    /// Parameter that distinguishes engines of the same backend (the oracle
    /// modulus for the symbolic backend, 0 otherwise).
    [[nodiscard]] virtual std::uint64_t variant_parameter() const noexcept { return 0; }

    [[nodiscard]] const ScalarField& scalars() const noexcept { return scalars_; }

    [[nodiscard]] virtual SourceElement generator(GroupTag tag) const = 0;
    [[nodiscard]] virtual SourceElement identity(GroupTag tag) const = 0;
    [[nodiscard]] virtual TargetElement gt_identity() const = 0;

    [[nodiscard]] SourceElement add(const SourceElement& a, const SourceElement& b) const;
    [[nodiscard]] SourceElement sub(const SourceElement& a, const SourceElement& b) const;
    [[nodiscard]] SourceElement neg(const SourceElement& a) const;
    [[nodiscard]] SourceElement scalar_mul(const Scalar& k, const SourceElement& x) const;
    /// Maps a first-group element to its image in the second group.
    [[nodiscard]] SourceElement to_second(const SourceElement& x) const;

    /// Requires a.tag() == first and b.tag() == second.
    [[nodiscard]] TargetElement pair(const SourceElement& a, const SourceElement& b) const;

    [[nodiscard]] TargetElement gt_combine(const TargetElement& x, const TargetElement& y) const;
    [[nodiscard]] TargetElement gt_uncombine(const TargetElement& x, const TargetElement& y) const;
    /// k-fold combination of x with itself.
    [[nodiscard]] TargetElement gt_scale(const TargetElement& x, const Scalar& k) const;

    [[nodiscard]] Scalar random_scalar(Rng& rng) const { return scalars_.random(rng); }
    [[nodiscard]] TargetElement random_gt(Rng& rng) const;

    [[nodiscard]] virtual std::size_t source_encoded_size() const noexcept = 0;
    [[nodiscard]] virtual std::size_t target_encoded_size() const noexcept = 0;
    [[nodiscard]] virtual Bytes serialize(const SourceElement& x) const = 0;
    [[nodiscard]] virtual Bytes serialize(const TargetElement& x) const = 0;
    /// Rejects encodings that are malformed or not in the prime-order group.
    [[nodiscard]] virtual SourceElement deserialize_source(ByteView bytes, GroupTag tag) const = 0;
    [[nodiscard]] virtual TargetElement deserialize_target(ByteView bytes) const = 0;

    [[nodiscard]] OpCounts op_counts() const noexcept;
    void reset_op_counts() const noexcept;

protected:
    explicit PairingEngine(mpz_class order) : scalars_(std::move(order)) {}

    [[nodiscard]] virtual SourceElement::Rep do_add(const SourceElement::Rep& a, const SourceElement::Rep& b) const = 0;
    [[nodiscard]] virtual SourceElement::Rep do_neg(const SourceElement::Rep& a) const = 0;
    [[nodiscard]] virtual SourceElement::Rep do_scalar_mul(const mpz_class& k, const SourceElement::Rep& x) const = 0;
    [[nodiscard]] virtual TargetElement::Rep do_pair(const SourceElement::Rep& a, const SourceElement::Rep& b) const = 0;
    [[nodiscard]] virtual TargetElement::Rep do_gt_mul(const TargetElement::Rep& a, const TargetElement::Rep& b) const = 0;
    [[nodiscard]] virtual TargetElement::Rep do_gt_inv(const TargetElement::Rep& a) const = 0;
    [[nodiscard]] virtual TargetElement::Rep do_gt_pow(const TargetElement::Rep& a, const mpz_class& k) const = 0;
    /// Unmetered generator of G_T (the pairing of the two generators).
    [[nodiscard]] virtual const TargetElement& gt_generator() const = 0;

private:
    ScalarField scalars_;

    mutable std::atomic<std::uint64_t> pairings_{0};
    mutable std::atomic<std::uint64_t> source_adds_{0};
    mutable std::atomic<std::uint64_t> scalar_muls_{0};
    mutable std::atomic<std::uint64_t> gt_ops_{0};
    mutable std::atomic<std::uint64_t> gt_scales_{0};
};

[[nodiscard]] std::shared_ptr<const PairingEngine> make_engine(const EngineConfig& config);

}  // namespace agencid::pairing
