#include "agencid/pairing/engine.hpp"

#include "agencid/pairing/symbolic_engine.hpp"
#include "agencid/pairing/type_a_engine.hpp"

namespace agencid::pairing {

std::string_view to_string(BackendId id) noexcept
{
    switch (id) {
    case BackendId::type_a: return "production";
    case BackendId::symbolic: return "symbolic";
    case BackendId::ieid: return "ieid";
    }
    return "unknown";
}

BackendId backend_from_byte(std::uint8_t b)
{
    switch (b) {
    case 0x01: return BackendId::type_a;
    case 0x02: return BackendId::symbolic;
    case 0xff: return BackendId::ieid;
    default: throw Error(ErrorCode::invalid_encoding, "unknown backend id " + std::to_string(b));
    }
}

namespace {

void require_same_tag(const SourceElement& a, const SourceElement& b)
{
    if (a.tag() != b.tag()) {
        throw Error(ErrorCode::tag_mismatch, "source elements belong to different groups");
    }
}

}  // namespace

SourceElement PairingEngine::add(const SourceElement& a, const SourceElement& b) const
{
    require_same_tag(a, b);
    source_adds_.fetch_add(1, std::memory_order_relaxed);
    return {a.tag(), do_add(a.rep(), b.rep())};
}

SourceElement PairingEngine::sub(const SourceElement& a, const SourceElement& b) const
{
    require_same_tag(a, b);
    source_adds_.fetch_add(1, std::memory_order_relaxed);
    return {a.tag(), do_add(a.rep(), do_neg(b.rep()))};
}

SourceElement PairingEngine::neg(const SourceElement& a) const
{
    return {a.tag(), do_neg(a.rep())};
}

SourceElement PairingEngine::scalar_mul(const Scalar& k, const SourceElement& x) const
{
    scalar_muls_.fetch_add(1, std::memory_order_relaxed);
    return {x.tag(), do_scalar_mul(k.value(), x.rep())};
}

SourceElement PairingEngine::to_second(const SourceElement& x) const
{
    if (x.tag() != GroupTag::first) {
        throw Error(ErrorCode::tag_mismatch, "to_second expects a first-group element");
    }
    if (!symmetric()) {
        throw Error(ErrorCode::invalid_argument, "no efficient map between source groups on this backend");
    }
    return {GroupTag::second, x.rep()};
}

TargetElement PairingEngine::pair(const SourceElement& a, const SourceElement& b) const
{
    if (a.tag() != GroupTag::first || b.tag() != GroupTag::second) {
        throw Error(ErrorCode::tag_mismatch, "pair expects (first, second) group elements");
    }
    pairings_.fetch_add(1, std::memory_order_relaxed);
    return TargetElement(do_pair(a.rep(), b.rep()));
}

TargetElement PairingEngine::gt_combine(const TargetElement& x, const TargetElement& y) const
{
    gt_ops_.fetch_add(1, std::memory_order_relaxed);
    return TargetElement(do_gt_mul(x.rep(), y.rep()));
}

TargetElement PairingEngine::gt_uncombine(const TargetElement& x, const TargetElement& y) const
{
    gt_ops_.fetch_add(1, std::memory_order_relaxed);
    return TargetElement(do_gt_mul(x.rep(), do_gt_inv(y.rep())));
}

TargetElement PairingEngine::gt_scale(const TargetElement& x, const Scalar& k) const
{
    gt_scales_.fetch_add(1, std::memory_order_relaxed);
    return TargetElement(do_gt_pow(x.rep(), k.value()));
}

TargetElement PairingEngine::random_gt(Rng& rng) const
{
    Scalar k = scalars_.random(rng);
    return TargetElement(do_gt_pow(gt_generator().rep(), k.value()));
}

OpCounts PairingEngine::op_counts() const noexcept
{
    return {pairings_.load(std::memory_order_relaxed), source_adds_.load(std::memory_order_relaxed),
            scalar_muls_.load(std::memory_order_relaxed), gt_ops_.load(std::memory_order_relaxed),
            gt_scales_.load(std::memory_order_relaxed)};
}

void PairingEngine::reset_op_counts() const noexcept
{
    pairings_ = 0;
    source_adds_ = 0;
    scalar_muls_ = 0;
    gt_ops_ = 0;
    gt_scales_ = 0;
}

std::shared_ptr<const PairingEngine> make_engine(const EngineConfig& config)
{
    switch (config.backend) {
    case BackendId::type_a:
        if (config.security_level != 0 && config.security_level != TypeAEngine::default_security_level) {
            throw Error(ErrorCode::invalid_argument,
                        "the Type-A backend provides " + std::to_string(TypeAEngine::default_security_level)
                            + "-bit security only");
        }
        return std::make_shared<TypeAEngine>();
    case BackendId::symbolic:
        return std::make_shared<SymbolicEngine>(config.oracle_modulus);
    case BackendId::ieid:
        break;
    }
    throw Error(ErrorCode::invalid_argument, "backend id has no pairing engine");
}

}  // namespace agencid::pairing
