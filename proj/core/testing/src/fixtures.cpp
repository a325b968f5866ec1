#include "agencid/testing/fixtures.hpp"

#include "kac/kac_internal.hpp"

namespace agencid::testing {

kac::SystemParams params_with_alpha(const kac::PairingEngine& engine, std::uint32_t n, const kac::Scalar& alpha)
{
    return kac::detail::params_from_trapdoor(engine, n, alpha);
}

kac::SystemParams params_with_alpha(const kac::PairingEngine& engine, std::uint32_t n, std::uint64_t alpha)
{
    return params_with_alpha(engine, n, engine.scalars().from_u64(alpha));
}

kac::KeyCiphertext encrypt_with_t(const kac::PairingEngine& engine, const kac::PublicKey& pk,
                                  const kac::IndexSet& cluster, const kac::AggregateKey& agg,
                                  const kac::TargetElement& m, const kac::Scalar& t)
{
    return kac::detail::encrypt_with_randomness(engine, pk, cluster, agg, m, t);
}

kac::KeyCiphertext encrypt_with_t(const kac::PairingEngine& engine, const kac::PublicKey& pk,
                                  const kac::IndexSet& cluster, const kac::AggregateKey& agg,
                                  const kac::TargetElement& m, std::uint64_t t)
{
    return encrypt_with_t(engine, pk, cluster, agg, m, engine.scalars().from_u64(t));
}

}  // namespace agencid::testing
