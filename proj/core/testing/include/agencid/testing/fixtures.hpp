#pragma once

// Deterministic entry points for tests: parameters from a known alpha and
// encryption with a known t. Not installed; production code has no way to
// choose either value.

#include "agencid/kac/kac.hpp"

#include <cstdint>

namespace agencid::testing {

[[nodiscard]] kac::SystemParams params_with_alpha(const kac::PairingEngine& engine, std::uint32_t n,
                                                  const kac::Scalar& alpha);
[[nodiscard]] kac::SystemParams params_with_alpha(const kac::PairingEngine& engine, std::uint32_t n,
                                                  std::uint64_t alpha);

[[nodiscard]] kac::KeyCiphertext encrypt_with_t(const kac::PairingEngine& engine, const kac::PublicKey& pk,
                                                const kac::IndexSet& cluster, const kac::AggregateKey& agg,
                                                const kac::TargetElement& m, const kac::Scalar& t);
[[nodiscard]] kac::KeyCiphertext encrypt_with_t(const kac::PairingEngine& engine, const kac::PublicKey& pk,
                                                const kac::IndexSet& cluster, const kac::AggregateKey& agg,
                                                const kac::TargetElement& m, std::uint64_t t);

}  // namespace agencid::testing
