#pragma once

#include "agencid/kac/kac.hpp"

namespace agencid::kac::detail {

/// Parameters for a caller-supplied alpha. Only setup() and the test
/// fixture library call this; alpha never leaves either.
[[nodiscard]] SystemParams params_from_trapdoor(const PairingEngine& engine, std::uint32_t n, const Scalar& alpha);

[[nodiscard]] KeyCiphertext encrypt_with_randomness(const PairingEngine& engine, const PublicKey& pk,
                                                    const IndexSet& cluster, const AggregateKey& agg,
                                                    const TargetElement& m, const Scalar& t);

}  // namespace agencid::kac::detail
