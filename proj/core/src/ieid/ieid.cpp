#include "agencid/ieid/ieid.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>

#include <chrono>
#include <memory>
#include <set>

namespace agencid::ieid {

namespace {

constexpr std::string_view wrap_label = "AgEncID/v1/ieid-wrap";

struct PkeyDeleter {
    void operator()(EVP_PKEY* k) const noexcept { EVP_PKEY_free(k); }
};
using Pkey = std::unique_ptr<EVP_PKEY, PkeyDeleter>;

struct PkeyCtxDeleter {
    void operator()(EVP_PKEY_CTX* c) const noexcept { EVP_PKEY_CTX_free(c); }
};
using PkeyCtx = std::unique_ptr<EVP_PKEY_CTX, PkeyCtxDeleter>;

using Clock = std::chrono::steady_clock;

std::uint64_t elapsed_ns(Clock::time_point since)
{
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - since).count());
}

Pkey private_key(const std::array<std::uint8_t, 32>& raw)
{
    Pkey k(EVP_PKEY_new_raw_private_key(EVP_PKEY_X25519, nullptr, raw.data(), raw.size()));
    if (!k) throw Error(ErrorCode::invalid_argument, "bad X25519 private key");
    return k;
}

Pkey public_key(const std::array<std::uint8_t, 32>& raw)
{
    Pkey k(EVP_PKEY_new_raw_public_key(EVP_PKEY_X25519, nullptr, raw.data(), raw.size()));
    if (!k) throw Error(ErrorCode::invalid_argument, "bad X25519 public key");
    return k;
}

std::array<std::uint8_t, 32> raw_public(EVP_PKEY* k)
{
    std::array<std::uint8_t, 32> out{};
    std::size_t len = out.size();
    if (EVP_PKEY_get_raw_public_key(k, out.data(), &len) != 1 || len != out.size()) {
        throw Error(ErrorCode::invalid_argument, "X25519 public key export failed");
    }
    return out;
}

std::array<std::uint8_t, 32> agree(const std::array<std::uint8_t, 32>& own_private,
                                   const std::array<std::uint8_t, 32>& peer_public)
{
    auto own = private_key(own_private);
    auto peer = public_key(peer_public);
    PkeyCtx ctx(EVP_PKEY_CTX_new(own.get(), nullptr));
    std::array<std::uint8_t, 32> shared{};
    std::size_t len = shared.size();
    if (!ctx || EVP_PKEY_derive_init(ctx.get()) != 1 || EVP_PKEY_derive_set_peer(ctx.get(), peer.get()) != 1
        || EVP_PKEY_derive(ctx.get(), shared.data(), &len) != 1) {
        throw Error(ErrorCode::authentication_failure, "X25519 agreement failed");
    }
    return shared;
}

hybrid::SymmetricKey key_encryption_key(const std::array<std::uint8_t, 32>& shared,
                                        const std::array<std::uint8_t, 32>& ephemeral_public,
                                        const std::array<std::uint8_t, 32>& recipient_public, ByteView context)
{
    Bytes salt(ephemeral_public.begin(), ephemeral_public.end());
    salt.insert(salt.end(), recipient_public.begin(), recipient_public.end());
    return hybrid::SymmetricKey(hybrid::hkdf_sha256(shared, salt, wrap_label, context));
}

}  // namespace

IeidKeyPair X25519Wrapper::generate(std::uint32_t index, Rng& rng) const
{
    IeidKeyPair kp;
    kp.index = index;
    rng.fill(kp.private_key);
    kp.public_key = raw_public(private_key(kp.private_key).get());
    return kp;
}

Bytes X25519Wrapper::wrap(const BoardPublicKey& recipient, const hybrid::SymmetricKey& key, ByteView context,
                          Rng& rng) const
{
    std::array<std::uint8_t, 32> ephemeral{};
    rng.fill(ephemeral);
    const auto ephemeral_public = raw_public(private_key(ephemeral).get());
    auto shared = agree(ephemeral, recipient.public_key);
    OPENSSL_cleanse(ephemeral.data(), ephemeral.size());
    auto kek = key_encryption_key(shared, ephemeral_public, recipient.public_key, context);
    OPENSSL_cleanse(shared.data(), shared.size());

    auto sealed = hybrid::seal(kek, key.bytes(), context, rng);
    ByteWriter w;
    w.raw(ephemeral_public);
    sealed.write(w);
    return std::move(w).take();
}

hybrid::SymmetricKey X25519Wrapper::unwrap(const IeidKeyPair& recipient, ByteView wrapped, ByteView context) const
{
    std::array<std::uint8_t, 32> ephemeral_public{};
    hybrid::SealedPayload sealed;
    try {
        ByteReader r(wrapped);
        auto e = r.raw(32);
        std::copy(e.begin(), e.end(), ephemeral_public.begin());
        sealed = hybrid::SealedPayload::read(r);
        r.expect_end();
    } catch (const Error& e) {
        throw Error(ErrorCode::authentication_failure, std::string("malformed wrapped key: ") + e.what());
    }
    auto shared = agree(recipient.private_key, ephemeral_public);
    auto kek = key_encryption_key(shared, ephemeral_public, recipient.public_key, context);
    OPENSSL_cleanse(shared.data(), shared.size());
    auto plain = hybrid::open(kek, sealed, context);
    if (plain.size() != hybrid::key_size) {
        throw Error(ErrorCode::authentication_failure, "wrapped key has wrong length");
    }
    std::array<std::uint8_t, hybrid::key_size> bytes{};
    std::copy(plain.begin(), plain.end(), bytes.begin());
    OPENSSL_cleanse(plain.data(), plain.size());
    return hybrid::SymmetricKey(bytes);
}

IeidBatch encrypt_all(const KeyWrapper& wrapper, std::span<const BoardPublicKey> boards, ByteView payload,
                      std::string_view cluster_id, std::string_view package_id, Rng& rng)
{
    if (boards.empty()) throw Error(ErrorCode::empty_cluster, "baseline encryption needs at least one board");
    std::set<std::uint32_t> seen;
    for (const auto& b : boards) {
        if (!seen.insert(b.index).second) {
            throw Error(ErrorCode::invalid_argument, "board " + std::to_string(b.index) + " listed twice");
        }
    }

    IeidBatch batch;
    batch.packages.reserve(boards.size());
    for (const auto& board : boards) {
        workflow::EncryptedPackage pkg;
        pkg.header.backend = pairing::BackendId::ieid;
        pkg.header.cluster_id = std::string(cluster_id);
        pkg.header.package_id = std::string(package_id);
        pkg.header.cluster = kac::IndexSet{board.index};
        const auto aad = pkg.header.encode();

        auto t0 = Clock::now();
        std::array<std::uint8_t, hybrid::key_size> raw{};
        rng.fill(raw);
        hybrid::SymmetricKey key(raw);
        OPENSSL_cleanse(raw.data(), raw.size());
        ++batch.tally.key_generations;
        pkg.key_block = wrapper.wrap(board, key, aad, rng);
        ++batch.tally.wraps;
        batch.tally.key_ns += elapsed_ns(t0);

        t0 = Clock::now();
        pkg.sealed = hybrid::seal(key, payload, aad, rng);
        ++batch.tally.seals;
        batch.tally.seal_ns += elapsed_ns(t0);
        batch.packages.push_back(std::move(pkg));
    }
    return batch;
}

Bytes decrypt(const KeyWrapper& wrapper, const IeidKeyPair& board, const workflow::EncryptedPackage& package)
{
    if (package.header.backend != pairing::BackendId::ieid) {
        throw Error(ErrorCode::invalid_argument, "not a baseline package");
    }
    if (!(package.header.cluster == kac::IndexSet{board.index})) {
        throw Error(ErrorCode::key_mismatch,
                    "package is addressed to " + package.header.cluster.to_string() + ", not board "
                        + std::to_string(board.index));
    }
    const auto aad = package.header.encode();
    auto key = wrapper.unwrap(board, package.key_block, aad);
    return hybrid::open(key, package.sealed, aad);
}

}  // namespace agencid::ieid
