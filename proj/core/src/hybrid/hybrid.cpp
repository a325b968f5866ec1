#include "agencid/hybrid/hybrid.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/kdf.h>

#include <memory>

namespace agencid::hybrid {

namespace {

struct CipherCtxDeleter {
    void operator()(EVP_CIPHER_CTX* ctx) const noexcept { EVP_CIPHER_CTX_free(ctx); }
};
using CipherCtx = std::unique_ptr<EVP_CIPHER_CTX, CipherCtxDeleter>;

struct PkeyCtxDeleter {
    void operator()(EVP_PKEY_CTX* ctx) const noexcept { EVP_PKEY_CTX_free(ctx); }
};
using PkeyCtx = std::unique_ptr<EVP_PKEY_CTX, PkeyCtxDeleter>;

CipherCtx new_cipher_ctx()
{
    CipherCtx ctx(EVP_CIPHER_CTX_new());
    if (!ctx) throw Error(ErrorCode::invalid_argument, "EVP_CIPHER_CTX_new failed");
    return ctx;
}

void check(int rc, const char* what)
{
    if (rc != 1) throw Error(ErrorCode::invalid_argument, std::string("OpenSSL ") + what + " failed");
}

int to_int_len(std::size_t n)
{
    if (n > static_cast<std::size_t>(INT32_MAX)) {
        throw Error(ErrorCode::invalid_argument, "payload larger than 2 GiB");
    }
    return static_cast<int>(n);
}

}  // namespace

SymmetricKey::~SymmetricKey()
{
    OPENSSL_cleanse(bytes_.data(), bytes_.size());
}

void SealedPayload::write(ByteWriter& w) const
{
    w.raw(nonce);
    w.prefixed(ciphertext);
    w.raw(tag);
}

Bytes SealedPayload::to_wire() const
{
    ByteWriter w;
    write(w);
    return std::move(w).take();
}

SealedPayload SealedPayload::read(ByteReader& r)
{
    SealedPayload s;
    auto n = r.raw(nonce_size);
    std::copy(n.begin(), n.end(), s.nonce.begin());
    auto c = r.prefixed();
    s.ciphertext.assign(c.begin(), c.end());
    auto t = r.raw(tag_size);
    std::copy(t.begin(), t.end(), s.tag.begin());
    return s;
}

SealedPayload SealedPayload::from_wire(ByteView bytes)
{
    ByteReader r(bytes);
    auto s = read(r);
    r.expect_end();
    return s;
}

Encapsulation encapsulate(const kac::PairingEngine& engine, const kac::PublicKey& pk, const kac::IndexSet& cluster,
                          const kac::AggregateKey& agg, Rng& rng)
{
    SessionSecret secret{engine.random_gt(rng)};
    auto ct = kac::encrypt(engine, pk, cluster, agg, secret.gt, rng);
    return {std::move(secret), std::move(ct)};
}

std::optional<SessionSecret> decapsulate(const kac::PairingEngine& engine, const kac::SystemParams& params,
                                         const kac::IndexSet& cluster, std::uint32_t index,
                                         const kac::BoardPrivateKey& key, const kac::KeyCiphertext& ct)
{
    auto m = kac::decrypt(engine, params, cluster, index, key, ct);
    if (!m) return std::nullopt;
    return SessionSecret{std::move(*m)};
}

Bytes key_context(std::string_view cluster_id, std::string_view package_id)
{
    ByteWriter w;
    w.prefixed(cluster_id);
    w.prefixed(package_id);
    return std::move(w).take();
}

std::array<std::uint8_t, key_size> hkdf_sha256(ByteView ikm, ByteView salt, std::string_view label, ByteView info)
{
    Bytes full_info(label.begin(), label.end());
    full_info.insert(full_info.end(), info.begin(), info.end());

    PkeyCtx ctx(EVP_PKEY_CTX_new_id(EVP_PKEY_HKDF, nullptr));
    if (!ctx) throw Error(ErrorCode::invalid_argument, "HKDF context allocation failed");
    check(EVP_PKEY_derive_init(ctx.get()), "HKDF init");
    check(EVP_PKEY_CTX_set_hkdf_md(ctx.get(), EVP_sha256()), "HKDF digest");
    if (!salt.empty()) {
        check(EVP_PKEY_CTX_set1_hkdf_salt(ctx.get(), salt.data(), to_int_len(salt.size())), "HKDF salt");
    }
    check(EVP_PKEY_CTX_set1_hkdf_key(ctx.get(), ikm.data(), to_int_len(ikm.size())), "HKDF key");
    check(EVP_PKEY_CTX_add1_hkdf_info(ctx.get(), full_info.data(), to_int_len(full_info.size())), "HKDF info");

    std::array<std::uint8_t, key_size> out{};
    std::size_t len = out.size();
    check(EVP_PKEY_derive(ctx.get(), out.data(), &len), "HKDF derive");
    return out;
}

SymmetricKey derive_key(const kac::PairingEngine& engine, const SessionSecret& secret, ByteView context)
{
    auto ikm = engine.serialize(secret.gt);
    auto key = SymmetricKey(hkdf_sha256(ikm, {}, kdf_label, context));
    OPENSSL_cleanse(ikm.data(), ikm.size());
    return key;
}

SealedPayload seal(const SymmetricKey& key, ByteView payload, ByteView aad, Rng& rng)
{
    SealedPayload out;
    rng.fill(out.nonce);
    out.aad_digest = sha256(aad);
    out.ciphertext.resize(payload.size());

    auto ctx = new_cipher_ctx();
    check(EVP_EncryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, nullptr, nullptr), "GCM init");
    check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, nonce_size, nullptr), "GCM ivlen");
    check(EVP_EncryptInit_ex(ctx.get(), nullptr, nullptr, key.bytes().data(), out.nonce.data()), "GCM key");
    int len = 0;
    check(EVP_EncryptUpdate(ctx.get(), nullptr, &len, out.aad_digest.data(), static_cast<int>(out.aad_digest.size())),
          "GCM aad");
    if (!payload.empty()) {
        check(EVP_EncryptUpdate(ctx.get(), out.ciphertext.data(), &len, payload.data(), to_int_len(payload.size())),
              "GCM encrypt");
    }
    int tail = 0;
    check(EVP_EncryptFinal_ex(ctx.get(), out.ciphertext.data() + len, &tail), "GCM final");
    check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_GET_TAG, tag_size, out.tag.data()), "GCM tag");
    return out;
}

Bytes open(const SymmetricKey& key, const SealedPayload& sealed, ByteView aad)
{
    const auto digest = sha256(aad);
    Bytes plain(sealed.ciphertext.size());

    auto ctx = new_cipher_ctx();
    check(EVP_DecryptInit_ex(ctx.get(), EVP_aes_256_gcm(), nullptr, nullptr, nullptr), "GCM init");
    check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_IVLEN, nonce_size, nullptr), "GCM ivlen");
    check(EVP_DecryptInit_ex(ctx.get(), nullptr, nullptr, key.bytes().data(), sealed.nonce.data()), "GCM key");
    int len = 0;
    check(EVP_DecryptUpdate(ctx.get(), nullptr, &len, digest.data(), static_cast<int>(digest.size())), "GCM aad");
    if (!sealed.ciphertext.empty()) {
        check(EVP_DecryptUpdate(ctx.get(), plain.data(), &len, sealed.ciphertext.data(),
                                to_int_len(sealed.ciphertext.size())),
              "GCM decrypt");
    }
    auto tag = sealed.tag;
    check(EVP_CIPHER_CTX_ctrl(ctx.get(), EVP_CTRL_GCM_SET_TAG, tag_size, tag.data()), "GCM set tag");
    int tail = 0;
    if (EVP_DecryptFinal_ex(ctx.get(), plain.data() + len, &tail) != 1) {
        OPENSSL_cleanse(plain.data(), plain.size());
        throw Error(ErrorCode::authentication_failure, "payload authentication failed");
    }
    return plain;
}

}  // namespace agencid::hybrid
