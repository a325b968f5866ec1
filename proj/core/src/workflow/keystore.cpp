#include "agencid/workflow/keystore.hpp"

#include "agencid/hybrid/hybrid.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>

#include <algorithm>

namespace agencid::workflow {

namespace {

constexpr std::array<std::uint8_t, 4> keystore_magic{'A', 'G', 'S', 'K'};
constexpr std::uint8_t keystore_version = 0x01;
constexpr std::size_t salt_size = 16;
constexpr std::uint32_t max_iterations = 10'000'000;

hybrid::SymmetricKey stretch(std::string_view passphrase, ByteView salt, std::uint32_t iterations)
{
    std::array<std::uint8_t, hybrid::key_size> out{};
    if (PKCS5_PBKDF2_HMAC(passphrase.data(), static_cast<int>(passphrase.size()), salt.data(),
                          static_cast<int>(salt.size()), static_cast<int>(iterations), EVP_sha256(),
                          static_cast<int>(out.size()), out.data())
        != 1) {
        throw Error(ErrorCode::entropy_failure, "PBKDF2 failed");
    }
    hybrid::SymmetricKey key(out);
    OPENSSL_cleanse(out.data(), out.size());
    return key;
}

}  // namespace

Bytes seal_with_passphrase(std::string_view passphrase, ByteView secret, std::string_view label, Rng& rng,
                           std::uint32_t iterations)
{
    if (iterations == 0 || iterations > max_iterations) {
        throw Error(ErrorCode::invalid_argument, "PBKDF2 iteration count out of range");
    }
    std::array<std::uint8_t, salt_size> salt{};
    rng.fill(salt);
    auto key = stretch(passphrase, salt, iterations);
    auto sealed = hybrid::seal(key, secret, as_bytes(label), rng);

    ByteWriter w;
    w.raw(keystore_magic);
    w.u8(keystore_version);
    w.raw(salt);
    w.u32(iterations);
    sealed.write(w);
    return std::move(w).take();
}

Bytes open_with_passphrase(std::string_view passphrase, ByteView sealed, std::string_view label)
{
    std::array<std::uint8_t, salt_size> salt{};
    std::uint32_t iterations = 0;
    hybrid::SealedPayload payload;
    try {
        ByteReader r(sealed);
        auto magic = r.raw(4);
        if (!std::equal(magic.begin(), magic.end(), keystore_magic.begin(), keystore_magic.end())
            || r.u8() != keystore_version) {
            throw Error(ErrorCode::invalid_encoding, "not a sealed key file");
        }
        auto s = r.raw(salt_size);
        std::copy(s.begin(), s.end(), salt.begin());
        iterations = r.u32();
        payload = hybrid::SealedPayload::read(r);
        r.expect_end();
    } catch (const Error& e) {
        throw Error(ErrorCode::authentication_failure, std::string("sealed key file unreadable: ") + e.what());
    }
    if (iterations == 0 || iterations > max_iterations) {
        throw Error(ErrorCode::authentication_failure, "sealed key file has a bad iteration count");
    }
    auto key = stretch(passphrase, salt, iterations);
    return hybrid::open(key, payload, as_bytes(label));
}

}  // namespace agencid::workflow
