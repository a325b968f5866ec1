#include "agencid/hybrid/hybrid.hpp"
#include "agencid/pairing/symbolic_engine.hpp"
#include "agencid/pairing/type_a_engine.hpp"

#include <gtest/gtest.h>

using namespace agencid;
using namespace agencid::hybrid;

namespace {

ErrorCode code_of(const std::function<void()>& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::invalid_argument;
}

SymmetricKey counting_key()
{
    std::array<std::uint8_t, key_size> k{};
    for (std::size_t i = 0; i < k.size(); ++i) k[i] = static_cast<std::uint8_t>(i);
    return SymmetricKey(k);
}

}  // namespace

// Reference value from an independent HKDF-SHA256 (Python `cryptography`):
// ikm = 00 00 00 00 00 00 00 5d, no salt,
// info = "AgEncID/v1/key" || 00000002 "c1" || 00000003 "pkg".
TEST(Hybrid, KeyDerivationMatchesReferenceHkdf)
{
    pairing::SymbolicEngine e(101);
    const auto key = derive_key(e, SessionSecret{e.target(93)}, key_context("c1", "pkg"));
    EXPECT_EQ(to_hex(key.bytes()), "7c85b3465cdf21c16919219400446b71c086b0df659e72206f822b8c3ea323d7");
}

TEST(Hybrid, KeyContextIsUnambiguous)
{
    EXPECT_NE(key_context("a", "bc"), key_context("ab", "c"));
    pairing::SymbolicEngine e(101);
    const SessionSecret s{e.target(7)};
    EXPECT_NE(derive_key(e, s, key_context("c", "p1")), derive_key(e, s, key_context("c", "p2")));
    EXPECT_NE(derive_key(e, s, key_context("c", "p")), derive_key(e, SessionSecret{e.target(8)}, key_context("c", "p")));
}

// Reference ciphertext from an independent AES-256-GCM (Python `cryptography`)
// with key 00..1f, nonce 00..0b and associated data SHA-256("header").
TEST(Hybrid, OpensReferenceCiphertext)
{
    SealedPayload sealed;
    for (std::size_t i = 0; i < nonce_size; ++i) sealed.nonce[i] = static_cast<std::uint8_t>(i);
    sealed.ciphertext = from_hex("256ba268b197a77ae061e7eac885170ce7");
    const auto tag = from_hex("524bf37dd663e923b6f8d79b154b9755");
    std::copy(tag.begin(), tag.end(), sealed.tag.begin());
    const auto plain = open(counting_key(), sealed, as_bytes("header"));
    EXPECT_EQ(std::string(plain.begin(), plain.end()), "bitstream payload");
    EXPECT_EQ(code_of([&] { (void)open(counting_key(), sealed, as_bytes("Header")); }),
              ErrorCode::authentication_failure);
}

TEST(Hybrid, SealOpenRoundTrip)
{
    auto rng = Rng::seeded(1);
    const auto key = counting_key();
    for (std::size_t size : {0u, 1u, 1000u, 1u << 20}) {
        const auto payload = rng.bytes(size);
        const auto sealed = seal(key, payload, as_bytes("aad"), rng);
        EXPECT_EQ(sealed.ciphertext.size(), size);
        EXPECT_EQ(sealed.wire_size(), size + nonce_size + 4 + tag_size);
        EXPECT_EQ(open(key, SealedPayload::from_wire(sealed.to_wire()), as_bytes("aad")), payload);
    }
}

TEST(Hybrid, AnyChangeFailsAuthentication)
{
    auto rng = Rng::seeded(2);
    const auto key = counting_key();
    const auto payload = rng.bytes(64);
    const auto sealed = seal(key, payload, as_bytes("aad"), rng);
    const auto wire = sealed.to_wire();
    for (std::size_t i = 0; i < wire.size(); ++i) {
        auto bad = wire;
        bad[i] ^= 0x40;
        EXPECT_THROW((void)open(key, SealedPayload::from_wire(bad), as_bytes("aad")), Error) << "byte " << i;
    }
    auto other = counting_key().bytes();
    other[0] ^= 1;
    EXPECT_EQ(code_of([&] { (void)open(SymmetricKey(other), sealed, as_bytes("aad")); }),
              ErrorCode::authentication_failure);
    EXPECT_EQ(code_of([&] { (void)open(key, sealed, as_bytes("aae")); }), ErrorCode::authentication_failure);
}

TEST(Hybrid, NoncesAreFresh)
{
    auto rng = Rng::seeded(3);
    const auto a = seal(counting_key(), Bytes{1, 2, 3}, {}, rng);
    const auto b = seal(counting_key(), Bytes{1, 2, 3}, {}, rng);
    EXPECT_NE(a.nonce, b.nonce);
    EXPECT_NE(a.ciphertext, b.ciphertext);
}

TEST(Hybrid, TruncatedWireIsMalformed)
{
    auto rng = Rng::seeded(3);
    auto wire = seal(counting_key(), Bytes{1, 2, 3}, {}, rng).to_wire();
    wire.pop_back();
    EXPECT_EQ(code_of([&] { (void)SealedPayload::from_wire(wire); }), ErrorCode::invalid_encoding);
}

TEST(Hybrid, EncapsulationRoundTripOnCurve)
{
    const pairing::TypeAEngine e;
    auto rng = Rng::seeded(4);
    const auto params = kac::setup(e, 4, rng);
    const auto km = kac::keygen(e, params, rng);
    const kac::IndexSet s{2, 4};
    const auto agg = kac::extract(e, params, s);
    const auto before = e.op_counts();
    const auto enc = encapsulate(e, km.pk, s, agg, rng);
    EXPECT_EQ((e.op_counts() - before).pairings, 0u);

    const auto ctx = key_context("cluster", "pkg");
    const auto sealed = seal(derive_key(e, enc.secret, ctx), as_bytes("bits"), {}, rng);
    for (std::uint32_t i = 1; i <= 4; ++i) {
        const auto secret = decapsulate(e, params, s, i, km.board_keys[i - 1], enc.ciphertext);
        ASSERT_EQ(secret.has_value(), s.contains(i));
        if (secret) {
            EXPECT_EQ(secret->gt, enc.secret.gt);
            EXPECT_EQ(open(derive_key(e, *secret, ctx), sealed, {}), Bytes(as_bytes("bits").begin(), as_bytes("bits").end()));
        }
    }
}
