#include "agencid/rng.hpp"

#include <openssl/evp.h>
#include <openssl/rand.h>

#include <algorithm>
#include <cstring>

namespace agencid {

namespace {

constexpr std::string_view stream_label = "agencid/rng/v1";

}  // namespace

Rng Rng::seeded(std::uint64_t seed)
{
    return Rng(seed);
}

Rng Rng::system()
{
    return Rng(std::nullopt);
}

void Rng::refill()
{
    ByteWriter w;
    w.raw(stream_label);
    w.u64(*seed_);
    w.u64(counter_++);
    block_ = sha256(w.bytes());
    used_ = 0;
}

void Rng::fill(std::span<std::uint8_t> out)
{
    if (!seed_) {
        if (out.empty()) return;
        if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
            throw Error(ErrorCode::entropy_failure, "RAND_bytes failed");
        }
        return;
    }
    std::size_t written = 0;
    while (written < out.size()) {
        if (used_ == block_.size()) refill();
        std::size_t n = std::min(out.size() - written, block_.size() - used_);
        std::memcpy(out.data() + written, block_.data() + used_, n);
        used_ += n;
        written += n;
    }
}

Bytes Rng::bytes(std::size_t n)
{
    Bytes out(n);
    fill(out);
    return out;
}

std::uint64_t Rng::next_u64()
{
    std::array<std::uint8_t, 8> b{};
    fill(b);
    std::uint64_t v = 0;
    for (auto x : b) v = (v << 8) | x;
    return v;
}

Digest sha256(ByteView data)
{
    Digest out{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::invalid_argument, "SHA-256 failed");
    }
    return out;
}

std::string sha256_hex(ByteView data)
{
    return to_hex(sha256(data));
}

}  // namespace agencid
