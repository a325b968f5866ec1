#include "agencid/bytes.hpp"

namespace agencid {

std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::invalid_argument: return "invalid-argument";
    case ErrorCode::tag_mismatch: return "tag-mismatch";
    case ErrorCode::backend_mismatch: return "backend-mismatch";
    case ErrorCode::invalid_encoding: return "invalid-encoding";
    case ErrorCode::invalid_capacity: return "invalid-capacity";
    case ErrorCode::empty_cluster: return "empty-cluster";
    case ErrorCode::index_out_of_range: return "index-out-of-range";
    case ErrorCode::cluster_mismatch: return "cluster-mismatch";
    case ErrorCode::key_mismatch: return "key-mismatch";
    case ErrorCode::authentication_failure: return "authentication-failure";
    case ErrorCode::entropy_failure: return "entropy-failure";
    case ErrorCode::duplicate: return "duplicate";
    case ErrorCode::not_found: return "not-found";
    case ErrorCode::registration_refused: return "registration-refused";
    case ErrorCode::scenario_violation: return "scenario-violation";
    case ErrorCode::inactive_index: return "inactive-index";
    case ErrorCode::key_unavailable: return "key-unavailable";
    case ErrorCode::integrity_failure: return "integrity-failure";
    case ErrorCode::journal_corruption: return "journal-corruption";
    case ErrorCode::io_failure: return "io-failure";
    case ErrorCode::insufficient_data: return "insufficient-data";
    }
    return "unknown";
}

std::string to_hex(ByteView bytes)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (auto b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

Bytes from_hex(std::string_view hex)
{
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    if (hex.size() % 2 != 0) {
        throw Error(ErrorCode::invalid_encoding, "odd-length hex string");
    }
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = nibble(hex[2 * i]);
        int lo = nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) {
            throw Error(ErrorCode::invalid_encoding, "non-hex character");
        }
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

void ByteWriter::u32(std::uint32_t v)
{
    for (int shift = 24; shift >= 0; shift -= 8) {
        out_.push_back(static_cast<std::uint8_t>(v >> shift));
    }
}

void ByteWriter::u64(std::uint64_t v)
{
    for (int shift = 56; shift >= 0; shift -= 8) {
        out_.push_back(static_cast<std::uint8_t>(v >> shift));
    }
}

void ByteWriter::prefixed(ByteView bytes)
{
    if (bytes.size() > 0xffffffffULL) {
        throw Error(ErrorCode::invalid_argument, "field longer than 4 GiB");
    }
    u32(static_cast<std::uint32_t>(bytes.size()));
    raw(bytes);
}

std::uint8_t ByteReader::u8()
{
    return raw(1)[0];
}

std::uint32_t ByteReader::u32()
{
    auto b = raw(4);
    return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | b[3];
}

std::uint64_t ByteReader::u64()
{
    auto b = raw(8);
    std::uint64_t v = 0;
    for (auto x : b) v = (v << 8) | x;
    return v;
}

ByteView ByteReader::raw(std::size_t n)
{
    if (n > remaining()) {
        throw Error(ErrorCode::invalid_encoding, "truncated input");
    }
    auto out = in_.subspan(pos_, n);
    pos_ += n;
    return out;
}

ByteView ByteReader::prefixed()
{
    return raw(u32());
}

std::string ByteReader::prefixed_string()
{
    auto b = prefixed();
    return {b.begin(), b.end()};
}

void ByteReader::expect_end() const
{
    if (remaining() != 0) {
        throw Error(ErrorCode::invalid_encoding, "trailing bytes after encoding");
    }
}

}  // namespace agencid
