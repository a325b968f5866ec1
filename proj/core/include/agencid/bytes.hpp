#pragma once

#include "agencid/error.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace agencid {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

[[nodiscard]] inline ByteView as_bytes(std::string_view s) noexcept
{
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

[[nodiscard]] std::string to_hex(ByteView bytes);
[[nodiscard]] Bytes from_hex(std::string_view hex);

/// Big-endian append-only encoder.
class ByteWriter {
public:
    void u8(std::uint8_t v) { out_.push_back(v); }
    void u32(std::uint32_t v);
    void u64(std::uint64_t v);
    void raw(ByteView bytes) { out_.insert(out_.end(), bytes.begin(), bytes.end()); }
    void raw(std::string_view s) { raw(as_bytes(s)); }
    /// 4-byte big-endian length followed by the bytes.
    void prefixed(ByteView bytes);
    void prefixed(std::string_view s) { prefixed(as_bytes(s)); }

    [[nodiscard]] const Bytes& bytes() const& noexcept { return out_; }
    [[nodiscard]] Bytes take() && noexcept { return std::move(out_); }
    [[nodiscard]] std::size_t size() const noexcept { return out_.size(); }

private:
    Bytes out_;
};

/// Big-endian cursor over a byte view. Every read past the end throws
/// ErrorCode::invalid_encoding.
class ByteReader {
public:
    explicit ByteReader(ByteView in) noexcept : in_(in) {}

    std::uint8_t u8();
    std::uint32_t u32();
    std::uint64_t u64();
    ByteView raw(std::size_t n);
    ByteView prefixed();
    std::string prefixed_string();

    [[nodiscard]] std::size_t remaining() const noexcept { return in_.size() - pos_; }
    [[nodiscard]] std::size_t position() const noexcept { return pos_; }
    void expect_end() const;

private:
    ByteView in_;
    std::size_t pos_ = 0;
};

}  // namespace agencid
