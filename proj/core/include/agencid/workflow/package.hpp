#pragma once

#include "agencid/bytes.hpp"
#include "agencid/hybrid/hybrid.hpp"
#include "agencid/kac/kac.hpp"

#include <string>

namespace agencid::workflow {

inline constexpr std::string_view package_magic = "AGID";
inline constexpr std::uint8_t package_version = 0x01;

/// Package metadata. Its encoding is the associated data of the sealed
/// payload, so any change to it breaks authentication.
struct PackageHeader {
    pairing::BackendId backend = pairing::BackendId::type_a;
    std::string cluster_id;
    std::string package_id;
    kac::IndexSet cluster;

    /// "AGID", version, backend id, length-prefixed cluster and package ids,
    /// index set.
    [[nodiscard]] Bytes encode() const;
    [[nodiscard]] static PackageHeader read(ByteReader& r);

    friend bool operator==(const PackageHeader&, const PackageHeader&) = default;
};

/// Header, length-prefixed key block (a canonical KeyCiphertext, or a
/// wrapped key for baseline packages), then the sealed payload wire form.
struct EncryptedPackage {
    PackageHeader header;
    Bytes key_block;
    hybrid::SealedPayload sealed;

    [[nodiscard]] Bytes to_bytes() const;
    /// Throws ErrorCode::invalid_encoding on any structural defect.
    [[nodiscard]] static EncryptedPackage parse(ByteView bytes);
};

}  // namespace agencid::workflow
