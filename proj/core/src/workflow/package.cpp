#include "agencid/workflow/package.hpp"

#include <algorithm>

namespace agencid::workflow {

Bytes PackageHeader::encode() const
{
    ByteWriter w;
    w.raw(package_magic);
    w.u8(package_version);
    w.u8(static_cast<std::uint8_t>(backend));
    w.prefixed(cluster_id);
    w.prefixed(package_id);
    cluster.write(w);
    return std::move(w).take();
}

PackageHeader PackageHeader::read(ByteReader& r)
{
    auto magic = r.raw(4);
    if (!std::equal(magic.begin(), magic.end(), package_magic.begin(), package_magic.end())) {
        throw Error(ErrorCode::invalid_encoding, "not an AGID package");
    }
    if (r.u8() != package_version) {
        throw Error(ErrorCode::invalid_encoding, "unsupported package version");
    }
    PackageHeader h;
    h.backend = pairing::backend_from_byte(r.u8());
    h.cluster_id = r.prefixed_string();
    h.package_id = r.prefixed_string();
    h.cluster = kac::IndexSet::read(r);
    return h;
}

Bytes EncryptedPackage::to_bytes() const
{
    ByteWriter w;
    w.raw(header.encode());
    w.prefixed(key_block);
    sealed.write(w);
    return std::move(w).take();
}

EncryptedPackage EncryptedPackage::parse(ByteView bytes)
{
    ByteReader r(bytes);
    EncryptedPackage p;
    p.header = PackageHeader::read(r);
    auto kb = r.prefixed();
    p.key_block.assign(kb.begin(), kb.end());
    p.sealed = hybrid::SealedPayload::read(r);
    r.expect_end();
    return p;
}

}  // namespace agencid::workflow
