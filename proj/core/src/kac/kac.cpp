#include "agencid/kac/kac.hpp"

#include "kac_internal.hpp"

#include <algorithm>
#include <charconv>

namespace agencid::kac {

using pairing::GroupTag;

// ---- IndexSet --------------------------------------------------------------

IndexSet::IndexSet(std::initializer_list<std::uint32_t> indices)
    : IndexSet(from(std::vector<std::uint32_t>(indices)))
{
}

IndexSet IndexSet::from(std::vector<std::uint32_t> indices)
{
    std::sort(indices.begin(), indices.end());
    if (std::adjacent_find(indices.begin(), indices.end()) != indices.end()) {
        throw Error(ErrorCode::invalid_argument, "index set contains a duplicate");
    }
    IndexSet s;
    s.indices_ = std::move(indices);
    return s;
}

IndexSet IndexSet::parse(std::string_view text)
{
    std::vector<std::uint32_t> out;
    while (!text.empty()) {
        auto comma = text.find(',');
        auto token = text.substr(0, comma);
        std::uint32_t v = 0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty()) {
            throw Error(ErrorCode::invalid_argument, "malformed index list '" + std::string(text) + "'");
        }
        out.push_back(v);
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return from(std::move(out));
}

bool IndexSet::contains(std::uint32_t i) const noexcept
{
    return std::binary_search(indices_.begin(), indices_.end(), i);
}

std::string IndexSet::to_string() const
{
    std::string out = "{";
    for (std::size_t k = 0; k < indices_.size(); ++k) {
        if (k) out += ",";
        out += std::to_string(indices_[k]);
    }
    return out + "}";
}

void IndexSet::write(ByteWriter& w) const
{
    w.u32(static_cast<std::uint32_t>(indices_.size()));
    for (auto i : indices_) w.u32(i);
}

IndexSet IndexSet::read(ByteReader& r)
{
    const auto count = r.u32();
    if (count > r.remaining() / 4) {
        throw Error(ErrorCode::invalid_encoding, "index count exceeds input");
    }
    IndexSet s;
    s.indices_.reserve(count);
    for (std::uint32_t k = 0; k < count; ++k) {
        auto v = r.u32();
        if (!s.indices_.empty() && v <= s.indices_.back()) {
            throw Error(ErrorCode::invalid_encoding, "index set not strictly increasing");
        }
        s.indices_.push_back(v);
    }
    return s;
}

// ---- SystemParams ----------------------------------------------------------

SystemParams SystemParams::from_elements(const PairingEngine& engine, std::uint32_t n, SourceElement g,
                                         std::vector<SourceElement> stored)
{
    if (n == 0) throw Error(ErrorCode::invalid_capacity, "capacity must be at least 1");
    if (stored.size() != 2 * static_cast<std::size_t>(n) - 1) {
        throw Error(ErrorCode::invalid_argument, "expected 2n - 1 parameter elements");
    }
    if (g.tag() != GroupTag::first) {
        throw Error(ErrorCode::tag_mismatch, "parameters live in the first source group");
    }
    for (const auto& e : stored) {
        if (e.tag() != GroupTag::first) {
            throw Error(ErrorCode::tag_mismatch, "parameters live in the first source group");
        }
    }
    // e(g_n, g_1): index n sits at position n-1, index 1 at position 0.
    auto base = engine.pair(stored[n - 1], engine.to_second(stored[0]));
    return SystemParams(n, engine.backend_id(), engine.variant_parameter(), std::move(g), std::move(stored),
                        std::move(base));
}

bool SystemParams::has_element(std::uint32_t i) const noexcept
{
    return i >= 1 && i <= 2 * n_ && i != n_ + 1;
}

const SourceElement& SystemParams::element(std::uint32_t i) const
{
    if (!has_element(i)) {
        throw Error(ErrorCode::index_out_of_range,
                    "parameter index " + std::to_string(i) + " not stored for n = " + std::to_string(n_));
    }
    return stored_[i <= n_ ? i - 1 : i - 2];
}

std::vector<std::uint32_t> SystemParams::stored_indices() const
{
    std::vector<std::uint32_t> out;
    out.reserve(stored_.size());
    for (std::uint32_t i = 1; i <= 2 * n_; ++i) {
        if (i != n_ + 1) out.push_back(i);
    }
    return out;
}

void SystemParams::require_engine(const PairingEngine& engine) const
{
    if (engine.backend_id() != backend_ || engine.variant_parameter() != variant_) {
        throw Error(ErrorCode::backend_mismatch, "parameters were generated by a different engine");
    }
}

// ---- Algorithms ------------------------------------------------------------

namespace {

void check_cluster(const SystemParams& params, const IndexSet& cluster)
{
    if (cluster.empty()) throw Error(ErrorCode::empty_cluster, "cluster has no members");
    for (auto j : cluster) {
        if (j < 1 || j > params.capacity()) {
            throw Error(ErrorCode::index_out_of_range,
                        "board index " + std::to_string(j) + " outside [1, " + std::to_string(params.capacity()) + "]");
        }
    }
}

}  // namespace

namespace detail {

SystemParams params_from_trapdoor(const PairingEngine& engine, std::uint32_t n, const Scalar& alpha)
{
    if (n == 0) throw Error(ErrorCode::invalid_capacity, "capacity must be at least 1");
    const auto& zp = engine.scalars();
    const auto g = engine.generator(GroupTag::first);
    std::vector<SourceElement> stored;
    stored.reserve(2 * static_cast<std::size_t>(n) - 1);
    Scalar power = zp.from_u64(1);
    for (std::uint32_t i = 1; i <= 2 * n; ++i) {
        power = zp.mul(power, alpha);
        if (i == n + 1) continue;
        stored.push_back(engine.scalar_mul(power, g));
    }
    return SystemParams::from_elements(engine, n, g, std::move(stored));
}

KeyCiphertext encrypt_with_randomness(const PairingEngine& engine, const PublicKey& pk, const IndexSet& cluster,
                                      const AggregateKey& agg, const TargetElement& m, const Scalar& t)
{
    pk.params.require_engine(engine);
    if (!(agg.cluster == cluster)) {
        throw Error(ErrorCode::cluster_mismatch,
                    "aggregate key is for " + agg.cluster.to_string() + ", not " + cluster.to_string());
    }
    check_cluster(pk.params, cluster);
    if (agg.k.tag() != GroupTag::second) {
        throw Error(ErrorCode::tag_mismatch, "aggregate key must be a second-group element");
    }
    auto c1 = engine.scalar_mul(t, engine.to_second(pk.params.generator()));
    auto c2 = engine.scalar_mul(t, engine.add(engine.to_second(pk.v), agg.k));
    auto c3 = engine.gt_combine(m, engine.gt_scale(pk.params.precomputed_base(), t));
    return {std::move(c1), std::move(c2), std::move(c3), cluster};
}

}  // namespace detail

SystemParams setup(const PairingEngine& engine, std::uint32_t n, Rng& rng)
{
    if (n == 0) throw Error(ErrorCode::invalid_capacity, "capacity must be at least 1");
    return detail::params_from_trapdoor(engine, n, engine.scalars().random_nonzero(rng));
}

BoardPrivateKey derive_board_key(const PairingEngine& engine, const SystemParams& params, const MasterSecretKey& msk,
                                 std::uint32_t index)
{
    params.require_engine(engine);
    if (index < 1 || index > params.capacity()) {
        throw Error(ErrorCode::index_out_of_range, "board index " + std::to_string(index) + " outside capacity");
    }
    return {index, engine.scalar_mul(msk.gamma, params.element(index))};
}

KeyMaterial keygen(const PairingEngine& engine, const SystemParams& params, const MasterSecretKey& msk)
{
    params.require_engine(engine);
    if (msk.gamma.is_zero()) throw Error(ErrorCode::invalid_argument, "master secret must be nonzero");
    KeyMaterial out{PublicKey{params, engine.scalar_mul(msk.gamma, params.generator())}, msk, {}};
    out.board_keys.reserve(params.capacity());
    for (std::uint32_t i = 1; i <= params.capacity(); ++i) {
        out.board_keys.push_back(derive_board_key(engine, params, msk, i));
    }
    return out;
}

KeyMaterial keygen(const PairingEngine& engine, const SystemParams& params, Rng& rng)
{
    return keygen(engine, params, MasterSecretKey{engine.scalars().random_nonzero(rng)});
}

AggregateKey extract(const PairingEngine& engine, const SystemParams& params, const IndexSet& cluster)
{
    params.require_engine(engine);
    check_cluster(params, cluster);
    const auto n = params.capacity();
    std::optional<SourceElement> sum;
    for (auto j : cluster) {
        auto term = engine.to_second(params.element(n + 1 - j));
        sum = sum ? engine.add(*sum, term) : std::move(term);
    }
    return {cluster, std::move(*sum)};
}

KeyCiphertext encrypt(const PairingEngine& engine, const PublicKey& pk, const IndexSet& cluster,
                      const AggregateKey& agg, const TargetElement& m, Rng& rng)
{
    return detail::encrypt_with_randomness(engine, pk, cluster, agg, m, engine.scalars().random_nonzero(rng));
}

std::optional<TargetElement> decrypt(const PairingEngine& engine, const SystemParams& params, const IndexSet& cluster,
                                     std::uint32_t index, const BoardPrivateKey& key, const KeyCiphertext& ct)
{
    params.require_engine(engine);
    if (key.index != index) {
        throw Error(ErrorCode::key_mismatch,
                    "key belongs to board " + std::to_string(key.index) + ", not " + std::to_string(index));
    }
    check_cluster(params, cluster);
    if (!cluster.contains(index)) return std::nullopt;
    if (ct.c1.tag() != GroupTag::second || ct.c2.tag() != GroupTag::second) {
        throw Error(ErrorCode::tag_mismatch, "ciphertext components c1, c2 must be second-group elements");
    }

    // d_i + b_{i,S}: |S| - 1 additions. n+1-j+i != n+1 because j != i.
    const auto n = params.capacity();
    SourceElement acc = key.d;
    for (auto j : cluster) {
        if (j == index) continue;
        acc = engine.add(acc, params.element(n + 1 - j + index));
    }
    auto num = engine.pair(acc, ct.c1);
    auto den = engine.pair(params.element(index), ct.c2);
    return engine.gt_combine(ct.c3, engine.gt_uncombine(num, den));
}

// ---- Encodings ------------------------------------------------------------

namespace {

constexpr std::string_view magic_public = "AGPK";
constexpr std::string_view magic_master = "AGMK";
constexpr std::string_view magic_board = "AGDK";
constexpr std::string_view magic_aggregate = "AGAK";
constexpr std::string_view magic_ciphertext = "AGCT";

ByteWriter begin(std::string_view magic, const PairingEngine& engine, std::uint32_t n)
{
    ByteWriter w;
    w.raw(magic);
    w.u8(encoding_version);
    w.u8(static_cast<std::uint8_t>(engine.backend_id()));
    w.u32(n);
    return w;
}

/// Validates the common header and returns the capacity field.
std::uint32_t read_header(ByteReader& r, std::string_view magic, const PairingEngine& engine)
{
    auto m = r.raw(4);
    if (!std::equal(m.begin(), m.end(), magic.begin(), magic.end())) {
        throw Error(ErrorCode::invalid_encoding, "bad magic, expected " + std::string(magic));
    }
    if (r.u8() != encoding_version) throw Error(ErrorCode::invalid_encoding, "unsupported encoding version");
    if (pairing::backend_from_byte(r.u8()) != engine.backend_id()) {
        throw Error(ErrorCode::backend_mismatch, "encoding was produced by another backend");
    }
    return r.u32();
}

void expect_capacity(std::uint32_t got, std::uint32_t want)
{
    if (got != want) {
        throw Error(ErrorCode::invalid_encoding,
                    "capacity field " + std::to_string(got) + " does not match " + std::to_string(want));
    }
}

SourceElement read_source(const PairingEngine& engine, ByteReader& r, GroupTag tag)
{
    return engine.deserialize_source(r.prefixed(), tag);
}

}  // namespace

Bytes serialize(const PairingEngine& engine, const PublicKey& pk)
{
    pk.params.require_engine(engine);
    auto w = begin(magic_public, engine, pk.params.capacity());
    w.prefixed(engine.serialize(pk.params.generator()));
    for (const auto& e : pk.params.stored_elements()) w.prefixed(engine.serialize(e));
    w.prefixed(engine.serialize(pk.v));
    w.prefixed(engine.serialize(pk.params.precomputed_base()));
    return std::move(w).take();
}

PublicKey deserialize_public_key(const PairingEngine& engine, ByteView bytes)
{
    ByteReader r(bytes);
    const auto n = read_header(r, magic_public, engine);
    if (n == 0) throw Error(ErrorCode::invalid_encoding, "public key with zero capacity");
    auto g = read_source(engine, r, GroupTag::first);
    std::vector<SourceElement> stored;
    for (std::uint64_t k = 0; k < 2 * static_cast<std::uint64_t>(n) - 1; ++k) {
        if (r.remaining() == 0) throw Error(ErrorCode::invalid_encoding, "truncated parameter list");
        stored.push_back(read_source(engine, r, GroupTag::first));
    }
    auto v = read_source(engine, r, GroupTag::first);
    auto base = engine.deserialize_target(r.prefixed());
    r.expect_end();
    if (!(g == engine.generator(GroupTag::first))) {
        throw Error(ErrorCode::integrity_failure, "public key generator differs from the engine generator");
    }
    auto params = SystemParams::from_elements(engine, n, std::move(g), std::move(stored));
    if (!(params.precomputed_base() == base)) {
        throw Error(ErrorCode::integrity_failure, "precomputed e(g_n, g_1) does not match the parameters");
    }
    return {std::move(params), std::move(v)};
}

Bytes serialize(const PairingEngine& engine, const MasterSecretKey& msk, std::uint32_t capacity)
{
    auto w = begin(magic_master, engine, capacity);
    w.prefixed(engine.scalars().serialize(msk.gamma));
    return std::move(w).take();
}

MasterSecretKey deserialize_master_key(const PairingEngine& engine, ByteView bytes, std::uint32_t capacity)
{
    ByteReader r(bytes);
    expect_capacity(read_header(r, magic_master, engine), capacity);
    auto gamma = engine.scalars().deserialize(r.prefixed());
    r.expect_end();
    if (gamma.is_zero()) throw Error(ErrorCode::invalid_encoding, "master secret is zero");
    return {std::move(gamma)};
}

Bytes serialize(const PairingEngine& engine, const BoardPrivateKey& key, std::uint32_t capacity)
{
    auto w = begin(magic_board, engine, capacity);
    w.u32(key.index);
    w.prefixed(engine.serialize(key.d));
    return std::move(w).take();
}

BoardPrivateKey deserialize_board_key(const PairingEngine& engine, ByteView bytes, std::uint32_t capacity)
{
    ByteReader r(bytes);
    expect_capacity(read_header(r, magic_board, engine), capacity);
    const auto index = r.u32();
    if (index < 1 || index > capacity) throw Error(ErrorCode::invalid_encoding, "board index outside capacity");
    auto d = read_source(engine, r, GroupTag::first);
    r.expect_end();
    return {index, std::move(d)};
}

Bytes serialize(const PairingEngine& engine, const AggregateKey& agg, std::uint32_t capacity)
{
    auto w = begin(magic_aggregate, engine, capacity);
    w.prefixed(engine.serialize(agg.k));
    return std::move(w).take();
}

AggregateKey deserialize_aggregate_key(const PairingEngine& engine, ByteView bytes, std::uint32_t capacity,
                                       IndexSet cluster)
{
    ByteReader r(bytes);
    expect_capacity(read_header(r, magic_aggregate, engine), capacity);
    auto k = read_source(engine, r, GroupTag::second);
    r.expect_end();
    return {std::move(cluster), std::move(k)};
}

Bytes serialize(const PairingEngine& engine, const KeyCiphertext& ct, std::uint32_t capacity)
{
    auto w = begin(magic_ciphertext, engine, capacity);
    w.prefixed(engine.serialize(ct.c1));
    w.prefixed(engine.serialize(ct.c2));
    w.prefixed(engine.serialize(ct.c3));
    return std::move(w).take();
}

KeyCiphertext deserialize_ciphertext(const PairingEngine& engine, ByteView bytes, std::uint32_t capacity,
                                     IndexSet cluster)
{
    ByteReader r(bytes);
    expect_capacity(read_header(r, magic_ciphertext, engine), capacity);
    auto c1 = read_source(engine, r, GroupTag::second);
    auto c2 = read_source(engine, r, GroupTag::second);
    auto c3 = engine.deserialize_target(r.prefixed());
    r.expect_end();
    return {std::move(c1), std::move(c2), std::move(c3), std::move(cluster)};
}

}  // namespace agencid::kac
