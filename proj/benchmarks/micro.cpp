#include "agencid/hybrid/hybrid.hpp"
#include "agencid/kac/kac.hpp"
#include "agencid/pairing/type_a_engine.hpp"

#include <benchmark/benchmark.h>

#include <numeric>

using namespace agencid;

namespace {

const pairing::TypeAEngine& curve()
{
    static const pairing::TypeAEngine e;
    return e;
}

kac::IndexSet first_k(std::uint32_t k)
{
    std::vector<std::uint32_t> idx(k);
    std::iota(idx.begin(), idx.end(), 1u);
    return kac::IndexSet::from(idx);
}

void BM_Pairing(benchmark::State& state)
{
    const auto& e = curve();
    auto rng = Rng::seeded(1);
    const auto a = e.scalar_mul(e.random_scalar(rng), e.generator(pairing::GroupTag::first));
    const auto b = e.scalar_mul(e.random_scalar(rng), e.generator(pairing::GroupTag::second));
    for (auto _ : state) benchmark::DoNotOptimize(e.pair(a, b));
}
BENCHMARK(BM_Pairing)->Unit(benchmark::kMicrosecond);

void BM_ScalarMul(benchmark::State& state)
{
    const auto& e = curve();
    auto rng = Rng::seeded(2);
    const auto g = e.generator(pairing::GroupTag::first);
    const auto k = e.random_scalar(rng);
    for (auto _ : state) benchmark::DoNotOptimize(e.scalar_mul(k, g));
}
BENCHMARK(BM_ScalarMul)->Unit(benchmark::kMicrosecond);

// Encrypt cost should not move with |S|; decrypt grows only by |S| - 1 additions.
void BM_KacEncrypt(benchmark::State& state)
{
    const auto& e = curve();
    auto rng = Rng::seeded(3);
    const auto params = kac::setup(e, 20, rng);
    const auto km = kac::keygen(e, params, rng);
    const auto s = first_k(static_cast<std::uint32_t>(state.range(0)));
    const auto agg = kac::extract(e, params, s);
    const auto m = e.random_gt(rng);
    for (auto _ : state) benchmark::DoNotOptimize(kac::encrypt(e, km.pk, s, agg, m, rng));
}
BENCHMARK(BM_KacEncrypt)->Arg(1)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMicrosecond);

void BM_KacDecrypt(benchmark::State& state)
{
    const auto& e = curve();
    auto rng = Rng::seeded(4);
    const auto params = kac::setup(e, 20, rng);
    const auto km = kac::keygen(e, params, rng);
    const auto s = first_k(static_cast<std::uint32_t>(state.range(0)));
    const auto agg = kac::extract(e, params, s);
    const auto ct = kac::encrypt(e, km.pk, s, agg, e.random_gt(rng), rng);
    for (auto _ : state) benchmark::DoNotOptimize(kac::decrypt(e, params, s, 1, km.board_keys[0], ct));
}
BENCHMARK(BM_KacDecrypt)->Arg(1)->Arg(5)->Arg(10)->Arg(20)->Unit(benchmark::kMicrosecond);

void BM_Seal(benchmark::State& state)
{
    auto rng = Rng::seeded(5);
    const hybrid::SymmetricKey key(std::array<std::uint8_t, hybrid::key_size>{});
    const auto payload = rng.bytes(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(hybrid::seal(key, payload, {}, rng));
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_Seal)->Arg(1 << 10)->Arg(1 << 16)->Arg(1 << 20)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
