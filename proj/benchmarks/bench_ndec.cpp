#include <benchmark/benchmark.h>

#include <memory>

#include "ndec/architectures.hpp"
#include "ndec/channel.hpp"
#include "ndec/decoders.hpp"
#include "ndec/trainer.hpp"

using namespace ndec;

namespace {

const auto& bch6345() {
    static const auto code = std::make_shared<const LinearCode>(bch_construct(6, 3));
    return code;
}

const Mlp& bch6345_net() {
    static const Mlp m = [] {
        Rng rng(1);
        return build_architecture(*bch6345(), Variant::bch6345, rng);
    }();
    return m;
}

std::vector<std::vector<double>> received(std::size_t count, double ebn0) {
    const auto& code = *bch6345();
    Rng rng(2);
    const double sigma = sigma_from_ebn0(ebn0, code.rate(), NoiseMode::rate_normalized);
    std::vector<std::vector<double>> ys(count, std::vector<double>(code.n()));
    for (auto& y : ys) transmit_into(BitVector(code.n()), sigma, rng, y);
    return ys;
}

}  // namespace

static void BM_Syndrome(benchmark::State& state) {
    const auto& code = *bch6345();
    Rng rng(3);
    BitVector v(code.n());
    for (std::size_t i = 0; i < code.n(); ++i) v.set(i, rng.bit());
    for (auto _ : state) benchmark::DoNotOptimize(code.syndrome(v));
}
BENCHMARK(BM_Syndrome);

static void BM_InferenceBch6345(benchmark::State& state) {
    const InferenceNet net(bch6345_net());
    InferenceNet::Scratch scratch;
    std::vector<float> in(net.input_dim(), 0.5f), out(net.output_dim());
    for (auto _ : state) {
        net.run(in, out, scratch);
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_InferenceBch6345);

static void BM_BddDecode(benchmark::State& state) {
    const BddDecoder dec(bch6345());
    const auto ys = received(1024, 4.0);
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(dec.decode(ys[i++ & 1023]));
}
BENCHMARK(BM_BddDecode);

static void BM_IedDecode(benchmark::State& state) {
    auto est = std::make_shared<const NetworkEstimator>(bch6345_net());
    const IedDecoder dec(bch6345(), est, static_cast<std::size_t>(state.range(0)));
    const auto ys = received(1024, 4.0);
    std::size_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(dec.decode(ys[i++ & 1023]));
}
BENCHMARK(BM_IedDecode)->Arg(1)->Arg(5);

static void BM_TrainStepBch6345(benchmark::State& state) {
    Mlp model = bch6345_net();
    AdamState adam;
    Rng rng(4);
    const auto batch = make_training_batch(*bch6345(), 0.5, 2048, rng);
    for (auto _ : state) benchmark::DoNotOptimize(train_step(model, adam, batch.inputs, batch.targets, 1e-3));
    state.SetItemsProcessed(state.iterations() * 2048);
}
BENCHMARK(BM_TrainStepBch6345)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
