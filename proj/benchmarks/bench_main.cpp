#include "dbeam/analysis.hpp"
#include "dbeam/channel.hpp"
#include "dbeam/ranging.hpp"
#include "dbeam/waveform.hpp"

#include <benchmark/benchmark.h>

using namespace dbeam;

namespace {

const SignalBuffer& two_node_template() {
    static const SignalBuffer tpl =
        synthesize(two_node_waveform(), signature_for_node(1, 1));
    return tpl;
}

const SignalBuffer& three_node_template() {
    static const SignalBuffer tpl =
        synthesize(three_node_waveform(), signature_for_node(1, 5));
    return tpl;
}

void BM_synthesize(benchmark::State& state) {
    const WaveformSpec spec = three_node_waveform();
    const PulseSignature sig = signature_for_node(1, 5);
    for (auto _ : state) benchmark::DoNotOptimize(synthesize(spec, sig));
}
BENCHMARK(BM_synthesize);

void BM_fractional_delay(benchmark::State& state) {
    const SignalBuffer& tpl = two_node_template();
    for (auto _ : state)
        benchmark::DoNotOptimize(fractional_delay(tpl, 0.37 / tpl.sample_rate, 64));
}
BENCHMARK(BM_fractional_delay);

void BM_matched_filter(benchmark::State& state) {
    const SignalBuffer& tpl = two_node_template();
    const SignalBuffer rx = fractional_delay(tpl, 0.25 / tpl.sample_rate, 64);
    for (auto _ : state) benchmark::DoNotOptimize(matched_filter(rx, tpl));
}
BENCHMARK(BM_matched_filter);

void BM_estimate_range(benchmark::State& state) {
    const SignalBuffer& tpl = two_node_template();
    const SignalBuffer rx = fractional_delay(tpl, 0.25 / tpl.sample_rate, 64);
    for (auto _ : state) benchmark::DoNotOptimize(estimate_range(rx, tpl));
}
BENCHMARK(BM_estimate_range);

void BM_estimate_range_multi(benchmark::State& state) {
    const SignalBuffer& a = three_node_template();
    static const SignalBuffer b =
        synthesize(three_node_waveform(), signature_for_node(2, 5));
    SignalBuffer rx = fractional_delay(a, 0.27 / a.sample_rate, 64);
    const SignalBuffer rb = fractional_delay(b, 0.22 / b.sample_rate, 64);
    for (std::size_t i = 0; i < rx.samples.size(); ++i) rx.samples[i] += rb.samples[i];
    for (auto _ : state)
        benchmark::DoNotOptimize(estimate_range_multi(rx, a, {&b}));
}
BENCHMARK(BM_estimate_range_multi);

void BM_gain_sweep_point(benchmark::State& state) {
    const auto n_nodes = static_cast<std::uint32_t>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(
            gain_probability_sweep(n_nodes, {0.05}, 0.9, 10000, 3));
}
BENCHMARK(BM_gain_sweep_point)->Arg(3)->Arg(100);

} // namespace

BENCHMARK_MAIN();
