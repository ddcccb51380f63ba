//
// Project graphprint - Copyright 2026 The graphprint Authors.
// SPDX-License-Identifier: Apache-2.0
//

// Serial reference kernels against their OpenMP counterparts on the
// bundled solubility data. Thread count follows GRAPHPRINT_THREADS.

#include <benchmark/benchmark.h>

#include "graphprint/dataset.hpp"
#include "graphprint/kernels.hpp"

using namespace graphprint;

namespace {

const Dataset &dataset() {
  static const Dataset d = load_dataset_csv(GRAPHPRINT_DATA_DIR "/delaney.csv").dataset;
  return d;
}

const std::vector<Molecule> &molecules() {
  static const std::vector<Molecule> m = dataset().molecules();
  return m;
}

Execution mode(const benchmark::State &state) {
  return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

void label(benchmark::State &state) {
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel x" + std::to_string(thread_budget()));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(molecules().size()));
}

void BM_CircularFingerprints(benchmark::State &state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(circular_fingerprints(molecules(), 2, 2048, mode(state)));
  label(state);
}

void BM_NeuralFingerprints(benchmark::State &state) {
  const auto params = init_neural_params(1, 0.1, 2, 32, 512, Activation::Tanh);
  for (auto _ : state)
    benchmark::DoNotOptimize(neural_fingerprints(molecules(), params, mode(state)));
  label(state);
}

void BM_BatchBackward(benchmark::State &state) {
  const ModelParams model =
      init_model(1, 0.1, 2, 32, 512, Activation::Relu, PredictorKind::Mlp, 64);
  const auto examples = dataset().examples();
  for (auto _ : state)
    benchmark::DoNotOptimize(batch_backward(model, examples, 1e-5, mode(state)));
  label(state);
}

}  // namespace

BENCHMARK(BM_CircularFingerprints)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_NeuralFingerprints)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BatchBackward)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
