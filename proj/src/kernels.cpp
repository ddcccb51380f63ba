//
// Project graphprint - Copyright 2026 The graphprint Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "graphprint/kernels.hpp"

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <string>

#include <omp.h>

namespace graphprint {

namespace {

// Runs body(i) for i in [0, n) and rethrows the first exception raised by
// any thread once the loop has finished.
template <class Body>
void parallel_for(std::size_t n, Body body) {
  std::exception_ptr failure;
  const auto count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 4) num_threads(thread_budget())
  for (long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(graphprint_failure)
      if (!failure)
        failure = std::current_exception();
    }
  }
  if (failure)
    std::rethrow_exception(failure);
}

}  // namespace

int thread_budget() {
  if (const char *env = std::getenv("GRAPHPRINT_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0)
        return n;
    } catch (const std::exception &) {
    }
  }
  return omp_get_max_threads();
}

std::pair<double, Gradients> batch_backward(const ModelParams &model,
                                            std::span<const Example> batch, double l2,
                                            Execution mode) {
  if (mode == Execution::Serial)
    return backward(model, batch, l2);
  if (batch.empty())
    throw std::invalid_argument("batch is empty");

  const int threads = std::max(1, std::min<int>(thread_budget(), static_cast<int>(batch.size())));
  std::vector<Gradients> partial(static_cast<std::size_t>(threads), Gradients::zeros_like(model));
  std::vector<double> partial_loss(static_cast<std::size_t>(threads), 0.0);
  std::exception_ptr failure;
#pragma omp parallel num_threads(threads)
  {
    const int t = omp_get_thread_num();
    const int team = omp_get_num_threads();
    const std::size_t begin = batch.size() * static_cast<std::size_t>(t) / static_cast<std::size_t>(team);
    const std::size_t end = batch.size() * static_cast<std::size_t>(t + 1) / static_cast<std::size_t>(team);
    try {
      for (std::size_t i = begin; i < end; ++i)
        partial_loss[static_cast<std::size_t>(t)] +=
            accumulate_example(model, batch[i], partial[static_cast<std::size_t>(t)]);
    } catch (...) {
#pragma omp critical(graphprint_failure)
      if (!failure)
        failure = std::current_exception();
    }
  }
  if (failure)
    std::rethrow_exception(failure);

  Gradients grads = std::move(partial[0]);
  double sum = partial_loss[0];
  for (std::size_t t = 1; t < partial.size(); ++t) {
    grads += partial[t];
    sum += partial_loss[t];
  }
  const double n = static_cast<double>(batch.size());
  grads *= 1.0 / n;
  add_penalty_gradient(model, l2, grads);
  return {sum / n + l2 * penalty(model), std::move(grads)};
}

std::vector<CircularFingerprint> circular_fingerprints(std::span<const Molecule> molecules,
                                                       int radius, int length,
                                                       Execution mode) {
  std::vector<CircularFingerprint> out(molecules.size());
  auto body = [&](std::size_t i) { out[i] = circular_fingerprint(molecules[i], radius, length); };
  if (mode == Execution::Serial)
    for (std::size_t i = 0; i < molecules.size(); ++i)
      body(i);
  else
    parallel_for(molecules.size(), body);
  return out;
}

std::vector<Vector> neural_fingerprints(std::span<const Molecule> molecules,
                                        const FingerprintParams &params, Execution mode) {
  std::vector<Vector> out(molecules.size());
  auto body = [&](std::size_t i) {
    out[i] = neural_fingerprint(molecules[i], params).first.values;
  };
  if (mode == Execution::Serial)
    for (std::size_t i = 0; i < molecules.size(); ++i)
      body(i);
  else
    parallel_for(molecules.size(), body);
  return out;
}

std::vector<double> predict_all(const ModelParams &model, std::span<const Example> examples,
                                Execution mode) {
  std::vector<double> out(examples.size());
  auto body = [&](std::size_t i) { out[i] = predict(model, examples[i]).first; };
  if (mode == Execution::Serial)
    for (std::size_t i = 0; i < examples.size(); ++i)
      body(i);
  else
    parallel_for(examples.size(), body);
  return out;
}

}  // namespace graphprint
