//
// Project graphprint - Copyright 2026 The graphprint Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <span>
#include <utility>
#include <vector>

#include "graphprint/circular.hpp"
#include "graphprint/models.hpp"

namespace graphprint {

// Serial is the reference; Parallel splits work across OpenMP threads and
// may differ from it only by floating-point rounding.
enum class Execution { Serial, Parallel };

// Thread budget: GRAPHPRINT_THREADS when set to a positive integer, else
// the OpenMP default.
int thread_budget();

// Parallel gradients are accumulated per thread over contiguous chunks and
// reduced in chunk order, so a fixed thread count gives reproducible sums.
std::pair<double, Gradients> batch_backward(const ModelParams &model,
                                            std::span<const Example> batch, double l2,
                                            Execution mode);

std::vector<CircularFingerprint> circular_fingerprints(std::span<const Molecule> molecules,
                                                       int radius, int length,
                                                       Execution mode);

std::vector<Vector> neural_fingerprints(std::span<const Molecule> molecules,
                                        const FingerprintParams &params, Execution mode);

std::vector<double> predict_all(const ModelParams &model, std::span<const Example> examples,
                                Execution mode);

}  // namespace graphprint
