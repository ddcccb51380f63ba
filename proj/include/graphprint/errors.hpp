//
// Project graphprint - Copyright 2026 The graphprint Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <stdexcept>
#include <string>

namespace graphprint {

// Non-finite values appeared in a forward or backward pass.
class DivergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed or unusable input data (files, datasets, checkpoints).
class DataError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace graphprint
