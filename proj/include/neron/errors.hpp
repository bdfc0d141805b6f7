// Copyright 2026 The neron Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace neron {

// Precision and tower exhaustion map to CLI exit code 3; everything that is
// the caller's fault (bad input) maps to exit code 2.
struct PrecisionExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PrecisionCapReached : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TowerTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : InputError {
  using InputError::InputError;
};
struct NotSquarefree : InputError {
  using InputError::InputError;
};
struct UnsupportedInput : InputError {
  using InputError::InputError;
};
struct UnsupportedBoundary : InputError {
  using InputError::InputError;
};
struct Char2Unsupported : InputError {
  using InputError::InputError;
};
struct CenterNotSmooth : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace neron
