// Copyright 2026 The laser-eval Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace laser {

// Base of every error thrown by the library. The CLI maps the subclasses
// onto exit codes: ConfigError -> 1, DataError -> 2, TransportError -> 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class TransportError : public Error {
 public:
  using Error::Error;
};

// Sentence has no reference tokens, so no score denominator exists.
class DegenerateReference : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace laser
