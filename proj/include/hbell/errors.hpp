// Copyright 2026 The hbell Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace hbell {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller broke a precondition (dimension mismatch, bad index, bad params).
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Malformed config, map or data file.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Kraus operators do not sum to the identity.
class InvalidChannelError : public Error {
 public:
  using Error::Error;
};

/// Nonlinear map built from a singular operator.
class InvalidMapError : public Error {
 public:
  using Error::Error;
};

/// The state is annihilated by the map, so renormalization is undefined.
class DegenerateStateError : public Error {
 public:
  using Error::Error;
};

/// A computed probability fell outside [0, 1] beyond roundoff.
class NumericalIntegrityError : public Error {
 public:
  using Error::Error;
};

/// A map was found both linear and signaling.
class FrameworkViolationError : public Error {
 public:
  using Error::Error;
};

}  // namespace hbell
