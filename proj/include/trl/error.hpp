// Copyright 2026 The trl Authors
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

namespace trl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad codes, mismatched dimensions, unparsable files.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// An enumeration would exceed its desk-scale guard.
class GuardExceeded : public Error {
 public:
  using Error::Error;
};

/// The operation needs d < char(F) and the field does not provide it.
class CharacteristicError : public Error {
 public:
  using Error::Error;
};

/// A computed certificate or identity failed its re-verification.
class PropertyViolation : public Error {
 public:
  using Error::Error;
};

namespace detail {

[[noreturn]] inline void fail_input(const std::string& what) { throw InvalidInput(what); }

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidInput(what);
}

}  // namespace detail
}  // namespace trl
