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

// Enumeration guards. Every exhaustive routine states its cost as q^e and
// compares it against 2^bits. TRL_GUARD_OVERRIDE=<bits> raises (never lowers)
// every limit to 2^bits.

#include <cstdint>
#include <cstdlib>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "trl/error.hpp"

namespace trl::guard {

using boost::multiprecision::cpp_int;

inline constexpr unsigned kEnumerationBits = 24;
inline constexpr unsigned kStorageBits = 20;
inline constexpr unsigned kLinearSolveBits = 14;
inline constexpr unsigned kSystemPrefixBits = 16;

/// The override in bits, or 0 when unset or unparsable.
inline unsigned override_bits() {
  const char* env = std::getenv("TRL_GUARD_OVERRIDE");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const unsigned long v = std::strtoul(env, &end, 10);
  if (end == env || *end != '\0' || v > 62) return 0;
  return static_cast<unsigned>(v);
}

inline unsigned effective_bits(unsigned default_bits) {
  const unsigned o = override_bits();
  return o > default_bits ? o : default_bits;
}

inline cpp_int ipow(const cpp_int& base, std::uint64_t exp) {
  cpp_int r = 1;
  cpp_int b = base;
  while (exp > 0) {
    if (exp & 1U) r *= b;
    exp >>= 1U;
    if (exp > 0) b *= b;
  }
  return r;
}

inline bool within(const cpp_int& cost, unsigned default_bits) {
  return cost <= (cpp_int(1) << effective_bits(default_bits));
}

/// Throws GuardExceeded when cost > 2^limit.
inline void check(const cpp_int& cost, unsigned default_bits, const std::string& what) {
  if (!within(cost, default_bits)) {
    throw GuardExceeded(what + ": cost " + cost.str() + " exceeds 2^" +
                        std::to_string(effective_bits(default_bits)));
  }
}

inline void check_pow(std::uint64_t q, std::uint64_t exponent, unsigned default_bits,
                      const std::string& what) {
  // Cheap early exit so huge exponents never materialize.
  const unsigned bits = effective_bits(default_bits);
  if (q >= 2 && exponent > bits) {
    throw GuardExceeded(what + ": cost " + std::to_string(q) + "^" + std::to_string(exponent) +
                        " exceeds 2^" + std::to_string(bits));
  }
  check(ipow(q, exponent), default_bits, what);
}

}  // namespace trl::guard
