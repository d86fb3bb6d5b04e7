// Copyright 2026 the nomasec authors
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

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace nomasec {

using cplx = std::complex<double>;

/// Speed of light in vacuum [m/s], used by free-space propagation.
inline constexpr double speed_of_light = 3.0e8;

namespace detail {

/// Throws std::invalid_argument when a precondition fails. Message built
/// only on the failing path so checks stay allocation-free in hot loops.
inline void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

inline void require_finite(double x, const char* name) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument(std::string(name) + " must be finite");
  }
}

inline void require_positive(double x, const char* name) {
  if (!(std::isfinite(x) && x > 0.0)) {
    throw std::invalid_argument(std::string(name) + " must be positive");
  }
}

inline void require_nonnegative(double x, const char* name) {
  if (!(std::isfinite(x) && x >= 0.0)) {
    throw std::invalid_argument(std::string(name) + " must be nonnegative");
  }
}

}  // namespace detail

/// dBm -> watts: 10^((p_dbm - 30) / 10).
inline double dbm_to_watts(double p_dbm) {
  detail::require_finite(p_dbm, "p_dbm");
  return std::pow(10.0, (p_dbm - 30.0) / 10.0);
}

/// dB -> linear power ratio.
inline double db_to_linear(double db) {
  detail::require_finite(db, "db");
  return std::pow(10.0, db / 10.0);
}

/// log2(1 + sinr), the link spectral efficiency in bit/s/Hz.
inline double rate_bits(double sinr) {
  detail::require_nonnegative(sinr, "sinr");
  return std::log2(1.0 + sinr);
}

/// 2^rate - 1, the SINR threshold matching a target rate in bit/s/Hz.
inline double sinr_threshold(double rate_bits) {
  detail::require_nonnegative(rate_bits, "rate_bits");
  return std::exp2(rate_bits) - 1.0;
}

}  // namespace nomasec
