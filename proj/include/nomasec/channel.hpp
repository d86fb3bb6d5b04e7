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
#include <numbers>
#include <variant>
#include <vector>

#include "nomasec/common.hpp"
#include "nomasec/rng.hpp"

namespace nomasec {

/// Distance-law attenuation referenced to d0: gain = (d0 / d)^exponent.
/// The returned gain is a POWER ratio.
struct PowerLawPathLoss {
  double reference_m;
  double exponent;
};

/// Free-space attenuation c / (4 pi f d). The returned gain is an AMPLITUDE
/// ratio (its square is the power ratio).
struct FreeSpacePathLoss {
  double carrier_hz;
};

using PathLossModel = std::variant<PowerLawPathLoss, FreeSpacePathLoss>;

/// Evaluates a path-loss model at a propagation distance [m]. See the model
/// structs for whether the gain is a power or an amplitude ratio.
inline double path_loss(const PathLossModel& model, double distance_m) {
  detail::require_positive(distance_m, "distance_m");
  if (const auto* pl = std::get_if<PowerLawPathLoss>(&model)) {
    detail::require_positive(pl->reference_m, "reference_m");
    detail::require_positive(pl->exponent, "exponent");
    return std::pow(pl->reference_m / distance_m, pl->exponent);
  }
  const auto& fs = std::get<FreeSpacePathLoss>(model);
  detail::require_positive(fs.carrier_hz, "carrier_hz");
  return speed_of_light / (4.0 * std::numbers::pi * fs.carrier_hz * distance_m);
}

/// One transmitter-receiver link under distance-law fading statistics.
struct LinkGeometry {
  double distance_m;
  double reference_m;
  double exponent;

  /// Mean channel power E[|h|^2] for a Rayleigh link at this geometry.
  double mean_power() const {
    return path_loss(PowerLawPathLoss{reference_m, exponent}, distance_m);
  }
};

/// Draws h ~ CN(0, mean_power), i.e. Rayleigh fading with E[|h|^2] equal to
/// mean_power. mean_power = 0 yields exactly h = 0.
template <class Rng>
cplx rayleigh_sample(Rng& rng, double mean_power) {
  return complex_normal(rng, mean_power);
}

/// Linear antenna array along the x axis. Positions must be strictly
/// increasing; a single element is allowed.
struct ArrayGeometry {
  std::vector<double> element_x_m;

  explicit ArrayGeometry(std::vector<double> positions)
      : element_x_m(std::move(positions)) {
    detail::require(!element_x_m.empty(), "array needs at least one element");
    for (std::size_t i = 0; i + 1 < element_x_m.size(); ++i) {
      detail::require(element_x_m[i] < element_x_m[i + 1],
                      "element positions must be strictly increasing");
    }
  }

  /// Uniform linear array with n elements centred on the origin.
  static ArrayGeometry uniform_linear(std::size_t n, double spacing_m) {
    detail::require(n >= 1, "n must be >= 1");
    detail::require_positive(spacing_m, "spacing_m");
    std::vector<double> xs(n);
    const double mid = 0.5 * static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = (static_cast<double>(i) - mid) * spacing_m;
    }
    return ArrayGeometry(std::move(xs));
  }

  std::size_t size() const { return element_x_m.size(); }

  double aperture_m() const { return element_x_m.back() - element_x_m.front(); }
};

/// Plane-wave direction for the far-field response. The angle is measured
/// from broadside (the +y axis); 0 means boresight.
struct FarFieldTarget {
  double angle_rad;
};

/// A point source at finite range for the spherical-wavefront response.
struct NearFieldTarget {
  double range_m;
  double angle_rad;
};

/// Far-field steering response: unit-modulus phases exp(j k x sin(theta))
/// per element. Broadside (theta = 0) gives the all-ones vector.
inline std::vector<cplx> array_response(const ArrayGeometry& array,
                                        const FarFieldTarget& target,
                                        double wavelength_m) {
  detail::require_positive(wavelength_m, "wavelength_m");
  detail::require_finite(target.angle_rad, "angle_rad");
  const double k = 2.0 * std::numbers::pi / wavelength_m;
  std::vector<cplx> response(array.size());
  for (std::size_t i = 0; i < array.size(); ++i) {
    response[i] = std::polar(1.0, k * array.element_x_m[i] *
                                      std::sin(target.angle_rad));
  }
  return response;
}

/// Spherical-wavefront response: per-element phase from the exact
/// element-to-point distance and per-element amplitude from the supplied
/// path-loss model evaluated at that distance. This is the physical channel
/// vector to the point; no far-field approximation is made.
inline std::vector<cplx> array_response(const ArrayGeometry& array,
                                        const NearFieldTarget& target,
                                        double wavelength_m,
                                        const PathLossModel& amplitude_model) {
  detail::require_positive(wavelength_m, "wavelength_m");
  detail::require_positive(target.range_m, "range_m");
  detail::require_finite(target.angle_rad, "angle_rad");
  const double px = target.range_m * std::sin(target.angle_rad);
  const double py = target.range_m * std::cos(target.angle_rad);
  const double k = 2.0 * std::numbers::pi / wavelength_m;
  std::vector<cplx> response(array.size());
  for (std::size_t i = 0; i < array.size(); ++i) {
    const double dx = px - array.element_x_m[i];
    const double d = std::hypot(dx, py);
    detail::require(d > 0.0, "target point coincides with an array element");
    response[i] = std::polar(path_loss(amplitude_model, d), -k * d);
  }
  return response;
}

}  // namespace nomasec
