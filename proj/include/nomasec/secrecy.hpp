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

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "nomasec/channel.hpp"
#include "nomasec/common.hpp"
#include "nomasec/parallel.hpp"
#include "nomasec/rng.hpp"

namespace nomasec {

/// Capacities of the main and wiretap links and their clamped difference
/// [C_main - C_wiretap]^+ in bit/s/Hz.
struct SecrecyReport {
  double main_capacity_bits;
  double wiretap_capacity_bits;
  double secrecy_capacity_bits;
};

/// Wiretap secrecy capacity with fading gains:
///   C_s = [log2(1 + P g_m / n_m) - log2(1 + P g_w / n_w)]^+
/// Gains are power gains |h|^2; unit gains give the AWGN special case.
inline SecrecyReport secrecy_capacity(double power, double main_gain,
                                      double wiretap_gain, double main_noise,
                                      double wiretap_noise) {
  detail::require_nonnegative(power, "power");
  detail::require_nonnegative(main_gain, "main_gain");
  detail::require_nonnegative(wiretap_gain, "wiretap_gain");
  detail::require_positive(main_noise, "main_noise");
  detail::require_positive(wiretap_noise, "wiretap_noise");
  const double cm = rate_bits(power * main_gain / main_noise);
  const double cw = rate_bits(power * wiretap_gain / wiretap_noise);
  return SecrecyReport{cm, cw, std::max(0.0, cm - cw)};
}

/// Rayleigh statistics of a main/wiretap link pair.
struct FadingPair {
  double main_mean_power;
  double wiretap_mean_power;
  double main_noise;
  double wiretap_noise;

  void validate() const {
    detail::require_nonnegative(main_mean_power, "main_mean_power");
    detail::require_nonnegative(wiretap_mean_power, "wiretap_mean_power");
    detail::require_positive(main_noise, "main_noise");
    detail::require_positive(wiretap_noise, "wiretap_noise");
  }
};

struct ErgodicSecrecy {
  double mean_bits;
  double std_error;
  std::uint64_t trials;
  std::uint64_t seed;
};

/// Monte Carlo mean of the clamped secrecy capacity over independent
/// Rayleigh draws of both links. Bit-identical for any worker count.
inline ErgodicSecrecy ergodic_secrecy(const FadingPair& fading, double power,
                                      std::uint64_t trials, std::uint64_t seed,
                                      unsigned workers = 0) {
  fading.validate();
  detail::require_nonnegative(power, "power");
  detail::require(trials > 0, "trials must be >= 1");

  struct Partial {
    double sum = 0.0;
    double sum_sq = 0.0;
  };
  auto chunk_fn = [&](std::uint64_t first, std::uint64_t count) {
    Partial part;
    for (std::uint64_t t = first; t < first + count; ++t) {
      TrialRng rng = derive_trial_rng(seed, t);
      const double gm = std::norm(rayleigh_sample(rng, fading.main_mean_power));
      const double gw =
          std::norm(rayleigh_sample(rng, fading.wiretap_mean_power));
      const double cs = secrecy_capacity(power, gm, gw, fading.main_noise,
                                         fading.wiretap_noise)
                            .secrecy_capacity_bits;
      part.sum += cs;
      part.sum_sq += cs * cs;
    }
    return part;
  };
  auto fold = [](Partial& acc, const Partial& p) {
    acc.sum += p.sum;
    acc.sum_sq += p.sum_sq;
  };

  const Partial total =
      run_chunked<Partial>(trials, workers, Partial{}, chunk_fn, fold);
  const double n = static_cast<double>(trials);
  const double mean = total.sum / n;
  const double var = std::max(0.0, total.sum_sq / n - mean * mean);
  const double se = trials > 1 ? std::sqrt(var / (n - 1.0)) : 0.0;
  return ErgodicSecrecy{mean, se, trials, seed};
}

// ---------------------------------------------------------------------------
// Beamforming
// ---------------------------------------------------------------------------

/// Transmit beamformer; `degenerate` marks an intended channel parallel to
/// the eavesdropper's (no zero-forcing direction exists), in which case the
/// weights are all zero.
struct Beamformer {
  std::vector<cplx> weights;
  bool degenerate;
};

/// Zero-forcing precoder: the normalized projection of the intended user's
/// channel h onto the orthogonal complement of the eavesdropper's channel g,
/// so that g^H w = 0 while the projection keeps the largest share of h.
inline Beamformer zf_precoder(const std::vector<cplx>& h,
                              const std::vector<cplx>& g) {
  detail::require(!h.empty() && h.size() == g.size(),
                  "h and g must share a nonzero dimension");
  double h_norm_sq = 0.0, g_norm_sq = 0.0;
  cplx g_dot_h{0.0, 0.0};
  for (std::size_t i = 0; i < h.size(); ++i) {
    h_norm_sq += std::norm(h[i]);
    g_norm_sq += std::norm(g[i]);
    g_dot_h += std::conj(g[i]) * h[i];
  }
  detail::require(h_norm_sq > 0.0, "h must be nonzero");

  std::vector<cplx> w(h.size());
  const cplx coeff = g_norm_sq > 0.0 ? g_dot_h / g_norm_sq : cplx{0.0, 0.0};
  double w_norm_sq = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    w[i] = h[i] - coeff * g[i];
    w_norm_sq += std::norm(w[i]);
  }
  const double tol = 1e-12 * std::sqrt(h_norm_sq);
  if (std::sqrt(w_norm_sq) <= tol) {
    return Beamformer{std::vector<cplx>(h.size(), cplx{0.0, 0.0}), true};
  }
  const double inv_norm = 1.0 / std::sqrt(w_norm_sq);
  for (auto& wi : w) wi *= inv_norm;
  return Beamformer{std::move(w), false};
}

/// Orthonormal basis of the null space of the stacked user channels
/// (rows of `rows`, each of length n). Artificial-noise energy spread over
/// these directions reaches no user. Computed from the full SVD; singular
/// values below 1e-10 times the largest are treated as zero, so
/// rank-deficient stacks return correspondingly more columns. The basis is
/// returned column-by-column, each column orthonormal and of length n.
inline std::vector<std::vector<cplx>> an_nullspace(
    const std::vector<std::vector<cplx>>& rows) {
  detail::require(!rows.empty(), "rows must be nonempty");
  const std::size_t n = rows.front().size();
  detail::require(n > rows.size(), "need more antennas than users");
  for (const auto& r : rows) {
    detail::require(r.size() == n, "rows must have equal length");
  }

  Eigen::MatrixXcd h(rows.size(), n);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < n; ++j) h(i, j) = rows[i][j];
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(h, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double tol = sv.size() > 0 ? 1e-10 * sv(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol) ++rank;
  }
  const Eigen::MatrixXcd v = svd.matrixV();
  std::vector<std::vector<cplx>> basis;
  basis.reserve(static_cast<std::size_t>(v.cols() - rank));
  for (Eigen::Index c = rank; c < v.cols(); ++c) {
    std::vector<cplx> column(n);
    for (std::size_t j = 0; j < n; ++j) {
      column[j] = v(static_cast<Eigen::Index>(j), c);
    }
    basis.push_back(std::move(column));
  }
  return basis;
}

// ---------------------------------------------------------------------------
// Near-field beamfocusing
// ---------------------------------------------------------------------------

/// Polar location in the array plane: range from the array centre and angle
/// from broadside.
struct FieldPoint {
  double range_m;
  double angle_rad;
};

enum class BeamfocusMode {
  NearFieldMatched,   // conjugate match to the exact spherical response
  FarFieldSteering,   // phase-only plane-wave steering at the user's angle
};

/// Secrecy capacity of one transmit beam toward `user` overheard at `eve`.
/// Channels are exact spherical-wavefront responses with free-space
/// amplitudes at `carrier_hz`; no far-field approximation on the channels,
/// only (optionally) in the beamformer.
inline SecrecyReport beamfocus_secrecy(const ArrayGeometry& array,
                                       const FieldPoint& user,
                                       const FieldPoint& eve,
                                       double carrier_hz, double power_w,
                                       double noise_w, BeamfocusMode mode) {
  detail::require_positive(carrier_hz, "carrier_hz");
  detail::require_nonnegative(power_w, "power_w");
  detail::require_positive(noise_w, "noise_w");
  const double wavelength = speed_of_light / carrier_hz;
  const PathLossModel amplitude = FreeSpacePathLoss{carrier_hz};
  const auto h_user = array_response(
      array, NearFieldTarget{user.range_m, user.angle_rad}, wavelength,
      amplitude);
  const auto h_eve = array_response(
      array, NearFieldTarget{eve.range_m, eve.angle_rad}, wavelength,
      amplitude);

  std::vector<cplx> w(array.size());
  if (mode == BeamfocusMode::NearFieldMatched) {
    double norm_sq = 0.0;
    for (const cplx& hi : h_user) norm_sq += std::norm(hi);
    detail::require(norm_sq > 0.0, "user channel must be nonzero");
    const double inv_norm = 1.0 / std::sqrt(norm_sq);
    for (std::size_t i = 0; i < w.size(); ++i) {
      w[i] = std::conj(h_user[i]) * inv_norm;
    }
  } else {
    const auto steer =
        array_response(array, FarFieldTarget{user.angle_rad}, wavelength);
    const double inv_norm = 1.0 / std::sqrt(static_cast<double>(array.size()));
    for (std::size_t i = 0; i < w.size(); ++i) {
      w[i] = std::conj(steer[i]) * inv_norm;
    }
  }

  auto beam_gain = [&](const std::vector<cplx>& h) {
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < h.size(); ++i) s += h[i] * w[i];
    return std::norm(s);
  };
  return secrecy_capacity(power_w, beam_gain(h_user), beam_gain(h_eve),
                          noise_w, noise_w);
}

}  // namespace nomasec
