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

#include <fftw3.h>

#include <array>
#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numbers>
#include <vector>

#include "nomasec/common.hpp"
#include "nomasec/rng.hpp"

namespace nomasec {

// ---------------------------------------------------------------------------
// QPSK
// ---------------------------------------------------------------------------

/// Gray-mapped QPSK, unit symbol energy. The first bit of each pair selects
/// the sign of the real part, the second the sign of the imaginary part,
/// with 0 mapping to +: 00 -> (1+j)/sqrt(2).
inline std::vector<cplx> qpsk_mod(const std::vector<std::uint8_t>& bits) {
  detail::require(bits.size() % 2 == 0, "bit count must be even");
  const double level = 1.0 / std::numbers::sqrt2;
  std::vector<cplx> symbols(bits.size() / 2);
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    const double re = bits[2 * i] ? -level : level;
    const double im = bits[2 * i + 1] ? -level : level;
    symbols[i] = cplx{re, im};
  }
  return symbols;
}

/// Minimum-distance QPSK slicing (sign of each quadrature component).
inline std::vector<std::uint8_t> qpsk_demod(const std::vector<cplx>& symbols) {
  std::vector<std::uint8_t> bits(2 * symbols.size());
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    bits[2 * i] = symbols[i].real() < 0.0 ? 1 : 0;
    bits[2 * i + 1] = symbols[i].imag() < 0.0 ? 1 : 0;
  }
  return bits;
}

inline std::size_t count_bit_errors(const std::vector<std::uint8_t>& a,
                                    const std::vector<std::uint8_t>& b) {
  detail::require(a.size() == b.size(), "bit vectors must match in length");
  std::size_t errors = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((a[i] != 0) != (b[i] != 0)) ++errors;
  }
  return errors;
}

// ---------------------------------------------------------------------------
// Superposition coding and successive interference cancellation
// ---------------------------------------------------------------------------

/// Power-domain superposition of two equal-length QPSK streams:
///   x = sqrt(alpha) s1 + sqrt(1 - alpha) s2.
/// alpha must stay away from 1/2 so the two layers remain separable.
inline std::vector<cplx> sc_transmit(const std::vector<std::uint8_t>& bits1,
                                     const std::vector<std::uint8_t>& bits2,
                                     double alpha) {
  detail::require(bits1.size() == bits2.size(),
                  "streams must have equal length");
  detail::require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  detail::require(std::abs(alpha - 0.5) > 1e-9,
                  "alpha must differ from 1/2 for distinct power levels");
  const std::vector<cplx> s1 = qpsk_mod(bits1);
  const std::vector<cplx> s2 = qpsk_mod(bits2);
  const double a1 = std::sqrt(alpha);
  const double a2 = std::sqrt(1.0 - alpha);
  std::vector<cplx> frame(s1.size());
  for (std::size_t i = 0; i < frame.size(); ++i) {
    frame[i] = a1 * s1[i] + a2 * s2[i];
  }
  return frame;
}

struct SicDecoded {
  std::vector<std::uint8_t> bits1;
  std::vector<std::uint8_t> bits2;
};

/// Two-stage SIC receiver for an sc_transmit frame: slice the higher-power
/// layer treating the other as interference, re-modulate and subtract it,
/// then slice the remaining layer.
inline SicDecoded sic_receive(const std::vector<cplx>& frame, double alpha) {
  detail::require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  detail::require(std::abs(alpha - 0.5) > 1e-9,
                  "alpha must differ from 1/2 for distinct power levels");
  const bool stream1_first = alpha > 0.5;
  const double first_amp = std::sqrt(stream1_first ? alpha : 1.0 - alpha);

  const std::vector<std::uint8_t> first_bits = qpsk_demod(frame);
  const std::vector<cplx> first_symbols = qpsk_mod(first_bits);
  std::vector<cplx> residual(frame.size());
  for (std::size_t i = 0; i < frame.size(); ++i) {
    residual[i] = frame[i] - first_amp * first_symbols[i];
  }
  std::vector<std::uint8_t> second_bits = qpsk_demod(residual);

  if (stream1_first) {
    return SicDecoded{first_bits, std::move(second_bits)};
  }
  return SicDecoded{std::move(second_bits), first_bits};
}

// ---------------------------------------------------------------------------
// Weighted-fractional Fourier transform (four-term weighted variant)
// ---------------------------------------------------------------------------

namespace detail {

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

/// Unitary DFT (sign = -1) or inverse DFT (sign = +1), 1/sqrt(n) scaled.
/// Buffers come from fftw_malloc so every call sees the same alignment and
/// FFTW picks the same codelets — output is bit-reproducible.
inline std::vector<cplx> unitary_dft(const std::vector<cplx>& x, int sign) {
  require(!x.empty(), "transform input must be nonempty");
  const int n = static_cast<int>(x.size());
  auto* in = static_cast<fftw_complex*>(
      fftw_malloc(sizeof(fftw_complex) * x.size()));
  auto* out = static_cast<fftw_complex*>(
      fftw_malloc(sizeof(fftw_complex) * x.size()));
  require(in != nullptr && out != nullptr, "fftw_malloc failed");
  for (std::size_t i = 0; i < x.size(); ++i) {
    in[i][0] = x[i].real();
    in[i][1] = x[i].imag();
  }
  fftw_plan plan;
  {
    // The FFTW planner is not thread-safe; executing a plan is.
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    plan = fftw_plan_dft_1d(n, in, out,
                            sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan);
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<cplx> result(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    result[i] = cplx{out[i][0] * scale, out[i][1] * scale};
  }
  fftw_free(in);
  fftw_free(out);
  return result;
}

/// Index reversal y[k] = x[(-k) mod n]; equals the square of the unitary DFT.
inline std::vector<cplx> index_reversal(const std::vector<cplx>& x) {
  std::vector<cplx> y(x.size());
  y[0] = x[0];
  for (std::size_t k = 1; k < x.size(); ++k) y[k] = x[x.size() - k];
  return y;
}

}  // namespace detail

/// Weighting coefficients of the four-term weighted fractional Fourier
/// transform of order `a`:
///   w_l(a) = (1/4) sum_{k=0}^{3} exp(sigma * j * (pi/2) * k * (a - l)).
/// `sigma` picks the phase sign convention and must be +1 or -1. The weights
/// satisfy w(a)*w(b) = w(a+b) under the cyclic convolution that composition
/// of transforms induces, which makes the operator additive in its order.
inline std::array<cplx, 4> wfrft_weights(double a, int sigma = -1) {
  detail::require(sigma == 1 || sigma == -1, "sigma must be +1 or -1");
  std::array<cplx, 4> w{};
  for (int l = 0; l < 4; ++l) {
    cplx acc{0.0, 0.0};
    for (int k = 0; k < 4; ++k) {
      const double phase =
          sigma * (std::numbers::pi / 2.0) * k * (a - static_cast<double>(l));
      acc += std::polar(1.0, phase);
    }
    w[l] = acc / 4.0;
  }
  return w;
}

/// Weighted fractional Fourier transform of order `a`:
///   F^a x = w0 x + w1 Fx + w2 F^2 x + w3 F^3 x,
/// where F is the unitary DFT for sigma = -1 (its inverse for sigma = +1),
/// F^2 is index reversal and F^3 = F^-1. Orders wrap modulo 4; a = 0 is the
/// identity and a = 1 is F itself.
inline std::vector<cplx> wfrft(const std::vector<cplx>& x, double a,
                               int sigma = -1) {
  detail::require(!x.empty(), "transform input must be nonempty");
  const std::array<cplx, 4> w = wfrft_weights(a, sigma);
  const std::vector<cplx> f1 = detail::unitary_dft(x, sigma);
  const std::vector<cplx> f2 = detail::index_reversal(x);
  const std::vector<cplx> f3 = detail::unitary_dft(f2, sigma);
  std::vector<cplx> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[i] = w[0] * x[i] + w[1] * f1[i] + w[2] * f2[i] + w[3] * f3[i];
  }
  return y;
}

// ---------------------------------------------------------------------------
// Frequency hopping
// ---------------------------------------------------------------------------

/// Slow-hopping schedule: `sequence` indexes into `carriers_hz`, advancing
/// every `dwell_samples` samples and wrapping at the end.
struct HopPlan {
  std::vector<double> carriers_hz;
  std::uint64_t dwell_samples;
  std::vector<std::uint32_t> sequence;

  void validate() const {
    detail::require(!carriers_hz.empty(), "carriers_hz must be nonempty");
    detail::require(dwell_samples > 0, "dwell_samples must be >= 1");
    detail::require(!sequence.empty(), "sequence must be nonempty");
    for (const std::uint32_t idx : sequence) {
      detail::require(idx < carriers_hz.size(),
                      "hop sequence index out of range");
    }
  }
};

/// Pseudo-random hop plan: `hops` indices drawn uniformly from the carrier
/// set, reproducible from `seed`.
inline HopPlan make_hop_plan(std::vector<double> carriers_hz,
                             std::uint64_t dwell_samples, std::size_t hops,
                             std::uint64_t seed) {
  detail::require(!carriers_hz.empty(), "carriers_hz must be nonempty");
  detail::require(hops > 0, "hops must be >= 1");
  HopPlan plan{std::move(carriers_hz), dwell_samples, {}};
  plan.sequence.resize(hops);
  TrialRng rng = derive_trial_rng(seed, 0);
  const std::uint64_t n = plan.carriers_hz.size();
  for (std::size_t i = 0; i < hops; ++i) {
    plan.sequence[i] = static_cast<std::uint32_t>(
        static_cast<std::uint64_t>(uniform_unit(rng) * static_cast<double>(n)) %
        n);
  }
  plan.validate();
  return plan;
}

/// Carrier active at a given sample index.
inline double fh_carrier(const HopPlan& plan, std::uint64_t sample_index) {
  plan.validate();
  const std::uint64_t hop = sample_index / plan.dwell_samples;
  return plan.carriers_hz[plan.sequence[hop % plan.sequence.size()]];
}

/// Mixes the baseband frame with the hopping carrier; `up` = false applies
/// the conjugate shift (de-hopping), so down(up(x)) recovers x.
inline std::vector<cplx> fh_shift(const std::vector<cplx>& frame,
                                  const HopPlan& plan, double sample_rate_hz,
                                  bool up = true) {
  plan.validate();
  detail::require_positive(sample_rate_hz, "sample_rate_hz");
  const double sign = up ? 1.0 : -1.0;
  std::vector<cplx> out(frame.size());
  for (std::size_t i = 0; i < frame.size(); ++i) {
    const double f = fh_carrier(plan, i);
    const double phase = sign * 2.0 * std::numbers::pi * f *
                         static_cast<double>(i) / sample_rate_hz;
    out[i] = frame[i] * std::polar(1.0, phase);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Constellation overlap analysis
// ---------------------------------------------------------------------------

/// A distinct point of the superposed constellation and how many transmitted
/// bit patterns land on it.
struct OverlapPoint {
  cplx value;
  std::size_t multiplicity;
};

struct OverlapReport {
  std::vector<OverlapPoint> points;   // sorted by (re, im)
  std::size_t distinct_count;
  /// Error probability of a genie receiver that resolves each collision by
  /// an arbitrary fixed choice: sum over points of (multiplicity - 1) / 16.
  double ambiguity_error;
};

/// Enumerates all 16 superpositions of two QPSK constellations combined as
/// sqrt(alpha) s1 + sqrt(1-alpha) s2 and clusters coincident points
/// (tolerance 1e-9). alpha = 1/2 collapses the 16 patterns onto 9 points.
inline OverlapReport overlap_analysis(double alpha) {
  detail::require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
  const double level = 1.0 / std::numbers::sqrt2;
  const double a1 = std::sqrt(alpha);
  const double a2 = std::sqrt(1.0 - alpha);
  std::vector<cplx> raw;
  raw.reserve(16);
  for (int r1 : {1, -1}) {
    for (int i1 : {1, -1}) {
      for (int r2 : {1, -1}) {
        for (int i2 : {1, -1}) {
          raw.push_back(a1 * cplx{r1 * level, i1 * level} +
                        a2 * cplx{r2 * level, i2 * level});
        }
      }
    }
  }
  constexpr double kTol = 1e-9;
  OverlapReport report{{}, 0, 0.0};
  for (const cplx& p : raw) {
    bool merged = false;
    for (OverlapPoint& q : report.points) {
      if (std::abs(p - q.value) <= kTol) {
        ++q.multiplicity;
        merged = true;
        break;
      }
    }
    if (!merged) report.points.push_back(OverlapPoint{p, 1});
  }
  std::sort(report.points.begin(), report.points.end(),
            [](const OverlapPoint& a, const OverlapPoint& b) {
              if (a.value.real() != b.value.real()) {
                return a.value.real() < b.value.real();
              }
              return a.value.imag() < b.value.imag();
            });
  report.distinct_count = report.points.size();
  double err = 0.0;
  for (const OverlapPoint& q : report.points) {
    err += static_cast<double>(q.multiplicity - 1);
  }
  report.ambiguity_error = err / 16.0;
  return report;
}

// ---------------------------------------------------------------------------
// IQ sample files
// ---------------------------------------------------------------------------

static_assert(std::endian::native == std::endian::little,
              "IQ files are little-endian; big-endian hosts are unsupported");

/// Writes interleaved I/Q float32 little-endian samples.
inline void write_iq(const std::filesystem::path& path,
                     const std::vector<cplx>& samples) {
  std::vector<float> raw(2 * samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    raw[2 * i] = static_cast<float>(samples[i].real());
    raw[2 * i + 1] = static_cast<float>(samples[i].imag());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  detail::require(out.good(), "cannot open IQ file for writing");
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size() * sizeof(float)));
  detail::require(out.good(), "short write to IQ file");
}

/// Reads an interleaved I/Q float32 little-endian file.
inline std::vector<cplx> read_iq(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  detail::require(in.good(), "cannot open IQ file for reading");
  const std::streamsize bytes = in.tellg();
  detail::require(bytes % (2 * sizeof(float)) == 0,
                  "IQ file size must be a multiple of 8 bytes");
  in.seekg(0);
  std::vector<float> raw(static_cast<std::size_t>(bytes) / sizeof(float));
  if (!raw.empty()) {
    in.read(reinterpret_cast<char*>(raw.data()), bytes);
    detail::require(in.good(), "short read from IQ file");
  }
  std::vector<cplx> samples(raw.size() / 2);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    samples[i] = cplx{raw[2 * i], raw[2 * i + 1]};
  }
  return samples;
}

}  // namespace nomasec
