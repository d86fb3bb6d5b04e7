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

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <complex>
#include <vector>

#include "nomasec/secrecy.hpp"

using namespace nomasec;

TEST_CASE("scalar secrecy capacity") {
  //   [log2(1 + 10*1/1) - log2(1 + 10*1/2)]^+ = log2(11) - log2(6)
  const SecrecyReport r = secrecy_capacity(10.0, 1.0, 1.0, 1.0, 2.0);
  REQUIRE(r.main_capacity_bits == Catch::Approx(std::log2(11.0)).epsilon(1e-14));
  REQUIRE(r.wiretap_capacity_bits == Catch::Approx(std::log2(6.0)).epsilon(1e-14));
  REQUIRE(r.secrecy_capacity_bits ==
          Catch::Approx(0.8744691179161412).epsilon(1e-12));

  // Clamped at zero when the eavesdropper has the better link.
  const SecrecyReport bad = secrecy_capacity(10.0, 0.1, 1.0, 1.0, 1.0);
  REQUIRE(bad.secrecy_capacity_bits == 0.0);
  REQUIRE(bad.wiretap_capacity_bits > bad.main_capacity_bits);

  REQUIRE_THROWS_AS(secrecy_capacity(-1.0, 1.0, 1.0, 1.0, 1.0),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(secrecy_capacity(1.0, 1.0, 1.0, 0.0, 1.0),
                    std::invalid_argument);
}

TEST_CASE("ergodic secrecy matches the quadrature oracle") {
  // Oracle: 2-D adaptive quadrature of E[(log2((1+P g1)/(1+P g2)))^+] with
  // g1 ~ Exp(mean 1), g2 ~ Exp(mean 0.25), absolute error below 1e-8.
  const FadingPair fading{1.0, 0.25, 1.0, 1.0};
  struct Ref {
    double power_db;
    double expected;
  };
  const Ref refs[] = {{0.0, 0.61448015}, {10.0, 1.57503622},
                      {20.0, 2.14107643}};
  for (const Ref& ref : refs) {
    const ErgodicSecrecy est = ergodic_secrecy(fading, db_to_linear(ref.power_db),
                                               200000, 41, 0);
    INFO("P = " << ref.power_db << " dB: est " << est.mean_bits << " +- "
                << est.std_error);
    REQUIRE(std::abs(est.mean_bits - ref.expected) < 4.0 * est.std_error);
    REQUIRE(est.std_error > 0.0);
    REQUIRE(est.std_error < 0.01);
  }
}

TEST_CASE("ergodic secrecy is independent of the worker count") {
  const FadingPair fading{1.0, 0.25, 1.0, 1.0};
  const ErgodicSecrecy a = ergodic_secrecy(fading, 10.0, 40000, 3, 1);
  const ErgodicSecrecy b = ergodic_secrecy(fading, 10.0, 40000, 3, 8);
  REQUIRE(a.mean_bits == b.mean_bits);
  REQUIRE(a.std_error == b.std_error);
}

TEST_CASE("zero-forcing precoder nulls the eavesdropper") {
  const std::vector<cplx> h{{1.0, 0.5}, {-0.3, 1.2}, {0.8, -0.1}, {0.2, 0.7}};
  const std::vector<cplx> g{{0.4, -0.9}, {1.1, 0.3}, {-0.5, 0.6}, {0.9, 0.2}};
  const Beamformer bf = zf_precoder(h, g);
  REQUIRE_FALSE(bf.degenerate);

  cplx leak{0.0, 0.0}, keep{0.0, 0.0};
  double norm_sq = 0.0, g_norm = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    leak += std::conj(g[i]) * bf.weights[i];
    keep += std::conj(h[i]) * bf.weights[i];
    norm_sq += std::norm(bf.weights[i]);
    g_norm += std::norm(g[i]);
  }
  REQUIRE(std::abs(leak) <= 1e-12 * std::sqrt(g_norm));
  REQUIRE(norm_sq == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(std::abs(keep) > 0.1);  // projection keeps useful signal

  // Parallel channels leave no zero-forcing direction.
  std::vector<cplx> g_parallel(h);
  for (auto& v : g_parallel) v *= cplx{0.3, -2.0};
  const Beamformer deg = zf_precoder(h, g_parallel);
  REQUIRE(deg.degenerate);
  for (const cplx& w : deg.weights) REQUIRE(w == cplx{0.0, 0.0});

  // A zero eavesdropper channel imposes no constraint.
  const Beamformer free_bf =
      zf_precoder(h, std::vector<cplx>(h.size(), cplx{0.0, 0.0}));
  REQUIRE_FALSE(free_bf.degenerate);
}

TEST_CASE("artificial-noise null space is orthonormal and invisible") {
  const std::vector<std::vector<cplx>> rows{
      {{1.0, 0.2}, {0.0, -0.7}, {0.5, 0.5}, {-0.3, 0.1}, {0.9, 0.0},
       {0.2, -0.4}},
      {{-0.2, 0.6}, {1.3, 0.0}, {0.4, -0.2}, {0.0, 0.8}, {-0.5, 0.3},
       {0.7, 0.1}},
  };
  const auto basis = an_nullspace(rows);
  REQUIRE(basis.size() == 4);  // N - K = 6 - 2

  // Orthonormality.
  for (std::size_t a = 0; a < basis.size(); ++a) {
    for (std::size_t b = 0; b < basis.size(); ++b) {
      cplx dot{0.0, 0.0};
      for (std::size_t j = 0; j < basis[a].size(); ++j) {
        dot += std::conj(basis[a][j]) * basis[b][j];
      }
      const double expected = a == b ? 1.0 : 0.0;
      REQUIRE(std::abs(dot - expected) < 1e-10);
    }
  }
  // Invisibility: H z = 0 for every basis column.
  for (const auto& z : basis) {
    for (const auto& row : rows) {
      cplx dot{0.0, 0.0};
      for (std::size_t j = 0; j < row.size(); ++j) dot += row[j] * z[j];
      REQUIRE(std::abs(dot) < 1e-10);
    }
  }

  // A duplicated row is rank-deficient: the null space grows by one.
  std::vector<std::vector<cplx>> dup = rows;
  dup.push_back(rows[0]);
  REQUIRE(an_nullspace(dup).size() == 4);
  std::vector<std::vector<cplx>> indep = rows;
  indep.push_back({{0.3, 0.0}, {0.0, 0.2}, {-0.1, 0.4}, {0.6, -0.6},
                   {0.0, 0.9}, {0.1, 0.1}});
  REQUIRE(an_nullspace(indep).size() == 3);

  REQUIRE_THROWS_AS(
      an_nullspace({{{1.0, 0.0}}, {{0.0, 1.0}}}),  // K >= N
      std::invalid_argument);
}

TEST_CASE("near-field focusing separates users by range") {
  // 512-element half-wavelength array at 28 GHz; the user sits at 15 m and
  // the eavesdropper at 5 m on the same broadside bearing. Transmit power
  // -15 dBm, noise -90 dBm. References from an independent implementation
  // of the spherical-wavefront model.
  const double carrier = 28e9;
  const ArrayGeometry arr = ArrayGeometry::uniform_linear(
      512, speed_of_light / carrier / 2.0);
  const FieldPoint user{15.0, 0.0};
  const FieldPoint eve{5.0, 0.0};
  const double power = dbm_to_watts(-15.0);
  const double noise = dbm_to_watts(-90.0);

  const SecrecyReport nf = beamfocus_secrecy(arr, user, eve, carrier, power,
                                             noise,
                                             BeamfocusMode::NearFieldMatched);
  REQUIRE(nf.main_capacity_bits == Catch::Approx(5.73243487).epsilon(1e-6));
  REQUIRE(nf.wiretap_capacity_bits == Catch::Approx(2.75273870).epsilon(1e-6));
  REQUIRE(nf.secrecy_capacity_bits == Catch::Approx(2.97969617).epsilon(1e-6));

  const SecrecyReport ff = beamfocus_secrecy(arr, user, eve, carrier, power,
                                             noise,
                                             BeamfocusMode::FarFieldSteering);
  REQUIRE(ff.main_capacity_bits == Catch::Approx(0.94450920).epsilon(1e-6));
  REQUIRE(ff.wiretap_capacity_bits == Catch::Approx(2.20148166).epsilon(1e-6));
  REQUIRE(ff.secrecy_capacity_bits == 0.0);

  // The matched beam concentrates more power on its own user than
  // angle-only steering can.
  REQUIRE(nf.main_capacity_bits > ff.main_capacity_bits);
}
