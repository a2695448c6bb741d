// Copyright 2026 The eqptomo Authors
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

// Synthetic coincidence counts from Born-rule probabilities.
//
// Counting convention: each of the 36 polarizer settings (s, t) integrates
// for a fixed time, so E(s, t) ~ Poisson(4 N p(s, t)). With N pairs per
// setting the mean count per setting is N, each same-basis 2x2 block sums to
// 4N in expectation, and the grand total is 36N.

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>

#include "eqp/diagnostics.hpp"
#include "eqp/errors.hpp"
#include "eqp/pauli.hpp"
#include "eqp/tomography.hpp"

namespace eqp {

inline DensityMatrix pure_density(const Eigen::Vector4cd& psi) {
  DensityMatrix rho;
  rho.values = psi * psi.adjoint() / psi.squaredNorm();
  return rho;
}

inline DensityMatrix singlet_state() { return pure_density(singlet_vector()); }

inline DensityMatrix maximally_mixed_state() {
  DensityMatrix rho;
  rho.values = Matrix4c::Identity() / 4.0;
  return rho;
}

/// (|H> + |V>)/sqrt(2) (x) |H>
inline DensityMatrix product_state() {
  return pure_density(kron(outcome_vector(Outcome::D), outcome_vector(Outcome::H)));
}

/// p |psi-><psi-| + (1 - p) identity / 4
inline DensityMatrix werner_state(double p) {
  DensityMatrix rho;
  rho.values = p * singlet_state().values + (1.0 - p) * maximally_mixed_state().values;
  return rho;
}

/// Preset lookup by name: singlet, product, werner (uses p), mixed.
inline DensityMatrix preset_state(const std::string& name, double p = 1.0) {
  if (name == "singlet") return singlet_state();
  if (name == "product") return product_state();
  if (name == "werner") return werner_state(p);
  if (name == "mixed") return maximally_mixed_state();
  throw std::invalid_argument("unknown state preset '" + name + "'");
}

/// p(s, t) = <s,t|rho|s,t> over the six outcomes per side.
inline Eigen::Matrix<double, 6, 6> outcome_probabilities(const DensityMatrix& rho) {
  if (eigenvalues(rho)(3) < -1e-8) throw UnphysicalState("state has a negative eigenvalue");
  Eigen::Matrix<double, 6, 6> p;
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      const Eigen::Vector4cd v = kron(outcome_vector(kOutcomes[i]), outcome_vector(kOutcomes[j]));
      p(i, j) = (v.adjoint() * rho.values * v)(0).real();
    }
  }
  return p;
}

struct SimulationConfig {
  DensityMatrix state = singlet_state();
  double pairs_per_setting = 30000.0;
  std::uint64_t seed = 0;
  bool noise_free = false;
  double efficiency = 1.0;  // uniform detection efficiency; scales the rate only
};

inline CoincidenceMatrix sample_counts(const SimulationConfig& cfg) {
  if (!(cfg.pairs_per_setting > 0.0))
    throw std::invalid_argument("pairs per setting must be positive");
  const Eigen::Matrix<double, 6, 6> p = outcome_probabilities(cfg.state);
  const double rate = 4.0 * cfg.pairs_per_setting * cfg.efficiency;
  CoincidenceMatrix e;
  if (cfg.noise_free) {
    e.counts = (rate * p).cwiseMax(0.0);
    return e;
  }
  std::mt19937_64 rng(cfg.seed);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      const double mean = rate * std::max(p(i, j), 0.0);
      if (mean <= 0.0) continue;
      std::poisson_distribution<long long> draw(mean);
      e.counts(i, j) = static_cast<double>(draw(rng));
    }
  }
  return e;
}

}  // namespace eqp
