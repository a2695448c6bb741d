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

// Linear-inversion tomography from 6x6 polarization coincidence counts.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "eqp/errors.hpp"
#include "eqp/pauli.hpp"

namespace eqp {

/// Coincidences E(s, t): rows are Alice's outcome, columns Bob's, both in the
/// order (H, V, D, A, R, L). Real-valued so noise-free expectations can be fed
/// through the same path as measured counts.
struct CoincidenceMatrix {
  Eigen::Matrix<double, 6, 6> counts = Eigen::Matrix<double, 6, 6>::Zero();

  double operator()(Outcome s, Outcome t) const {
    return counts(static_cast<int>(s), static_cast<int>(t));
  }
  double& operator()(Outcome s, Outcome t) {
    return counts(static_cast<int>(s), static_cast<int>(t));
  }
  double total() const { return counts.sum(); }
};

using SettingMatrix = Eigen::Matrix<int, 4, 6>;

/// Standard error of each entry of a CorrelationMatrix.
struct CorrelationErrors {
  Eigen::Matrix4d values = Eigen::Matrix4d::Zero();

  double operator()(int k, int l) const { return values(k, l); }
  double& operator()(int k, int l) { return values(k, l); }
};

struct SampledCorrelations {
  CorrelationMatrix correlations;
  CorrelationErrors errors;
};

/// Rows (0, x, y, z), columns (H, V, D, A, R, L).
inline SettingMatrix setting_matrix() {
  SettingMatrix s;
  // clang-format off
  s << 1,  1, 1,  1, 1,  1,
       1, -1, 0,  0, 0,  0,
       0,  0, 1, -1, 0,  0,
       0,  0, 0,  0, 1, -1;
  // clang-format on
  return s;
}

/// Names of same-basis 2x2 blocks (e.g. "xy") that hold no counts at all.
inline std::vector<std::string> empty_blocks(const CoincidenceMatrix& e) {
  std::vector<std::string> out;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      if (e.counts.block<2, 2>(2 * a, 2 * b).sum() <= 0.0)
        out.push_back(std::string{pauli_name(static_cast<Pauli>(a + 1)),
                                  pauli_name(static_cast<Pauli>(b + 1))});
  return out;
}

/// C = (S E S^T) / (|S| E |S|^T) and its standard error, all operations
/// entrywise.
inline SampledCorrelations sample_correlations(const CoincidenceMatrix& e) {
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (!std::isfinite(e.counts(i, j)) || e.counts(i, j) < 0.0)
        throw NonFiniteInput("coincidence count (" + std::string(1, outcome_name(kOutcomes[i])) +
                             "," + std::string(1, outcome_name(kOutcomes[j])) +
                             ") is negative or not finite");

  const Eigen::Matrix<double, 4, 6> s = setting_matrix().cast<double>();
  const Eigen::Matrix<double, 4, 6> s_abs = s.cwiseAbs();
  const Eigen::Matrix<double, 4, 6> s_sq = s.cwiseProduct(s);

  const Eigen::Matrix4d signed_sum = s * e.counts * s.transpose();
  const Eigen::Matrix4d normalizer = s_abs * e.counts * s_abs.transpose();
  const Eigen::Matrix4d second_moment_sum = s_sq * e.counts * s_sq.transpose();

  SampledCorrelations out;
  for (int k = 0; k < 4; ++k) {
    for (int l = 0; l < 4; ++l) {
      const double n = normalizer(k, l);
      if (!(n >= 2.0)) throw InsufficientCounts(k, l, n);
      const double mean = signed_sum(k, l) / n;
      const double second = second_moment_sum(k, l) / n;
      double radicand = (second - mean * mean) / (n - 1.0);
      if (radicand < 0.0) {
        if (radicand < -1e-12)
          throw NonFiniteInput("negative variance estimate for correlation (" +
                               std::to_string(k) + "," + std::to_string(l) + ")");
        radicand = 0.0;
      }
      out.correlations(k, l) = mean;
      out.errors(k, l) = std::sqrt(radicand);
    }
  }
  // The (0,0) numerator and normalizer are the same sum.
  out.correlations(0, 0) = 1.0;
  out.errors(0, 0) = 0.0;
  return out;
}

inline DensityMatrix assemble_density(const CorrelationMatrix& c) {
  return density_from_correlations(c);
}

}  // namespace eqp
