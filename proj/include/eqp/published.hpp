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

// The published sampled two-qubit state of the polarization Bell experiment
// and its reported properties, used as a golden regression target.

#pragma once

#include <string>
#include <vector>

#include "eqp/diagnostics.hpp"
#include "eqp/quasiprob.hpp"

namespace eqp::published {

/// Sampled density matrix, entries rounded to 3 decimals (error <= 0.003).
inline DensityMatrix sampled_state() {
  const cplx i(0.0, 1.0);
  DensityMatrix rho;
  // clang-format off
  rho.values <<
      0.008,            0.005,            -0.002 - 0.001 * i, -0.004 - 0.001 * i,
      0.005,            0.469,            -0.473 - 0.026 * i, -0.006 + 0.002 * i,
      -0.002 + 0.001 * i, -0.473 + 0.026 * i, 0.500,            0.014 + 0.004 * i,
      -0.004 + 0.001 * i, -0.006 - 0.002 * i, 0.014 - 0.004 * i,  0.023;
  // clang-format on
  return rho;
}

inline constexpr double kPurity = 0.921;
inline constexpr double kFidelity = 0.958;
inline constexpr double kPtMinEigenvalue = -0.459;
inline constexpr double kEigenvalues[4] = {0.959, 0.026, 0.011, 0.003};

struct Check {
  std::string name;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Runs the deterministic pipeline on sampled_state() and compares against
/// the reported numbers. Tolerances absorb the 3-decimal rounding of the
/// published matrix.
inline std::vector<Check> verify() {
  const DensityMatrix rho = sampled_state();
  std::vector<Check> checks;
  const auto add = [&](std::string name, double value, double expected, double tol) {
    checks.push_back({std::move(name), value, expected, tol, std::abs(value - expected) <= tol});
  };
  add("purity", purity(rho), kPurity, 0.002);
  add("fidelity", fidelity_with_target(rho, singlet_vector()), kFidelity, 0.002);
  add("pt_min_eigenvalue", min_pt_eigenvalue(rho), kPtMinEigenvalue, 0.002);
  const Eigen::Vector4d ev = eigenvalues(rho);
  for (int k = 0; k < 4; ++k) add("eigenvalue_" + std::to_string(k + 1), ev(k), kEigenvalues[k], 0.005);

  const Decomposition d = decompose(correlations_from_density(rho));
  const double deviation = (reassemble_state(d.eqp).values - rho.values).cwiseAbs().maxCoeff();
  checks.push_back({"reassembly_max_deviation", deviation, 0.0, 2e-3, deviation < 2e-3});
  const double sum = d.eqp.sum();
  add("eqp_sum", sum, 1.0, 1e-10);
  return checks;
}

}  // namespace eqp::published
