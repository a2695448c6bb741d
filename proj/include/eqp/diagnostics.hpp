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

// State diagnostics used to cross-check the EQP verdict.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "eqp/pauli.hpp"
#include "eqp/quasiprob.hpp"

namespace eqp {

/// (|H,V> - |V,H>) / sqrt(2)
inline Eigen::Vector4cd singlet_vector() {
  const double h = 1.0 / std::sqrt(2.0);
  return Eigen::Vector4cd(0.0, h, -h, 0.0);
}

/// Transposes Bob's indices: ((i,j),(k,l)) -> ((i,l),(k,j)).
inline DensityMatrix partial_transpose(const DensityMatrix& rho) {
  DensityMatrix out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) out(2 * i + l, 2 * k + j) = rho(2 * i + j, 2 * k + l);
  return out;
}

inline double purity(const DensityMatrix& rho) {
  return (rho.values * rho.values).trace().real();
}

inline double fidelity_with_target(const DensityMatrix& rho, const Eigen::Vector4cd& target) {
  return (target.adjoint() * rho.values * target)(0).real();
}

/// Eigenvalues in descending order.
inline Eigen::Vector4d eigenvalues(const DensityMatrix& rho) {
  const Eigen::SelfAdjointEigenSolver<Matrix4c> eig(rho.values, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().reverse();
}

inline double min_pt_eigenvalue(const DensityMatrix& rho) {
  return eigenvalues(partial_transpose(rho))(3);
}

enum class Verdict { Entangled, Separable, Inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Entangled: return "entangled";
    case Verdict::Separable: return "separable";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

struct VerdictResult {
  Verdict eqp = Verdict::Inconclusive;
  Verdict pt = Verdict::Inconclusive;
  bool disagreement = false;  // EQP and PT point to opposite conclusions
};

/// EQP verdict with the partial-transpose verdict recorded alongside.
/// Weights within `tolerance` of zero count as zero; without Monte Carlo
/// errors the point estimate alone decides.
inline VerdictResult verdict(const EQPDecomposition& d, double q, double pt_min_eigenvalue,
                             double significance_threshold = 3.0, double tolerance = 1e-10) {
  VerdictResult r;
  const NegativitySummary neg = negativity_summary(d);
  const bool negative = neg.min_weight < -tolerance;
  bool within_one_sigma = true;
  for (const auto& t : d.terms) {
    const double err = d.has_errors && std::isfinite(t.error) ? t.error : 0.0;
    if (t.weight < -err - tolerance) within_one_sigma = false;
  }

  if (negative && (!d.has_errors || neg.significance.value_or(0.0) >= significance_threshold))
    r.eqp = Verdict::Entangled;
  else if (within_one_sigma && q > tolerance)
    r.eqp = Verdict::Separable;

  if (pt_min_eigenvalue < -tolerance)
    r.pt = Verdict::Entangled;
  else if (pt_min_eigenvalue > tolerance)
    r.pt = Verdict::Separable;

  r.disagreement = (r.eqp == Verdict::Entangled && r.pt == Verdict::Separable) ||
                   (r.eqp == Verdict::Separable && r.pt == Verdict::Entangled);
  return r;
}

struct DiagnosticsReport {
  double purity = 0.0;
  double fidelity = 0.0;
  double pt_min_eigenvalue = 0.0;
  Eigen::Vector4d eigenvalues = Eigen::Vector4d::Zero();
  bool physical = true;
  double q = 0.0;
  VerdictResult verdict;
};

inline DiagnosticsReport diagnose(const DensityMatrix& rho, const Eigen::Vector4cd& target,
                                  const EQPDecomposition& d, double q,
                                  double significance_threshold = 3.0) {
  DiagnosticsReport r;
  r.purity = purity(rho);
  r.fidelity = fidelity_with_target(rho, target);
  r.pt_min_eigenvalue = min_pt_eigenvalue(rho);
  r.eigenvalues = eigenvalues(rho);
  r.physical = r.eigenvalues(3) >= -1e-10;
  r.q = q;
  r.verdict = verdict(d, q, r.pt_min_eigenvalue, significance_threshold);
  return r;
}

}  // namespace eqp
