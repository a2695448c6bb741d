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

// Entanglement quasiprobabilities (EQPs) of two-qubit states.
//
// A standard-form state with diagonal correlations (1, rho_x, rho_y, rho_z)
// expands over the product eigenstates |w_a, w_b> of equal Pauli axis w with
// the closed-form weights of std_eqp(). Undoing the local transformations
// T_A (x) T_B carries that expansion over to the measured state.

#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "eqp/errors.hpp"
#include "eqp/pauli.hpp"
#include "eqp/standard_form.hpp"

namespace eqp {

/// Index of |w_sign> in the ordering (x+, x-, y+, y-, z+, z-).
constexpr int eigenstate_index(Pauli w, int sign) {
  return 2 * (static_cast<int>(w) - 1) + (sign > 0 ? 0 : 1);
}

/// Standard-form EQP as a 6x6 matrix over (x+, x-, y+, y-, z+, z-) squared.
/// Entries outside the three same-axis 2x2 blocks are structural zeros: they
/// are not separability eigenvectors and carry no weight.
struct StdEQP {
  Eigen::Matrix<double, 6, 6> values = Eigen::Matrix<double, 6, 6>::Zero();
  Eigen::Matrix<bool, 6, 6> present = Eigen::Matrix<bool, 6, 6>::Constant(false);
  double q = 1.0;

  double sum() const { return values.sum(); }
  double min_weight() const {
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        if (present(i, j)) m = std::min(m, values(i, j));
    return m;
  }
};

inline StdEQP std_eqp(double rho_x, double rho_y, double rho_z) {
  StdEQP p;
  const std::array<double, 3> rho{rho_x, rho_y, rho_z};
  p.q = 1.0 - std::abs(rho_x) - std::abs(rho_y) - std::abs(rho_z);
  for (int w = 0; w < 3; ++w) {
    const double same = p.q / 12.0 + (std::abs(rho[w]) + rho[w]) / 4.0;
    const double opposite = p.q / 12.0 + (std::abs(rho[w]) - rho[w]) / 4.0;
    const int b = 2 * w;
    p.values(b, b) = p.values(b + 1, b + 1) = same;
    p.values(b, b + 1) = p.values(b + 1, b) = opposite;
    p.present.block<2, 2>(b, b).setConstant(true);
  }
  return p;
}

inline StdEQP std_eqp(const Eigen::Vector4d& diagonal) {
  return std_eqp(diagonal(1), diagonal(2), diagonal(3));
}

/// One weight P(a, b) of the expansion together with its product state.
struct ProductTerm {
  Pauli axis = Pauli::X;
  int sign_alice = 1;
  int sign_bob = 1;
  double weight = 0.0;
  double error = std::numeric_limits<double>::quiet_NaN();
  QubitVector alice = QubitVector::Zero();
  QubitVector bob = QubitVector::Zero();
  Eigen::Vector3d bloch_alice = Eigen::Vector3d::Zero();
  Eigen::Vector3d bloch_bob = Eigen::Vector3d::Zero();

  /// e.g. "x+,x-"
  std::string label() const {
    const char w = pauli_name(axis);
    return std::string{w, sign_alice > 0 ? '+' : '-', ',', w, sign_bob > 0 ? '+' : '-'};
  }
};

/// rho = sum_i weight_i |alice_i, bob_i><alice_i, bob_i| over the 12 terms in
/// the order (x+x+, x+x-, x-x+, x-x-, y+y+, ..., z-z-).
struct EQPDecomposition {
  std::array<ProductTerm, 12> terms{};
  bool has_errors = false;

  double sum() const {
    double s = 0.0;
    for (const auto& t : terms) s += t.weight;
    return s;
  }
  Eigen::Matrix<double, 12, 1> weights() const {
    Eigen::Matrix<double, 12, 1> w;
    for (int i = 0; i < 12; ++i) w(i) = terms[i].weight;
    return w;
  }
};

inline EQPDecomposition transform_eqp(const StdEQP& std_weights, const Operator2& t_alice,
                                      const Operator2& t_bob) {
  const Operator2 gram_alice = t_alice.adjoint() * t_alice;
  const Operator2 gram_bob = t_bob.adjoint() * t_bob;
  EQPDecomposition d;
  int n = 0;
  for (Pauli w : kSpatialPaulis) {
    const auto [plus, minus] = eigenbasis_of(w);
    for (int sa : {1, -1}) {
      for (int sb : {1, -1}) {
        const QubitVector& ea = sa > 0 ? plus : minus;
        const QubitVector& eb = sb > 0 ? plus : minus;
        const double norm_a = (ea.adjoint() * gram_alice * ea)(0).real();
        const double norm_b = (eb.adjoint() * gram_bob * eb)(0).real();
        if (norm_a < 1e-14 || norm_b < 1e-14)
          throw SingularTransformation("local transformation annihilates a separability eigenvector");
        ProductTerm& t = d.terms[n++];
        t.axis = w;
        t.sign_alice = sa;
        t.sign_bob = sb;
        t.weight = std_weights.values(eigenstate_index(w, sa), eigenstate_index(w, sb)) * norm_a *
                   norm_b;
        t.alice = t_alice * ea / std::sqrt(norm_a);
        t.bob = t_bob * eb / std::sqrt(norm_b);
        t.bloch_alice = bloch_vector(t.alice);
        t.bloch_bob = bloch_vector(t.bob);
      }
    }
  }
  return d;
}

inline DensityMatrix reassemble_state(const EQPDecomposition& d) {
  DensityMatrix rho;
  for (const auto& t : d.terms) {
    const Eigen::Vector4cd v = kron(t.alice, t.bob);
    rho.values += t.weight * v * v.adjoint();
  }
  return rho;
}

struct NegativitySummary {
  double min_weight = 0.0;
  int index = 0;  // into EQPDecomposition::terms
  std::optional<double> error;
  /// -min / error when min < 0 and an error is known; +inf for a zero error.
  std::optional<double> significance;
  /// Largest -P / dP over all negative weights.
  std::optional<double> max_significance;

  bool negative() const { return min_weight < 0.0; }
};

inline NegativitySummary negativity_summary(const EQPDecomposition& d) {
  NegativitySummary s;
  s.min_weight = d.terms[0].weight;
  for (int i = 1; i < 12; ++i) {
    if (d.terms[i].weight < s.min_weight) {
      s.min_weight = d.terms[i].weight;
      s.index = i;
    }
  }
  if (d.has_errors) {
    s.error = d.terms[s.index].error;
    if (s.min_weight < 0.0)
      s.significance = *s.error > 0.0 ? -s.min_weight / *s.error
                                      : std::numeric_limits<double>::infinity();
    for (const auto& t : d.terms) {
      if (!(t.weight < 0.0)) continue;
      const double z =
          t.error > 0.0 ? -t.weight / t.error : std::numeric_limits<double>::infinity();
      if (!s.max_significance || z > *s.max_significance) s.max_significance = z;
    }
  }
  return s;
}

/// Standard form plus the EQP of the measured state.
struct Decomposition {
  StandardFormResult standard_form;
  StdEQP std_weights;
  EQPDecomposition eqp;
};

inline Decomposition decompose(const CorrelationMatrix& c, const StandardFormOptions& opt = {}) {
  Decomposition out;
  out.standard_form = to_standard_form(c, opt);
  out.std_weights = std_eqp(out.standard_form.diagonal);
  out.eqp = transform_eqp(out.std_weights, out.standard_form.transform_alice,
                          out.standard_form.transform_bob);
  return out;
}

}  // namespace eqp
