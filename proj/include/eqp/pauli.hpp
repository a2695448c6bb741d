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

// Polarization qubit conventions shared by every stage of the pipeline.
//
// The Pauli labels follow the polarization measurement bases rather than the
// textbook assignment:
//
//   label | eigenbasis (+,-) | matrix in {H,V}   | textbook name
//   ------+------------------+-------------------+--------------
//   x     | H, V             | [[1,0],[0,-1]]    | Z
//   y     | D, A             | [[0,1],[1,0]]     | X
//   z     | R, L             | [[0,-i],[i,0]]    | Y
//
// The relabeling is a cyclic permutation, so (x,y,z) is still a right-handed
// frame: sigma_x sigma_y = i sigma_z.
//
// Two-qubit matrices use the basis order {HH, HV, VH, VV}; Alice is the first
// tensor factor.

#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <string_view>
#include <utility>

#include "eqp/errors.hpp"

namespace eqp {

using cplx = std::complex<double>;
using QubitVector = Eigen::Vector2cd;
using Operator2 = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;

enum class Outcome : int { H = 0, V, D, A, R, L };
enum class Pauli : int { Id = 0, X, Y, Z };
enum class Side { Alice, Bob };

inline constexpr std::array<Outcome, 6> kOutcomes = {Outcome::H, Outcome::V, Outcome::D,
                                                     Outcome::A, Outcome::R, Outcome::L};
inline constexpr std::array<Pauli, 4> kPaulis = {Pauli::Id, Pauli::X, Pauli::Y, Pauli::Z};
inline constexpr std::array<Pauli, 3> kSpatialPaulis = {Pauli::X, Pauli::Y, Pauli::Z};

constexpr char outcome_name(Outcome s) { return "HVDARL"[static_cast<int>(s)]; }
constexpr char pauli_name(Pauli w) { return "0xyz"[static_cast<int>(w)]; }

inline Outcome parse_outcome(std::string_view s) {
  if (s.size() == 1) {
    for (Outcome o : kOutcomes)
      if (outcome_name(o) == s[0]) return o;
  }
  throw ParseError("unknown polarization label '" + std::string(s) + "'");
}

/// Correlations <sigma_k (x) sigma_l>, indices ordered (0, x, y, z).
struct CorrelationMatrix {
  Eigen::Matrix4d values = Eigen::Matrix4d::Zero();

  double operator()(int k, int l) const { return values(k, l); }
  double& operator()(int k, int l) { return values(k, l); }
  double operator()(Pauli k, Pauli l) const {
    return values(static_cast<int>(k), static_cast<int>(l));
  }
};

/// Two-qubit density operator in the {HH, HV, VH, VV} basis.
struct DensityMatrix {
  Matrix4c values = Matrix4c::Zero();

  cplx operator()(int i, int j) const { return values(i, j); }
  cplx& operator()(int i, int j) { return values(i, j); }

  double trace() const { return values.trace().real(); }
  double hermiticity_error() const { return (values - values.adjoint()).cwiseAbs().maxCoeff(); }
  bool is_hermitian(double tol = 1e-12) const { return hermiticity_error() <= tol; }
};

inline Operator2 pauli_matrix(Pauli w) {
  const cplx i(0.0, 1.0);
  Operator2 m;
  switch (w) {
    case Pauli::Id: m << 1.0, 0.0, 0.0, 1.0; break;
    case Pauli::X: m << 1.0, 0.0, 0.0, -1.0; break;
    case Pauli::Y: m << 0.0, 1.0, 1.0, 0.0; break;
    case Pauli::Z: m << 0.0, -i, i, 0.0; break;
  }
  return m;
}

inline Operator2 pauli_matrix(int k) { return pauli_matrix(static_cast<Pauli>(k)); }

inline QubitVector outcome_vector(Outcome s) {
  const double h = 1.0 / std::sqrt(2.0);
  const cplx i(0.0, 1.0);
  switch (s) {
    case Outcome::H: return QubitVector(1.0, 0.0);
    case Outcome::V: return QubitVector(0.0, 1.0);
    case Outcome::D: return QubitVector(h, h);
    case Outcome::A: return QubitVector(h, -h);
    case Outcome::R: return QubitVector(h, h * i);
    case Outcome::L: return QubitVector(h, -h * i);
  }
  return QubitVector::Zero();
}

/// Eigenvectors (|w+>, |w->) of a spatial Pauli operator.
inline std::pair<QubitVector, QubitVector> eigenbasis_of(Pauli w) {
  switch (w) {
    case Pauli::X: return {outcome_vector(Outcome::H), outcome_vector(Outcome::V)};
    case Pauli::Y: return {outcome_vector(Outcome::D), outcome_vector(Outcome::A)};
    case Pauli::Z: return {outcome_vector(Outcome::R), outcome_vector(Outcome::L)};
    case Pauli::Id: break;
  }
  throw std::invalid_argument("eigenbasis_of: identity has no distinguished eigenbasis");
}

inline Matrix4c kron(const Operator2& a, const Operator2& b) {
  Matrix4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

inline Eigen::Vector4cd kron(const QubitVector& a, const QubitVector& b) {
  return Eigen::Vector4cd(a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1));
}

inline DensityMatrix density_from_correlations(const CorrelationMatrix& c) {
  DensityMatrix rho;
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l)
      if (c(k, l) != 0.0) rho.values += c(k, l) * kron(pauli_matrix(k), pauli_matrix(l));
  rho.values /= 4.0;
  return rho;
}

inline CorrelationMatrix correlations_from_density(const DensityMatrix& rho) {
  CorrelationMatrix c;
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l)
      c(k, l) = (rho.values * kron(pauli_matrix(k), pauli_matrix(l))).trace().real();
  return c;
}

/// Bloch coefficients (a_x, a_y, a_z) of |v><v| / <v|v>.
inline Eigen::Vector3d bloch_vector(const QubitVector& v) {
  const double norm2 = v.squaredNorm();
  Eigen::Vector3d a;
  for (int k = 1; k < 4; ++k) a(k - 1) = (v.adjoint() * pauli_matrix(k) * v)(0).real() / norm2;
  return a;
}

/// 4x4 real matrix describing T (.) T^dagger on Pauli coefficients: if
/// gamma = sum_k g_k sigma_k then T gamma T^dagger = sum_j (M g)_j sigma_j.
/// On two-qubit correlations, (T_A (x) T_B) rho (...)^dagger maps C to
/// M_A C M_B^T.
inline Eigen::Matrix4d conjugation_matrix(const Operator2& t) {
  Eigen::Matrix4d m;
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k)
      m(j, k) = 0.5 * (pauli_matrix(j) * t * pauli_matrix(k) * t.adjoint()).trace().real();
  return m;
}

inline bool is_invertible(const Operator2& t, double tol = 1e-12) {
  return std::abs(t.determinant()) > tol;
}

}  // namespace eqp
