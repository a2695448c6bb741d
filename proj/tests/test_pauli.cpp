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

#include <catch_amalgamated.hpp>
#include <random>

#include "eqp/pauli.hpp"
#include "test_support.hpp"

using namespace eqp;
using Catch::Matchers::WithinAbs;

TEST_CASE("relabeled Paulis obey the right-handed algebra", "[pauli]") {
  const cplx i(0.0, 1.0);
  const Operator2 x = pauli_matrix(Pauli::X), y = pauli_matrix(Pauli::Y), z = pauli_matrix(Pauli::Z);
  CHECK((x * y - i * z).norm() < 1e-15);
  CHECK((y * z - i * x).norm() < 1e-15);
  CHECK((z * x - i * y).norm() < 1e-15);
  for (Pauli w : kSpatialPaulis) {
    const Operator2 s = pauli_matrix(w);
    CHECK((s * s - Operator2::Identity()).norm() < 1e-15);
    CHECK((s - s.adjoint()).norm() < 1e-15);
    CHECK(std::abs(s.trace()) < 1e-15);
  }
}

TEST_CASE("polarization outcomes are the Pauli eigenvectors", "[pauli]") {
  for (Pauli w : kSpatialPaulis) {
    const auto [plus, minus] = eigenbasis_of(w);
    const Operator2 s = pauli_matrix(w);
    CHECK((s * plus - plus).norm() < 1e-15);
    CHECK((s * minus + minus).norm() < 1e-15);
    CHECK(std::abs(plus.dot(minus)) < 1e-15);
  }
  CHECK_THROWS_AS(eigenbasis_of(Pauli::Id), std::invalid_argument);
  CHECK(parse_outcome("R") == Outcome::R);
}

TEST_CASE("Bloch vectors of the six outcomes", "[pauli]") {
  CHECK((bloch_vector(outcome_vector(Outcome::H)) - Eigen::Vector3d(1, 0, 0)).norm() < 1e-15);
  CHECK((bloch_vector(outcome_vector(Outcome::A)) - Eigen::Vector3d(0, -1, 0)).norm() < 1e-15);
  CHECK((bloch_vector(outcome_vector(Outcome::R)) - Eigen::Vector3d(0, 0, 1)).norm() < 1e-15);
}

TEST_CASE("density and correlation matrices round-trip", "[pauli]") {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 50; ++n) {
    const DensityMatrix rho = test::random_density(rng);
    const CorrelationMatrix c = correlations_from_density(rho);
    CHECK_THAT(c(0, 0), WithinAbs(1.0, 1e-14));
    CHECK(c.values.cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
    CHECK((density_from_correlations(c).values - rho.values).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("conjugation matrix matches the direct trace formula", "[pauli]") {
  std::mt19937_64 rng(3);
  for (int n = 0; n < 20; ++n) {
    const Operator2 t = test::random_operator(rng);
    const Eigen::Matrix4d m = conjugation_matrix(t);
    for (int k = 0; k < 4; ++k)
      for (int l = 0; l < 4; ++l) {
        const cplx direct = 0.5 * (pauli_matrix(k) * t * pauli_matrix(l) * t.adjoint()).trace();
        CHECK(std::abs(direct.imag()) < 1e-13);
        CHECK_THAT(m(k, l), WithinAbs(direct.real(), 1e-13));
      }
  }
}

TEST_CASE("local filters act on C as A C B^T", "[pauli]") {
  std::mt19937_64 rng(5);
  const DensityMatrix rho = test::random_density(rng);
  const Operator2 a = test::random_operator(rng), b = test::random_operator(rng);
  const Matrix4c ab = kron(a, b);
  DensityMatrix out;
  out.values = ab * rho.values * ab.adjoint();
  const Eigen::Matrix4d expected =
      conjugation_matrix(a) * correlations_from_density(rho).values * conjugation_matrix(b).transpose();
  const Eigen::Matrix4d got = correlations_from_density(out).values;
  CHECK((got - expected).cwiseAbs().maxCoeff() < 1e-12);
}
