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

#include "eqp/quasiprob.hpp"
#include "test_support.hpp"

using namespace eqp;
using Catch::Matchers::WithinAbs;

namespace {

// Sum over the twelve same-axis projectors, built without transform_eqp.
DensityMatrix mixture_of_projectors(const StdEQP& p) {
  DensityMatrix rho;
  for (Pauli w : kSpatialPaulis) {
    const auto [plus, minus] = eigenbasis_of(w);
    for (int sa : {1, -1})
      for (int sb : {1, -1}) {
        const Eigen::Vector4cd v = kron(sa > 0 ? plus : minus, sb > 0 ? plus : minus);
        rho.values += p.values(eigenstate_index(w, sa), eigenstate_index(w, sb)) * v * v.adjoint();
      }
  }
  return rho;
}

}  // namespace

TEST_CASE("ideal singlet EQP", "[quasiprob]") {
  CorrelationMatrix c;
  c.values = Eigen::Vector4d(1, -1, -1, -1).asDiagonal();
  const Decomposition d = decompose(c);
  int negative = 0, positive = 0;
  for (const auto& t : d.eqp.terms) {
    if (t.sign_alice == t.sign_bob) {
      CHECK_THAT(t.weight, WithinAbs(-1.0 / 6.0, 1e-12));
      ++negative;
    } else {
      CHECK_THAT(t.weight, WithinAbs(1.0 / 3.0, 1e-12));
      ++positive;
    }
  }
  CHECK(negative == 6);
  CHECK(positive == 6);
  CHECK_THAT(d.eqp.sum(), WithinAbs(1.0, 1e-12));
}

TEST_CASE("standard-form weights reproduce the diagonal state", "[quasiprob]") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n = 0; n < 100; ++n) {
    const double rx = u(rng), ry = u(rng), rz = u(rng);
    const StdEQP p = std_eqp(rx, ry, rz);
    CHECK_THAT(p.sum(), WithinAbs(1.0, 1e-14));
    CorrelationMatrix c;
    c.values = Eigen::Vector4d(1, rx, ry, rz).asDiagonal();
    CHECK((mixture_of_projectors(p).values - density_from_correlations(c).values).cwiseAbs().maxCoeff() <
          1e-14);
    // Negativity appears exactly when q < 0.
    CHECK((p.min_weight() < -1e-15) == (p.q < -1e-15));
  }
}

TEST_CASE("the twelve-term order and labels", "[quasiprob]") {
  CorrelationMatrix c;
  c.values = Eigen::Vector4d(1, 0.2, 0.1, 0.05).asDiagonal();
  const EQPDecomposition d = decompose(c).eqp;
  const char* expected[12] = {"x+,x+", "x+,x-", "x-,x+", "x-,x-", "y+,y+", "y+,y-",
                              "y-,y+", "y-,y-", "z+,z+", "z+,z-", "z-,z+", "z-,z-"};
  for (int i = 0; i < 12; ++i) CHECK(d.terms[i].label() == expected[i]);
}

TEST_CASE("transformed EQP reassembles random states", "[quasiprob]") {
  std::mt19937_64 rng(99);
  for (int n = 0; n < 200; ++n) {
    const DensityMatrix rho = test::random_density(rng);
    const Decomposition d = decompose(correlations_from_density(rho));
    CHECK_THAT(d.eqp.sum(), WithinAbs(1.0, 1e-10));
    CHECK((reassemble_state(d.eqp).values - rho.values).cwiseAbs().maxCoeff() < 1e-8);
    for (const auto& t : d.eqp.terms) {
      CHECK_THAT(t.alice.norm(), WithinAbs(1.0, 1e-12));
      CHECK_THAT(t.bloch_bob.norm(), WithinAbs(1.0, 1e-12));
    }
  }
}

TEST_CASE("weights carry the local-filter normalization", "[quasiprob]") {
  // Filtering a product weight by T_A (x) T_B multiplies it by <a|TA^+TA|a><b|TB^+TB|b>.
  std::mt19937_64 rng(4);
  const StdEQP p = std_eqp(-0.5, 0.3, 0.1);
  const Operator2 ta = test::random_operator(rng), tb = test::random_operator(rng);
  const EQPDecomposition d = transform_eqp(p, ta, tb);
  const auto [hp, hm] = eigenbasis_of(Pauli::X);
  const double na = (ta * hp).squaredNorm(), nb = (tb * hm).squaredNorm();
  CHECK_THAT(d.terms[1].weight, WithinAbs(p.values(0, 1) * na * nb, 1e-14));
}

TEST_CASE("negativity summary", "[quasiprob]") {
  EQPDecomposition d;
  for (int i = 0; i < 12; ++i) d.terms[i].weight = 0.1;
  d.terms[3].weight = -0.2;
  d.terms[7].weight = -0.1;
  NegativitySummary s = negativity_summary(d);
  CHECK(s.index == 3);
  CHECK(s.negative());
  CHECK_FALSE(s.significance.has_value());

  d.has_errors = true;
  for (auto& t : d.terms) t.error = 0.05;
  d.terms[7].error = 0.001;
  s = negativity_summary(d);
  CHECK_THAT(*s.significance, WithinAbs(4.0, 1e-12));
  CHECK_THAT(*s.max_significance, WithinAbs(100.0, 1e-9));

  d.terms[3].error = 0.0;
  s = negativity_summary(d);
  CHECK(std::isinf(*s.significance));
}

TEST_CASE("singular local transformation is rejected", "[quasiprob]") {
  Operator2 t;
  t << 1.0, 0.0, 0.0, 0.0;  // annihilates |V>
  CHECK_THROWS_AS(transform_eqp(std_eqp(0.1, 0.1, 0.1), t, Operator2::Identity()),
                  SingularTransformation);
}
