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

// Randomized properties over the whole deterministic pipeline.

#include <catch_amalgamated.hpp>
#include <random>

#include "eqp/diagnostics.hpp"
#include "eqp/quasiprob.hpp"
#include "eqp/synthgen.hpp"
#include "test_support.hpp"

using namespace eqp;

TEST_CASE("EQP negativity agrees with the partial transpose", "[properties]") {
  std::mt19937_64 rng(2024);
  for (int n = 0; n < 300; ++n) {
    const DensityMatrix rho = test::random_density(rng);
    const Decomposition d = decompose(correlations_from_density(rho));
    const double q = d.standard_form.q();
    if (std::abs(q) <= 1e-8) continue;
    CHECK((d.eqp.sum() - 1.0) < 1e-10);
    CHECK((q < 0.0) == (min_pt_eigenvalue(rho) < 0.0));
    CHECK((negativity_summary(d.eqp).min_weight < 0.0) == (q < 0.0));
  }
}

TEST_CASE("local filters leave the standard form unchanged", "[properties]") {
  std::mt19937_64 rng(77);
  for (int n = 0; n < 30; ++n) {
    const DensityMatrix rho = test::random_density(rng);
    const Matrix4c t = kron(test::random_operator(rng), test::random_operator(rng));
    DensityMatrix filtered;
    filtered.values = t * rho.values * t.adjoint();
    filtered.values /= filtered.trace();
    const Eigen::Vector4d a = to_standard_form(correlations_from_density(rho)).diagonal.cwiseAbs();
    const Eigen::Vector4d b = to_standard_form(correlations_from_density(filtered)).diagonal.cwiseAbs();
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("separable mixtures have no negative weights", "[properties]") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 50; ++n) {
    DensityMatrix rho;
    double total = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double w = u(rng);
      rho.values += w * test::product_density(test::random_operator(rng).col(0),
                                              test::random_operator(rng).col(0)).values;
      total += w;
    }
    rho.values /= total;
    const Decomposition d = decompose(correlations_from_density(rho));
    CHECK(negativity_summary(d.eqp).min_weight > -1e-9);
  }
}
