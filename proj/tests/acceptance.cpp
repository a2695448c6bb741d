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

// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "eqp/eqp.hpp"
#include "test_support.hpp"

using namespace eqp;

namespace {

struct Result {
  bool passed = false;
  std::string detail;
};

int failures = 0;

void run(int id, const char* title, const std::function<Result()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Result o;
  try {
    o = body();
  } catch (const std::exception& ex) {
    o = {false, std::string("exception: ") + ex.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("[%s] %d %s: %s (%.2f s)\n", o.passed ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
  std::fflush(stdout);
  if (!o.passed) ++failures;
}

void info(const char* title, const std::string& detail) {
  std::printf("[INFO] %s: %s\n", title, detail.c_str());
  std::fflush(stdout);
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Criterion 7 accumulates over every run below.
struct Invariants {
  double worst_sum = 0.0;
  double worst_reassembly = 0.0;  // exact-input runs only
  double worst_lorentz = 0.0;
  double worst_local = 0.0;
  int runs = 0;

  void record(const Decomposition& d, const DensityMatrix* exact) {
    const Eigen::Matrix4d eta = minkowski_metric();
    const auto& sf = d.standard_form;
    worst_sum = std::max(worst_sum, std::abs(d.eqp.sum() - 1.0));
    worst_lorentz = std::max({worst_lorentz,
                              (sf.boost_alice * eta * sf.boost_alice.transpose() - eta).cwiseAbs().maxCoeff(),
                              (sf.boost_bob * eta * sf.boost_bob.transpose() - eta).cwiseAbs().maxCoeff()});
    worst_local = std::max(worst_local, sf.local_residual);
    if (exact && !sf.regularized)
      worst_reassembly = std::max(
          worst_reassembly, (reassemble_state(d.eqp).values - exact->values).cwiseAbs().maxCoeff());
    ++runs;
  }
} invariants;

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double relative_error(const EQPDecomposition& d) {
  double err = 0.0, mag = 0.0;
  for (const auto& t : d.terms) {
    err += t.error;
    mag += std::abs(t.weight);
  }
  return err / mag;
}

ReconstructionResult simulated_run(const DensityMatrix& state, std::uint64_t seed) {
  SimulationConfig sim;
  sim.state = state;
  sim.pairs_per_setting = 30000;
  sim.seed = seed;
  ReconstructionOptions opt;
  opt.monte_carlo.samples = 50000;
  opt.monte_carlo.seed = seed;
  opt.monte_carlo.workers = std::max(1u, std::thread::hardware_concurrency());
  ReconstructionResult r = reconstruct(sample_counts(sim), opt);
  invariants.record(r.decomposition, nullptr);
  return r;
}

}  // namespace

int main() {
  run(1, "ideal-singlet EQP", [] {
    const auto t0 = std::chrono::steady_clock::now();
    CorrelationMatrix c;
    c.values = Eigen::Vector4d(1, -1, -1, -1).asDiagonal();
    const Decomposition d = decompose(c);
    const double secs = elapsed_since(t0);
    double worst = 0.0;
    int neg = 0, pos = 0;
    for (const auto& t : d.eqp.terms) {
      const bool same = t.sign_alice == t.sign_bob;
      worst = std::max(worst, std::abs(t.weight - (same ? -1.0 / 6.0 : 1.0 / 3.0)));
      (same ? neg : pos)++;
    }
    invariants.record(d, nullptr);
    const DensityMatrix rho = density_from_correlations(c);
    invariants.record(d, &rho);
    return Result{worst <= 1e-12 && neg == 6 && pos == 6 && secs < 1.0,
                   "6 x -1/6 and 6 x +1/3, max deviation " + fmt("%.1e", worst) + ", " +
                       fmt("%.4f s", secs)};
  });

  run(2, "published-state golden test", [] {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::ostringstream detail;
    for (const auto& c : published::verify()) {
      ok = ok && c.passed;
      if (!c.passed) detail << c.name << "=" << c.value << " ";
    }
    const DensityMatrix rho = published::sampled_state();
    invariants.record(decompose(correlations_from_density(rho)), nullptr);
    const double secs = elapsed_since(t0);
    const DensityMatrix& r = rho;
    detail << "purity " << fmt("%.4f", purity(r)) << ", fidelity " << fmt("%.4f", fidelity_with_target(r, singlet_vector()))
           << ", PT min " << fmt("%.4f", min_pt_eigenvalue(r)) << ", " << fmt("%.3f s", secs);
    return Result{ok && secs < 5.0, detail.str()};
  });

  ReconstructionResult singlet_run;
  run(3, "singlet significance >= 10 sigma (30000 pairs/setting, 50000 samples)", [&] {
    const auto t0 = std::chrono::steady_clock::now();
    singlet_run = simulated_run(singlet_state(), 1);
    const double secs = elapsed_since(t0);
    const auto& n = singlet_run.negativity;
    const double sig = n.significance.value_or(0.0);
    std::ostringstream detail;
    detail << "min weight " << fmt("%.4f", n.min_weight) << " +/- " << fmt("%.4f", n.error.value_or(NAN))
           << " = " << fmt("%.2f", sig) << " sigma (best negative entry " << fmt("%.2f", n.max_significance.value_or(0.0))
           << " sigma), regularized eps " << singlet_run.decomposition.standard_form.regularization_epsilon
           << ", MC failures " << singlet_run.uncertainty->failed << ", " << fmt("%.1f s", secs);
    return Result{sig >= 10.0 && secs < 120.0, detail.str()};
  });

  {
    const auto t0 = std::chrono::steady_clock::now();
    const ReconstructionResult w = simulated_run(werner_state(0.95), 1);
    info("werner p=0.95 reference (fidelity 0.9625)",
         "min weight " + fmt("%.4f", w.negativity.min_weight) + " = " +
             fmt("%.1f", w.negativity.significance.value_or(0.0)) + " sigma, " + fmt("%.1f s", elapsed_since(t0)));
  }

  run(4, "product state: weights >= -dP and relative errors >= 3x singlet", [&] {
    const ReconstructionResult p = simulated_run(product_state(), 2);
    double worst = INFINITY;
    for (const auto& t : p.decomposition.eqp.terms) worst = std::min(worst, (t.weight + t.error));
    const double rel_p = relative_error(p.decomposition.eqp);
    const double rel_s = singlet_run.uncertainty ? relative_error(singlet_run.decomposition.eqp) : NAN;
    const double ratio = rel_p / rel_s;
    std::ostringstream detail;
    detail << "min(P + dP) " << fmt("%.4f", worst) << ", min P " << fmt("%.4f", p.negativity.min_weight)
           << ", relative error " << fmt("%.3f", rel_p) << " vs singlet " << fmt("%.3f", rel_s) << " (ratio "
           << fmt("%.2f", ratio) << "), regularized eps " << p.decomposition.standard_form.regularization_epsilon
           << ", verdict " << to_string(p.diagnostics.verdict.eqp);
    return Result{worst >= 0.0 && ratio >= 3.0, detail.str()};
  });

  run(5, "EQP sign agrees with partial transpose on 1000 random states", [] {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20260101);
    int compared = 0, agree = 0, skipped = 0, entangled = 0;
    for (int n = 0; n < 1000; ++n) {
      const DensityMatrix rho = test::random_density(rng);
      const Decomposition d = decompose(correlations_from_density(rho));
      invariants.record(d, &rho);
      if (std::abs(d.standard_form.q()) <= 1e-8) {
        ++skipped;
        continue;
      }
      const bool eqp_negative = negativity_summary(d.eqp).min_weight < 0.0;
      const bool pt_negative = min_pt_eigenvalue(rho) < 0.0;
      ++compared;
      agree += eqp_negative == pt_negative;
      entangled += pt_negative;
    }
    const double secs = elapsed_since(t0);
    std::ostringstream detail;
    detail << agree << "/" << compared << " agree (" << entangled << " entangled, " << skipped
           << " skipped with |q| <= 1e-8), " << fmt("%.2f s", secs);
    return Result{agree == compared && compared > 0 && secs < 60.0, detail.str()};
  });

  run(6, "Werner boundary at p = 1/3 +/- 0.01", [] {
    // Noise-free counts through the full tomography + standard-form chain.
    double last_separable = -1.0, first_entangled = 2.0;
    for (int k = 0; k <= 1000; ++k) {
      const double p = k / 1000.0;
      SimulationConfig sim;
      sim.state = werner_state(p);
      sim.noise_free = true;
      const CoincidenceMatrix e = sample_counts(sim);
      const CorrelationMatrix c = sample_correlations(e).correlations;
      const Decomposition d = decompose(c);
      invariants.record(d, &sim.state);
      const double q = d.standard_form.q();
      if (q >= 0.0)
        last_separable = std::max(last_separable, p);
      else
        first_entangled = std::min(first_entangled, p);
    }
    const double boundary = 0.5 * (last_separable + first_entangled);
    const bool monotone = last_separable < first_entangled;
    return Result{monotone && std::abs(boundary - 1.0 / 3.0) <= 0.01,
                   "q changes sign between p = " + fmt("%.3f", last_separable) + " and " +
                       fmt("%.3f", first_entangled) + " (boundary " + fmt("%.4f", boundary) + ")"};
  });

  run(7, "structural invariants", [] {
    const bool ok = invariants.worst_sum <= 1e-10 && invariants.worst_reassembly < 1e-8 &&
                    invariants.worst_lorentz <= 1e-10 && invariants.worst_local < 1e-10;
    std::ostringstream detail;
    detail << invariants.runs << " runs: |sum - 1| " << fmt("%.1e", invariants.worst_sum) << ", reassembly "
           << fmt("%.1e", invariants.worst_reassembly) << ", L eta L^T - eta " << fmt("%.1e", invariants.worst_lorentz)
           << ", local components " << fmt("%.1e", invariants.worst_local);
    return Result{ok, detail.str()};
  });

  run(8, "determinism (identical reports)", [] {
    SimulationConfig sim;
    sim.state = werner_state(0.9);
    sim.seed = 3;
    const CoincidenceMatrix e = sample_counts(sim);
    ReconstructionOptions opt;
    opt.monte_carlo.samples = 5000;
    opt.monte_carlo.seed = 3;
    opt.monte_carlo.workers = 2;
    const Provenance prov{"counts.csv", "0", std::nullopt};
    const std::string a = report_json(reconstruct(e, opt), opt, prov).dump(2);
    const std::string b = report_json(reconstruct(e, opt), opt, prov).dump(2);
    return Result{a == b, std::to_string(a.size()) + " bytes, " + (a == b ? "identical" : "different")};
  });

  std::printf("%d criteria failed\n", failures);
  return failures;
}
