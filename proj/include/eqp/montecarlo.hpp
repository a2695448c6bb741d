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

// Monte Carlo propagation of correlation-matrix errors through the full
// standard-form + EQP pipeline.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <thread>
#include <vector>

#include "eqp/diagnostics.hpp"
#include "eqp/errors.hpp"
#include "eqp/quasiprob.hpp"
#include "eqp/tomography.hpp"

namespace eqp {

struct MonteCarloConfig {
  std::size_t samples = 50000;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  bool align = true;
  double max_failure_fraction = 0.01;
  StandardFormOptions standard_form{};
};

struct UncertaintyReport {
  std::array<double, 12> weight_errors{};
  std::array<double, 12> weight_means{};
  Eigen::Vector3d diagonal_errors = Eigen::Vector3d::Zero();
  double purity_error = 0.0;
  double fidelity_error = 0.0;
  double pt_min_error = 0.0;
  std::size_t samples = 0;
  std::size_t failed = 0;
  std::size_t regularized = 0;

  double failure_fraction() const {
    return samples == 0 ? 0.0 : static_cast<double>(failed) / static_cast<double>(samples);
  }
};

class TooManyFailures : public Error {
 public:
  explicit TooManyFailures(UncertaintyReport report)
      : Error("montecarlo", "Monte Carlo: " + std::to_string(report.failed) + " of " +
                                std::to_string(report.samples) +
                                " samples failed the standard-form stage"),
        report_(std::move(report)) {}
  const UncertaintyReport& report() const noexcept { return report_; }

 private:
  UncertaintyReport report_;
};

/// splitmix64 finalizer; gives every sample an independent, reproducible
/// stream regardless of how samples are spread over workers.
constexpr std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Weights of `sample` relabeled onto the terms of `reference`. The axis
/// permutation and the per-side +/- flips are chosen to minimize the distance
/// between the transformed product states' Bloch vectors plus the distance
/// between the signed standard-form diagonals.
inline std::array<double, 12> align_weights(const EQPDecomposition& reference,
                                            const Eigen::Vector4d& reference_diagonal,
                                            const EQPDecomposition& sample,
                                            const Eigen::Vector4d& sample_diagonal) {
  // Bloch vectors indexed [axis][sign index].
  const auto bloch = [](const EQPDecomposition& d, bool alice, int axis, int s) {
    // Term layout per axis: (++), (+-), (-+), (--).
    const auto& t = d.terms[4 * axis + (alice ? 2 * s : s)];
    return alice ? t.bloch_alice : t.bloch_bob;
  };
  // cost[ref_axis][sample_axis][flip_a][flip_b]
  double cost[3][3][2][2];
  for (int w = 0; w < 3; ++w) {
    for (int u = 0; u < 3; ++u) {
      for (int fa = 0; fa < 2; ++fa) {
        for (int fb = 0; fb < 2; ++fb) {
          double c = 0.0;
          for (int s = 0; s < 2; ++s) {
            c += (bloch(reference, true, w, s) - bloch(sample, true, u, s ^ fa)).squaredNorm();
            c += (bloch(reference, false, w, s) - bloch(sample, false, u, s ^ fb)).squaredNorm();
          }
          const double sign = (fa ^ fb) ? -1.0 : 1.0;
          const double dd = sign * sample_diagonal(u + 1) - reference_diagonal(w + 1);
          cost[w][u][fa][fb] = c + dd * dd;
        }
      }
    }
  }
  std::array<int, 3> perm{0, 1, 2}, best_perm = perm;
  std::array<std::array<int, 2>, 3> best_flip{};
  double best = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    std::array<std::array<int, 2>, 3> flip{};
    for (int w = 0; w < 3; ++w) {
      double m = std::numeric_limits<double>::infinity();
      for (int fa = 0; fa < 2; ++fa)
        for (int fb = 0; fb < 2; ++fb)
          if (cost[w][perm[w]][fa][fb] < m) {
            m = cost[w][perm[w]][fa][fb];
            flip[w] = {fa, fb};
          }
      total += m;
    }
    if (total < best) {
      best = total;
      best_perm = perm;
      best_flip = flip;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::array<double, 12> out{};
  for (int w = 0; w < 3; ++w)
    for (int sa = 0; sa < 2; ++sa)
      for (int sb = 0; sb < 2; ++sb)
        out[4 * w + 2 * sa + sb] =
            sample.terms[4 * best_perm[w] + 2 * (sa ^ best_flip[w][0]) + (sb ^ best_flip[w][1])]
                .weight;
  return out;
}

namespace detail {

struct SampleOutcome {
  std::array<double, 12> weights{};
  Eigen::Vector3d diagonal = Eigen::Vector3d::Zero();
  double purity = 0.0, fidelity = 0.0, pt_min = 0.0;
  bool failed = false;
  bool regularized = false;
};

inline double sample_stddev(const std::vector<SampleOutcome>& rows,
                            const std::function<double(const SampleOutcome&)>& get) {
  double mean = 0.0;
  std::size_t n = 0;
  for (const auto& r : rows)
    if (!r.failed) {
      mean += get(r);
      ++n;
    }
  if (n < 2) return 0.0;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (const auto& r : rows)
    if (!r.failed) {
      const double d = get(r) - mean;
      ss += d * d;
    }
  return std::sqrt(ss / static_cast<double>(n - 1));
}

}  // namespace detail

/// Draws cfg.samples correlation matrices with independent Gaussian entries
/// (mean C, standard deviation dC, C_00 fixed at 1), decomposes each, and
/// returns the sample standard deviations. Samples are propagated as drawn;
/// only hard pipeline failures are excluded and counted.
inline UncertaintyReport propagate(const CorrelationMatrix& c, const CorrelationErrors& dc,
                                   const MonteCarloConfig& cfg,
                                   const Eigen::Vector4cd& target = singlet_vector()) {
  if (cfg.samples < 2) throw std::invalid_argument("Monte Carlo needs at least 2 samples");
  const Decomposition point = decompose(c, cfg.standard_form);

  std::vector<detail::SampleOutcome> rows(cfg.samples);
  const auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      std::mt19937_64 rng(mix_seed(cfg.seed, i));
      std::normal_distribution<double> normal(0.0, 1.0);
      CorrelationMatrix draw = c;
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
          if (k != 0 || l != 0) draw(k, l) += dc(k, l) * normal(rng);
      draw(0, 0) = 1.0;

      auto& row = rows[i];
      const DensityMatrix rho = density_from_correlations(draw);
      row.purity = purity(rho);
      row.fidelity = fidelity_with_target(rho, target);
      row.pt_min = min_pt_eigenvalue(rho);
      try {
        const Decomposition d = decompose(draw, cfg.standard_form);
        row.regularized = d.standard_form.regularized;
        row.diagonal = d.standard_form.diagonal.tail<3>();
        if (cfg.align) {
          row.weights = align_weights(point.eqp, point.standard_form.diagonal, d.eqp,
                                      d.standard_form.diagonal);
        } else {
          for (int j = 0; j < 12; ++j) row.weights[j] = d.eqp.terms[j].weight;
        }
      } catch (const Error&) {
        row.failed = true;
      }
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.workers, cfg.samples));
  if (workers == 1) {
    run_range(0, cfg.samples);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (cfg.samples + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t begin = std::min(cfg.samples, w * chunk);
      const std::size_t end = std::min(cfg.samples, begin + chunk);
      pool.emplace_back(run_range, begin, end);
    }
    for (auto& t : pool) t.join();
  }

  UncertaintyReport rep;
  rep.samples = cfg.samples;
  for (const auto& r : rows) {
    rep.failed += r.failed ? 1 : 0;
    rep.regularized += r.regularized ? 1 : 0;
  }
  for (int j = 0; j < 12; ++j) {
    rep.weight_errors[j] = detail::sample_stddev(rows, [j](const auto& r) { return r.weights[j]; });
    double m = 0.0;
    std::size_t n = 0;
    for (const auto& r : rows)
      if (!r.failed) {
        m += r.weights[j];
        ++n;
      }
    rep.weight_means[j] = n ? m / static_cast<double>(n) : 0.0;
  }
  for (int k = 0; k < 3; ++k)
    rep.diagonal_errors(k) = detail::sample_stddev(rows, [k](const auto& r) { return r.diagonal(k); });
  // Diagnostics depend only on the drawn matrix, so they use every sample.
  auto all = rows;
  for (auto& r : all) r.failed = false;
  rep.purity_error = detail::sample_stddev(all, [](const auto& r) { return r.purity; });
  rep.fidelity_error = detail::sample_stddev(all, [](const auto& r) { return r.fidelity; });
  rep.pt_min_error = detail::sample_stddev(all, [](const auto& r) { return r.pt_min; });

  if (rep.failure_fraction() > cfg.max_failure_fraction) throw TooManyFailures(rep);
  return rep;
}

/// Copies Monte Carlo errors onto the decomposition's terms.
inline void attach_errors(EQPDecomposition& d, const UncertaintyReport& rep) {
  for (int j = 0; j < 12; ++j) d.terms[j].error = rep.weight_errors[j];
  d.has_errors = true;
}

}  // namespace eqp
