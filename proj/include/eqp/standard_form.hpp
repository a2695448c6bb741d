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

// Lorentz-type normal form of a two-qubit correlation matrix.
//
// Local filters T' act on Pauli coefficients as Lorentz boosts L (L eta L^T =
// eta, eta = diag(1,-1,-1,-1)); local unitaries act as proper rotations. The
// boosts remove the local Bloch components, the rotations diagonalize the
// remaining 3x3 correlation block:
//
//   C_std = (R_A L_A) C (L_B^T R_B^T),   rho = (T_A (x) T_B) rho_std (...)^dagger.

#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <algorithm>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "eqp/errors.hpp"
#include "eqp/pauli.hpp"

namespace eqp {

inline Eigen::Matrix4d minkowski_metric() {
  return Eigen::Vector4d(1.0, -1.0, -1.0, -1.0).asDiagonal();
}

/// Symmetric M = [[alpha, beta^T], [beta, gamma]] built from a correlation
/// matrix: C eta C^T for Alice, C^T eta C for Bob.
struct MinkowskiGram {
  Eigen::Matrix4d matrix = Eigen::Matrix4d::Zero();

  double alpha() const { return matrix(0, 0); }
  Eigen::Vector3d beta() const { return matrix.block<3, 1>(1, 0); }
  Eigen::Matrix3d gamma() const { return matrix.block<3, 3>(1, 1); }
};

inline MinkowskiGram minkowski_gram(const Eigen::Matrix4d& c, Side side) {
  const Eigen::Matrix4d eta = minkowski_metric();
  MinkowskiGram m;
  m.matrix = side == Side::Alice ? Eigen::Matrix4d(c * eta * c.transpose())
                                 : Eigen::Matrix4d(c.transpose() * eta * c);
  // Exact symmetry; the products above agree only up to rounding.
  m.matrix = 0.5 * (m.matrix + m.matrix.transpose()).eval();
  return m;
}

inline MinkowskiGram minkowski_gram(const CorrelationMatrix& c, Side side) {
  return minkowski_gram(c.values, side);
}

/// Boost with rapidity r along unit vector w, as a 4x4 matrix on Pauli
/// coefficients.
inline Eigen::Matrix4d lorentz_boost(double rapidity, const Eigen::Vector3d& direction) {
  const Eigen::Matrix3d proj = direction * direction.transpose();
  Eigen::Matrix4d l;
  l(0, 0) = std::cosh(rapidity);
  l.block<1, 3>(0, 1) = std::sinh(rapidity) * direction.transpose();
  l.block<3, 1>(1, 0) = std::sinh(rapidity) * direction;
  l.block<3, 3>(1, 1) = std::cosh(rapidity) * proj + (Eigen::Matrix3d::Identity() - proj);
  return l;
}

/// The 2x2 filter realizing lorentz_boost(r, w):
/// cosh(r/2) sigma_0 + sinh(r/2) (w . sigma).
inline Operator2 boost_operator(double rapidity, const Eigen::Vector3d& direction) {
  Operator2 t = std::cosh(0.5 * rapidity) * pauli_matrix(Pauli::Id);
  for (int k = 0; k < 3; ++k) t += std::sinh(0.5 * rapidity) * direction(k) * pauli_matrix(k + 1);
  return t;
}

/// SU(2) element acting on Bloch vectors as the proper rotation r.
inline Operator2 unitary_from_rotation(const Eigen::Matrix3d& r) {
  const Eigen::Quaterniond q(r);
  const cplx i(0.0, 1.0);
  return q.w() * pauli_matrix(Pauli::Id) -
         i * (q.x() * pauli_matrix(Pauli::X) + q.y() * pauli_matrix(Pauli::Y) +
              q.z() * pauli_matrix(Pauli::Z));
}

namespace detail {

/// f(x) = alpha + x + sum_i w_i / (x - p_i) with w_i > 0 and p_i ascending.
struct SecularFunction {
  double alpha = 0.0;
  std::vector<double> poles;
  std::vector<double> weights;

  double value(double x) const {
    double s = alpha + x;
    for (std::size_t i = 0; i < poles.size(); ++i) s += weights[i] / (x - poles[i]);
    return s;
  }
  double slope(double x) const {
    double s = 1.0;
    for (std::size_t i = 0; i < poles.size(); ++i) {
      const double d = x - poles[i];
      s -= weights[i] / (d * d);
    }
    return s;
  }
  double curvature(double x) const {
    double s = 0.0;
    for (std::size_t i = 0; i < poles.size(); ++i) {
      const double d = x - poles[i];
      s += 2.0 * weights[i] / (d * d * d);
    }
    return s;
  }
};

template <class Fn>
double bracketed_root(Fn fn, double a, double b) {
  const double fa = fn(a), fb = fn(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  std::uintmax_t iterations = 400;
  const auto r = boost::math::tools::toms748_solve(
      fn, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(), iterations);
  // Prefer whichever end of the final bracket has the smaller residual.
  return std::abs(fn(r.first)) <= std::abs(fn(r.second)) ? r.first : r.second;
}

/// A point in (pole, pole + dir * width) as close to the pole as needed for
/// pred to hold.
template <class Pred>
std::optional<double> toward_pole(double pole, double dir, double width, Pred pred) {
  double d = 0.5 * width;
  for (int k = 0; k < 1100; ++k, d *= 0.5) {
    const double x = pole + dir * d;
    if (x == pole) break;
    if (pred(x)) return x;
  }
  return std::nullopt;
}

}  // namespace detail

/// All real roots of alpha + lambda + beta^T (lambda - gamma)^{-1} beta = 0,
/// ascending. Roots are bracketed between and beyond the poles of the
/// rational function (the eigenvalues of gamma) and refined with TOMS 748.
inline std::vector<double> solve_lambda(const MinkowskiGram& m) {
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(m.gamma());
  const Eigen::Vector3d beta_rot = eig.eigenvectors().transpose() * m.beta();
  const double scale = std::max({1.0, m.matrix.cwiseAbs().maxCoeff()});

  detail::SecularFunction f;
  f.alpha = m.alpha();
  // Coincident poles are merged; poles with vanishing residue drop out.
  for (int i = 0; i < 3; ++i) {
    const double g = eig.eigenvalues()(i);
    const double w = beta_rot(i) * beta_rot(i);
    // A residue too small to move the function off the pole at double
    // resolution cannot be bracketed; its roots sit on the pole itself.
    if (std::sqrt(w) <= 1e-14 * scale) continue;
    if (!f.poles.empty() && std::abs(g - f.poles.back()) <= 1e-13 * scale) {
      f.weights.back() += w;
      continue;
    }
    f.poles.push_back(g);
    f.weights.push_back(w);
  }

  std::vector<double> roots;
  if (f.poles.empty()) {
    roots.push_back(-f.alpha);
    return roots;
  }

  const auto value = [&](double x) { return f.value(x); };
  const auto slope = [&](double x) { return f.slope(x); };
  const auto curvature = [&](double x) { return f.curvature(x); };
  double total_weight = 0.0;
  for (double w : f.weights) total_weight += w;
  const double reach = std::sqrt(total_weight) + 1.0;
  const std::size_t n = f.poles.size();

  // Sign-changing monotone pieces; endpoints are given as finite points at
  // which value() already has the limiting sign.
  const auto root_between = [&](double a, double b) {
    const double fa = value(a), fb = value(b);
    if (fa == 0.0) roots.push_back(a);
    if (fb == 0.0) roots.push_back(b);
    if (fa * fb < 0.0) roots.push_back(detail::bracketed_root(value, a, b));
  };
  const auto near_pole = [&](double pole, double dir, double width, bool want_positive) {
    return detail::toward_pole(pole, dir, width, [&](double x) {
      return want_positive ? value(x) > 0.0 : value(x) < 0.0;
    });
  };

  // Below the lowest pole: concave, slope falls from 1 to -inf.
  {
    const double p = f.poles.front();
    const double a = p - reach;
    const auto b = detail::toward_pole(p, -1.0, reach, [&](double x) { return slope(x) < 0.0; });
    if (b) {
      const double c = detail::bracketed_root(slope, a, *b);
      const double fc = value(c);
      if (fc == 0.0) {
        roots.push_back(c);
      } else if (fc > 0.0) {
        root_between(std::min(-f.alpha, c) - reach, c);
        if (const auto e = near_pole(p, -1.0, p - c, false)) root_between(c, *e);
      }
    }
  }

  // Between consecutive poles: value runs from +inf to -inf; convex then
  // concave around the single inflection point.
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double lo = f.poles[j], hi = f.poles[j + 1];
    const double width = hi - lo;
    const auto a = detail::toward_pole(lo, 1.0, width, [&](double x) { return curvature(x) > 0.0; });
    const auto b = detail::toward_pole(hi, -1.0, width, [&](double x) { return curvature(x) < 0.0; });
    const auto left = near_pole(lo, 1.0, width, true);
    const auto right = near_pole(hi, -1.0, width, false);
    if (!a || !b || !left || !right) continue;
    const double inflection = detail::bracketed_root(curvature, *a, *b);
    std::vector<double> knots{*left};
    if (slope(inflection) > 0.0) {
      const auto sa = detail::toward_pole(lo, 1.0, inflection - lo,
                                          [&](double x) { return slope(x) < 0.0; });
      const auto sb = detail::toward_pole(hi, -1.0, hi - inflection,
                                          [&](double x) { return slope(x) < 0.0; });
      if (sa && *sa < inflection) knots.push_back(detail::bracketed_root(slope, *sa, inflection));
      if (sb && *sb > inflection) knots.push_back(detail::bracketed_root(slope, inflection, *sb));
    }
    knots.push_back(*right);
    for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
      if (knots[k] < knots[k + 1]) root_between(knots[k], knots[k + 1]);
    }
  }

  // Above the highest pole: convex, slope rises from -inf to 1.
  {
    const double p = f.poles.back();
    const double b = p + reach;
    const auto a = detail::toward_pole(p, 1.0, reach, [&](double x) { return slope(x) < 0.0; });
    if (a) {
      const double c = detail::bracketed_root(slope, *a, b);
      const double fc = value(c);
      if (fc == 0.0) {
        roots.push_back(c);
      } else if (fc < 0.0) {
        if (const auto e = near_pole(p, 1.0, c - p, true)) root_between(*e, c);
        root_between(c, std::max(-f.alpha, c) + reach);
      }
    }
  }

  if (roots.empty()) throw NoRealRoot("secular equation has no real root");
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

struct BoostSolution {
  double lambda = std::numeric_limits<double>::quiet_NaN();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();  // tanh(r) w
  double rapidity = 0.0;
  Eigen::Vector3d direction = Eigen::Vector3d::UnitZ();
  Eigen::Matrix4d lorentz = Eigen::Matrix4d::Identity();
  Operator2 filter = Operator2::Identity();
  double condition = 1.0;  // of (lambda I - gamma) at the chosen root
};

inline BoostSolution boost_from_velocity(const Eigen::Vector3d& v) {
  BoostSolution b;
  b.velocity = v;
  const double speed = v.norm();
  b.rapidity = std::atanh(speed);
  if (speed > 0.0) b.direction = v / speed;
  b.lorentz = lorentz_boost(b.rapidity, b.direction);
  b.filter = boost_operator(b.rapidity, b.direction);
  return b;
}

/// Boost L with L M L^T block diagonal. Among the secular roots whose
/// velocity v = (lambda I - gamma)^{-1} beta is subluminal, picks the smallest
/// rapidity; ties go to the larger lambda.
inline BoostSolution boost_from_gram(const MinkowskiGram& m) {
  const double scale = std::max(1.0, m.matrix.cwiseAbs().maxCoeff());
  if (m.beta().norm() <= 1e-15 * scale) return BoostSolution{};

  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(m.gamma());
  const Eigen::Vector3d beta_rot = eig.eigenvectors().transpose() * m.beta();

  std::optional<BoostSolution> best;
  for (double lambda : solve_lambda(m)) {
    const Eigen::Array3d gaps = lambda - eig.eigenvalues().array();
    if ((gaps == 0.0).any()) continue;
    const Eigen::Vector3d v = eig.eigenvectors() * (beta_rot.array() / gaps).matrix();
    if (!(v.norm() < 1.0)) continue;
    BoostSolution b = boost_from_velocity(v);
    b.lambda = lambda;
    b.condition = gaps.abs().maxCoeff() / gaps.abs().minCoeff();
    if (!best || b.rapidity < best->rapidity - 1e-12 ||
        (std::abs(b.rapidity - best->rapidity) <= 1e-12 && b.lambda > best->lambda))
      best = b;
  }
  if (!best) throw NoValidBoost("no secular root yields a subluminal boost velocity");
  return *best;
}

struct Rotations {
  Eigen::Matrix3d alice = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d bob = Eigen::Matrix3d::Identity();
};

/// Proper rotations diagonalizing the spatial block: R_A T R_B^T = diag,
/// with singular values in descending order (before the determinant fix,
/// which may flip all three signs).
inline Rotations rotations_from_spatial(const Eigen::Matrix4d& c) {
  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(c.block<3, 3>(1, 1),
                                              Eigen::ComputeFullU | Eigen::ComputeFullV);
  Rotations r;
  r.alice = svd.matrixU().transpose() / svd.matrixU().determinant();
  r.bob = svd.matrixV().transpose() / svd.matrixV().determinant();
  return r;
}

inline Rotations rotations_from_spatial(const CorrelationMatrix& c) {
  return rotations_from_spatial(c.values);
}

inline Eigen::Matrix4d embed_rotation(const Eigen::Matrix3d& r) {
  Eigen::Matrix4d out = Eigen::Matrix4d::Identity();
  out.block<3, 3>(1, 1) = r;
  return out;
}

inline double max_local_component(const Eigen::Matrix4d& c) {
  return std::max(c.block<1, 3>(0, 1).cwiseAbs().maxCoeff(),
                  c.block<3, 1>(1, 0).cwiseAbs().maxCoeff()) /
         std::abs(c(0, 0));
}

struct StandardFormOptions {
  int max_iterations = 100;
  double local_tolerance = 1e-10;
  double condition_limit = 1e12;
  /// White-noise weights tried in turn when the boost stage fails.
  std::vector<double> regularization_ladder = {1e-9, 1e-7, 1e-5, 1e-4, 1e-3, 3e-3, 1e-2, 3e-2, 0.1};
  bool allow_regularization = true;
};

struct StandardFormResult {
  Eigen::Vector4d diagonal = Eigen::Vector4d(1.0, 0.0, 0.0, 0.0);  // (1, rho_x, rho_y, rho_z)
  Eigen::Matrix3d rotation_alice = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d rotation_bob = Eigen::Matrix3d::Identity();
  Eigen::Matrix4d boost_alice = Eigen::Matrix4d::Identity();
  Eigen::Matrix4d boost_bob = Eigen::Matrix4d::Identity();
  Operator2 filter_alice = Operator2::Identity();  // accumulated T'_A
  Operator2 filter_bob = Operator2::Identity();
  Operator2 transform_alice = Operator2::Identity();  // T_A, scale absorbed
  Operator2 transform_bob = Operator2::Identity();
  double scale = 1.0;
  double residual = 0.0;        // max |off-diagonal| of C_std / scale
  double local_residual = 0.0;  // max local component after the boost stage
  int boost_passes = 0;
  double worst_condition = 1.0;
  bool regularized = false;
  double regularization_epsilon = 0.0;
  CorrelationMatrix decomposed;  // the input actually transformed (after any regularization)

  double q() const {
    return diagonal(0) - std::abs(diagonal(1)) - std::abs(diagonal(2)) - std::abs(diagonal(3));
  }
};

namespace detail {

inline StandardFormResult standard_form_pass(const Eigen::Matrix4d& c,
                                             const StandardFormOptions& opt) {
  StandardFormResult res;
  Eigen::Matrix4d work = c / c(0, 0);
  int pass = 0;
  while (max_local_component(work) >= opt.local_tolerance) {
    if (pass == opt.max_iterations)
      throw NotConverged("boost passes did not remove local components after " +
                         std::to_string(pass) + " passes");
    const BoostSolution a = boost_from_gram(minkowski_gram(work, Side::Alice));
    const BoostSolution b = boost_from_gram(minkowski_gram(work, Side::Bob));
    res.worst_condition = std::max({res.worst_condition, a.condition, b.condition});
    if (res.worst_condition > opt.condition_limit)
      throw DegenerateState("boost system is ill-conditioned (condition number " +
                            std::to_string(res.worst_condition) + ")");
    work = a.lorentz * work * b.lorentz.transpose();
    if (!work.allFinite() || !(work(0, 0) > 0.0))
      throw DegenerateState("boosted correlation matrix lost its normalization");
    work /= work(0, 0);
    res.boost_alice = a.lorentz * res.boost_alice;
    res.boost_bob = b.lorentz * res.boost_bob;
    res.filter_alice = a.filter * res.filter_alice;
    res.filter_bob = b.filter * res.filter_bob;
    ++pass;
  }
  res.boost_passes = pass;
  res.local_residual = max_local_component(work);

  const Rotations rot = rotations_from_spatial(work);
  res.rotation_alice = rot.alice;
  res.rotation_bob = rot.bob;

  const Eigen::Matrix4d std_form = embed_rotation(rot.alice) * res.boost_alice * c *
                                   res.boost_bob.transpose() * embed_rotation(rot.bob).transpose();
  res.scale = std_form(0, 0);
  if (!(res.scale > 0.0)) throw DegenerateState("standard form has non-positive normalization");
  const Eigen::Matrix4d normalized = std_form / res.scale;
  res.diagonal = normalized.diagonal();
  res.residual = (normalized - Eigen::Matrix4d(normalized.diagonal().asDiagonal())).cwiseAbs().maxCoeff();

  const Operator2 forward_alice = unitary_from_rotation(rot.alice) * res.filter_alice;
  const Operator2 forward_bob = unitary_from_rotation(rot.bob) * res.filter_bob;
  res.transform_alice = std::sqrt(res.scale) * forward_alice.inverse();
  res.transform_bob = forward_bob.inverse();
  res.decomposed.values = c;
  return res;
}

}  // namespace detail

/// Generalized singular value decomposition of C into its standard form and
/// the local operators T_A, T_B that undo it. Inputs on which the boost stage
/// fails (rank-deficient, close to a pure product state, or sampled slightly
/// unphysical next to a maximally entangled state) are mixed with white
/// noise, C <- (1 - eps) C + eps diag(1,0,0,0), for the smallest eps on the
/// regularization ladder that succeeds.
inline StandardFormResult to_standard_form(const CorrelationMatrix& c,
                                           const StandardFormOptions& opt = {}) {
  if (!c.values.allFinite()) throw DegenerateState("correlation matrix is not finite");
  if (!(c(0, 0) > 0.0)) throw DegenerateState("correlation matrix has C_00 <= 0");
  try {
    return detail::standard_form_pass(c.values, opt);
  } catch (const Error& first) {
    if (!opt.allow_regularization || opt.regularization_ladder.empty()) throw;
    std::string last;
    for (double eps : opt.regularization_ladder) {
      Eigen::Matrix4d mixed = (1.0 - eps) * c.values;
      mixed(0, 0) += eps * c(0, 0);
      try {
        StandardFormResult res = detail::standard_form_pass(mixed, opt);
        res.regularized = true;
        res.regularization_epsilon = eps;
        return res;
      } catch (const Error& e) {
        last = e.what();
      }
    }
    throw DegenerateState(std::string("standard form failed (") + first.what() +
                          "); white-noise regularization up to " +
                          std::to_string(opt.regularization_ladder.back()) + " failed: " + last);
  }
}

}  // namespace eqp
