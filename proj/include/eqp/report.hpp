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

// End-to-end reconstruction: counts -> correlations -> standard form -> EQP
// with Monte Carlo errors and diagnostics, plus the JSON report, the weights
// CSV and an SVG bar chart.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <iomanip>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "eqp/counts_io.hpp"
#include "eqp/diagnostics.hpp"
#include "eqp/montecarlo.hpp"
#include "eqp/quasiprob.hpp"
#include "eqp/tomography.hpp"

namespace eqp {

inline constexpr const char* kVersion = "0.1.0";

struct ReconstructionOptions {
  MonteCarloConfig monte_carlo{};  // samples == 0 skips error propagation
  Eigen::Vector4cd target = singlet_vector();
  std::string target_name = "singlet";
  double significance_threshold = 3.0;
};

struct ReconstructionResult {
  std::optional<CoincidenceMatrix> counts;
  SampledCorrelations sampled;
  DensityMatrix density;
  Decomposition decomposition;
  std::optional<UncertaintyReport> uncertainty;
  bool too_many_failures = false;
  NegativitySummary negativity;
  DiagnosticsReport diagnostics;
  double reassembly_deviation = 0.0;
  std::vector<std::string> warnings;
};

/// Every stage after tomography, starting from C and dC.
inline ReconstructionResult reconstruct_from_correlations(const SampledCorrelations& sampled,
                                                          const ReconstructionOptions& opt) {
  ReconstructionResult r;
  r.sampled = sampled;
  r.density = assemble_density(sampled.correlations);
  r.decomposition = decompose(sampled.correlations, opt.monte_carlo.standard_form);
  const auto& sf = r.decomposition.standard_form;
  if (sf.regularized) {
    std::ostringstream msg;
    msg << "standard form required white-noise regularization (epsilon = " << sf.regularization_epsilon
        << ")";
    r.warnings.push_back(msg.str());
  }
  r.reassembly_deviation =
      (reassemble_state(r.decomposition.eqp).values - density_from_correlations(sf.decomposed).values)
          .cwiseAbs()
          .maxCoeff();

  if (opt.monte_carlo.samples > 0) {
    try {
      r.uncertainty = propagate(sampled.correlations, sampled.errors, opt.monte_carlo, opt.target);
    } catch (const TooManyFailures& ex) {
      r.uncertainty = ex.report();
      r.too_many_failures = true;
      r.warnings.push_back(ex.what());
    }
    attach_errors(r.decomposition.eqp, *r.uncertainty);
  }
  r.negativity = negativity_summary(r.decomposition.eqp);
  r.diagnostics = diagnose(r.density, opt.target, r.decomposition.eqp, sf.q(),
                           opt.significance_threshold);
  if (!r.diagnostics.physical) r.warnings.push_back("reconstructed density matrix is not positive semidefinite");
  if (r.diagnostics.verdict.disagreement)
    r.warnings.push_back("EQP verdict and partial-transpose verdict disagree");
  return r;
}

inline ReconstructionResult reconstruct(const CoincidenceMatrix& counts,
                                        const ReconstructionOptions& opt) {
  std::vector<std::string> warnings;
  for (const auto& b : empty_blocks(counts))
    warnings.push_back("measurement block " + b + " holds no counts");
  ReconstructionResult r = reconstruct_from_correlations(sample_correlations(counts), opt);
  r.counts = counts;
  r.warnings.insert(r.warnings.begin(), warnings.begin(), warnings.end());
  return r;
}

namespace report_detail {

inline nlohmann::json number(double x) {
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

template <class Derived>
nlohmann::json matrix(const Eigen::MatrixBase<Derived>& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(number(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

template <class Derived>
nlohmann::json complex_matrix(const Eigen::MatrixBase<Derived>& m) {
  return {{"real", matrix(m.real())}, {"imag", matrix(m.imag())}};
}

inline nlohmann::json vec(const Eigen::Vector3d& v) { return {number(v(0)), number(v(1)), number(v(2))}; }

}  // namespace report_detail

struct Provenance {
  std::string input;
  std::string input_sha256;
  std::optional<std::string> generated_at;  // omitted for reproducible reports
};

inline nlohmann::json report_json(const ReconstructionResult& r, const ReconstructionOptions& opt,
                                  const Provenance& prov) {
  using namespace report_detail;
  using nlohmann::json;
  const auto& sf = r.decomposition.standard_form;
  const auto& eqp = r.decomposition.eqp;

  json doc;
  doc["tool"] = {{"name", "eqptomo"}, {"version", kVersion}};
  doc["provenance"] = {{"input", prov.input}, {"input_sha256", prov.input_sha256}};
  if (prov.generated_at) doc["provenance"]["generated_at"] = *prov.generated_at;
  doc["config"] = {{"mc_samples", opt.monte_carlo.samples},
                   {"seed", opt.monte_carlo.seed},
                   {"workers", opt.monte_carlo.workers},
                   {"align", opt.monte_carlo.align},
                   {"significance_threshold", opt.significance_threshold},
                   {"target", opt.target_name},
                   {"target_state", complex_matrix(opt.target)}};
  if (r.counts) doc["counts"] = io::counts_to_json(*r.counts);
  doc["correlations"] = {{"C", matrix(r.sampled.correlations.values)},
                         {"dC", matrix(r.sampled.errors.values)}};
  doc["density_matrix"] = complex_matrix(r.density.values);
  doc["standard_form"] = {
      {"diagonal", {number(sf.diagonal(0)), number(sf.diagonal(1)), number(sf.diagonal(2)),
                    number(sf.diagonal(3))}},
      {"q", number(sf.q())},
      {"scale", number(sf.scale)},
      {"residual", number(sf.residual)},
      {"local_residual", number(sf.local_residual)},
      {"boost_passes", sf.boost_passes},
      {"regularized", sf.regularized},
      {"regularization_epsilon", number(sf.regularization_epsilon)},
      {"boost_alice", matrix(sf.boost_alice)},
      {"boost_bob", matrix(sf.boost_bob)},
      {"rotation_alice", matrix(sf.rotation_alice)},
      {"rotation_bob", matrix(sf.rotation_bob)},
      {"transform_alice", complex_matrix(sf.transform_alice)},
      {"transform_bob", complex_matrix(sf.transform_bob)}};

  json terms = json::array(), weights = json::array(), errors = json::array(), order = json::array();
  for (const auto& t : eqp.terms) {
    order.push_back(t.label());
    weights.push_back(number(t.weight));
    errors.push_back(eqp.has_errors ? number(t.error) : json(nullptr));
    terms.push_back({{"label", t.label()},
                     {"weight", number(t.weight)},
                     {"error", eqp.has_errors ? number(t.error) : json(nullptr)},
                     {"alice_bloch", vec(t.bloch_alice)},
                     {"bob_bloch", vec(t.bloch_bob)}});
  }
  doc["eqp"] = {{"order", order},
                {"weights", weights},
                {"errors", errors},
                {"terms", terms},
                {"sum", number(eqp.sum())},
                {"reassembly_deviation", number(r.reassembly_deviation)}};

  const auto opt_number = [](const std::optional<double>& x) {
    return x ? number(*x) : json(nullptr);
  };
  doc["negativity"] = {{"min_weight", number(r.negativity.min_weight)},
                       {"label", eqp.terms[r.negativity.index].label()},
                       {"error", opt_number(r.negativity.error)},
                       {"significance", opt_number(r.negativity.significance)},
                       {"max_significance", opt_number(r.negativity.max_significance)}};
  // JSON has no infinity; flag it explicitly.
  doc["negativity"]["significance_infinite"] =
      r.negativity.significance && std::isinf(*r.negativity.significance);

  const auto& dg = r.diagnostics;
  const auto& u = r.uncertainty;
  doc["diagnostics"] = {{"purity", number(dg.purity)},
                        {"purity_error", u ? number(u->purity_error) : json(nullptr)},
                        {"fidelity", number(dg.fidelity)},
                        {"fidelity_error", u ? number(u->fidelity_error) : json(nullptr)},
                        {"pt_min_eigenvalue", number(dg.pt_min_eigenvalue)},
                        {"pt_min_eigenvalue_error", u ? number(u->pt_min_error) : json(nullptr)},
                        {"eigenvalues", {number(dg.eigenvalues(0)), number(dg.eigenvalues(1)),
                                         number(dg.eigenvalues(2)), number(dg.eigenvalues(3))}},
                        {"physical", dg.physical},
                        {"q", number(dg.q)}};
  if (u) {
    doc["monte_carlo"] = {{"samples", u->samples},
                          {"failed", u->failed},
                          {"regularized", u->regularized},
                          {"failure_fraction", number(u->failure_fraction())},
                          {"too_many_failures", r.too_many_failures},
                          {"diagonal_errors", vec(u->diagonal_errors)}};
  } else {
    doc["monte_carlo"] = nullptr;
  }
  doc["verdict"] = {{"eqp", to_string(dg.verdict.eqp)},
                    {"pt", to_string(dg.verdict.pt)},
                    {"disagreement", dg.verdict.disagreement}};
  doc["warnings"] = r.warnings;
  return doc;
}

/// label,weight,error
inline std::string weights_csv(const EQPDecomposition& d) {
  std::ostringstream out;
  out << "label,weight,error\n";
  for (const auto& t : d.terms) {
    out << t.label() << ',' << io::format_number(t.weight) << ',';
    if (d.has_errors && std::isfinite(t.error)) out << io::format_number(t.error);
    out << '\n';
  }
  return out.str();
}

/// Static bar chart of the 12 weights with one-standard-deviation error bars.
inline std::string render_svg(const EQPDecomposition& d, const std::string& title = "EQP") {
  const double width = 720, height = 400, left = 60, right = 20, top = 40, bottom = 60;
  double hi = 0.0, lo = 0.0;
  for (const auto& t : d.terms) {
    const double e = d.has_errors && std::isfinite(t.error) ? t.error : 0.0;
    hi = std::max(hi, t.weight + e);
    lo = std::min(lo, t.weight - e);
  }
  if (hi - lo <= 0.0) hi = 1.0;
  const double pad = 0.05 * (hi - lo);
  hi += pad;
  lo -= pad;
  const double plot_h = height - top - bottom;
  const double plot_w = width - left - right;
  const auto y_of = [&](double v) { return top + (hi - v) / (hi - lo) * plot_h; };
  const double slot = plot_w / 12.0;

  std::ostringstream s;
  s << std::fixed << std::setprecision(2);
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
    << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"16\">"
    << title << "</text>\n";
  s << "<line x1=\"" << left << "\" y1=\"" << y_of(0.0) << "\" x2=\"" << width - right << "\" y2=\""
    << y_of(0.0) << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + plot_h
    << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = lo + (hi - lo) * k / 4.0;
    s << "<text x=\"" << left - 6 << "\" y=\"" << y_of(v) + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << std::setprecision(3)
      << v << std::setprecision(2) << "</text>\n";
  }
  for (int i = 0; i < 12; ++i) {
    const auto& t = d.terms[i];
    const double x0 = left + i * slot + 0.15 * slot;
    const double bw = 0.7 * slot;
    const double y0 = std::min(y_of(t.weight), y_of(0.0));
    const double h = std::abs(y_of(t.weight) - y_of(0.0));
    s << "<rect x=\"" << x0 << "\" y=\"" << y0 << "\" width=\"" << bw << "\" height=\"" << h
      << "\" fill=\"" << (t.weight < 0.0 ? "#c0392b" : "#2e86c1") << "\"/>\n";
    if (d.has_errors && std::isfinite(t.error) && t.error > 0.0) {
      const double xc = x0 + bw / 2;
      s << "<line x1=\"" << xc << "\" y1=\"" << y_of(t.weight + t.error) << "\" x2=\"" << xc
        << "\" y2=\"" << y_of(t.weight - t.error) << "\" stroke=\"black\"/>\n";
      for (double v : {t.weight + t.error, t.weight - t.error})
        s << "<line x1=\"" << xc - 4 << "\" y1=\"" << y_of(v) << "\" x2=\"" << xc + 4 << "\" y2=\""
          << y_of(v) << "\" stroke=\"black\"/>\n";
    }
    s << "<text x=\"" << x0 + bw / 2 << "\" y=\"" << height - bottom + 18
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << t.label()
      << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace eqp
