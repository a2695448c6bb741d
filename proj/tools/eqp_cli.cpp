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

// eqptomo command-line tool.
//
//   eqptomo reconstruct --counts FILE [--out report.json] [--plot eqp.svg] ...
//   eqptomo simulate --preset singlet|product|werner|mixed [--p P] ... --out FILE
//   eqptomo verify-paper
//
// Counts CSV format: header row ",H,V,D,A,R,L", then six rows whose first cell
// is H,V,D,A,R,L in that order (Alice's outcome) and whose columns are Bob's
// outcomes in the same order. UTF-8, LF line endings, '.' decimal point,
// nonnegative real values.
//
// Counts JSON format: {"counts": [[...6...] x 6], "label_order": [6 labels]}.
// "label_order" is optional; when present it gives the outcome label of each
// row and column and is used to permute into H,V,D,A,R,L order.
//
// Exit codes:
//   0  success
//   1  usage error (bad flags, unknown preset)
//   2  input parse error
//   3  pipeline failure (message names the stage)
//   4  Monte Carlo failure fraction above the limit (report still written)
//   5  verify-paper check failure

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include "eqp/eqp.hpp"

namespace {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kParse = 2,
  kPipeline = 3,
  kMonteCarlo = 4,
  kVerify = 5,
};

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i)
    out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return out.str();
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

unsigned default_workers() {
  if (const char* env = std::getenv("EQP_WORKERS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return static_cast<unsigned>(n);
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
}

struct ReconstructArgs {
  std::string counts, out, plot, weights_csv;
  std::size_t mc_samples = 50000;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  std::string target = "singlet";
  double significance_threshold = 3.0;
  bool no_align = false;
  bool reproducible = false;
};

struct SimulateArgs {
  std::string preset, state, out;
  double p = 1.0;
  double pairs_per_setting = 30000.0;
  std::uint64_t seed = 0;
  bool noise_free = false;
  double efficiency = 1.0;
};

int run_reconstruct(const ReconstructArgs& a) {
  eqp::CoincidenceMatrix counts;
  std::string raw;
  eqp::ReconstructionOptions opt;
  try {
    raw = eqp::io::read_file(a.counts);
    counts = eqp::io::load_counts(a.counts);
    if (a.target != "singlet") {
      opt.target = eqp::io::load_pure_state(a.target);
      opt.target_name = a.target;
    }
  } catch (const std::exception& ex) {
    std::cerr << "error [input]: " << ex.what() << '\n';
    return kParse;
  }
  opt.monte_carlo.samples = a.mc_samples;
  opt.monte_carlo.seed = a.seed;
  opt.monte_carlo.workers = a.workers > 0 ? a.workers : default_workers();
  opt.monte_carlo.align = !a.no_align;
  opt.significance_threshold = a.significance_threshold;

  eqp::ReconstructionResult result;
  try {
    result = eqp::reconstruct(counts, opt);
  } catch (const eqp::Error& ex) {
    std::cerr << "error [" << ex.stage() << "]: " << ex.what() << '\n';
    return ex.stage() == "input" ? kParse : kPipeline;
  } catch (const std::exception& ex) {
    std::cerr << "error [pipeline]: " << ex.what() << '\n';
    return kPipeline;
  }

  eqp::Provenance prov{a.counts, sha256_hex(raw), std::nullopt};
  if (!a.reproducible) prov.generated_at = utc_now();
  const nlohmann::json doc = eqp::report_json(result, opt, prov);
  const std::string text = doc.dump(2) + "\n";
  try {
    if (a.out.empty())
      std::cout << text;
    else
      write_text(a.out, text);
    if (!a.plot.empty()) write_text(a.plot, eqp::render_svg(result.decomposition.eqp));
    if (!a.weights_csv.empty()) write_text(a.weights_csv, eqp::weights_csv(result.decomposition.eqp));
  } catch (const std::exception& ex) {
    std::cerr << "error [output]: " << ex.what() << '\n';
    return kPipeline;
  }
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  std::cerr << "verdict: " << eqp::to_string(result.diagnostics.verdict.eqp) << " (eqp), "
            << eqp::to_string(result.diagnostics.verdict.pt) << " (partial transpose)\n";
  return result.too_many_failures ? kMonteCarlo : kOk;
}

int run_simulate(const SimulateArgs& a) {
  eqp::SimulationConfig cfg;
  if (a.preset.empty() == a.state.empty()) {
    std::cerr << "error [usage]: give exactly one of --preset or --state\n";
    return kUsage;
  }
  if (!a.preset.empty()) {
    try {
      cfg.state = eqp::preset_state(a.preset, a.p);
    } catch (const std::invalid_argument& ex) {
      std::cerr << "error [usage]: " << ex.what() << '\n';
      return kUsage;
    }
  } else {
    try {
      cfg.state = eqp::io::load_density(a.state);
    } catch (const std::exception& ex) {
      std::cerr << "error [input]: " << ex.what() << '\n';
      return kParse;
    }
  }
  cfg.pairs_per_setting = a.pairs_per_setting;
  cfg.seed = a.seed;
  cfg.noise_free = a.noise_free;
  cfg.efficiency = a.efficiency;
  try {
    const eqp::CoincidenceMatrix e = eqp::sample_counts(cfg);
    std::ostringstream out;
    if (!a.out.empty() && eqp::io::has_json_extension(a.out))
      eqp::io::write_counts_json(out, e);
    else
      eqp::io::write_counts_csv(out, e);
    if (a.out.empty())
      std::cout << out.str();
    else
      write_text(a.out, out.str());
  } catch (const eqp::Error& ex) {
    std::cerr << "error [" << ex.stage() << "]: " << ex.what() << '\n';
    return kPipeline;
  } catch (const std::exception& ex) {
    std::cerr << "error [simulate]: " << ex.what() << '\n';
    return kPipeline;
  }
  return kOk;
}

int run_verify_paper() {
  bool ok = true;
  for (const auto& c : eqp::published::verify()) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << std::left << std::setw(26) << c.name << std::right
              << std::setw(14) << std::setprecision(6) << c.value;
    if (c.name == "reassembly_max_deviation")
      std::cout << "  (< " << c.tolerance << ")\n";
    else
      std::cout << "  (expected " << c.expected << " +/- " << c.tolerance << ")\n";
    ok = ok && c.passed;
  }
  return ok ? kOk : kVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entanglement quasiprobability reconstruction from two-qubit polarization counts"};
  app.set_version_flag("--version", eqp::kVersion);
  app.require_subcommand(1);

  ReconstructArgs ra;
  auto* rec = app.add_subcommand("reconstruct", "Reconstruct the EQP from a counts file");
  rec->add_option("--counts", ra.counts, "Counts file (.csv or .json)")->required();
  rec->add_option("--out", ra.out, "JSON report path (stdout if omitted)");
  rec->add_option("--plot", ra.plot, "SVG bar chart path");
  rec->add_option("--weights-csv", ra.weights_csv, "CSV of the 12 weights and errors");
  rec->add_option("--mc-samples", ra.mc_samples, "Monte Carlo samples (0 disables)")->default_val(50000);
  rec->add_option("--seed", ra.seed, "Monte Carlo seed")->default_val(0);
  rec->add_option("--workers", ra.workers, "Worker threads (default: $EQP_WORKERS or CPU count)");
  rec->add_option("--target", ra.target, "'singlet' or a JSON pure-state file {\"real\":[4],\"imag\":[4]}")
      ->default_val("singlet");
  rec->add_option("--significance-threshold", ra.significance_threshold, "Sigma threshold for the verdict")
      ->default_val(3.0);
  rec->add_flag("--no-align", ra.no_align, "Disable axis alignment of Monte Carlo samples");
  rec->add_flag("--reproducible", ra.reproducible, "Omit the timestamp from the report");

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "Generate synthetic coincidence counts");
  sim->add_option("--preset", sa.preset, "singlet | product | werner | mixed");
  sim->add_option("--state", sa.state, "JSON density matrix {\"real\":4x4,\"imag\":4x4}");
  sim->add_option("--p", sa.p, "Werner mixing parameter")->default_val(1.0)->check(CLI::Range(0.0, 1.0));
  sim->add_option("--pairs-per-setting", sa.pairs_per_setting, "Expected pairs per basis setting")
      ->default_val(30000.0)
      ->check(CLI::PositiveNumber);
  sim->add_option("--seed", sa.seed, "Poisson seed")->default_val(0);
  sim->add_flag("--noise-free", sa.noise_free, "Write exact expectations");
  sim->add_option("--efficiency", sa.efficiency, "Detection efficiency")
      ->default_val(1.0)
      ->check(CLI::Range(0.0, 1.0));
  sim->add_option("--out", sa.out, "Output path (.json or .csv; stdout CSV if omitted)");

  auto* ver = app.add_subcommand("verify-paper", "Check the pipeline against the published sampled state");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  if (*rec) return run_reconstruct(ra);
  if (*sim) return run_simulate(sa);
  if (*ver) return run_verify_paper();
  return kUsage;
}
