#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <limits>
#include <sstream>
#include <string>

#include "pursuit/analysis.hpp"
#include "pursuit/dictionary.hpp"
#include "pursuit/error.hpp"
#include "pursuit/experiment.hpp"
#include "pursuit/greedy.hpp"
#include "pursuit/io.hpp"
#include "pursuit/json.hpp"
#include "pursuit/linalg.hpp"
#include "pursuit/rng.hpp"
#include "pursuit/signals.hpp"

namespace {

using nlohmann::json;
using namespace pursuit;

void print_payload(const json& payload) {
  // Structured output goes to stdout only; summaries stay on stderr.
  std::cout << payload.dump(2) << std::endl;
}

void write_optional_copy(const json& payload, const std::string& path) {
  if (path.empty()) return;
  std::ofstream stream(path, std::ios::binary);
  if (!stream) throw IoError("cannot open for writing: " + path);
  stream << payload.dump(2) << "\n";
}

struct AlgorithmFlags {
  std::string name = "omp";
  int k = 1;
  int big_n = 1;
  int l = 1;
  double eps = 1e-6;
  int max_iters = 0;

  greedy::GreedyConfig build() const {
    greedy::GreedyConfig config;
    config.algorithm = greedy::algorithm_from_name(name);
    config.K = k;
    config.N = big_n;
    config.L = l;
    config.epsilon = eps;
    config.max_iterations = max_iters;
    config.validate();
    return config;
  }
};

void add_algorithm_flags(CLI::App* cmd, AlgorithmFlags& flags) {
  cmd->add_option("--alg", flags.name, "Algorithm")
      ->check(CLI::IsMember({"omp", "ols", "gomp", "mols", "m2ols"}))
      ->required();
  cmd->add_option("--k", flags.k, "Sparsity level K")->required();
  cmd->add_option("--big-n", flags.big_n,
                  "Preselection width N (gomp, m2ols)")
      ->capture_default_str();
  cmd->add_option("--l", flags.l, "Identification width L (mols, m2ols)")
      ->capture_default_str();
  cmd->add_option("--eps", flags.eps, "Residual threshold relative to ||y||")
      ->capture_default_str();
  cmd->add_option("--max-iters", flags.max_iters,
                  "Iteration cap (0 means K)")
      ->capture_default_str();
}

// ---------------------------------------------------------------------------
// sweep spec files: flat key = value lines, '#' comments.

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream stream(s);
  std::string token;
  while (std::getline(stream, token, sep)) {
    token = trim(token);
    if (!token.empty()) out.push_back(token);
  }
  return out;
}

greedy::GreedyConfig parse_algorithm_spec(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.empty()) throw InvalidSpec("empty algorithm spec");
  greedy::GreedyConfig config;
  config.algorithm = greedy::algorithm_from_name(parts[0]);
  config.K = 1;  // replaced per sweep cell
  switch (config.algorithm) {
    case greedy::Algorithm::Omp:
    case greedy::Algorithm::Ols:
      if (parts.size() != 1) throw InvalidSpec(text + ": takes no parameters");
      break;
    case greedy::Algorithm::Gomp:
      if (parts.size() != 2) throw InvalidSpec(text + ": expected gomp:N");
      config.N = std::stoi(parts[1]);
      break;
    case greedy::Algorithm::Mols:
      if (parts.size() != 2) throw InvalidSpec(text + ": expected mols:L");
      config.L = std::stoi(parts[1]);
      break;
    case greedy::Algorithm::M2ols:
      if (parts.size() != 3) throw InvalidSpec(text + ": expected m2ols:N:L");
      config.N = std::stoi(parts[1]);
      config.L = std::stoi(parts[2]);
      break;
  }
  return config;
}

bench::ExperimentSpec parse_sweep_spec(const std::string& path) {
  std::ifstream stream(path);
  if (!stream) throw IoError("cannot open sweep spec: " + path);
  bench::ExperimentSpec spec;
  spec.values.clear();
  spec.algorithms.clear();
  std::string line;
  int line_number = 0;
  while (std::getline(stream, line)) {
    ++line_number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidSpec(path + ":" + std::to_string(line_number) +
                        ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "n") {
      spec.n = std::stoi(value);
    } else if (key == "sweep") {
      if (value == "measurements") {
        spec.sweep = bench::SweepKind::Measurements;
      } else if (value == "sparsity") {
        spec.sweep = bench::SweepKind::Sparsity;
      } else {
        throw InvalidSpec("sweep must be 'measurements' or 'sparsity'");
      }
    } else if (key == "values") {
      for (const auto& v : split(value, ',')) spec.values.push_back(std::stoi(v));
    } else if (key == "k") {
      spec.fixed_k = std::stoi(value);
    } else if (key == "m") {
      spec.fixed_m = std::stoi(value);
    } else if (key == "trials") {
      spec.trials = std::stoi(value);
    } else if (key == "corr_t") {
      spec.dictionary_correlation = std::stod(value);
    } else if (key == "algorithms") {
      for (const auto& a : split(value, ',')) {
        spec.algorithms.push_back(parse_algorithm_spec(a));
      }
    } else if (key == "master_seed") {
      spec.master_seed = std::stoull(value);
    } else if (key == "epsilon") {
      spec.epsilon = std::stod(value);
    } else if (key == "threads") {
      spec.threads = std::stoi(value);
    } else if (key == "measure_runtime") {
      spec.measure_runtime = value == "true" || value == "1" || value == "on";
    } else {
      throw InvalidSpec(path + ": unknown key '" + key + "'");
    }
  }
  return spec;
}

json spec_to_json(const bench::ExperimentSpec& spec) {
  json algorithms = json::array();
  for (const auto& a : spec.algorithms) {
    algorithms.push_back(json{{"algorithm", a.name()},
                              {"N", a.N},
                              {"L", a.L}});
  }
  return json{
      {"n", spec.n},
      {"sweep", spec.sweep == bench::SweepKind::Measurements ? "measurements"
                                                             : "sparsity"},
      {"values", spec.values},
      {"k", spec.fixed_k},
      {"m", spec.fixed_m},
      {"trials", spec.trials},
      {"corr_t", spec.dictionary_correlation},
      {"algorithms", std::move(algorithms)},
      {"master_seed", spec.master_seed},
      {"epsilon", spec.epsilon},
      {"threads", spec.threads},
      {"measure_runtime", spec.measure_runtime}};
}

// ---------------------------------------------------------------------------

int run_gen_matrix(int m, int n, double corr_t, std::uint64_t seed,
                   const std::string& out) {
  dict::DictionarySpec spec;
  spec.m = m;
  spec.n = n;
  spec.kind = corr_t > 0.0 ? dict::Kind::Correlated : dict::Kind::Gaussian;
  spec.correlation = corr_t > 0.0 ? corr_t : 0.0;
  spec.seed = seed;
  const auto A = dict::generate(spec);
  io::save_matrix_csv(A, out);
  print_payload(json{
      {"command", "gen-matrix"},
      {"spec",
       {{"m", m},
        {"n", n},
        {"kind", spec.kind == dict::Kind::Correlated ? "correlated" : "gaussian"},
        {"corr_t", corr_t},
        {"seed", seed}}},
      {"out", out},
      {"coherence", dict::coherence(A)}});
  std::cerr << "wrote " << m << "x" << n << " matrix to " << out << "\n";
  return 0;
}

int run_gen_signal(int n, int k, std::uint64_t seed, bool unit_signs,
                   const std::string& out) {
  const auto x = signals::random_sparse_signal(
      n, k, seed,
      unit_signs ? signals::Magnitudes::UnitSigns
                 : signals::Magnitudes::Gaussian);
  io::save_signal_csv(x, out);
  print_payload(json{{"command", "gen-signal"},
                     {"spec",
                      {{"n", n},
                       {"k", k},
                       {"seed", seed},
                       {"magnitudes", unit_signs ? "unit_signs" : "gaussian"}}},
                     {"out", out},
                     {"support", to_json(x.support)},
                     {"mar", signals::mar(x)}});
  std::cerr << "wrote " << k << "-sparse signal to " << out << "\n";
  return 0;
}

int run_recover(const std::string& matrix_path, const std::string& signal_path,
                const std::string& y_path, const AlgorithmFlags& flags,
                const std::string& json_path) {
  const auto A = io::load_matrix_csv(matrix_path);
  const auto config = flags.build();

  json payload{{"command", "recover"}, {"matrix", matrix_path}};
  greedy::RecoveryResult result;
  if (!signal_path.empty()) {
    const auto x = io::load_signal_csv(signal_path);
    const Eigen::VectorXd y = A.submatrix(x.support) * x.values;
    result = greedy::run(A, y, config, x.support);
    payload["signal"] = signal_path;
  } else {
    const Eigen::VectorXd y = io::load_vector(y_path);
    result = greedy::run(A, y, config);
    payload["y"] = y_path;
  }
  payload["result"] = to_json(result, config);
  print_payload(payload);
  write_optional_copy(payload, json_path);
  std::cerr << "recover: " << result.iterations.size() << " iterations, "
            << (result.converged ? "converged" : "not converged") << "\n";
  return 0;
}

int run_sweep(const std::string& spec_path, const std::string& out_csv,
              const std::string& out_json, int threads_override) {
  auto spec = parse_sweep_spec(spec_path);
  if (threads_override > 0) spec.threads = threads_override;
  const auto records = bench::run_experiment(spec);
  bench::emit_csv(records, out_csv);
  if (!out_json.empty()) bench::emit_json(records, out_json);
  json payload{{"command", "sweep"},
               {"spec", spec_to_json(spec)},
               {"out", out_csv},
               {"records", to_json(records)}};
  print_payload(payload);
  std::cerr << "sweep: " << records.size() << " cells -> " << out_csv << "\n";
  return 0;
}

int run_ric(const std::string& matrix_path, int order, int samples,
            std::uint64_t seed, std::int64_t budget) {
  const auto A = io::load_matrix_csv(matrix_path);
  const auto estimate =
      samples > 0 ? analysis::sampled_ric_lower_bound(A, order, samples, seed)
                  : analysis::exact_ric(A, order, budget);
  print_payload(json{{"command", "ric"},
                     {"matrix", matrix_path},
                     {"order", order},
                     {"samples", samples},
                     {"seed", seed},
                     {"estimate", to_json(estimate)}});
  std::cerr << "ric: order " << order << " delta " << estimate.delta << "\n";
  return 0;
}

int run_check(bool lemmas, bool theorem1, bool theorem2, std::uint64_t seed,
              int trials) {
  const int selected = (lemmas ? 1 : 0) + (theorem1 ? 1 : 0) + (theorem2 ? 1 : 0);
  if (selected != 1) {
    std::cerr << "check: pass exactly one of --lemmas --theorem1 --theorem2\n";
    return 2;
  }
  json payload{{"command", "check"}, {"seed", seed}, {"trials", trials}};
  if (lemmas) {
    // Random 6x10 dictionaries keep exact constants up to order 4 enumerable.
    std::int64_t checks = 0, violations = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (int t = 0; t < trials; ++t) {
      dict::DictionarySpec spec;
      spec.m = 6;
      spec.n = 10;
      spec.seed = rng::derive_seed(seed, static_cast<std::uint64_t>(t));
      const auto A = dict::generate(spec);
      const auto report = analysis::check_lemma_bounds(
          A, 20, rng::derive_seed(seed, static_cast<std::uint64_t>(t), 1));
      checks += report.checks;
      violations += report.violations;
      worst = std::min(worst, report.worst_slack);
    }
    payload["mode"] = "lemmas";
    payload["report"] = json{
        {"matrices", trials}, {"checks", checks}, {"violations", violations},
        {"worst_slack", worst}};
    std::cerr << "lemma checks: " << checks << ", violations: " << violations
              << "\n";
  } else {
    analysis::TheoremCheckConfig config;
    config.seed = seed;
    config.needed = trials;
    const auto report = theorem1 ? analysis::check_theorem1(config)
                                 : analysis::check_theorem2(config);
    payload["mode"] = theorem1 ? "theorem1" : "theorem2";
    payload["report"] = to_json(report);
    std::cerr << "eligible " << report.eligible << ", recovered "
              << report.recovered << ", counterexamples "
              << report.counterexamples() << "\n";
  }
  print_payload(payload);
  return 0;
}

int run_analyze(const std::string& matrix_path, const std::string& signal_path,
                const AlgorithmFlags& flags) {
  if (signal_path.empty()) {
    throw GroundTruthRequired("analyze: --signal (ground truth) is required");
  }
  const auto A = io::load_matrix_csv(matrix_path);
  const auto x = io::load_signal_csv(signal_path);
  const auto config = flags.build();
  const Eigen::VectorXd y = A.submatrix(x.support) * x.values;
  const auto result = greedy::run(A, y, config, x.support);

  // Diagnostics for iteration k are computed against the residual it saw.
  json iterations = json::array();
  Eigen::VectorXd residual = y;
  for (const auto& trace : result.iterations) {
    const auto diagnostics = analysis::iteration_diagnostics(A, x, trace, residual);
    json entry = to_json(trace);
    entry["diagnostics"] = to_json(diagnostics);
    iterations.push_back(std::move(entry));
    const auto coefficients = linalg::least_squares_on_support(A, y, trace.support);
    residual = y - A.submatrix(trace.support) * coefficients;
  }
  json payload{{"command", "analyze"},
               {"matrix", matrix_path},
               {"signal", signal_path},
               {"config", to_json(config)},
               {"exact_support_match", result.exact_support_match.value_or(false)},
               {"iterations", std::move(iterations)}};
  print_payload(payload);
  std::cerr << "analyze: " << result.iterations.size() << " iterations\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Greedy sparse recovery toolkit"};
  app.require_subcommand(1);

  // gen-matrix
  auto* gen_matrix = app.add_subcommand("gen-matrix", "Generate a sensing matrix");
  int gm_m = 0, gm_n = 0;
  double gm_corr = 0.0;
  std::uint64_t gm_seed = 0;
  std::string gm_out;
  gen_matrix->add_option("--m", gm_m, "Measurement count")->required();
  gen_matrix->add_option("--n", gm_n, "Ambient dimension")->required();
  gen_matrix->add_option("--corr-T", gm_corr,
                         "Column offset range T (0 = uncorrelated)")
      ->capture_default_str();
  gen_matrix->add_option("--seed", gm_seed, "RNG seed")->capture_default_str();
  gen_matrix->add_option("--out", gm_out, "Output CSV path")->required();

  // gen-signal
  auto* gen_signal = app.add_subcommand("gen-signal", "Generate a sparse signal");
  int gs_n = 0, gs_k = 0;
  std::uint64_t gs_seed = 0;
  bool gs_unit_signs = false;
  std::string gs_out;
  gen_signal->add_option("--n", gs_n, "Ambient dimension")->required();
  gen_signal->add_option("--k", gs_k, "Sparsity level")->required();
  gen_signal->add_option("--seed", gs_seed, "RNG seed")->capture_default_str();
  gen_signal->add_flag("--unit-signs", gs_unit_signs,
                       "Unit-magnitude +/-1 nonzeros instead of Gaussian");
  gen_signal->add_option("--out", gs_out, "Output CSV path")->required();

  // recover
  auto* recover = app.add_subcommand("recover", "Run one recovery");
  std::string rc_matrix, rc_signal, rc_y, rc_json;
  AlgorithmFlags rc_flags;
  recover->add_option("--matrix", rc_matrix, "Matrix CSV")->required();
  recover->add_option("--signal", rc_signal, "Signal CSV (measurements = Phi x)");
  recover->add_option("--y", rc_y, "Measurement vector file (one value per line)");
  add_algorithm_flags(recover, rc_flags);
  recover->add_option("--json", rc_json, "Also write the JSON payload here");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run a Monte-Carlo sweep");
  std::string sw_spec, sw_out, sw_json;
  int sw_threads = 0;
  sweep->add_option("--spec", sw_spec, "Sweep spec file (key = value lines)")
      ->required();
  sweep->add_option("--out", sw_out, "Output CSV path")->required();
  sweep->add_option("--json", sw_json, "Also write records as JSON here");
  sweep->add_option("--threads", sw_threads,
                    "Override the spec's worker thread count")
      ->capture_default_str();

  // ric
  auto* ric = app.add_subcommand("ric", "Restricted isometry constant");
  std::string ric_matrix;
  int ric_order = 0, ric_samples = 0;
  std::uint64_t ric_seed = 0;
  std::int64_t ric_budget = 1'000'000;
  ric->add_option("--matrix", ric_matrix, "Matrix CSV")->required();
  ric->add_option("--order", ric_order, "Constant order k")->required();
  ric->add_option("--samples", ric_samples,
                  "Random supports for a sampled lower bound (0 = exact)")
      ->capture_default_str();
  ric->add_option("--seed", ric_seed, "Sampling seed")->capture_default_str();
  ric->add_option("--budget", ric_budget, "Enumeration budget for exact mode")
      ->capture_default_str();

  // check
  auto* check = app.add_subcommand("check", "Numeric lemma and theorem checks");
  bool ck_lemmas = false, ck_thm1 = false, ck_thm2 = false;
  std::uint64_t ck_seed = 1;
  int ck_trials = 25;
  check->add_flag("--lemmas", ck_lemmas, "Isometry-toolbox lemma bounds");
  check->add_flag("--theorem1", ck_thm1, "Noiseless recovery guarantee");
  check->add_flag("--theorem2", ck_thm2, "Noisy recovery guarantee");
  check->add_option("--seed", ck_seed, "Instance stream seed")->capture_default_str();
  check->add_option("--trials", ck_trials, "Instances (or matrices for --lemmas)")
      ->capture_default_str();

  // analyze
  auto* analyze = app.add_subcommand(
      "analyze", "Per-iteration recovery diagnostics against ground truth");
  std::string an_matrix, an_signal;
  AlgorithmFlags an_flags;
  analyze->add_option("--matrix", an_matrix, "Matrix CSV")->required();
  analyze->add_option("--signal", an_signal, "Ground-truth signal CSV")->required();
  add_algorithm_flags(analyze, an_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen_matrix->parsed()) {
      return run_gen_matrix(gm_m, gm_n, gm_corr, gm_seed, gm_out);
    }
    if (gen_signal->parsed()) {
      return run_gen_signal(gs_n, gs_k, gs_seed, gs_unit_signs, gs_out);
    }
    if (recover->parsed()) {
      if (rc_signal.empty() == rc_y.empty()) {
        std::cerr << "recover: pass exactly one of --signal or --y\n";
        return 2;
      }
      return run_recover(rc_matrix, rc_signal, rc_y, rc_flags, rc_json);
    }
    if (sweep->parsed()) {
      return run_sweep(sw_spec, sw_out, sw_json, sw_threads);
    }
    if (ric->parsed()) {
      return run_ric(ric_matrix, ric_order, ric_samples, ric_seed, ric_budget);
    }
    if (check->parsed()) {
      return run_check(ck_lemmas, ck_thm1, ck_thm2, ck_seed, ck_trials);
    }
    if (analyze->parsed()) {
      return run_analyze(an_matrix, an_signal, an_flags);
    }
  } catch (const Error& e) {
    std::cerr << "error [" << e.kind() << "]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
