#include "pursuit/json.hpp"

namespace pursuit {

using nlohmann::json;

json to_json(const IndexSet& s) { return json(s.indices()); }

json to_json(const greedy::GreedyConfig& config) {
  return json{{"algorithm", config.name()},
              {"params",
               {{"K", config.K},
                {"N", config.N},
                {"L", config.L},
                {"epsilon", config.epsilon},
                {"max_iterations", config.effective_max_iterations()}}}};
}

json to_json(const greedy::IterationTrace& trace) {
  return json{{"k", trace.k},
              {"preselected", to_json(trace.preselected)},
              {"identified", to_json(trace.identified)},
              {"support", to_json(trace.support)},
              {"residual_norm", trace.residual_norm}};
}

json to_json(const greedy::RecoveryResult& result,
             const greedy::GreedyConfig& config) {
  json out = to_json(config);
  json iterations = json::array();
  for (const auto& trace : result.iterations) {
    iterations.push_back(to_json(trace));
  }
  out["iterations"] = std::move(iterations);
  out["support_hat"] = to_json(result.support_hat);
  json x_hat = json::object();
  for (int j = 0; j < result.support_hat.size(); ++j) {
    x_hat[std::to_string(result.support_hat[j])] = result.x_hat.values(j);
  }
  out["x_hat"] = std::move(x_hat);
  out["converged"] = result.converged;
  if (result.exact_support_match.has_value()) {
    out["exact_support_match"] = *result.exact_support_match;
  }
  return out;
}

json to_json(const analysis::RicEstimate& estimate) {
  return json{{"order", estimate.order},
              {"delta", estimate.delta},
              {"method", estimate.method == analysis::RicMethod::Exact
                             ? "exact"
                             : "lower_bound_sampled"},
              {"supports_examined", estimate.supports_examined}};
}

json to_json(const analysis::ProofDiagnostics& d) {
  return json{{"k", d.k},           {"alpha_N", d.alpha_N},
              {"beta_1", d.beta_1}, {"u_1", d.u_1},
              {"v_L", d.v_L},       {"c_k", d.c_k},
              {"m_k", d.m_k},       {"x_prime_norm", d.x_prime_norm}};
}

json to_json(const analysis::LemmaReport& report) {
  return json{{"deltas", report.deltas},
              {"trials", report.trials},
              {"checks", report.checks},
              {"violations", report.violations},
              {"worst_slack", report.worst_slack}};
}

json to_json(const analysis::TheoremCheckReport& report) {
  json instances = json::array();
  for (const auto& inst : report.instances) {
    instances.push_back(json{{"dictionary_seed", inst.dictionary_seed},
                             {"N", inst.N},
                             {"delta", inst.delta},
                             {"kappa", inst.kappa},
                             {"snr_used", inst.snr_used},
                             {"recovered", inst.recovered}});
  }
  return json{{"examined", report.examined},
              {"eligible", report.eligible},
              {"recovered", report.recovered},
              {"counterexamples", report.counterexamples()},
              {"instances", std::move(instances)}};
}

json to_json(const bench::ExperimentRecord& record) {
  return json{{"algorithm", record.config.name()},
              {"m", record.m},
              {"n", record.n},
              {"K", record.K},
              {"N", record.config.preselects() ? record.config.N : 0},
              {"L", record.config.identifies() ? record.config.L : 0},
              {"T", record.dictionary_correlation},
              {"trials", record.trials},
              {"successes", record.successes},
              {"recovery_probability", record.recovery_probability},
              {"mean_iterations", record.mean_iterations},
              {"mean_runtime_us_per_iter", record.mean_runtime_us_per_iteration},
              {"failures_by_cause", record.failures_by_cause}};
}

json to_json(const std::vector<bench::ExperimentRecord>& records) {
  json out = json::array();
  for (const auto& r : records) out.push_back(to_json(r));
  return out;
}

}  // namespace pursuit
