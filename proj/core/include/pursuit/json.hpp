#pragma once

#include <json.hpp>
#include <vector>

#include "pursuit/analysis.hpp"
#include "pursuit/experiment.hpp"
#include "pursuit/greedy.hpp"
#include "pursuit/index_set.hpp"

namespace pursuit {

nlohmann::json to_json(const IndexSet& s);
nlohmann::json to_json(const greedy::GreedyConfig& config);
nlohmann::json to_json(const greedy::IterationTrace& trace);

/// Full recovery payload:
/// {algorithm, params, iterations: [...], support_hat, x_hat: {index: value},
///  converged, exact_support_match (when ground truth was supplied)}.
nlohmann::json to_json(const greedy::RecoveryResult& result,
                       const greedy::GreedyConfig& config);

nlohmann::json to_json(const analysis::RicEstimate& estimate);
nlohmann::json to_json(const analysis::ProofDiagnostics& diagnostics);
nlohmann::json to_json(const analysis::LemmaReport& report);
nlohmann::json to_json(const analysis::TheoremCheckReport& report);
nlohmann::json to_json(const bench::ExperimentRecord& record);
nlohmann::json to_json(const std::vector<bench::ExperimentRecord>& records);

}  // namespace pursuit
