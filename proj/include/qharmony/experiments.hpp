#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "qharmony/config.hpp"

namespace qharmony {

/// Run one experiment battery and return its JSON report.
///
/// Kinds: sensitivity, kappa_mc, stable_rank_sweep, noise_sweep, ablation,
/// grammar_coverage, k_sweep.  A provided seed makes every draw reproducible
/// (per-step streams are derived from it); without one, trial seeds come from
/// entropy and are logged in the report so any run can be replayed.
nlohmann::json run_experiment(const std::string& kind, const RunConfig& config,
                              std::optional<uint64_t> seed);

/// Aligned-text rendering of an experiment or statistics report.
std::string render_report_table(const nlohmann::json& report);

}  // namespace qharmony
