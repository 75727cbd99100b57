#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qharmony/analysis.hpp"
#include "qharmony/generator.hpp"
#include "qharmony/hhl.hpp"
#include "qharmony/music.hpp"

namespace qharmony {

/// Flat key=value run configuration.  Every field is reachable from a config
/// file; command-line flags override file values.
struct RunConfig {
  std::vector<int> notes = {59, 60, 62, 64, 65, 67, 69};
  std::string scheme = "baseline";
  std::optional<double> base, kk_weight, alpha_coupling, prox_scale;
  std::string kk_profile = "diatonic";  // diatonic | chromatic
  std::map<int, double> kk_overrides;   // pitch class -> stability
  std::map<std::string, double> grammar_overrides;  // "I>V" -> weight
  int K = 4;
  std::string hhl_mode = "exact";  // exact | binned
  int m_clock = 6;
  long n_samples = 10000;
  int n_blocks = 4;
  std::string variant = "full";
  double noise_alpha = 0.0;
  std::optional<uint64_t> seed;
  std::string out_dir = ".";
  std::string context_note;   // note name or MIDI number; empty = none
  std::string context_chord;  // degree name; empty = none
  std::string iii_function = "tonic";  // tonic | subdominant | dominant

  // Experiment grids.
  int mc_samples = 5000;
  double mc_base_min = 3.0, mc_base_max = 9.0;
  double mc_prox_min = 0.5, mc_prox_max = 1.5;
  double mc_kk_min = 0.75, mc_kk_max = 2.25;
  std::vector<int> chromatic_sizes = {5, 6, 8, 10, 12, 16, 20, 24, 28, 32, 36};
  std::vector<int> k_values = {4, 6, 8, 10};
  int k_trials = 10;
  long k_sweep_samples = 20000;
  std::vector<double> noise_grid = {0.0, 0.2, 0.5, 0.9, 1.0};
  long ablation_samples = 100000;
  std::string ablation_note = "C4";
  std::string ablation_chord = "V";
  long coverage_samples = 50000;
};

/// Parse a config file (lines of key=value, '#' comments, blank lines).
/// Unknown keys and malformed values raise ConfigError.
RunConfig parse_config_file(const std::string& path);

/// Apply one key=value assignment; shared by the file parser and --set flags.
void apply_config_entry(RunConfig& config, const std::string& key, const std::string& value);

/// Validate cross-field constraints (ranges, enum values).  Raises ConfigError.
void validate(const RunConfig& config);

// Materialised pieces.
std::vector<Note> notes_from(const RunConfig& config);
PenaltyScheme scheme_from(const RunConfig& config);
KKProfile kk_from(const RunConfig& config);
TransitionGrammar grammar_from(const RunConfig& config);
HhlMode hhl_mode_from(const RunConfig& config);
std::optional<ChainContext> context_from(const RunConfig& config);
AblationVariant variant_from(const RunConfig& config);
HarmonicFunction iii_function_from(const RunConfig& config);
Pipeline pipeline_from(const RunConfig& config);

/// Note from "C4"-style name or a plain MIDI number.
Note note_from_string(const std::string& text);

/// Seed precedence: explicit value (CLI flag) > config file > QHARMONY_SEED
/// environment variable > none (caller decides between entropy and default).
std::optional<uint64_t> resolve_seed(const RunConfig& config,
                                     std::optional<uint64_t> cli_seed = {});

}  // namespace qharmony
