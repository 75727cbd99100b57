// qharmony command-line interface: builds the preference matrix, runs the
// linear-system stage and harmonic oracle, samples and chains blocks, and
// drives the analysis experiments.  Exit codes: 0 success, 2 configuration
// error, 3 numerical failure.

#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qharmony/analysis.hpp"
#include "qharmony/config.hpp"
#include "qharmony/errors.hpp"
#include "qharmony/experiments.hpp"
#include "qharmony/io.hpp"

namespace {

using nlohmann::json;
using namespace qharmony;

struct CommonArgs {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::string out_dir;
  std::vector<std::string> overrides;  // key=value
  std::optional<int> K;
  std::optional<long> n_samples;
  std::optional<int> n_blocks;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Config file (key=value lines)");
  cmd->add_option("--seed", args.seed, "Seed override (wins over config and QHARMONY_SEED)");
  cmd->add_option("--out", args.out_dir, "Output directory");
  cmd->add_option("--set", args.overrides, "Extra key=value override (repeatable)");
}

RunConfig load_config(const CommonArgs& args) {
  RunConfig config;
  if (!args.config_path.empty()) config = parse_config_file(args.config_path);
  for (const std::string& entry : args.overrides) {
    const size_t eq = entry.find('=');
    if (eq == std::string::npos)
      throw ConfigError("--set expects key=value, got '" + entry + "'");
    apply_config_entry(config, entry.substr(0, eq), entry.substr(eq + 1));
  }
  if (!args.out_dir.empty()) config.out_dir = args.out_dir;
  if (args.seed) config.seed = args.seed;
  if (args.K) config.K = *args.K;
  if (args.n_samples) config.n_samples = *args.n_samples;
  if (args.n_blocks) config.n_blocks = *args.n_blocks;
  validate(config);
  return config;
}

std::string out_path(const RunConfig& config, const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + config.out_dir + "'");
  return (std::filesystem::path(config.out_dir) / name).string();
}

uint64_t seed_or_entropy(const RunConfig& config) {
  if (auto s = resolve_seed(config)) return *s;
  std::random_device rd;
  return (static_cast<uint64_t>(rd()) << 32) ^ rd();
}

json block_stats_json(const BlockStats& stats, const PairTable& pairs,
                      const std::string& sampler) {
  json top = json::array();
  for (const TopSequence& t : stats.top_sequences) {
    const NotePair& pair = pairs.at(t.pair_index);
    top.push_back({{"n1", note_name(pair.first)},
                   {"n2", note_name(pair.second)},
                   {"c1", degree_name(t.c1)},
                   {"c2", degree_name(t.c2)},
                   {"count", t.count},
                   {"share", t.share}});
  }
  return {{"kind", "block_stats"},
          {"sampler", sampler},
          {"n_samples", stats.n_samples},
          {"kl_pair_vs_uniform", stats.kl_pair_vs_uniform},
          {"chi2_pair_vs_uniform", stats.chi2_pair_vs_uniform},
          {"chi2_p_value", stats.chi2_p_value},
          {"v_to_i_rate", stats.v_to_i_rate},
          {"tonic_ending_rate", stats.tonic_ending_rate},
          {"stepwise_rate", stats.stepwise_rate},
          {"interval_shares", stats.interval_shares},
          {"nonzero_states", stats.nonzero_states},
          {"top_sequences", top}};
}

json harmony_json(const HarmonyReport& report) {
  json j = {{"kind", "harmony"},
            {"n_outputs", report.n_outputs},
            {"chord_tone_rate_n1", report.chord_tone_rate_n1},
            {"chord_tone_rate_n2", report.chord_tone_rate_n2},
            {"both_ct_rate", report.both_ct_rate},
            {"leap_nct_rate", report.leap_nct_rate},
            {"rating_counts", report.rating_counts},
            {"strong_or_ok_rate", report.strong_or_ok_rate}};
  if (report.tendency_resolution_rate)
    j["tendency_resolution_rate"] = *report.tendency_resolution_rate;
  else
    j["tendency_resolution_rate"] = nullptr;
  return j;
}

int cmd_matrix(const CommonArgs& args) {
  const RunConfig config = load_config(args);
  const PreferenceMatrix matrix =
      build_matrix(notes_from(config), scheme_from(config), kk_from(config));
  const SpectralSummary spectral = spectral_summary(matrix);
  io::write_matrix_csv(out_path(config, "matrix.csv"), matrix);
  const json j = {{"kind", "spectral"},
                  {"scheme", config.scheme},
                  {"dim_active", matrix.dim_active},
                  {"dim_padded", matrix.dim_padded},
                  {"lambda_min", spectral.lambda_min},
                  {"lambda_max", spectral.lambda_max},
                  {"kappa", spectral.kappa},
                  {"stable_rank", spectral.stable_rank},
                  {"shift_applied", matrix.shift_applied}};
  io::write_json(out_path(config, "spectral.json"), j);
  std::cout << render_report_table(j);
  return 0;
}

int cmd_solve(const CommonArgs& args) {
  const RunConfig config = load_config(args);
  const PreferenceMatrix matrix =
      build_matrix(notes_from(config), scheme_from(config), kk_from(config));
  std::optional<BiasContext> bias;
  if (!config.context_note.empty()) bias = BiasContext{note_from_string(config.context_note)};
  RhsVector b = build_b(matrix.pairs, matrix.dim_padded, bias);
  HhlResult hhl = hhl_solve(matrix, b, hhl_mode_from(config));
  if (config.noise_alpha > 0.0) hhl = apply_depolarizing(hhl, config.noise_alpha);
  io::write_distribution_csv(out_path(config, "p_hhl.csv"), hhl.p, matrix.pairs);

  const int n = matrix.pairs.size();
  const auto shares = interval_shares(hhl.p, matrix.pairs);
  std::array<int, 4> category_counts{};
  for (int i = 0; i < n; ++i)
    ++category_counts[static_cast<int>(matrix.pairs.at(i).category())];
  json interval_table = json::array();
  for (int c = 0; c < 4; ++c) {
    const double uniform = static_cast<double>(category_counts[c]) / n;
    interval_table.push_back({{"pairs", category_counts[c]},
                              {"share", shares[c]},
                              {"uniform", uniform},
                              {"ratio", uniform > 0 ? shares[c] / uniform : 0.0}});
  }
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&hhl](int a, int b) { return hhl.p(a) > hhl.p(b); });
  json top = json::array();
  for (int t = 0; t < 10 && t < n; ++t) {
    const NotePair& pair = matrix.pairs.at(order[t]);
    top.push_back({{"n1", note_name(pair.first)},
                   {"n2", note_name(pair.second)},
                   {"p", hhl.p(order[t])}});
  }
  const Eigen::VectorXd uniform = Eigen::VectorXd::Constant(n, 1.0 / n);
  const json j = {{"kind", "solve"},
                  {"mode", config.hhl_mode},
                  {"noise_alpha", config.noise_alpha},
                  {"ps_weight", hhl.ps_weight},
                  {"kl_pair_uniform", kl_divergence(hhl.p, uniform)},
                  {"interval_table", interval_table},
                  {"top_pairs", top}};
  io::write_json(out_path(config, "solve.json"), j);
  std::cout << render_report_table(j);
  return 0;
}

int cmd_generate(const CommonArgs& args, bool emit_samples, bool emit_fits) {
  RunConfig config = load_config(args);
  const uint64_t seed = seed_or_entropy(config);
  const Pipeline pipeline = pipeline_from(config);
  const JointDistribution joint = pipeline.joint(context_from(config), variant_from(config));
  io::write_joint_csv(out_path(config, "joint.csv"), joint, pipeline.pairs());
  if (emit_fits) io::write_fit_table_csv(out_path(config, "fit_table.csv"), pipeline.fits());

  Rng rng(seed, 0);
  SampleCounts counts;
  const auto samples = sample_block(joint, rng, config.n_samples, &counts);
  if (emit_samples)
    io::write_samples_csv(out_path(config, "samples.csv"), samples, pipeline.pairs());

  json j = block_stats_json(block_stats(counts, pipeline.pairs()), pipeline.pairs(), "coherent");
  j["seed"] = seed;
  j["joint_ps_weight"] = joint.joint_ps_weight;
  io::write_json(out_path(config, "stats.json"), j);
  std::cout << render_report_table(j);
  return 0;
}

int cmd_baseline(const CommonArgs& args, bool emit_samples) {
  RunConfig config = load_config(args);
  const uint64_t seed = seed_or_entropy(config);
  const Pipeline pipeline = pipeline_from(config);

  Rng rng(seed, 0);
  SampleCounts counts;
  const auto samples = classical_baseline(pipeline.base_result(), pipeline.pairs(),
                                          pipeline.grammar(), pipeline.fits(), rng,
                                          config.n_samples, &counts);
  if (emit_samples)
    io::write_samples_csv(out_path(config, "baseline_samples.csv"), samples, pipeline.pairs());

  json j = block_stats_json(block_stats(counts, pipeline.pairs()), pipeline.pairs(), "classical");
  j["seed"] = seed;
  io::write_json(out_path(config, "baseline_stats.json"), j);
  std::cout << render_report_table(j);
  return 0;
}

int cmd_chain(const CommonArgs& args) {
  RunConfig config = load_config(args);
  const uint64_t seed = seed_or_entropy(config);
  const Pipeline pipeline = pipeline_from(config);
  Rng rng(seed, 0);
  const ChainResult chain = run_chain(pipeline, config.n_blocks, rng, variant_from(config));
  io::write_events_csv(out_path(config, "events.csv"), chain, pipeline.pairs());

  json blocks = json::array();
  for (size_t k = 0; k < chain.blocks.size(); ++k) {
    const BlockSample& b = chain.blocks[k];
    const NotePair& pair = pipeline.pairs().at(b.pair_index);
    blocks.push_back({{"n1", note_name(pair.first)},
                      {"c1", degree_name(b.c1)},
                      {"n2", note_name(pair.second)},
                      {"c2", degree_name(b.c2)},
                      {"joint_ps", chain.per_block_ps[k]}});
  }
  const json j = {{"kind", "chain"},
                  {"seed", seed},
                  {"n_blocks", config.n_blocks},
                  {"variant", config.variant},
                  {"K", config.K},
                  {"blocks", blocks},
                  {"junction_valid", chain.junction_valid},
                  {"per_block_ps", chain.per_block_ps},
                  {"compound_ps", chain.compound_ps},
                  {"compliance", chord_tone_compliance(chain, pipeline.pairs())}};
  io::write_json(out_path(config, "chain.json"), j);
  std::cout << render_report_table(j);
  return 0;
}

int cmd_validate(const CommonArgs& args, const std::string& input, const std::string& format) {
  const RunConfig config = load_config(args);
  std::vector<Phrase> phrases;
  if (format == "events") {
    const auto events = io::read_events_csv(input);
    Phrase phrase;
    for (const auto& e : events) phrase.push_back({Note{e.midi}, e.chord});
    phrases.push_back(std::move(phrase));
  } else if (format == "samples") {
    for (const auto& row : io::read_samples_csv(input)) {
      phrases.push_back({{Note{row.n1_midi}, row.c1}, {Note{row.n2_midi}, row.c2}});
    }
  } else {
    throw ConfigError("validate: format must be events or samples");
  }
  const json j = harmony_json(harmony_report(phrases, iii_function_from(config)));
  io::write_json(out_path(config, "harmony.json"), j);
  const std::string table = render_report_table(j);
  io::write_text(out_path(config, "harmony.txt"), table);
  std::cout << table;
  return 0;
}

int cmd_sweep(const CommonArgs& args, const std::string& kind) {
  RunConfig config = load_config(args);
  const json j = run_experiment(kind, config, resolve_seed(config));
  io::write_json(out_path(config, kind + ".json"), j);
  const std::string table = render_report_table(j);
  io::write_text(out_path(config, kind + ".txt"), table);
  std::cout << table;
  return 0;
}

int cmd_gatecost(const CommonArgs& args, int max_qubits) {
  const RunConfig config = load_config(args);
  if (max_qubits < 3) throw ConfigError("gatecost: --max-qubits must be >= 3");
  json rows = json::array();
  for (int n = 3; n <= max_qubits; ++n) {
    rows.push_back({{"n_chord_qubits", n},
                    {"vocab", 1 << n},
                    {"fourier", gate_cost(OracleKind::kFourier, n)},
                    {"lookup", gate_cost(OracleKind::kLookup, n)}});
  }
  const json j = {{"kind", "gate_cost"},
                  {"rows", rows},
                  {"crossover_vocab", gate_cost_crossover_vocab()}};
  io::write_json(out_path(config, "gatecost.json"), j);
  const std::string table = render_report_table(j);
  io::write_text(out_path(config, "gatecost.txt"), table);
  std::cout << table;
  return 0;
}

int cmd_report(const CommonArgs& args) {
  const RunConfig config = load_config(args);
  static const char* kArtifacts[] = {
      "spectral.json",   "solve.json",          "stats.json",
      "baseline_stats.json", "chain.json",      "harmony.json",
      "sensitivity.json", "kappa_mc.json",      "stable_rank_sweep.json",
      "noise_sweep.json", "ablation.json",      "grammar_coverage.json",
      "k_sweep.json",     "gatecost.json"};
  std::string report;
  for (const char* name : kArtifacts) {
    const auto path = std::filesystem::path(config.out_dir) / name;
    if (!std::filesystem::exists(path)) continue;
    report += render_report_table(io::read_json(path.string()));
    report += "\n";
  }
  if (report.empty()) {
    std::cout << "no stored artifacts under '" << config.out_dir << "'\n";
    return 0;
  }
  io::write_text(out_path(config, "report.txt"), report);
  std::cout << report;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coherent linear-solver music pipeline with a spectral harmonic oracle"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string validate_input, validate_format = "events";
  std::string sweep_kind = "grammar_coverage";
  int max_qubits = 8;
  bool emit_samples = false;
  bool emit_fits = false;

  auto* matrix = app.add_subcommand("matrix", "Build the preference matrix and report spectra");
  add_common(matrix, args);
  auto* solve = app.add_subcommand("solve", "Run the linear-system stage");
  add_common(solve, args);
  auto* generate = app.add_subcommand("generate", "Sample 2/2 blocks from the joint law");
  add_common(generate, args);
  generate->add_flag("--emit-samples", emit_samples, "Also write samples.csv");
  generate->add_flag("--emit-fits", emit_fits, "Also write fit_table.csv");
  generate->add_option("--n", args.n_samples, "Sample count");
  generate->add_option("--K", args.K, "Spectral truncation order");
  auto* baseline = app.add_subcommand("baseline", "Sample the classical two-stage baseline");
  add_common(baseline, args);
  baseline->add_flag("--emit-samples", emit_samples, "Also write baseline_samples.csv");
  baseline->add_option("--n", args.n_samples, "Sample count");
  baseline->add_option("--K", args.K, "Spectral truncation order");
  auto* chain = app.add_subcommand("chain", "Run a conditioned block chain");
  add_common(chain, args);
  chain->add_option("--blocks", args.n_blocks, "Chain length in blocks");
  chain->add_option("--K", args.K, "Spectral truncation order");
  auto* validate_cmd = app.add_subcommand("validate", "Harmony-check an events or samples file");
  add_common(validate_cmd, args);
  validate_cmd->add_option("--input", validate_input, "CSV file to validate")->required();
  validate_cmd->add_option("--format", validate_format, "events | samples");
  auto* sweep = app.add_subcommand("sweep", "Run an experiment battery");
  add_common(sweep, args);
  sweep->add_option("--kind", sweep_kind,
                    "sensitivity | kappa_mc | stable_rank_sweep | noise_sweep | ablation | "
                    "grammar_coverage | k_sweep");
  auto* gatecost = app.add_subcommand("gatecost", "Print the oracle gate-cost model");
  add_common(gatecost, args);
  gatecost->add_option("--max-qubits", max_qubits, "Largest chord-register size");
  auto* report = app.add_subcommand("report", "Render stored artifacts as text tables");
  add_common(report, args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (matrix->parsed()) return cmd_matrix(args);
    if (solve->parsed()) return cmd_solve(args);
    if (generate->parsed()) return cmd_generate(args, emit_samples, emit_fits);
    if (baseline->parsed()) return cmd_baseline(args, emit_samples);
    if (chain->parsed()) return cmd_chain(args);
    if (validate_cmd->parsed()) return cmd_validate(args, validate_input, validate_format);
    if (sweep->parsed()) return cmd_sweep(args, sweep_kind);
    if (gatecost->parsed()) return cmd_gatecost(args, max_qubits);
    if (report->parsed()) return cmd_report(args);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
