#include "qharmony/experiments.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qharmony/analysis.hpp"
#include "qharmony/errors.hpp"

namespace qharmony {

namespace {

using nlohmann::json;

uint64_t entropy_seed() {
  std::random_device rd;
  return (static_cast<uint64_t>(rd()) << 32) ^ rd();
}

uint64_t trial_seed(std::optional<uint64_t> master, uint64_t stream, json& log) {
  uint64_t s;
  if (master) {
    s = Rng(*master, stream).next_u64();
  } else {
    s = entropy_seed();
  }
  log.push_back(s);
  return s;
}

json sensitivity(const RunConfig& config) {
  json rows = json::array();
  for (SchemeId id :
       {SchemeId::kBaseline, SchemeId::kHalf, SchemeId::kUnisonTritoneOnly}) {
    RunConfig variant = config;
    variant.scheme = std::string(to_string(id));
    const PreferenceMatrix matrix =
        build_matrix(notes_from(variant), scheme_from(variant), kk_from(variant));
    const SpectralSummary spectral = spectral_summary(matrix);
    const HhlResult hhl =
        hhl_solve(matrix, build_b(matrix.pairs, matrix.dim_padded), hhl_mode_from(variant));
    const Eigen::VectorXd uniform =
        Eigen::VectorXd::Constant(hhl.p.size(), 1.0 / static_cast<double>(hhl.p.size()));

    std::vector<int> order(hhl.p.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(),
                     [&hhl](int a, int b) { return hhl.p(a) > hhl.p(b); });
    json top = json::array();
    for (int t = 0; t < 5 && t < static_cast<int>(order.size()); ++t) {
      const NotePair& pair = matrix.pairs.at(order[t]);
      top.push_back({{"n1", note_name(pair.first)},
                     {"n2", note_name(pair.second)},
                     {"p", hhl.p(order[t])}});
    }
    rows.push_back({{"scheme", to_string(id)},
                    {"kappa", spectral.kappa},
                    {"lambda_min", spectral.lambda_min},
                    {"lambda_max", spectral.lambda_max},
                    {"stable_rank", spectral.stable_rank},
                    {"shift_applied", matrix.shift_applied},
                    {"kl_pair_uniform", kl_divergence(hhl.p, uniform)},
                    {"ps_weight", hhl.ps_weight},
                    {"top_pairs", top}});
  }
  return {{"kind", "sensitivity"}, {"rows", rows}};
}

json kappa_mc(const RunConfig& config, std::optional<uint64_t> seed) {
  const uint64_t used_seed = seed ? *seed : entropy_seed();
  KappaSweepRanges ranges;
  ranges.base_min = config.mc_base_min;
  ranges.base_max = config.mc_base_max;
  ranges.prox_scale_min = config.mc_prox_min;
  ranges.prox_scale_max = config.mc_prox_max;
  ranges.kk_weight_min = config.mc_kk_min;
  ranges.kk_weight_max = config.mc_kk_max;
  const KappaSweepReport report = kappa_mc_sweep(ranges, config.mc_samples, used_seed);
  return {{"kind", "kappa_mc"},
          {"seed", used_seed},
          {"n_samples", report.n_samples},
          {"ranges",
           {{"base", {ranges.base_min, ranges.base_max}},
            {"prox_scale", {ranges.prox_scale_min, ranges.prox_scale_max}},
            {"kk_weight", {ranges.kk_weight_min, ranges.kk_weight_max}}}},
          {"median_kappa", report.median_kappa},
          {"mean_kappa", report.mean_kappa},
          {"frac_below_20", report.frac_below_20},
          {"frac_above_100", report.frac_above_100},
          {"min_kappa", report.min_kappa},
          {"max_kappa", report.max_kappa}};
}

json stable_rank_sweep(const RunConfig& config) {
  const KKProfile kk = KKProfile::chromatic();
  const PenaltyScheme scheme = scheme_from(config);
  json rows = json::array();
  for (int n_notes : config.chromatic_sizes) {
    const PreferenceMatrix matrix = build_matrix(chromatic_note_set(n_notes), scheme, kk);
    const SpectralSummary spectral = spectral_summary(matrix);
    rows.push_back({{"notes", n_notes},
                    {"dim", matrix.dim_active},
                    {"stable_rank", spectral.stable_rank},
                    {"sr_over_n", spectral.stable_rank / matrix.dim_active},
                    {"kappa", spectral.kappa},
                    {"shift_applied", matrix.shift_applied}});
  }
  return {{"kind", "stable_rank_sweep"}, {"rows", rows}};
}

json noise_sweep(const RunConfig& config, std::optional<uint64_t> seed) {
  const uint64_t used_seed = seed ? *seed : entropy_seed();
  const Pipeline pipeline = pipeline_from(config);
  const HhlResult& ideal = pipeline.base_result();
  const int n_pairs = pipeline.pairs().size();
  const Eigen::VectorXd uniform = Eigen::VectorXd::Constant(n_pairs, 1.0 / n_pairs);

  const JointDistribution ideal_joint = pipeline.joint();
  const Eigen::VectorXd ideal_chord = ideal_joint.probs.colwise().sum();

  json rows = json::array();
  uint64_t stream = 0;
  for (double alpha : config.noise_grid) {
    const HhlResult noisy = apply_depolarizing(ideal, alpha);

    // Sampled pair-level statistics at this noise level.
    Rng rng(used_seed, ++stream);
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(n_pairs);
    std::vector<double> cdf(n_pairs);
    double acc = 0.0;
    for (int i = 0; i < n_pairs; ++i) cdf[i] = (acc += noisy.p(i));
    for (long k = 0; k < config.n_samples; ++k) {
      const double u = rng.next_double() * acc;
      const int i = static_cast<int>(
          std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      counts(std::min(i, n_pairs - 1)) += 1.0;
    }
    const ChiSquare vs_uniform = chi_square_uniformity(counts);
    const ChiSquare vs_ideal = chi_square_gof(counts, ideal.p);

    // Chord-register marginal under the noisy pair distribution.
    const JointDistribution noisy_joint =
        joint_distribution(noisy, build_chord_vectors(pipeline.pairs(), pipeline.grammar(),
                                                      pipeline.fits()));
    const Eigen::VectorXd noisy_chord = noisy_joint.probs.colwise().sum();

    rows.push_back({{"alpha", alpha},
                    {"fidelity", 1.0 - alpha},
                    {"ps", noisy.ps_weight},
                    {"kl_pair_uniform", kl_divergence(noisy.p, uniform)},
                    {"kl_chord_vs_ideal", kl_divergence(noisy_chord, ideal_chord)},
                    {"chi2_vs_ideal", vs_ideal.statistic},
                    {"chi2_vs_ideal_p", vs_ideal.p_value},
                    {"chi2_vs_uniform", vs_uniform.statistic},
                    {"chi2_vs_uniform_p", vs_uniform.p_value}});
  }
  return {{"kind", "noise_sweep"},
          {"seed", used_seed},
          {"n_samples", config.n_samples},
          {"rows", rows}};
}

json ablation(const RunConfig& config, std::optional<uint64_t> seed) {
  const uint64_t used_seed = seed ? *seed : entropy_seed();
  const Pipeline pipeline = pipeline_from(config);
  ChainContext context;
  try {
    context = ChainContext{note_from_string(config.ablation_note),
                           degree_from_name(config.ablation_chord)};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  struct Row {
    AblationVariant variant;
    SampleCounts counts;
    double joint_ps;
  };
  std::vector<Row> measured;
  uint64_t stream = 0;
  for (AblationVariant variant :
       {AblationVariant::kFull, AblationVariant::kMelodyOnly, AblationVariant::kHarmonyOnly,
        AblationVariant::kUnconditioned}) {
    const JointDistribution joint = pipeline.joint(context, variant);
    Rng rng(used_seed, ++stream);
    SampleCounts counts;
    sample_block(joint, rng, config.ablation_samples, &counts);
    measured.push_back({variant, std::move(counts), joint.joint_ps_weight});
  }
  const SampleCounts& unconditioned = measured.back().counts;

  json rows = json::array();
  for (const Row& row : measured) {
    // Modal state with ties broken in canonical (pair, c1, c2) order.
    Eigen::Index mi = 0, mc = 0;
    int best = -1;
    for (Eigen::Index i = 0; i < row.counts.counts.rows(); ++i)
      for (Eigen::Index c = 0; c < row.counts.counts.cols(); ++c)
        if (row.counts.counts(i, c) > best) {
          best = row.counts.counts(i, c);
          mi = i;
          mc = c;
        }
    const NotePair& modal_pair = pipeline.pairs().at(static_cast<int>(mi));
    rows.push_back(
        {{"variant", to_string(row.variant)},
         {"top1_share",
          static_cast<double>(row.counts.counts(mi, mc)) / static_cast<double>(row.counts.total)},
         {"concentration_factor", concentration_factor(row.counts, unconditioned)},
         {"joint_ps", row.joint_ps},
         {"modal_state",
          {{"n1", note_name(modal_pair.first)},
           {"n2", note_name(modal_pair.second)},
           {"c1", degree_name(static_cast<Degree>(mc / 8))},
           {"c2", degree_name(static_cast<Degree>(mc % 8))}}}});
  }
  return {{"kind", "ablation"},
          {"seed", used_seed},
          {"n_samples", config.ablation_samples},
          {"context", {{"note", config.ablation_note}, {"chord", config.ablation_chord}}},
          {"rows", rows}};
}

json grammar_coverage(const RunConfig& config, std::optional<uint64_t> seed) {
  const uint64_t used_seed = seed ? *seed : entropy_seed();
  const Pipeline pipeline = pipeline_from(config);

  json rows = json::array();
  double successor_total = 0.0;
  uint64_t stream = 0;
  for (Degree context_chord : kAllDegrees) {
    // Hard-T restriction only; the melodic arm stays uniform so the grammar
    // property is isolated.
    const ChainContext context{pipeline.pairs().notes.front(), context_chord};
    const JointDistribution joint =
        pipeline.joint(context, AblationVariant::kHarmonyOnly);
    Rng rng(used_seed, ++stream);
    SampleCounts counts;
    sample_block(joint, rng, config.coverage_samples, &counts);

    const auto successors = pipeline.grammar().valid_successors(context_chord);
    successor_total += static_cast<double>(successors.size());

    std::array<long, 7> opening_counts{};
    long valid = 0;
    for (Eigen::Index i = 0; i < counts.counts.rows(); ++i)
      for (Eigen::Index c = 0; c < counts.counts.cols(); ++c) {
        const long n = counts.counts(i, c);
        if (n == 0) continue;
        const auto c1 = static_cast<Degree>(c / 8);
        opening_counts[static_cast<int>(c1)] += n;
        if (pipeline.grammar().allowed(context_chord, c1)) valid += n;
      }
    const int top_c1 = static_cast<int>(
        std::max_element(opening_counts.begin(), opening_counts.end()) - opening_counts.begin());

    json successor_names = json::array();
    for (Degree d : successors) successor_names.push_back(degree_name(d));
    rows.push_back({{"context", degree_name(context_chord)},
                    {"valid_successors", successor_names},
                    {"n_samples", config.coverage_samples},
                    {"share_valid", static_cast<double>(valid) /
                                        static_cast<double>(config.coverage_samples)},
                    {"top_c1", degree_name(static_cast<Degree>(top_c1))},
                    {"top_c1_valid",
                     pipeline.grammar().allowed(context_chord, static_cast<Degree>(top_c1))}});
  }
  return {{"kind", "grammar_coverage"},
          {"seed", used_seed},
          {"n_per_context", config.coverage_samples},
          {"avg_valid_successors", successor_total / kDegreeCount},
          {"rows", rows}};
}

json k_sweep(const RunConfig& config, std::optional<uint64_t> seed) {
  json rows = json::array();
  json all_trial_seeds = json::array();
  for (size_t ki = 0; ki < config.k_values.size(); ++ki) {
    const int K = config.k_values[ki];
    RunConfig per_k = config;
    per_k.K = K;
    const Pipeline pipeline = pipeline_from(per_k);

    // Flat grammar rates from an unconditioned sample batch.
    json flat;
    {
      uint64_t s = seed ? Rng(*seed, 9000 + ki).next_u64() : entropy_seed();
      all_trial_seeds.push_back(s);
      Rng rng(s, 0);
      SampleCounts counts;
      sample_block(pipeline.joint(), rng, config.k_sweep_samples, &counts);
      const BlockStats stats = block_stats(counts, pipeline.pairs());
      flat = {{"v_to_i_rate", stats.v_to_i_rate},
              {"tonic_ending_rate", stats.tonic_ending_rate},
              {"stepwise_rate", stats.stepwise_rate}};
    }

    json trials = json::array();
    std::vector<double> compliances;
    bool all_junctions = true;
    for (int t = 0; t < config.k_trials; ++t) {
      uint64_t s = trial_seed(seed, 100 * (ki + 1) + t, all_trial_seeds);
      Rng rng(s, 0);
      const ChainResult chain = run_chain(pipeline, config.n_blocks, rng);
      const double compliance = chord_tone_compliance(chain, pipeline.pairs());
      compliances.push_back(compliance);
      bool valid = true;
      for (bool j : chain.junction_valid) valid = valid && j;
      all_junctions = all_junctions && valid;
      trials.push_back({{"seed", s},
                        {"compliance", compliance},
                        {"junctions_valid", valid}});
    }
    double mean = 0.0;
    for (double c : compliances) mean += c;
    mean /= compliances.size();
    double var = 0.0;
    for (double c : compliances) var += (c - mean) * (c - mean);
    const double stddev =
        compliances.size() > 1 ? std::sqrt(var / (compliances.size() - 1)) : 0.0;

    rows.push_back({{"K", K},
                    {"flat", flat},
                    {"trials", trials},
                    {"compliance_mean", mean},
                    {"compliance_std", stddev},
                    {"compliance_min", *std::min_element(compliances.begin(), compliances.end())},
                    {"compliance_max", *std::max_element(compliances.begin(), compliances.end())},
                    {"all_junctions_valid", all_junctions}});
  }
  json report = {{"kind", "k_sweep"},
                 {"n_blocks", config.n_blocks},
                 {"n_trials", config.k_trials},
                 {"flat_samples", config.k_sweep_samples},
                 {"trial_seeds", all_trial_seeds},
                 {"rows", rows}};
  if (seed) report["seed"] = *seed;
  return report;
}

}  // namespace

json run_experiment(const std::string& kind, const RunConfig& config,
                    std::optional<uint64_t> seed) {
  if (kind == "sensitivity") return sensitivity(config);
  if (kind == "kappa_mc") return kappa_mc(config, seed);
  if (kind == "stable_rank_sweep") return stable_rank_sweep(config);
  if (kind == "noise_sweep") return noise_sweep(config, seed);
  if (kind == "ablation") return ablation(config, seed);
  if (kind == "grammar_coverage") return grammar_coverage(config, seed);
  if (kind == "k_sweep") return k_sweep(config, seed);
  throw ConfigError("unknown experiment kind '" + kind + "'");
}

}  // namespace qharmony
