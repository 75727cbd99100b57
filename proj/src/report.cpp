#include <cstdarg>
#include <cstdio>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "qharmony/experiments.hpp"

namespace qharmony {

namespace {

using nlohmann::json;

std::string fmt(const char* format, ...) {
  char buffer[256];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buffer, sizeof(buffer), format, args);
  va_end(args);
  return buffer;
}

std::string render_sensitivity(const json& r) {
  std::ostringstream out;
  out << "Penalty-scheme sensitivity\n";
  out << fmt("%-22s %8s %8s %10s %10s  %s\n", "scheme", "kappa", "KL(unif)", "ps_weight",
             "stable_rk", "top pairs");
  for (const auto& row : r.at("rows")) {
    std::string top;
    for (const auto& t : row.at("top_pairs"))
      top += t.at("n1").get<std::string>() + "," + t.at("n2").get<std::string>() + " ";
    out << fmt("%-22s %8.3f %8.4f %10.5f %10.2f  %s\n",
               row.at("scheme").get<std::string>().c_str(), row.at("kappa").get<double>(),
               row.at("kl_pair_uniform").get<double>(), row.at("ps_weight").get<double>(),
               row.at("stable_rank").get<double>(), top.c_str());
  }
  return out.str();
}

std::string render_kappa_mc(const json& r) {
  std::ostringstream out;
  out << "Monte-Carlo kappa sweep (" << r.at("n_samples").get<int>() << " samples)\n";
  out << fmt("  median %.2f   mean %.2f   range [%.2f, %.2f]\n",
             r.at("median_kappa").get<double>(), r.at("mean_kappa").get<double>(),
             r.at("min_kappa").get<double>(), r.at("max_kappa").get<double>());
  out << fmt("  kappa < 20: %.1f%%   kappa > 100: %.1f%%\n",
             100.0 * r.at("frac_below_20").get<double>(),
             100.0 * r.at("frac_above_100").get<double>());
  return out.str();
}

std::string render_stable_rank(const json& r) {
  std::ostringstream out;
  out << "Stable-rank sweep (chromatic scales)\n";
  out << fmt("%6s %6s %12s %8s %10s\n", "notes", "N", "stable_rank", "sr/N", "kappa");
  for (const auto& row : r.at("rows"))
    out << fmt("%6d %6d %12.2f %8.4f %10.1f\n", row.at("notes").get<int>(),
               row.at("dim").get<int>(), row.at("stable_rank").get<double>(),
               row.at("sr_over_n").get<double>(), row.at("kappa").get<double>());
  return out.str();
}

std::string render_noise(const json& r) {
  std::ostringstream out;
  out << "Depolarising-noise sweep (" << r.at("n_samples").get<long>() << " samples/level)\n";
  out << fmt("%6s %6s %8s %9s %10s %14s %14s\n", "alpha", "F", "PS", "KL_pair", "KL_chord",
             "chi2 vs ideal", "chi2 vs unif");
  for (const auto& row : r.at("rows"))
    out << fmt("%6.2f %6.2f %8.4f %9.4f %10.6f %14.1f %14.1f\n", row.at("alpha").get<double>(),
               row.at("fidelity").get<double>(), row.at("ps").get<double>(),
               row.at("kl_pair_uniform").get<double>(), row.at("kl_chord_vs_ideal").get<double>(),
               row.at("chi2_vs_ideal").get<double>(), row.at("chi2_vs_uniform").get<double>());
  return out.str();
}

std::string render_ablation(const json& r) {
  std::ostringstream out;
  out << "Conditioning ablation (context " << r.at("context").at("note").get<std::string>() << "/"
      << r.at("context").at("chord").get<std::string>() << ", "
      << r.at("n_samples").get<long>() << " samples)\n";
  out << fmt("%-16s %10s %8s %10s  %s\n", "variant", "top-1", "factor", "joint_ps", "modal state");
  for (const auto& row : r.at("rows")) {
    const auto& m = row.at("modal_state");
    out << fmt("%-16s %9.2f%% %7.1fx %10.5f  %s,%s / %s->%s\n",
               row.at("variant").get<std::string>().c_str(),
               100.0 * row.at("top1_share").get<double>(),
               row.at("concentration_factor").get<double>(), row.at("joint_ps").get<double>(),
               m.at("n1").get<std::string>().c_str(), m.at("n2").get<std::string>().c_str(),
               m.at("c1").get<std::string>().c_str(), m.at("c2").get<std::string>().c_str());
  }
  return out.str();
}

std::string render_coverage(const json& r) {
  std::ostringstream out;
  out << "Grammar coverage (" << r.at("n_per_context").get<long>() << " samples/context)\n";
  out << fmt("%-8s %-16s %-8s %-7s %s\n", "context", "successors", "top c1", "valid?",
             "% grammatically valid");
  for (const auto& row : r.at("rows")) {
    std::string successors;
    for (const auto& s : row.at("valid_successors"))
      successors += s.get<std::string>() + " ";
    out << fmt("%-8s %-16s %-8s %-7s %.1f\n", row.at("context").get<std::string>().c_str(),
               successors.c_str(), row.at("top_c1").get<std::string>().c_str(),
               row.at("top_c1_valid").get<bool>() ? "yes" : "NO",
               100.0 * row.at("share_valid").get<double>());
  }
  out << fmt("average valid successors per context: %.2f\n",
             r.at("avg_valid_successors").get<double>());
  return out.str();
}

std::string render_k_sweep(const json& r) {
  std::ostringstream out;
  out << "K sweep: chord-tone compliance over " << r.at("n_trials").get<int>()
      << " trials of " << r.at("n_blocks").get<int>() << "-block chains\n";
  out << fmt("%4s %8s %8s %14s %10s %8s %8s %8s\n", "K", "mean", "std", "range", "junctions",
             "V->I", "tonic", "stepwise");
  for (const auto& row : r.at("rows")) {
    const auto& flat = row.at("flat");
    out << fmt("%4d %7.1f%% %7.1f%% %6.1f%%-%5.1f%% %10s %7.1f%% %7.1f%% %7.1f%%\n",
               row.at("K").get<int>(), 100.0 * row.at("compliance_mean").get<double>(),
               100.0 * row.at("compliance_std").get<double>(),
               100.0 * row.at("compliance_min").get<double>(),
               100.0 * row.at("compliance_max").get<double>(),
               row.at("all_junctions_valid").get<bool>() ? "all valid" : "INVALID",
               100.0 * flat.at("v_to_i_rate").get<double>(),
               100.0 * flat.at("tonic_ending_rate").get<double>(),
               100.0 * flat.at("stepwise_rate").get<double>());
  }
  return out.str();
}

std::string render_gate_cost(const json& r) {
  std::ostringstream out;
  out << "Oracle gate cost per note pair\n";
  out << fmt("%8s %8s %14s %14s\n", "C_vocab", "qubits", "fourier", "lookup");
  for (const auto& row : r.at("rows"))
    out << fmt("%8d %8d %14lld %14lld\n", row.at("vocab").get<int>(),
               row.at("n_chord_qubits").get<int>(),
               static_cast<long long>(row.at("fourier").get<int64_t>()),
               static_cast<long long>(row.at("lookup").get<int64_t>()));
  out << fmt("model crossover at C_vocab ~ %.0f (reference figure: 192)\n",
             r.at("crossover_vocab").get<double>());
  return out.str();
}

std::string render_block_stats(const json& r) {
  std::ostringstream out;
  const std::string sampler = r.value("sampler", std::string("coherent"));
  out << "Block statistics (" << sampler << ", " << r.at("n_samples").get<long>()
      << " samples)\n";
  out << fmt("  KL(pair||uniform) %.4f   chi2(pair) %.1f   nonzero states %d\n",
             r.at("kl_pair_vs_uniform").get<double>(), r.at("chi2_pair_vs_uniform").get<double>(),
             r.at("nonzero_states").get<int>());
  out << fmt("  V->I %.2f%%   tonic endings %.2f%%   stepwise %.2f%%\n",
             100.0 * r.at("v_to_i_rate").get<double>(),
             100.0 * r.at("tonic_ending_rate").get<double>(),
             100.0 * r.at("stepwise_rate").get<double>());
  const auto& shares = r.at("interval_shares");
  out << fmt("  interval shares: unison %.1f%%  step %.1f%%  skip %.1f%%  leap %.1f%%\n",
             100.0 * shares.at(0).get<double>(), 100.0 * shares.at(1).get<double>(),
             100.0 * shares.at(2).get<double>(), 100.0 * shares.at(3).get<double>());
  out << "  top sequences:\n";
  for (const auto& t : r.at("top_sequences"))
    out << fmt("    %s,%s / %s->%s  %.2f%%\n", t.at("n1").get<std::string>().c_str(),
               t.at("n2").get<std::string>().c_str(), t.at("c1").get<std::string>().c_str(),
               t.at("c2").get<std::string>().c_str(), 100.0 * t.at("share").get<double>());
  return out.str();
}

std::string render_solve(const json& r) {
  std::ostringstream out;
  out << fmt("Linear-system stage (%s): ps_weight %.6f\n",
             r.at("mode").get<std::string>().c_str(), r.at("ps_weight").get<double>());
  out << fmt("%-10s %6s %8s %10s %8s\n", "category", "pairs", "share", "uniform", "ratio");
  static const char* kCats[4] = {"unison", "step", "skip", "leap"};
  for (int c = 0; c < 4; ++c) {
    const auto& row = r.at("interval_table").at(c);
    out << fmt("%-10s %6d %7.1f%% %9.1f%% %7.2fx\n", kCats[c], row.at("pairs").get<int>(),
               100.0 * row.at("share").get<double>(), 100.0 * row.at("uniform").get<double>(),
               row.at("ratio").get<double>());
  }
  out << "  top pairs:\n";
  for (const auto& t : r.at("top_pairs"))
    out << fmt("    %s,%s  p=%.4f\n", t.at("n1").get<std::string>().c_str(),
               t.at("n2").get<std::string>().c_str(), t.at("p").get<double>());
  return out.str();
}

std::string render_harmony(const json& r) {
  std::ostringstream out;
  out << "Rule-based harmony validation (" << r.at("n_outputs").get<long>() << " outputs)\n";
  out << fmt("  chord tones: n1 %.1f%%  n2 %.1f%%  both %.1f%%  leap NCTs %.2f%%\n",
             100.0 * r.at("chord_tone_rate_n1").get<double>(),
             100.0 * r.at("chord_tone_rate_n2").get<double>(),
             100.0 * r.at("both_ct_rate").get<double>(),
             100.0 * r.at("leap_nct_rate").get<double>());
  const auto& counts = r.at("rating_counts");
  out << fmt("  progressions: strong %ld  ok %ld  weak %ld  avoid %ld  (strong or ok %.1f%%)\n",
             counts.at(0).get<long>(), counts.at(1).get<long>(), counts.at(2).get<long>(),
             counts.at(3).get<long>(), 100.0 * r.at("strong_or_ok_rate").get<double>());
  if (r.contains("tendency_resolution_rate") && !r.at("tendency_resolution_rate").is_null())
    out << fmt("  leading-tone resolution rate: %.1f%%\n",
               100.0 * r.at("tendency_resolution_rate").get<double>());
  else
    out << "  leading-tone resolution rate: undefined (no qualifying events)\n";
  return out.str();
}

std::string render_chain(const json& r) {
  std::ostringstream out;
  out << "Chain (" << r.at("n_blocks").get<int>() << " blocks, variant "
      << r.at("variant").get<std::string>() << ")\n";
  int block = 1;
  for (const auto& b : r.at("blocks")) {
    out << fmt("  block %d: %s/%s  %s/%s", block, b.at("n1").get<std::string>().c_str(),
               b.at("c1").get<std::string>().c_str(), b.at("n2").get<std::string>().c_str(),
               b.at("c2").get<std::string>().c_str());
    out << fmt("   ps %.5f\n", b.at("joint_ps").get<double>());
    ++block;
  }
  std::string junctions;
  for (const auto& j : r.at("junction_valid")) junctions += j.get<bool>() ? "ok " : "BAD ";
  out << "  junctions: " << (junctions.empty() ? "none" : junctions) << "\n";
  out << fmt("  compound ps: %.3e   chord-tone compliance: %.1f%%\n",
             r.at("compound_ps").get<double>(), 100.0 * r.at("compliance").get<double>());
  return out.str();
}

std::string render_spectral(const json& r) {
  std::ostringstream out;
  out << fmt("Preference matrix (%s): %dx%d active, padded %d\n",
             r.at("scheme").get<std::string>().c_str(), r.at("dim_active").get<int>(),
             r.at("dim_active").get<int>(), r.at("dim_padded").get<int>());
  out << fmt("  lambda [%.4f, %.4f]   kappa %.4f   stable rank %.2f   shift %.4f\n",
             r.at("lambda_min").get<double>(), r.at("lambda_max").get<double>(),
             r.at("kappa").get<double>(), r.at("stable_rank").get<double>(),
             r.at("shift_applied").get<double>());
  return out.str();
}

}  // namespace

std::string render_report_table(const json& report) {
  const std::string kind = report.value("kind", std::string());
  if (kind == "sensitivity") return render_sensitivity(report);
  if (kind == "kappa_mc") return render_kappa_mc(report);
  if (kind == "stable_rank_sweep") return render_stable_rank(report);
  if (kind == "noise_sweep") return render_noise(report);
  if (kind == "ablation") return render_ablation(report);
  if (kind == "grammar_coverage") return render_coverage(report);
  if (kind == "k_sweep") return render_k_sweep(report);
  if (kind == "gate_cost") return render_gate_cost(report);
  if (kind == "block_stats") return render_block_stats(report);
  if (kind == "solve") return render_solve(report);
  if (kind == "harmony") return render_harmony(report);
  if (kind == "chain") return render_chain(report);
  if (kind == "spectral") return render_spectral(report);
  return "(no renderer for kind '" + kind + "')\n";
}

}  // namespace qharmony
