#include "qharmony/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qharmony/errors.hpp"

namespace qharmony {

double kl_divergence(const Eigen::VectorXd& p, const Eigen::VectorXd& q) {
  if (p.size() != q.size()) throw std::invalid_argument("kl_divergence: size mismatch");
  double kl = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) <= 0.0) continue;
    if (q(i) <= 0.0) throw std::invalid_argument("kl_divergence: q vanishes on p's support");
    kl += p(i) * std::log(p(i) / q(i));
  }
  return kl;
}

namespace {

// Regularized upper incomplete gamma Q(a, x): series for x < a + 1,
// continued fraction otherwise.
double upper_gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::invalid_argument("upper_gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  const double log_gamma = std::lgamma(a);
  if (x < a + 1.0) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-15) break;
    }
    const double p = sum * std::exp(-x + a * std::log(x) - log_gamma);
    return 1.0 - p;
  }
  // Lentz continued fraction.
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-15) break;
  }
  return h * std::exp(-x + a * std::log(x) - log_gamma);
}

}  // namespace

double chi_square_p_value(double statistic, int dof) {
  if (dof < 1) throw std::invalid_argument("chi_square_p_value: dof must be >= 1");
  if (statistic <= 0.0) return 1.0;
  return upper_gamma_q(0.5 * dof, 0.5 * statistic);
}

ChiSquare chi_square_uniformity(const Eigen::VectorXd& counts) {
  const auto k = counts.size();
  if (k == 0) throw std::invalid_argument("chi_square_uniformity: empty counts");
  const double n = counts.sum();
  if (n <= 0.0) throw std::invalid_argument("chi_square_uniformity: zero total count");
  const double expected = n / static_cast<double>(k);
  ChiSquare out;
  out.dof = static_cast<int>(k) - 1;
  for (Eigen::Index i = 0; i < k; ++i) {
    const double d = counts(i) - expected;
    out.statistic += d * d / expected;
  }
  out.p_value = out.dof >= 1 ? chi_square_p_value(out.statistic, out.dof) : 1.0;
  return out;
}

ChiSquare chi_square_gof(const Eigen::VectorXd& counts, const Eigen::VectorXd& probs) {
  if (counts.size() != probs.size()) throw std::invalid_argument("chi_square_gof: size mismatch");
  const double n = counts.sum();
  if (n <= 0.0) throw std::invalid_argument("chi_square_gof: zero total count");
  ChiSquare out;
  int cells = 0;
  for (Eigen::Index i = 0; i < counts.size(); ++i) {
    if (probs(i) <= 0.0) {
      if (counts(i) > 0.0)
        throw std::invalid_argument("chi_square_gof: observed count outside expected support");
      continue;
    }
    const double expected = n * probs(i);
    const double d = counts(i) - expected;
    out.statistic += d * d / expected;
    ++cells;
  }
  out.dof = cells - 1;
  out.p_value = out.dof >= 1 ? chi_square_p_value(out.statistic, out.dof) : 1.0;
  return out;
}

std::array<double, 4> interval_shares(const Eigen::VectorXd& pair_probs, const PairTable& pairs) {
  std::array<double, 4> shares{};
  for (int i = 0; i < pairs.size(); ++i)
    shares[static_cast<int>(pairs.at(i).category())] += pair_probs(i);
  return shares;
}

BlockStats block_stats(const SampleCounts& counts, const PairTable& pairs, int top_k) {
  if (counts.total <= 0) throw std::invalid_argument("block_stats: no samples");

  BlockStats stats;
  stats.n_samples = counts.total;
  const double n = static_cast<double>(counts.total);

  const Eigen::VectorXd pair_counts = counts.counts.cast<double>().rowwise().sum();
  const Eigen::VectorXd pair_freq = pair_counts / n;
  const Eigen::VectorXd uniform =
      Eigen::VectorXd::Constant(pairs.size(), 1.0 / pairs.size());
  stats.kl_pair_vs_uniform = kl_divergence(pair_freq, uniform);
  const ChiSquare chi = chi_square_uniformity(pair_counts);
  stats.chi2_pair_vs_uniform = chi.statistic;
  stats.chi2_p_value = chi.p_value;

  long v_to_i = 0, tonic = 0, stepwise = 0;
  std::vector<TopSequence> sequences;
  for (Eigen::Index i = 0; i < counts.counts.rows(); ++i) {
    const bool step = pairs.at(static_cast<int>(i)).category() == IntervalCategory::kStep;
    for (Eigen::Index c = 0; c < counts.counts.cols(); ++c) {
      const long count = counts.counts(i, c);
      if (count == 0) continue;
      ++stats.nonzero_states;
      const auto c1 = static_cast<Degree>(c / 8);
      const auto c2 = static_cast<Degree>(c % 8);
      if (c1 == Degree::kV && c2 == Degree::kI) v_to_i += count;
      if (c2 == Degree::kI) tonic += count;
      if (step) stepwise += count;
      sequences.push_back(
          {static_cast<int>(i), c1, c2, count, static_cast<double>(count) / n});
    }
  }
  stats.v_to_i_rate = static_cast<double>(v_to_i) / n;
  stats.tonic_ending_rate = static_cast<double>(tonic) / n;
  stats.stepwise_rate = static_cast<double>(stepwise) / n;
  stats.interval_shares = interval_shares(pair_freq, pairs);

  std::stable_sort(sequences.begin(), sequences.end(),
                   [](const TopSequence& a, const TopSequence& b) { return a.count > b.count; });
  if (static_cast<int>(sequences.size()) > top_k) sequences.resize(top_k);
  stats.top_sequences = std::move(sequences);
  return stats;
}

NoteClass classify_note(Note note, const Chord& chord) {
  const auto tones = chord_tones(chord);
  const int pc = note.pitch_class();
  int min_distance = 12;
  for (int tone : tones) {
    int d = std::abs(pc - tone);
    d = std::min(d, 12 - d);
    min_distance = std::min(min_distance, d);
  }
  if (min_distance == 0) return NoteClass::kChordTone;
  return min_distance <= 2 ? NoteClass::kStepNct : NoteClass::kLeapNct;
}

std::string_view to_string(ProgressionRating r) {
  switch (r) {
    case ProgressionRating::kStrong: return "strong";
    case ProgressionRating::kOk: return "ok";
    case ProgressionRating::kWeak: return "weak";
    case ProgressionRating::kAvoid: return "avoid";
  }
  return "?";
}

std::string_view to_string(HarmonicFunction f) {
  switch (f) {
    case HarmonicFunction::kTonic: return "T";
    case HarmonicFunction::kSubdominant: return "S";
    case HarmonicFunction::kDominant: return "D";
  }
  return "?";
}

HarmonicFunction harmonic_function(Degree d, HarmonicFunction iii_function) {
  switch (d) {
    case Degree::kiii:
      return iii_function;
    case Degree::kI:
    case Degree::kvi:
      return HarmonicFunction::kTonic;
    case Degree::kii:
    case Degree::kIV:
      return HarmonicFunction::kSubdominant;
    case Degree::kV:
    case Degree::kvii0:
      return HarmonicFunction::kDominant;
  }
  throw std::invalid_argument("harmonic_function: bad degree");
}

ProgressionInfo rate_progression(Degree from, Degree to, HarmonicFunction iii_function) {
  const HarmonicFunction f = harmonic_function(from, iii_function);
  const HarmonicFunction t = harmonic_function(to, iii_function);
  ProgressionRating rating;
  if (f == HarmonicFunction::kDominant && t == HarmonicFunction::kTonic)
    rating = ProgressionRating::kStrong;
  else if (f == HarmonicFunction::kSubdominant && t == HarmonicFunction::kDominant)
    rating = ProgressionRating::kStrong;
  else if (f == HarmonicFunction::kDominant && t == HarmonicFunction::kSubdominant)
    rating = ProgressionRating::kAvoid;
  else if (f == t)
    rating = ProgressionRating::kWeak;
  else
    rating = ProgressionRating::kOk;
  return {rating, f, t};
}

Phrase phrase_of(const ChainResult& chain, const PairTable& pairs) {
  Phrase phrase;
  phrase.reserve(chain.blocks.size() * 2);
  for (const BlockSample& block : chain.blocks) {
    const NotePair& pair = pairs.at(block.pair_index);
    phrase.push_back({pair.first, block.c1});
    phrase.push_back({pair.second, block.c2});
  }
  return phrase;
}

std::vector<Phrase> phrases_of(const std::vector<BlockSample>& samples, const PairTable& pairs) {
  std::vector<Phrase> phrases;
  phrases.reserve(samples.size());
  for (const BlockSample& block : samples) {
    const NotePair& pair = pairs.at(block.pair_index);
    phrases.push_back({{pair.first, block.c1}, {pair.second, block.c2}});
  }
  return phrases;
}

std::optional<double> tendency_tone_rate(const std::vector<Phrase>& phrases) {
  long qualifying = 0, resolved = 0;
  for (const Phrase& phrase : phrases) {
    for (size_t k = 0; k + 1 < phrase.size(); ++k) {
      const NoteChordEvent& a = phrase[k];
      const NoteChordEvent& b = phrase[k + 1];
      const bool dominant_to_tonic =
          (a.chord == Degree::kV || a.chord == Degree::kvii0) && b.chord == Degree::kI;
      if (!dominant_to_tonic || a.note.pitch_class() != 11) continue;
      ++qualifying;
      if (b.note.pitch_class() == 0) ++resolved;
    }
  }
  if (qualifying == 0) return std::nullopt;
  return static_cast<double>(resolved) / static_cast<double>(qualifying);
}

double chord_tone_compliance(const ChainResult& chain, const PairTable& pairs) {
  if (chain.blocks.empty()) throw std::invalid_argument("chord_tone_compliance: empty chain");
  const Phrase phrase = phrase_of(chain, pairs);
  long hits = 0;
  for (const NoteChordEvent& e : phrase)
    if (classify_note(e.note, chord_of(e.chord)) == NoteClass::kChordTone) ++hits;
  return static_cast<double>(hits) / static_cast<double>(phrase.size());
}

HarmonyReport harmony_report(const std::vector<Phrase>& phrases,
                             HarmonicFunction iii_function) {
  HarmonyReport report;
  long notes = 0, leap_notes = 0, first_ct = 0, second_ct = 0, both_ct = 0;
  long progressions = 0;

  for (const Phrase& phrase : phrases) {
    ++report.n_outputs;
    std::vector<NoteClass> classes;
    classes.reserve(phrase.size());
    for (const NoteChordEvent& e : phrase) {
      classes.push_back(classify_note(e.note, chord_of(e.chord)));
      ++notes;
      if (classes.back() == NoteClass::kLeapNct) ++leap_notes;
    }
    if (classes.size() >= 2) {
      if (classes[0] == NoteClass::kChordTone) ++first_ct;
      if (classes[1] == NoteClass::kChordTone) ++second_ct;
      if (classes[0] == NoteClass::kChordTone && classes[1] == NoteClass::kChordTone) ++both_ct;
    }
    for (size_t k = 0; k + 1 < phrase.size(); ++k) {
      const auto info = rate_progression(phrase[k].chord, phrase[k + 1].chord, iii_function);
      ++report.rating_counts[static_cast<int>(info.rating)];
      ++progressions;
    }
  }

  const double n_out = static_cast<double>(std::max<long>(report.n_outputs, 1));
  report.chord_tone_rate_n1 = first_ct / n_out;
  report.chord_tone_rate_n2 = second_ct / n_out;
  report.both_ct_rate = both_ct / n_out;
  report.leap_nct_rate = notes > 0 ? static_cast<double>(leap_notes) / notes : 0.0;
  if (progressions > 0) {
    report.strong_or_ok_rate =
        static_cast<double>(report.rating_counts[0] + report.rating_counts[1]) / progressions;
  }
  report.tendency_resolution_rate = tendency_tone_rate(phrases);
  return report;
}

int64_t gate_cost(OracleKind kind, int n_chord_qubits) {
  if (n_chord_qubits < 3) throw std::invalid_argument("gate_cost: need at least 3 chord qubits");
  if (n_chord_qubits > 32) throw std::invalid_argument("gate_cost: qubit count out of range");
  if (kind == OracleKind::kLookup) return int64_t{12742} << (n_chord_qubits - 3);
  if (n_chord_qubits == 3) return 375;
  if (n_chord_qubits >= 6) {
    int64_t cost = 8064;
    for (int i = 6; i < n_chord_qubits; ++i) cost *= 4;
    return cost;
  }
  // Geometric interpolation between the two anchors.
  const double ratio = 8064.0 / 375.0;
  return static_cast<int64_t>(
      375.0 * std::ceil(std::pow(ratio, (n_chord_qubits - 3) / 3.0)));
}

double gate_cost_crossover_vocab() {
  // Solve 8064 * 4^(n-6) = 12742 * 2^(n-3) for continuous n; the crossing
  // vocabulary is 2^n.
  return (12742.0 / 8.0) / (8064.0 / 4096.0);
}

}  // namespace qharmony
