#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "qharmony/generator.hpp"
#include "qharmony/music.hpp"

namespace qharmony {

/// Kullback-Leibler divergence sum p ln(p/q), natural log.  Throws if q
/// vanishes anywhere p is positive.
double kl_divergence(const Eigen::VectorXd& p, const Eigen::VectorXd& q);

struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
};

/// Pearson statistic against the uniform expectation E = n / k.
ChiSquare chi_square_uniformity(const Eigen::VectorXd& counts);

/// Pearson statistic against arbitrary expected probabilities.
ChiSquare chi_square_gof(const Eigen::VectorXd& counts, const Eigen::VectorXd& probs);

/// Upper tail Q(k/2, x/2) of the chi-square distribution.
double chi_square_p_value(double statistic, int dof);

struct TopSequence {
  int pair_index = 0;
  Degree c1 = Degree::kI;
  Degree c2 = Degree::kI;
  long count = 0;
  double share = 0.0;
};

struct BlockStats {
  long n_samples = 0;
  double kl_pair_vs_uniform = 0.0;
  double chi2_pair_vs_uniform = 0.0;
  double chi2_p_value = 0.0;
  double v_to_i_rate = 0.0;
  double tonic_ending_rate = 0.0;
  double stepwise_rate = 0.0;
  std::array<double, 4> interval_shares{};  // unison, step, skip, leap
  std::vector<TopSequence> top_sequences;
  int nonzero_states = 0;
};

/// Direct-count statistics of a sampled batch.  Ties in the top-sequence
/// ranking break toward canonical state order.
BlockStats block_stats(const SampleCounts& counts, const PairTable& pairs, int top_k = 10);

/// Probability mass per melodic interval category under a pair distribution.
std::array<double, 4> interval_shares(const Eigen::VectorXd& pair_probs, const PairTable& pairs);

// ---------------------------------------------------------------------------
// Rule-based harmony validation
// ---------------------------------------------------------------------------

enum class NoteClass { kChordTone, kStepNct, kLeapNct };

/// Chord tone; else within 2 semitones (circular pc distance) of one; else a
/// dissonant leap non-chord tone.
NoteClass classify_note(Note note, const Chord& chord);

enum class HarmonicFunction { kTonic, kSubdominant, kDominant };
enum class ProgressionRating { kStrong, kOk, kWeak, kAvoid };

std::string_view to_string(ProgressionRating r);
std::string_view to_string(HarmonicFunction f);

/// Function map T = {I, iii, vi}, S = {ii, IV}, D = {V, vii0}.  The mediant's
/// slot is an analytical convention, so it stays assignable.
HarmonicFunction harmonic_function(Degree d,
                                   HarmonicFunction iii_function = HarmonicFunction::kTonic);

struct ProgressionInfo {
  ProgressionRating rating;
  HarmonicFunction from;
  HarmonicFunction to;
};

/// Functional rating: strong = D->T or S->D, avoid = D->S, weak = motion
/// within one function, ok = everything else.
ProgressionInfo rate_progression(Degree from, Degree to,
                                 HarmonicFunction iii_function = HarmonicFunction::kTonic);

/// One melody note sounding over one chord.
struct NoteChordEvent {
  Note note;
  Degree chord = Degree::kI;
};

/// A phrase is a contiguous event sequence; adjacency never crosses phrases.
using Phrase = std::vector<NoteChordEvent>;

Phrase phrase_of(const ChainResult& chain, const PairTable& pairs);
std::vector<Phrase> phrases_of(const std::vector<BlockSample>& samples, const PairTable& pairs);

/// Among adjacent events where the chord moves (V or vii0) -> I and the first
/// note is the leading tone B, the share whose next note is C.  Empty when no
/// adjacency qualifies.
std::optional<double> tendency_tone_rate(const std::vector<Phrase>& phrases);

/// Fraction of events whose note is a chord tone of its sounding chord.
double chord_tone_compliance(const ChainResult& chain, const PairTable& pairs);

struct HarmonyReport {
  long n_outputs = 0;
  double chord_tone_rate_n1 = 0.0;
  double chord_tone_rate_n2 = 0.0;
  double both_ct_rate = 0.0;
  double leap_nct_rate = 0.0;  // share of all classified notes
  std::array<long, 4> rating_counts{};  // strong, ok, weak, avoid
  double strong_or_ok_rate = 0.0;
  std::optional<double> tendency_resolution_rate;
};

HarmonyReport harmony_report(const std::vector<Phrase>& phrases,
                             HarmonicFunction iii_function = HarmonicFunction::kTonic);

// ---------------------------------------------------------------------------
// Oracle gate-cost model
// ---------------------------------------------------------------------------

enum class OracleKind { kFourier, kLookup };

/// Elementary-gate model per note pair.  Lookup doubles per chord qubit from
/// 12742 at n = 3; Fourier is 375 at n = 3, quadruples per qubit from 8064 at
/// n = 6, with geometric interpolation at n = 4, 5.
int64_t gate_cost(OracleKind kind, int n_chord_qubits);

/// Vocabulary size where the two cost curves cross under the n >= 6 scaling.
double gate_cost_crossover_vocab();

}  // namespace qharmony
