#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "qharmony/hhl.hpp"
#include "qharmony/music.hpp"
#include "qharmony/oracle.hpp"
#include "qharmony/prefmatrix.hpp"
#include "qharmony/rng.hpp"

namespace qharmony {

/// One joint collapse: a note pair together with its two-chord progression.
struct BlockSample {
  int pair_index = 0;
  Degree c1 = Degree::kI;
  Degree c2 = Degree::kI;
};

/// Occurrence counts over (pair, chord-state), aligned with
/// JointDistribution::probs.
struct SampleCounts {
  Eigen::MatrixXi counts;
  long total = 0;

  Eigen::VectorXd pair_marginal() const;  // empirical pair distribution
};

/// i.i.d. draws by inverse CDF over states in canonical (pair, c1, c2) order.
std::vector<BlockSample> sample_block(const JointDistribution& joint, Rng& rng, long n,
                                      SampleCounts* counts = nullptr);

enum class AblationVariant { kFull, kMelodyOnly, kHarmonyOnly, kUnconditioned };

std::string_view to_string(AblationVariant v);
AblationVariant variant_from_name(std::string_view name);

/// Classical context passed between chained blocks: the previous block's
/// final note and final chord.
struct ChainContext {
  Note prev_note;
  Degree prev_chord = Degree::kI;
};

struct ChainResult {
  std::vector<BlockSample> blocks;
  std::vector<bool> junction_valid;   // blocks.size() - 1 entries
  std::vector<double> per_block_ps;   // joint post-selected weight per block
  double compound_ps = 1.0;           // product of per-block weights
};

/// Bundles the fixed parts of one configuration: matrix, eigensolver, grammar,
/// fit table, readout mode.  Chain conditioning only rebuilds b and the chord
/// vectors; the matrix and its decomposition are shared across blocks.
class Pipeline {
 public:
  Pipeline(std::vector<Note> notes, PenaltyScheme scheme, KKProfile kk,
           TransitionGrammar grammar, int K, HhlMode mode);

  /// Joint distribution for one block.  A context biases b toward pairs
  /// starting near the previous note and hard-restricts opening chords to
  /// valid successors of the previous chord; the ablation variant switches
  /// either conditioning arm off.
  JointDistribution joint(const std::optional<ChainContext>& context = {},
                          AblationVariant variant = AblationVariant::kFull) const;

  /// Distribution of the unconditioned linear-system stage (uniform b).
  const HhlResult& base_result() const { return base_; }

  const PairTable& pairs() const { return matrix_.pairs; }
  const PreferenceMatrix& matrix() const { return matrix_; }
  const TransitionGrammar& grammar() const { return grammar_; }
  const FitTable& fits() const { return fits_; }
  const HhlSolver& solver() const { return solver_; }
  const HhlMode& mode() const { return mode_; }

 private:
  PreferenceMatrix matrix_;
  HhlSolver solver_;
  TransitionGrammar grammar_;
  FitTable fits_;
  HhlMode mode_;
  HhlResult base_;
};

/// Sequential 2/2 blocks with classical context passing.  Block 1 is
/// unconditioned; every later block is conditioned per the variant.  Records
/// per-block joint weights, junction validity, and their product.
ChainResult run_chain(const Pipeline& pipeline, int n_blocks, Rng& rng,
                      AblationVariant variant = AblationVariant::kFull);

/// Classical two-stage baseline: draw a pair from p_hhl, then a chord state
/// from that pair's per-pair-normalised chord vector.  Its melody marginal is
/// p_hhl by construction.
std::vector<BlockSample> classical_baseline(const HhlResult& hhl, const PairTable& pairs,
                                            const TransitionGrammar& grammar,
                                            const FitTable& fits, Rng& rng, long n,
                                            SampleCounts* counts = nullptr);

/// Ratio of modal joint frequencies, conditioned over unconditioned.
/// Ties break toward the lowest state in canonical order.
double concentration_factor(const SampleCounts& conditioned, const SampleCounts& unconditioned);

}  // namespace qharmony
