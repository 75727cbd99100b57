#include "qharmony/generator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qharmony/errors.hpp"

namespace qharmony {

namespace {

BlockSample sample_from_state(int state_index) {
  const int pair = state_index / kChordStates;
  const int chord = state_index % kChordStates;
  return {pair, static_cast<Degree>(chord / 8), static_cast<Degree>(chord % 8)};
}

// Cumulative sums in canonical (pair, c1, c2) order; row-major probs already
// match that order.
std::vector<double> cumulative(const Eigen::MatrixXd& probs) {
  std::vector<double> cdf;
  cdf.reserve(static_cast<size_t>(probs.size()));
  double acc = 0.0;
  for (Eigen::Index i = 0; i < probs.rows(); ++i)
    for (Eigen::Index c = 0; c < probs.cols(); ++c) {
      acc += probs(i, c);
      cdf.push_back(acc);
    }
  return cdf;
}

int draw(const std::vector<double>& cdf, double total, Rng& rng) {
  const double u = rng.next_double() * total;
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return static_cast<int>(std::min<std::ptrdiff_t>(it - cdf.begin(), cdf.size() - 1));
}

}  // namespace

Eigen::VectorXd SampleCounts::pair_marginal() const {
  Eigen::VectorXd marginal = counts.cast<double>().rowwise().sum();
  return marginal / static_cast<double>(total);
}

std::vector<BlockSample> sample_block(const JointDistribution& joint, Rng& rng, long n,
                                      SampleCounts* counts) {
  if (n < 1) throw std::invalid_argument("sample_block: n must be >= 1");
  if (joint.probs.sum() <= 0.0) throw std::invalid_argument("sample_block: empty support");

  const auto cdf = cumulative(joint.probs);
  const double total = cdf.back();
  if (counts) {
    counts->counts = Eigen::MatrixXi::Zero(joint.probs.rows(), joint.probs.cols());
    counts->total = n;
  }
  std::vector<BlockSample> samples;
  samples.reserve(n);
  for (long k = 0; k < n; ++k) {
    const int state = draw(cdf, total, rng);
    samples.push_back(sample_from_state(state));
    if (counts) counts->counts(state / kChordStates, state % kChordStates) += 1;
  }
  return samples;
}

std::string_view to_string(AblationVariant v) {
  switch (v) {
    case AblationVariant::kFull: return "full";
    case AblationVariant::kMelodyOnly: return "melody_only";
    case AblationVariant::kHarmonyOnly: return "harmony_only";
    case AblationVariant::kUnconditioned: return "unconditioned";
  }
  return "?";
}

AblationVariant variant_from_name(std::string_view name) {
  if (name == "full") return AblationVariant::kFull;
  if (name == "melody_only") return AblationVariant::kMelodyOnly;
  if (name == "harmony_only") return AblationVariant::kHarmonyOnly;
  if (name == "unconditioned") return AblationVariant::kUnconditioned;
  throw std::invalid_argument("unknown ablation variant: " + std::string(name));
}

Pipeline::Pipeline(std::vector<Note> notes, PenaltyScheme scheme, KKProfile kk,
                   TransitionGrammar grammar, int K, HhlMode mode)
    : matrix_(build_matrix(notes, scheme, kk)),
      solver_(matrix_),
      grammar_(grammar),
      fits_(FitTable::build(K)),
      mode_(mode),
      base_(solver_.solve(build_b(matrix_.pairs, matrix_.dim_padded), mode_)) {}

JointDistribution Pipeline::joint(const std::optional<ChainContext>& context,
                                  AblationVariant variant) const {
  const bool bias_melody = context && (variant == AblationVariant::kFull ||
                                       variant == AblationVariant::kMelodyOnly);
  const bool restrict_harmony = context && (variant == AblationVariant::kFull ||
                                            variant == AblationVariant::kHarmonyOnly);

  HhlResult hhl = base_;
  if (bias_melody) {
    const RhsVector b =
        build_b(pairs(), matrix_.dim_padded, BiasContext{context->prev_note});
    hhl = solver_.solve(b, mode_);
  }
  std::optional<Degree> restriction;
  if (restrict_harmony) restriction = context->prev_chord;
  return joint_distribution(hhl, build_chord_vectors(pairs(), grammar_, fits_, restriction));
}

ChainResult run_chain(const Pipeline& pipeline, int n_blocks, Rng& rng,
                      AblationVariant variant) {
  if (n_blocks < 1) throw std::invalid_argument("run_chain: n_blocks must be >= 1");

  ChainResult result;
  std::optional<ChainContext> context;
  for (int k = 0; k < n_blocks; ++k) {
    const JointDistribution joint = pipeline.joint(context, variant);
    const BlockSample sample = sample_block(joint, rng, 1).front();
    if (k > 0) {
      result.junction_valid.push_back(
          pipeline.grammar().allowed(result.blocks.back().c2, sample.c1));
    }
    result.blocks.push_back(sample);
    result.per_block_ps.push_back(joint.joint_ps_weight);
    context = ChainContext{pipeline.pairs().at(sample.pair_index).second, sample.c2};
  }
  result.compound_ps = 1.0;
  for (double w : result.per_block_ps) result.compound_ps *= w;
  return result;
}

std::vector<BlockSample> classical_baseline(const HhlResult& hhl, const PairTable& pairs,
                                            const TransitionGrammar& grammar,
                                            const FitTable& fits, Rng& rng, long n,
                                            SampleCounts* counts) {
  if (n < 1) throw std::invalid_argument("classical_baseline: n must be >= 1");
  const int n_pairs = pairs.size();

  // Pair CDF from p_hhl, then one conditional chord CDF per pair.
  std::vector<double> pair_cdf(n_pairs);
  double acc = 0.0;
  for (int i = 0; i < n_pairs; ++i) pair_cdf[i] = (acc += hhl.p(i));

  const ChordVectorSet cvs = build_chord_vectors(pairs, grammar, fits);
  Eigen::MatrixXd chord_cdfs(n_pairs, kChordStates);
  for (int i = 0; i < n_pairs; ++i) {
    double sum = 0.0;
    for (int c = 0; c < kChordStates; ++c) {
      const double w = cvs.vectors(i, c);
      sum += w * w;  // per-pair normalisation: (cv/||cv||)^2
      chord_cdfs(i, c) = sum;
    }
    chord_cdfs.row(i) /= sum;
  }

  if (counts) {
    counts->counts = Eigen::MatrixXi::Zero(n_pairs, kChordStates);
    counts->total = n;
  }
  std::vector<BlockSample> samples;
  samples.reserve(n);
  for (long k = 0; k < n; ++k) {
    const double u = rng.next_double() * pair_cdf.back();
    const int pair = static_cast<int>(
        std::upper_bound(pair_cdf.begin(), pair_cdf.end(), u) - pair_cdf.begin());
    const int i = std::min(pair, n_pairs - 1);
    const double v = rng.next_double();
    int c = 0;
    while (c < kChordStates - 1 && chord_cdfs(i, c) <= v) ++c;
    samples.push_back({i, static_cast<Degree>(c / 8), static_cast<Degree>(c % 8)});
    if (counts) counts->counts(i, c) += 1;
  }
  return samples;
}

double concentration_factor(const SampleCounts& conditioned, const SampleCounts& unconditioned) {
  if (conditioned.total <= 0 || unconditioned.total <= 0)
    throw std::invalid_argument("concentration_factor: empty count tables");

  auto modal_share = [](const SampleCounts& c) {
    int best = 0;
    for (Eigen::Index i = 0; i < c.counts.rows(); ++i)
      for (Eigen::Index j = 0; j < c.counts.cols(); ++j)
        if (c.counts(i, j) > best) best = c.counts(i, j);
    return static_cast<double>(best) / static_cast<double>(c.total);
  };

  const double unconditioned_share = modal_share(unconditioned);
  if (unconditioned_share <= 0.0)
    throw std::invalid_argument("concentration_factor: zero unconditioned modal count");
  return modal_share(conditioned) / unconditioned_share;
}

}  // namespace qharmony
