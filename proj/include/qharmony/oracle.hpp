#pragma once

#include <optional>

#include <Eigen/Core>

#include "qharmony/hhl.hpp"
#include "qharmony/music.hpp"

namespace qharmony {

/// The chord register packs two 3-bit degree codes: state = c1 * 8 + c2.
/// Codes 7 are unused and always carry zero amplitude.
inline constexpr int kChordStates = 64;

inline int chord_state(Degree c1, Degree c2) {
  return static_cast<int>(c1) * 8 + static_cast<int>(c2);
}

/// Chord-tone affinity 1 + 2 * [note is a chord tone].
double binary_fit(const Chord& chord, Note note);

/// Affinity table over (quality, pitch-class interval), obtained by keeping
/// the K lowest-frequency components of the 12-point DFT of each quality's
/// chord-tone membership signal, inverting, and clipping to [0, 1]:
/// fit = 1 + 2 * clip(g_smooth).  K = 12 reproduces the binary table exactly.
struct FitTable {
  int K = 12;
  Eigen::Matrix<double, 3, 12> values;

  static FitTable build(int K);

  double value(ChordQuality quality, int pc_interval) const {
    return values(static_cast<int>(quality), pc_interval);
  }
  double fit(const Chord& chord, Note note) const {
    return value(chord.quality, (note.pitch_class() - chord.root_pc + 12) % 12);
  }
};

double fourier_fit(const Chord& chord, Note note, int K);

/// Unnormalised chord amplitude vector for one pair:
/// cv[c1*8+c2] = sqrt(T[c1,c2] * fit(c1, n1) * fit(c2, n2)) on grammar-valid
/// entries, zero elsewhere.  A restriction chord additionally zeroes every
/// entry whose opening chord is not a valid successor of it.
Eigen::VectorXd chord_vector(const NotePair& pair, const TransitionGrammar& grammar,
                             const FitTable& fits, std::optional<Degree> restriction = {});

/// Per-pair chord vectors plus the single global scale s = 1 / max_i ||cv(i)||.
struct ChordVectorSet {
  Eigen::MatrixXd vectors;  // n_pairs x 64, row i = cv(i)
  double global_scale = 0.0;
  std::optional<Degree> restriction;

  double norm(int pair_index) const { return vectors.row(pair_index).norm(); }
};

ChordVectorSet build_chord_vectors(const PairTable& pairs, const TransitionGrammar& grammar,
                                   const FitTable& fits, std::optional<Degree> restriction = {});

/// Joint post-selected law over (pair, chord-state):
/// probs(i, c) = p_hhl(i) * (s * cv(i)[c])^2 / Z, with the joint weight
/// ps_weight * sum_i p_hhl(i) * s^2 ||cv(i)||^2.
struct JointDistribution {
  Eigen::MatrixXd probs;  // n_pairs x 64, sums to 1
  double joint_ps_weight = 0.0;
  Eigen::VectorXd melody_marginal;  // row sums

  int nonzero_states() const { return static_cast<int>((probs.array() > 0.0).count()); }
};

JointDistribution joint_distribution(const HhlResult& hhl, const ChordVectorSet& cvs);

}  // namespace qharmony
