#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "qharmony/music.hpp"

namespace qharmony {

/// Symmetric positive-definite melodic preference matrix over note pairs,
/// padded to the next power of two.  The padding block is an exact identity,
/// decoupled from the active block.
struct PreferenceMatrix {
  Eigen::MatrixXd entries;  // dim_padded x dim_padded
  int dim_active = 0;
  int dim_padded = 0;
  double shift_applied = 0.0;  // diagonal shift added to the active block
  PenaltyScheme scheme;
  PairTable pairs;

  Eigen::Block<const Eigen::MatrixXd> active() const {
    return entries.topLeftCorner(dim_active, dim_active);
  }
};

/// Build the preference matrix from proximity, intervallic-difference,
/// post-skip-compensation, and tonal-stability rules.
///
/// Diagonal:  base + prox(iv) + kk_weight * (1 - (KK(n1) + KK(n2)) / 2).
/// Off-diagonal: alpha / (1 + |iv_i - iv_j|) + PSC(i, j) + PSC(j, i), where
/// PSC(i, j) = 0.3 when pair i spans >= 3 semitones and pair j starts within
/// 2 semitones of pair i's end, 0.15 for the same end-to-start connection
/// from a pair spanning < 3 semitones, 0 otherwise.
/// If the smallest eigenvalue of the active block falls below 0.1, the block
/// diagonal is shifted up by (0.1 - lambda_min).
PreferenceMatrix build_matrix(const std::vector<Note>& notes, const PenaltyScheme& scheme,
                              const KKProfile& kk);

struct SpectralSummary {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double kappa = 0.0;        // lambda_max / lambda_min
  double stable_rank = 0.0;  // ||A||_F^2 / ||A||_2^2, active block
};

/// Spectral quantities of the active block.  Uses the exact Jacobi solver up
/// to 128 states and power iteration above that.
SpectralSummary spectral_summary(const PreferenceMatrix& matrix);

struct KappaSweepRanges {
  double base_min = 3.0, base_max = 9.0;
  double prox_scale_min = 0.5, prox_scale_max = 1.5;
  double kk_weight_min = 0.75, kk_weight_max = 2.25;
};

struct KappaSweepReport {
  int n_samples = 0;
  double median_kappa = 0.0;
  double mean_kappa = 0.0;
  double frac_below_20 = 0.0;
  double frac_above_100 = 0.0;
  double min_kappa = 0.0;
  double max_kappa = 0.0;
};

/// Monte-Carlo sweep over (base, prox scale, kk weight), uniform in the given
/// ranges, rebuilding the default-note matrix per draw and recording kappa.
/// Deterministic for a given seed: sample k uses the derived stream (seed, k).
KappaSweepReport kappa_mc_sweep(const KappaSweepRanges& ranges, int n_samples, uint64_t seed);

}  // namespace qharmony
