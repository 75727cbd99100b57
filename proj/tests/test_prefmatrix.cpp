#include <doctest.h>

#include <cmath>

#include "qharmony/eigensolve.hpp"
#include "qharmony/prefmatrix.hpp"

using namespace qharmony;

namespace {

PreferenceMatrix default_build() {
  return build_matrix(default_note_set(), PenaltyScheme::baseline(),
                      KKProfile::diatonic_default());
}

// Diagonal formula recomputed from scratch for one pair.
double diagonal_reference(int midi1, int midi2, double kk1, double kk2) {
  const int iv = std::abs(midi1 - midi2);
  double prox;
  if (iv == 0) prox = 5.0;
  else if (iv <= 2) prox = 0.0;
  else if (iv <= 4) prox = 0.5;
  else if (iv == 5) prox = 1.2;
  else if (iv == 6) prox = 3.5;
  else if (iv == 7) prox = 0.8;
  else if (iv <= 9) prox = 1.8;
  else prox = 2.5;
  return 6.0 + prox + 1.5 * (1.0 - 0.5 * (kk1 + kk2));
}

}  // namespace

TEST_CASE("diagonal entries match the scalar recomputation") {
  const auto m = default_build();
  // (B3, C4): index 0*7+1
  CHECK(m.entries(1, 1) == doctest::Approx(diagonal_reference(59, 60, 0.75, 1.0)).epsilon(1e-14));
  CHECK(m.entries(1, 1) == doctest::Approx(6.1875).epsilon(1e-14));
  // (C4, C4): index 1*7+1 = 8, unison of the most stable tone
  CHECK(m.entries(8, 8) == doctest::Approx(11.0).epsilon(1e-14));
  // (D4, F4): index 2*7+4
  CHECK(m.entries(18, 18) ==
        doctest::Approx(diagonal_reference(62, 65, 0.35, 0.42)).epsilon(1e-14));
}

TEST_CASE("matrix is exactly symmetric with an identity padding block") {
  const auto m = default_build();
  CHECK(m.dim_active == 49);
  CHECK(m.dim_padded == 64);
  CHECK((m.entries - m.entries.transpose()).cwiseAbs().maxCoeff() == 0.0);
  for (int i = 49; i < 64; ++i) {
    CHECK(m.entries(i, i) == 1.0);
    for (int j = 0; j < 64; ++j)
      if (i != j) CHECK(m.entries(i, j) == 0.0);
  }
}

TEST_CASE("default spectrum sits in the expected bands") {
  const auto m = default_build();
  const auto s = spectral_summary(m);
  CHECK(m.shift_applied == 0.0);
  CHECK(s.lambda_min > 0.0);
  CHECK(s.kappa > 9.0);
  CHECK(s.kappa < 14.0);
  CHECK(s.lambda_min == doctest::Approx(2.12).epsilon(0.05));
  CHECK(s.lambda_max == doctest::Approx(23.86).epsilon(0.05));
  // Stable rank equals its definition, recomputed inline.
  const auto eig = jacobi_eigh(m.active(), false);
  const double lmax = eig.eigenvalues(48);
  CHECK(s.stable_rank ==
        doctest::Approx(m.active().squaredNorm() / (lmax * lmax)).epsilon(1e-10));
}

TEST_CASE("alternative schemes stay within the kappa band") {
  const auto kk = KKProfile::diatonic_default();
  const auto half = spectral_summary(build_matrix(default_note_set(), PenaltyScheme::half(), kk));
  CHECK(half.kappa > 8.0);
  CHECK(half.kappa < 20.0);
  const auto flat = spectral_summary(
      build_matrix(default_note_set(), PenaltyScheme::unison_tritone_only(), kk));
  CHECK(flat.kappa > 8.0);
  CHECK(flat.kappa < 20.0);
}

TEST_CASE("positive-definiteness shift engages when the anchor collapses") {
  PenaltyScheme weak = PenaltyScheme::baseline();
  weak.base = 0.3;  // diagonal too small to dominate the couplings
  const auto m = build_matrix(default_note_set(), weak, KKProfile::diatonic_default());
  CHECK(m.shift_applied > 0.0);
  const auto eig = jacobi_eigh(m.active(), false);
  CHECK(eig.eigenvalues(0) >= 0.1 - 1e-9);
  CHECK(eig.eigenvalues(0) == doctest::Approx(0.1).epsilon(1e-6));
}

TEST_CASE("unison diagonal dominates step diagonals under the baseline scheme") {
  const auto m = default_build();
  double min_unison = 1e300, max_step = 0.0;
  for (int i = 0; i < m.dim_active; ++i) {
    const auto& pair = m.pairs.at(i);
    if (pair.category() == IntervalCategory::kUnison)
      min_unison = std::min(min_unison, m.entries(i, i));
    if (pair.category() == IntervalCategory::kStep)
      max_step = std::max(max_step, m.entries(i, i));
  }
  CHECK(min_unison > max_step);
}

TEST_CASE("prox_scale scales the proximity part of the diagonal") {
  PenaltyScheme doubled = PenaltyScheme::baseline();
  doubled.prox_scale = 2.0;
  const auto base = default_build();
  const auto scaled =
      build_matrix(default_note_set(), doubled, KKProfile::diatonic_default());
  for (int i : {2, 10, 17, 30}) {  // a few non-step pairs
    const auto& pair = base.pairs.at(i);
    const double kk_part =
        1.5 * (1.0 - 0.5 * (KKProfile::diatonic_default().stability(pair.first) +
                            KKProfile::diatonic_default().stability(pair.second)));
    const double prox_base = base.entries(i, i) - 6.0 - kk_part;
    const double prox_scaled = scaled.entries(i, i) - 6.0 - kk_part;
    CHECK(prox_scaled == doctest::Approx(2.0 * prox_base).epsilon(1e-10));
  }
}

TEST_CASE("spectral summary on synthetic matrices") {
  PreferenceMatrix ident;
  ident.dim_active = 10;
  ident.dim_padded = 16;
  ident.entries = Eigen::MatrixXd::Identity(16, 16);
  const auto si = spectral_summary(ident);
  CHECK(si.kappa == doctest::Approx(1.0));
  CHECK(si.stable_rank == doctest::Approx(10.0));

  PreferenceMatrix diag;
  diag.dim_active = 2;
  diag.dim_padded = 2;
  diag.entries = Eigen::Vector2d(1.0, 2.0).asDiagonal();
  const auto sd = spectral_summary(diag);
  CHECK(sd.kappa == doctest::Approx(2.0));
  CHECK(sd.stable_rank == doctest::Approx(5.0 / 4.0));
}

TEST_CASE("degenerate Monte-Carlo sweep reproduces the baseline kappa") {
  KappaSweepRanges collapsed;
  collapsed.base_min = collapsed.base_max = 6.0;
  collapsed.prox_scale_min = collapsed.prox_scale_max = 1.0;
  collapsed.kk_weight_min = collapsed.kk_weight_max = 1.5;
  const auto report = kappa_mc_sweep(collapsed, 1, 42);
  const auto baseline = spectral_summary(default_build());
  CHECK(report.median_kappa == doctest::Approx(baseline.kappa).epsilon(1e-9));
  CHECK(report.min_kappa == doctest::Approx(report.max_kappa));
}

TEST_CASE("restricted Monte-Carlo sweep is well conditioned") {
  KappaSweepRanges restricted;
  restricted.base_min = 5.0;
  restricted.base_max = 7.0;
  restricted.prox_scale_min = 0.8;
  restricted.prox_scale_max = 1.2;
  restricted.kk_weight_min = 1.0;
  restricted.kk_weight_max = 2.0;
  const auto report = kappa_mc_sweep(restricted, 300, 7);
  CHECK(report.frac_below_20 >= 0.9);
  CHECK(report.frac_above_100 == 0.0);
  // Deterministic given the seed.
  const auto again = kappa_mc_sweep(restricted, 300, 7);
  CHECK(report.median_kappa == again.median_kappa);
  CHECK(report.mean_kappa == again.mean_kappa);
}

TEST_CASE("invalid sweep ranges are rejected") {
  KappaSweepRanges bad;
  bad.base_min = 9.0;
  bad.base_max = 3.0;
  CHECK_THROWS_AS(kappa_mc_sweep(bad, 10, 1), std::invalid_argument);
  CHECK_THROWS_AS(kappa_mc_sweep(KappaSweepRanges{}, 0, 1), std::invalid_argument);
}

TEST_CASE("chromatic matrices shrink sr/N as the scale grows") {
  const auto kk = KKProfile::chromatic();
  const auto scheme = PenaltyScheme::baseline();
  const auto small = build_matrix(chromatic_note_set(5), scheme, kk);
  const auto large = build_matrix(chromatic_note_set(12), scheme, kk);
  const double sr_small = spectral_summary(small).stable_rank / small.dim_active;
  const double sr_large = spectral_summary(large).stable_rank / large.dim_active;
  CHECK(sr_small > sr_large);
}

TEST_CASE("empty note set is rejected") {
  CHECK_THROWS_AS(
      build_matrix({}, PenaltyScheme::baseline(), KKProfile::diatonic_default()),
      std::invalid_argument);
}
